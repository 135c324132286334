#pragma once

// Isomorphism-invariant structure transformers read through the box (all
// outcomes) and diamond (some outcome) operators, with the concrete
// modifiers as built-ins: extension-guided tuple addition and removal,
// point deletion, and capped nondeterministic point insertion.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "structura/fo.hpp"
#include "structura/formula.hpp"
#include "structura/relalg.hpp"
#include "structura/structure.hpp"

namespace structura {

struct PointedStructure {
  Structure structure;
  Assignment assign;

  bool operator==(const PointedStructure&) const = default;
};

struct Modifier {
  std::string name;
  // Variables the input assignment must define (the pointed part).
  std::vector<int> pointed_vars;
  std::function<std::vector<PointedStructure>(const Structure&, const Assignment&)> apply;
};

inline std::vector<PointedStructure> apply_modifier(const Modifier& m, const Structure& s,
                                                    const Assignment& x) {
  for (int v : m.pointed_vars)
    if (!x.defined(v))
      throw error("modifier " + m.name + " needs a value for x" + std::to_string(v));
  return m.apply(s, x);
}

// --------------------------------------------------------------------------
// Built-ins. Nondeterministic ones take an explicit size cap; outputs are
// otherwise a function of the input structure.

namespace mod_detail {

constexpr std::size_t kOutputLimit = 4096;

inline void guard_outputs(std::size_t n, const std::string& name) {
  if (n > kOutputLimit)
    throw error("unbounded-output: modifier " + name + " produced too many outcomes");
}

inline Assignment drop_deleted(const Assignment& a, const std::set<Element>& removed) {
  Assignment out = a;
  for (Element e : removed) out = out.erase_value(e);
  return out;
}

}  // namespace mod_detail

// Adds every tuple of the guard formula's extension to the relation.
inline Modifier add_tuples_modifier(const Formula& guard, const std::string& rel) {
  Modifier m;
  m.name = "add-tuples(" + rel + ")";
  m.apply = [guard, rel](const Structure& s, const Assignment& x) {
    auto arity = s.signature().arity_of(rel);
    if (!arity) throw error("unknown-relation: " + rel);
    RelValue ext = s.domain().empty() ? RelValue{*arity, {}} : defined_relation(s, guard);
    if (ext.arity != *arity)
      throw error("guard formula arity does not match relation " + rel);
    Structure out = s;
    for (const auto& t : ext.tuples) out = insert_tuple(out, rel, t);
    return std::vector<PointedStructure>{{out, x}};
  };
  return m;
}

// Deletes every tuple of the guard formula's extension from the relation.
inline Modifier delete_tuples_modifier(const Formula& guard, const std::string& rel) {
  Modifier m;
  m.name = "delete-tuples(" + rel + ")";
  m.apply = [guard, rel](const Structure& s, const Assignment& x) {
    auto arity = s.signature().arity_of(rel);
    if (!arity) throw error("unknown-relation: " + rel);
    RelValue ext = s.domain().empty() ? RelValue{*arity, {}} : defined_relation(s, guard);
    if (ext.arity != *arity)
      throw error("guard formula arity does not match relation " + rel);
    Structure out = s;
    for (const auto& t : ext.tuples) out = delete_tuple(out, rel, t);
    return std::vector<PointedStructure>{{out, x}};
  };
  return m;
}

// Deletes the points satisfying the unary guard formula.
inline Modifier delete_points_modifier(const Formula& guard) {
  Modifier m;
  m.name = "delete-points";
  m.apply = [guard](const Structure& s, const Assignment& x) {
    std::set<Element> doomed;
    if (!s.domain().empty()) {
      RelValue ext = defined_relation(s, guard);
      if (ext.arity != 1) throw error("delete-points wants a unary guard formula");
      for (const auto& t : ext.tuples) doomed.insert(t[0]);
    }
    Structure out = s;
    for (Element e : doomed) out = delete_element(out, e);
    return std::vector<PointedStructure>{{out, mod_detail::drop_deleted(x, doomed)}};
  };
  return m;
}

// Deletes the extension of the unary relation Y.
inline Modifier delete_labeled_points_modifier(const std::string& label) {
  Modifier m;
  m.name = "delete-labeled-points(" + label + ")";
  m.apply = [label](const Structure& s, const Assignment& x) {
    auto arity = s.signature().arity_of(label);
    if (!arity || *arity != 1) throw error(label + " must be a unary relation");
    std::set<Element> doomed;
    for (const auto& t : s.tuples(label)) doomed.insert(t[0]);
    Structure out = s;
    for (Element e : doomed) out = delete_element(out, e);
    return std::vector<PointedStructure>{{out, mod_detail::drop_deleted(x, doomed)}};
  };
  return m;
}

// Adds 0..cap fresh isolated points (one outcome per count).
inline Modifier add_points_modifier(int cap) {
  Modifier m;
  m.name = "add-points";
  m.apply = [cap](const Structure& s, const Assignment& x) {
    std::vector<PointedStructure> out;
    Structure cur = s;
    out.push_back({cur, x});
    for (int i = 0; i < cap; ++i) {
      cur = insert_element(cur).first;
      out.push_back({cur, x});
    }
    return out;
  };
  return m;
}

// Adds 0..cap fresh points, labeling each with the unary relation Y.
inline Modifier add_labeled_points_modifier(const std::string& label, int cap) {
  Modifier m;
  m.name = "add-labeled-points(" + label + ")";
  m.apply = [label, cap](const Structure& s, const Assignment& x) {
    auto arity = s.signature().arity_of(label);
    if (!arity || *arity != 1) throw error(label + " must be a unary relation");
    std::vector<PointedStructure> out;
    Structure cur = s;
    out.push_back({cur, x});
    for (int i = 0; i < cap; ++i) {
      auto [grown, fresh] = insert_element(cur);
      cur = insert_tuple(grown, label, {fresh});
      out.push_back({cur, x});
    }
    return out;
  };
  return m;
}

// Deletes any set of at most cap points (one outcome per subset).
inline Modifier delete_some_points_modifier(int cap) {
  Modifier m;
  m.name = "delete-some-points";
  m.apply = [cap](const Structure& s, const Assignment& x) {
    std::vector<Element> dom(s.domain().begin(), s.domain().end());
    std::vector<PointedStructure> out;
    std::vector<Element> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      mod_detail::guard_outputs(out.size(), "delete-some-points");
      if (static_cast<int>(chosen.size()) <= cap) {
        Structure cur = s;
        std::set<Element> removed(chosen.begin(), chosen.end());
        for (Element e : chosen) cur = delete_element(cur, e);
        out.push_back({cur, mod_detail::drop_deleted(x, removed)});
      }
      if (static_cast<int>(chosen.size()) >= cap) return;
      for (std::size_t j = i; j < dom.size(); ++j) {
        chosen.push_back(dom[j]);
        rec(j + 1);
        chosen.pop_back();
      }
    };
    rec(0);
    return out;
  };
  return m;
}

inline Modifier identity_modifier() {
  Modifier m;
  m.name = "identity";
  m.apply = [](const Structure& s, const Assignment& x) {
    return std::vector<PointedStructure>{{s, x}};
  };
  return m;
}

// Resolves a modifier expression from a formula (box[...]/dia[...]).
inline Modifier make_modifier(const ModifierCall& call) {
  auto formula_arg = [&](std::size_t i) {
    if (i >= call.args.size() || call.args[i].kind != ModArg::FormulaArg)
      throw error("modifier " + call.name + " wants a formula argument");
    return call.args[i].formula;
  };
  auto name_arg = [&](std::size_t i) {
    if (i >= call.args.size() || call.args[i].kind != ModArg::NameArg)
      throw error("modifier " + call.name + " wants a relation-name argument");
    return call.args[i].name;
  };
  auto int_arg = [&](std::size_t i) {
    if (i >= call.args.size() || call.args[i].kind != ModArg::IntArg)
      throw error("modifier " + call.name + " wants an integer cap argument");
    return static_cast<int>(call.args[i].value);
  };
  if (call.name == "identity") return identity_modifier();
  if (call.name == "add-pairs" || call.name == "add-tuples")
    return add_tuples_modifier(formula_arg(0), name_arg(1));
  if (call.name == "delete-pairs" || call.name == "delete-tuples")
    return delete_tuples_modifier(formula_arg(0), name_arg(1));
  if (call.name == "delete-points") return delete_points_modifier(formula_arg(0));
  if (call.name == "delete-labeled-points") return delete_labeled_points_modifier(name_arg(0));
  if (call.name == "add-points") return add_points_modifier(int_arg(0));
  if (call.name == "add-labeled-points")
    return add_labeled_points_modifier(name_arg(0), int_arg(1));
  if (call.name == "delete-some-points") return delete_some_points_modifier(int_arg(0));
  throw error("unknown modifier: " + call.name);
}

// --------------------------------------------------------------------------
// Box and diamond semantics

inline bool eval_modal(const Structure& s, const Assignment& f, const Formula& phi);

// (m)phi: phi holds in every outcome; vacuously true on the empty set.
inline bool eval_box(const Modifier& m, const Formula& phi, const Structure& s,
                     const Assignment& x) {
  for (const auto& [ns, nx] : apply_modifier(m, s, x))
    if (!eval_modal(ns, nx, phi)) return false;
  return true;
}

// <m>phi: phi holds in some outcome; false on the empty set.
inline bool eval_diamond(const Modifier& m, const Formula& phi, const Structure& s,
                         const Assignment& x) {
  for (const auto& [ns, nx] : apply_modifier(m, s, x))
    if (eval_modal(ns, nx, phi)) return true;
  return false;
}

// First-order evaluation extended with box/diamond nodes (nesting allowed).
inline bool eval_modal(const Structure& s, const Assignment& f, const Formula& phi) {
  switch (phi->kind) {
    case FKind::BoxMod:
      return eval_box(make_modifier(*phi->mod), phi->left, s, f);
    case FKind::DiaMod:
      return eval_diamond(make_modifier(*phi->mod), phi->left, s, f);
    case FKind::Not:
      return !eval_modal(s, f, phi->left);
    case FKind::And:
      return eval_modal(s, f, phi->left) && eval_modal(s, f, phi->right);
    case FKind::Or:
      return eval_modal(s, f, phi->left) || eval_modal(s, f, phi->right);
    case FKind::Exists: {
      for (Element e : s.domain())
        if (eval_modal(s, f.set(phi->var, e), phi->left)) return true;
      return false;
    }
    case FKind::Forall: {
      for (Element e : s.domain())
        if (!eval_modal(s, f.set(phi->var, e), phi->left)) return false;
      return true;
    }
    default:
      return eval_fo(s, f, phi);
  }
}

// --------------------------------------------------------------------------
// Invariance checking: isomorphic inputs must give outputs matched by an
// isomorphism-respecting bijection; for finite outputs that is multiset
// equality of pointed isomorphism classes.

namespace mod_detail {

// Pointed isomorphism: a structure isomorphism mapping the assignment of
// one side onto the other, variable by variable.
inline bool pointed_isomorphic(const PointedStructure& a, const PointedStructure& b) {
  if (a.structure.signature() != b.structure.signature()) return false;
  if (a.structure.domain().size() != b.structure.domain().size()) return false;
  if (a.assign.size() != b.assign.size()) return false;
  for (const auto& [var, e] : a.assign.entries())
    if (!b.assign.defined(var)) return false;

  std::vector<Element> av(a.structure.domain().begin(), a.structure.domain().end());
  std::vector<Element> bv(b.structure.domain().begin(), b.structure.domain().end());
  std::sort(bv.begin(), bv.end());
  auto preserves = [](const std::set<Tuple>& src, const std::set<Tuple>& dst,
                      const std::map<Element, Element>& f) {
    if (src.size() != dst.size()) return false;
    for (const auto& t : src) {
      Tuple m(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) m[i] = f.at(t[i]);
      if (!dst.count(m)) return false;
    }
    return true;
  };
  do {
    std::map<Element, Element> f;
    for (std::size_t i = 0; i < av.size(); ++i) f[av[i]] = bv[i];
    bool ok = true;
    for (const auto& [var, e] : a.assign.entries())
      if (f.at(e) != *b.assign.get(var)) ok = false;
    if (ok)
      for (const auto& [name, tuples] : a.structure.interp())
        if (!preserves(tuples, b.structure.tuples(name), f)) {
          ok = false;
          break;
        }
    if (ok) {
      const auto& ta = a.structure.tape_interp();
      const auto& tb = b.structure.tape_interp();
      if (ta.size() != tb.size()) ok = false;
      if (ok)
        for (const auto& [sym, tuples] : ta)
          if (!preserves(tuples, b.structure.tape_tuples(sym), f)) {
            ok = false;
            break;
          }
    }
    if (ok) return true;
  } while (std::next_permutation(bv.begin(), bv.end()));
  return false;
}

// Greedy multiset matching by pointed isomorphism.
inline bool outputs_match(std::vector<PointedStructure> a, std::vector<PointedStructure> b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (pointed_isomorphic(x, b[j])) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace mod_detail

struct InvarianceViolation {
  Structure original;
  Structure renamed;
  Assignment original_assign;
  Assignment renamed_assign;
  std::map<Element, Element> renaming;
};

struct InvarianceReport {
  int pairs_checked = 0;
  std::vector<InvarianceViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Builds isomorphic copies by random element renaming and compares the
// output multisets up to pointed isomorphism.
inline InvarianceReport check_invariance(const Modifier& m, const std::vector<Structure>& samples,
                                         int renamings_per_sample, std::uint64_t seed,
                                         const Assignment& assign = {}) {
  InvarianceReport report;
  std::mt19937_64 rng(seed);
  for (const auto& s : samples) {
    std::vector<Element> dom(s.domain().begin(), s.domain().end());
    for (int r = 0; r < renamings_per_sample; ++r) {
      Element base = 50 + static_cast<Element>(rng() % 50);
      std::vector<Element> image;
      for (std::size_t i = 0; i < dom.size(); ++i) image.push_back(base + static_cast<Element>(i));
      std::shuffle(image.begin(), image.end(), rng);
      std::map<Element, Element> f;
      for (std::size_t i = 0; i < dom.size(); ++i) f[dom[i]] = image[i];

      std::map<std::string, std::set<Tuple>> interp;
      for (const auto& [name, tuples] : s.interp()) {
        auto& out = interp[name];
        for (const auto& t : tuples) {
          Tuple mt(t.size());
          for (std::size_t i = 0; i < t.size(); ++i) mt[i] = f.at(t[i]);
          out.insert(std::move(mt));
        }
      }
      Structure renamed = Structure::make(s.signature(),
                                          std::set<Element>(image.begin(), image.end()),
                                          std::move(interp));
      Assignment renamed_assign;
      for (const auto& [var, e] : assign.entries()) renamed_assign = renamed_assign.set(var, f.at(e));

      auto out_a = apply_modifier(m, s, assign);
      auto out_b = apply_modifier(m, renamed, renamed_assign);
      ++report.pairs_checked;
      if (!mod_detail::outputs_match(out_a, out_b))
        report.violations.push_back({s, renamed, assign, renamed_assign, f});
    }
  }
  return report;
}

}  // namespace structura

#pragma once

// Brute-force Tarskian model checker. Ground truth for the game engine and
// the term compiler, plus team semantics over model sets and exhaustive
// structure enumeration.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "structura/formula.hpp"
#include "structura/structure.hpp"

namespace structura {

using NameMap = std::map<std::string, Element>;

namespace fo_detail {

inline Element resolve_arg(const AtomArg& a, const Assignment& f, const NameMap* names) {
  if (a.is_var) {
    auto e = f.get(a.var);
    if (!e) throw error("unbound-free-variable: x" + std::to_string(a.var));
    return *e;
  }
  if (names) {
    auto it = names->find(a.name);
    if (it != names->end()) return it->second;
  }
  throw error("unresolved element name: " + a.name);
}

}  // namespace fo_detail

// Standard Tarskian recursion; quantifiers enumerate the finite domain.
// Named constants are resolved through `names` (the expansion where each
// listed name denotes its own element).
inline bool eval_fo(const Structure& s, const Assignment& f, const Formula& phi,
                    const NameMap* names = nullptr) {
  const FormulaNode& n = *phi;
  switch (n.kind) {
    case FKind::Atom:
    case FKind::TapeAtom: {
      Tuple t;
      t.reserve(n.args.size());
      for (const auto& a : n.args) t.push_back(fo_detail::resolve_arg(a, f, names));
      const std::set<Tuple>& tuples = n.kind == FKind::Atom
                                          ? s.tuples(n.rel)
                                          : s.tape_tuples(TapeSymbol{n.rel, n.tape_arity});
      if (n.kind == FKind::Atom) {
        auto a = s.signature().arity_of(n.rel);
        if (!a || static_cast<std::size_t>(*a) != t.size())
          throw error("arity-mismatch in atom " + n.rel);
      }
      return tuples.count(t) > 0;
    }
    case FKind::Eq:
      return fo_detail::resolve_arg(n.args[0], f, names) ==
             fo_detail::resolve_arg(n.args[1], f, names);
    case FKind::Not:
      return !eval_fo(s, f, n.left, names);
    case FKind::And:
      return eval_fo(s, f, n.left, names) && eval_fo(s, f, n.right, names);
    case FKind::Or:
      return eval_fo(s, f, n.left, names) || eval_fo(s, f, n.right, names);
    case FKind::Exists: {
      for (Element e : s.domain())
        if (eval_fo(s, f.set(n.var, e), n.left, names)) return true;
      return false;
    }
    case FKind::Forall: {
      for (Element e : s.domain())
        if (!eval_fo(s, f.set(n.var, e), n.left, names)) return false;
      return true;
    }
    default:
      throw error("eval_fo: formula is not first-order");
  }
}

// A finite collection of (structure, assignment) pairs read under team
// semantics: the set satisfies a formula when every member does.
struct ModelSet {
  std::vector<std::pair<Structure, Assignment>> members;
};

inline bool model_set_sat(const ModelSet& m, const Formula& phi,
                          const NameMap* names = nullptr) {
  for (const auto& [s, f] : m.members)
    if (!eval_fo(s, f, phi, names)) return false;
  return true;  // vacuous on the empty set
}

// Enumerates every structure over a fixed signature and domain, in
// lexicographic order of the relation bitmaps (relations in signature
// order, tuples in lexicographic order). Optionally filtered by a sentence.
class StructureEnumerator {
 public:
  StructureEnumerator(Signature sig, std::vector<Element> domain,
                      Formula constraint = nullptr, const NameMap* names = nullptr,
                      int max_bits = 26)
      : sig_(std::make_shared<const Signature>(std::move(sig))),
        domain_(std::move(domain)),
        constraint_(std::move(constraint)),
        names_(names) {
    std::uint64_t bits = 0;
    for (const auto& [name, arity] : sig_->relations) {
      std::uint64_t count = 1;
      for (int i = 0; i < arity; ++i) count *= domain_.size();
      slots_.push_back({name, arity, count});
      bits += count;
    }
    if (bits > static_cast<std::uint64_t>(max_bits))
      throw error("bound-too-large: enumeration needs " + std::to_string(bits) +
                  " bits, cap is " + std::to_string(max_bits));
    bitmap_.assign(bits, false);
    total_ = bits >= 63 ? 0 : (std::uint64_t{1} << bits);
  }

  std::uint64_t total_unconstrained() const { return total_; }

  std::optional<Structure> next() {
    while (!done_) {
      Structure s = current();
      advance();
      if (!constraint_ || eval_fo(s, Assignment{}, constraint_, names_)) return s;
    }
    return std::nullopt;
  }

  // Applies fn to each structure; stops early when fn returns false.
  void for_each(const std::function<bool(const Structure&)>& fn) {
    while (auto s = next())
      if (!fn(*s)) return;
  }

 private:
  struct Slot {
    std::string name;
    int arity;
    std::uint64_t tuples;
  };

  Structure current() const {
    std::map<std::string, std::set<Tuple>> interp;
    std::size_t bit = 0;
    for (const auto& slot : slots_) {
      auto& set = interp[slot.name];
      for (std::uint64_t t = 0; t < slot.tuples; ++t, ++bit) {
        if (!bitmap_[bit]) continue;
        Tuple tuple(slot.arity);
        std::uint64_t rest = t;
        for (int i = slot.arity - 1; i >= 0; --i) {
          tuple[i] = domain_[rest % domain_.size()];
          rest /= domain_.size();
        }
        set.insert(tuple);
      }
    }
    return Structure::make(*sig_, std::set<Element>(domain_.begin(), domain_.end()),
                           std::move(interp));
  }

  void advance() {
    // Rightmost-first increment yields lexicographic order over the bitmap.
    for (std::size_t i = bitmap_.size(); i-- > 0;) {
      if (!bitmap_[i]) {
        bitmap_[i] = true;
        return;
      }
      bitmap_[i] = false;
    }
    done_ = true;
  }

  std::shared_ptr<const Signature> sig_;
  std::vector<Element> domain_;
  Formula constraint_;
  const NameMap* names_;
  std::vector<Slot> slots_;
  std::vector<bool> bitmap_;
  std::uint64_t total_ = 0;
  bool done_ = false;
};

// All structures over the signature with domains {0..k-1} for k in
// [min_size, max_size], enumeration order by size then bitmap.
inline std::vector<Structure> all_structures(const Signature& sig, int min_size, int max_size,
                                             int max_bits = 26) {
  std::vector<Structure> out;
  for (int k = min_size; k <= max_size; ++k) {
    std::vector<Element> dom;
    for (int i = 0; i < k; ++i) dom.push_back(i);
    StructureEnumerator en(sig, dom, nullptr, nullptr, max_bits);
    while (auto s = en.next()) out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace structura

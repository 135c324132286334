#pragma once

// The l-term algebra over (u, I, not, p, s, ex, J) plus registered
// extension operators, the term evaluator, and both directions of the
// FO <-> term translation. Identities and arbitrary permutations are
// reduced to operations touching only the front of tuples.

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "structura/fo.hpp"
#include "structura/formula.hpp"
#include "structura/structure.hpp"

namespace structura {

// Arity-tagged finite relation. The two nullary values are {()} and the
// nullary empty relation; every arity has its own empty relation so that
// complementation loses no arity information.
struct RelValue {
  int arity = 0;
  std::set<Tuple> tuples;

  static RelValue nullary(bool holds) {
    RelValue v;
    v.arity = 0;
    if (holds) v.tuples.insert(Tuple{});
    return v;
  }

  bool operator==(const RelValue&) const = default;
  auto operator<=>(const RelValue&) const = default;
};

enum class TKind { Universe, RelSym, Identity, Neg, Cyc, Swap, Exists, Join, OpApp };

struct LTermNode;
using LTerm = std::shared_ptr<const LTermNode>;

struct LTermNode {
  TKind kind;
  std::string name;          // RelSym / OpApp
  std::vector<LTerm> args;
};

namespace tb {

inline LTerm node(TKind k, std::string name, std::vector<LTerm> args) {
  return std::make_shared<const LTermNode>(LTermNode{k, std::move(name), std::move(args)});
}

inline LTerm u() { return node(TKind::Universe, {}, {}); }
inline LTerm rel(std::string name) { return node(TKind::RelSym, std::move(name), {}); }
inline LTerm I(LTerm t) { return node(TKind::Identity, {}, {std::move(t)}); }
inline LTerm neg(LTerm t) { return node(TKind::Neg, {}, {std::move(t)}); }
inline LTerm p(LTerm t) { return node(TKind::Cyc, {}, {std::move(t)}); }
inline LTerm s(LTerm t) { return node(TKind::Swap, {}, {std::move(t)}); }
inline LTerm ex(LTerm t) { return node(TKind::Exists, {}, {std::move(t)}); }
inline LTerm J(LTerm a, LTerm b) { return node(TKind::Join, {}, {std::move(a), std::move(b)}); }
inline LTerm op(std::string name, std::vector<LTerm> args) {
  return node(TKind::OpApp, std::move(name), std::move(args));
}

}  // namespace tb

inline bool equal_term(const LTerm& a, const LTerm& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal_term(a->args[i], b->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Registered extension operators: isomorphism-invariant maps from
// (domain, R_1, ..., R_k) to a relation over the domain.

struct RegisteredOperator {
  std::string name;
  int arg_count = 1;
  std::function<RelValue(const std::set<Element>&, const std::vector<RelValue>&)> fn;
};

namespace relalg_detail {

struct OperatorRegistry {
  std::shared_mutex mutex;
  std::map<std::string, RegisteredOperator> ops;

  static OperatorRegistry& instance() {
    static OperatorRegistry r;
    return r;
  }
};

}  // namespace relalg_detail

inline void register_operator(RegisteredOperator op) {
  auto& reg = relalg_detail::OperatorRegistry::instance();
  std::unique_lock lock(reg.mutex);
  if (reg.ops.count(op.name)) throw error("duplicate operator name: " + op.name);
  reg.ops.emplace(op.name, std::move(op));
}

inline std::optional<RegisteredOperator> find_operator(const std::string& name) {
  auto& reg = relalg_detail::OperatorRegistry::instance();
  std::shared_lock lock(reg.mutex);
  auto it = reg.ops.find(name);
  if (it == reg.ops.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Evaluation

inline int term_arity(const LTerm& t, const Signature& sig) {
  switch (t->kind) {
    case TKind::Universe:
      return 1;
    case TKind::RelSym: {
      auto a = sig.arity_of(t->name);
      if (!a) throw error("unknown relation symbol in term: " + t->name);
      return *a;
    }
    case TKind::Identity:
    case TKind::Neg:
    case TKind::Cyc:
    case TKind::Swap:
      return term_arity(t->args[0], sig);
    case TKind::Exists: {
      int k = term_arity(t->args[0], sig);
      return k > 0 ? k - 1 : 0;
    }
    case TKind::Join:
      return term_arity(t->args[0], sig) + term_arity(t->args[1], sig);
    case TKind::OpApp:
      throw error("arity of an extension operator is model-dependent");
  }
  return 0;
}

inline RelValue eval_term(const LTerm& t, const Structure& s) {
  if (s.domain().empty()) throw error("empty-domain: l-terms require a non-empty domain");
  switch (t->kind) {
    case TKind::Universe: {
      RelValue v;
      v.arity = 1;
      for (Element e : s.domain()) v.tuples.insert({e});
      return v;
    }
    case TKind::RelSym: {
      auto a = s.signature().arity_of(t->name);
      if (!a) throw error("unknown relation symbol in term: " + t->name);
      return RelValue{*a, s.tuples(t->name)};
    }
    case TKind::Identity: {
      RelValue v = eval_term(t->args[0], s);
      if (v.arity < 2) return v;
      RelValue out;
      out.arity = v.arity;
      for (const auto& tup : v.tuples)
        if (tup[0] == tup[1]) out.tuples.insert(tup);
      return out;
    }
    case TKind::Neg: {
      RelValue v = eval_term(t->args[0], s);
      RelValue out;
      out.arity = v.arity;
      std::vector<Element> dom(s.domain().begin(), s.domain().end());
      Tuple tup(v.arity);
      std::function<void(int)> rec = [&](int i) {
        if (i == v.arity) {
          if (!v.tuples.count(tup)) out.tuples.insert(tup);
          return;
        }
        for (Element e : dom) {
          tup[i] = e;
          rec(i + 1);
        }
      };
      rec(0);
      return out;
    }
    case TKind::Cyc: {
      RelValue v = eval_term(t->args[0], s);
      if (v.arity < 2) return v;
      RelValue out;
      out.arity = v.arity;
      for (const auto& tup : v.tuples) {
        Tuple rot(tup.begin() + 1, tup.end());
        rot.push_back(tup[0]);
        out.tuples.insert(std::move(rot));
      }
      return out;
    }
    case TKind::Swap: {
      RelValue v = eval_term(t->args[0], s);
      if (v.arity < 2) return v;
      RelValue out;
      out.arity = v.arity;
      for (const auto& tup : v.tuples) {
        Tuple sw = tup;
        std::swap(sw[0], sw[1]);
        out.tuples.insert(std::move(sw));
      }
      return out;
    }
    case TKind::Exists: {
      RelValue v = eval_term(t->args[0], s);
      if (v.arity == 0) return v;
      RelValue out;
      out.arity = v.arity - 1;
      for (const auto& tup : v.tuples) out.tuples.insert(Tuple(tup.begin() + 1, tup.end()));
      return out;
    }
    case TKind::Join: {
      RelValue a = eval_term(t->args[0], s);
      RelValue b = eval_term(t->args[1], s);
      RelValue out;
      out.arity = a.arity + b.arity;
      for (const auto& ta : a.tuples)
        for (const auto& tbu : b.tuples) {
          Tuple joined = ta;
          joined.insert(joined.end(), tbu.begin(), tbu.end());
          out.tuples.insert(std::move(joined));
        }
      return out;
    }
    case TKind::OpApp: {
      auto op = find_operator(t->name);
      if (!op) throw error("unknown extension operator: " + t->name);
      if (static_cast<int>(t->args.size()) != op->arg_count)
        throw error("operator " + t->name + " expects " + std::to_string(op->arg_count) +
                    " arguments");
      std::vector<RelValue> args;
      for (const auto& a : t->args) args.push_back(eval_term(a, s));
      return op->fn(s.domain(), args);
    }
  }
  throw error("eval_term: unreachable");
}

// The relation a first-order formula defines over a structure: free
// variables taken in strictly increasing subindex order; sentences give
// the nullary {()} or the nullary empty relation.
inline RelValue defined_relation(const Structure& s, const Formula& phi) {
  if (s.domain().empty()) throw error("empty-domain: defined_relation needs a non-empty domain");
  if (!is_fo(phi)) throw error("defined_relation: formula is not first-order");
  std::vector<int> vars = free_vars(phi);
  RelValue out;
  out.arity = static_cast<int>(vars.size());
  std::vector<Element> dom(s.domain().begin(), s.domain().end());
  Tuple tup(vars.size());
  std::function<void(std::size_t, const Assignment&)> rec = [&](std::size_t i,
                                                                const Assignment& f) {
    if (i == vars.size()) {
      if (eval_fo(s, f, phi)) out.tuples.insert(tup);
      return;
    }
    for (Element e : dom) {
      tup[i] = e;
      rec(i + 1, f.set(vars[i], e));
    }
  };
  rec(0, Assignment{});
  return out;
}

// ---------------------------------------------------------------------------
// Permutations from p and s only

namespace relalg_detail {

// Swaps positions (i, i+1) of an arity-k value: rotate the pair to the
// front, swap, rotate back. Rotation counts are reduced mod k.
inline LTerm swap_adjacent(LTerm t, int i, int k) {
  int lead = i % k;
  for (int n = 0; n < lead; ++n) t = tb::p(t);
  t = tb::s(t);
  int rest = (k - lead) % k;
  for (int n = 0; n < rest; ++n) t = tb::p(t);
  return t;
}

}  // namespace relalg_detail

// Builds a term applying only p and s above `t` that realizes the selector
// permutation: output coordinate i holds input coordinate perm[i].
inline LTerm permute_term(LTerm t, const std::vector<int>& perm) {
  int k = static_cast<int>(perm.size());
  {
    std::vector<bool> seen(k, false);
    for (int v : perm) {
      if (v < 0 || v >= k || seen[v]) throw error("permute_term: not a permutation");
      seen[v] = true;
    }
  }
  if (k < 2) return t;
  // Bubble-sort the current arrangement towards the selector; each
  // adjacent swap is a p-rotation sandwich around s.
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  std::vector<int> rank(k);
  for (int i = 0; i < k; ++i) rank[perm[i]] = i;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j = 0; j + 1 < k; ++j) {
      if (rank[cur[j]] > rank[cur[j + 1]]) {
        std::swap(cur[j], cur[j + 1]);
        t = relalg_detail::swap_adjacent(std::move(t), j, k);
        moved = true;
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// FO -> l-term

inline LTerm top_term() { return tb::ex(tb::u()); }
inline LTerm bottom_term() { return tb::neg(tb::ex(tb::u())); }

namespace relalg_detail {

struct Compiled {
  LTerm term;
  std::vector<int> cols;  // variable subindex per coordinate
};

// Moves coordinates i < j to the front (order preserved otherwise), applies
// the identity operator and projects the duplicate away.
inline Compiled identify(Compiled c, std::size_t i, std::size_t j) {
  int k = static_cast<int>(c.cols.size());
  std::vector<int> selector;
  selector.push_back(static_cast<int>(i));
  selector.push_back(static_cast<int>(j));
  for (int q = 0; q < k; ++q)
    if (q != static_cast<int>(i) && q != static_cast<int>(j)) selector.push_back(q);
  c.term = tb::ex(tb::I(permute_term(std::move(c.term), selector)));
  std::vector<int> cols;
  cols.push_back(c.cols[j]);
  for (int q = 0; q < k; ++q)
    if (q != static_cast<int>(i) && q != static_cast<int>(j)) cols.push_back(c.cols[q]);
  c.cols = std::move(cols);
  return c;
}

// Repeatedly identifies duplicated variables (in increasing subindex
// order), then permutes the remaining coordinates into increasing order.
inline Compiled normalize(Compiled c) {
  for (;;) {
    int dup_var = -1;
    for (std::size_t i = 0; i < c.cols.size() && dup_var < 0; ++i)
      for (std::size_t j = i + 1; j < c.cols.size(); ++j)
        if (c.cols[i] == c.cols[j] && (dup_var < 0 || c.cols[i] < dup_var)) dup_var = c.cols[i];
    if (dup_var < 0) break;
    std::size_t first = 0, second = 0;
    bool found_first = false;
    for (std::size_t i = 0; i < c.cols.size(); ++i) {
      if (c.cols[i] != dup_var) continue;
      if (!found_first) {
        first = i;
        found_first = true;
      } else {
        second = i;
        break;
      }
    }
    c = identify(std::move(c), first, second);
  }
  // sort coordinates by variable subindex
  int k = static_cast<int>(c.cols.size());
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return c.cols[a] < c.cols[b]; });
  bool sorted = true;
  for (int i = 0; i < k; ++i)
    if (order[i] != i) sorted = false;
  if (!sorted) {
    c.term = permute_term(std::move(c.term), order);
    std::vector<int> cols;
    for (int i = 0; i < k; ++i) cols.push_back(c.cols[order[i]]);
    c.cols = std::move(cols);
  }
  return c;
}

inline Compiled compile_rec(const Formula& f) {
  switch (f->kind) {
    case FKind::Eq: {
      int x = f->args[0].var, y = f->args[1].var;
      if (x == y) return {tb::u(), {x}};
      return {tb::I(tb::J(tb::u(), tb::u())), {std::min(x, y), std::max(x, y)}};
    }
    case FKind::Atom: {
      Compiled c;
      c.term = tb::rel(f->rel);
      for (const auto& a : f->args) c.cols.push_back(a.var);
      return normalize(std::move(c));
    }
    case FKind::Not: {
      Compiled c = compile_rec(f->left);
      c.term = tb::neg(std::move(c.term));
      return c;
    }
    case FKind::And: {
      Compiled a = compile_rec(f->left);
      Compiled b = compile_rec(f->right);
      Compiled c;
      c.term = tb::J(std::move(a.term), std::move(b.term));
      c.cols = a.cols;
      c.cols.insert(c.cols.end(), b.cols.begin(), b.cols.end());
      return normalize(std::move(c));
    }
    case FKind::Or:
      return compile_rec(fb::lnot(fb::land(fb::lnot(f->left), fb::lnot(f->right))));
    case FKind::Forall:
      return compile_rec(fb::lnot(fb::exists(f->var, fb::lnot(f->left))));
    case FKind::Exists: {
      Compiled c = compile_rec(f->left);
      auto it = std::find(c.cols.begin(), c.cols.end(), f->var);
      if (it == c.cols.end()) return c;  // the bound variable is not free below
      int pos = static_cast<int>(it - c.cols.begin());
      int k = static_cast<int>(c.cols.size());
      std::vector<int> selector;
      selector.push_back(pos);
      for (int q = 0; q < k; ++q)
        if (q != pos) selector.push_back(q);
      c.term = tb::ex(permute_term(std::move(c.term), selector));
      c.cols.erase(it);
      return c;  // remaining coordinates stay in increasing order
    }
    default:
      throw error("compile_fo: formula is not first-order");
  }
}

}  // namespace relalg_detail

inline LTerm compile_fo(const Formula& phi) {
  if (!is_fo(phi)) throw error("compile_fo: formula is not first-order");
  return relalg_detail::compile_rec(phi).term;
}

// ---------------------------------------------------------------------------
// l-term -> FO

namespace relalg_detail {

struct ToFo {
  const Signature& sig;
  int fresh;

  // Invariant: the produced formula has free variables exactly x1..xk.
  std::pair<Formula, int> run(const LTerm& t) {
    switch (t->kind) {
      case TKind::Universe:
        return {fb::eqv(1, 1), 1};
      case TKind::RelSym: {
        auto a = sig.arity_of(t->name);
        if (!a) throw error("unknown relation symbol in term: " + t->name);
        std::vector<int> vars;
        for (int i = 1; i <= *a; ++i) vars.push_back(i);
        return {fb::atomv(t->name, vars), *a};
      }
      case TKind::Identity: {
        auto [phi, k] = run(t->args[0]);
        if (k < 2) return {phi, k};
        return {fb::land(phi, fb::eqv(1, 2)), k};
      }
      case TKind::Neg: {
        auto [phi, k] = run(t->args[0]);
        return {fb::lnot(phi), k};
      }
      case TKind::Cyc: {
        auto [phi, k] = run(t->args[0]);
        if (k < 2) return {phi, k};
        // output (a2..ak,a1) in T(p) means T holds of (a_k', a_1'..a_{k-1}')
        int tmp = fresh++;
        phi = subst_var(phi, 1, tmp);
        for (int j = 2; j <= k; ++j) phi = subst_var(phi, j, j - 1);
        phi = subst_var(phi, tmp, k);
        return {phi, k};
      }
      case TKind::Swap: {
        auto [phi, k] = run(t->args[0]);
        if (k < 2) return {phi, k};
        int tmp = fresh++;
        phi = subst_var(phi, 1, tmp);
        phi = subst_var(phi, 2, 1);
        phi = subst_var(phi, tmp, 2);
        return {phi, k};
      }
      case TKind::Exists: {
        auto [phi, k] = run(t->args[0]);
        if (k == 0) return {phi, 0};
        int tmp = fresh++;
        phi = subst_var(phi, 1, tmp);
        for (int j = 2; j <= k; ++j) phi = subst_var(phi, j, j - 1);
        return {fb::exists(tmp, phi), k - 1};
      }
      case TKind::Join: {
        auto [fa, k] = run(t->args[0]);
        auto [fbm, l] = run(t->args[1]);
        for (int j = l; j >= 1; --j) fbm = subst_var(fbm, j, k + j);
        return {fb::land(fa, fbm), k + l};
      }
      case TKind::OpApp:
        throw error("extension-operator-present: cannot translate to FO");
    }
    throw error("term_to_fo: unreachable");
  }
};

}  // namespace relalg_detail

inline Formula term_to_fo(const LTerm& t, const Signature& sig) {
  int bound = 2;
  std::function<void(const LTerm&)> scan = [&](const LTerm& x) {
    if (x->kind == TKind::RelSym) {
      auto a = sig.arity_of(x->name);
      if (a) bound += *a;
    } else if (x->kind == TKind::Universe || x->kind == TKind::Identity) {
      bound += 2;
    }
    for (const auto& a : x->args) scan(a);
  };
  scan(t);
  relalg_detail::ToFo ctx{sig, bound + 1};
  return ctx.run(t).first;
}

// ---------------------------------------------------------------------------
// Operator invariance harness

struct OperatorViolation {
  Structure original;
  Structure renamed;
  std::map<Element, Element> mapping;
  RelValue got;
  RelValue expected;
};

// Samples isomorphic copies by renaming elements and checks that the
// operator commutes with the renaming on the given argument terms.
inline std::optional<OperatorViolation> check_operator_invariance(
    const std::string& op_name, const std::vector<LTerm>& arg_terms,
    const std::vector<Structure>& samples, int renamings_per_sample, std::uint64_t seed) {
  auto op = find_operator(op_name);
  if (!op) throw error("unknown extension operator: " + op_name);
  std::mt19937_64 rng(seed);
  for (const auto& s : samples) {
    if (s.domain().empty()) continue;
    std::vector<Element> dom(s.domain().begin(), s.domain().end());
    for (int r = 0; r < renamings_per_sample; ++r) {
      // random injective renaming into a shifted range
      std::vector<Element> image = dom;
      for (auto& e : image) e += 100;
      std::shuffle(image.begin(), image.end(), rng);
      std::map<Element, Element> f;
      for (std::size_t i = 0; i < dom.size(); ++i) f[dom[i]] = image[i];

      std::map<std::string, std::set<Tuple>> interp;
      for (const auto& [name, tuples] : s.interp()) {
        auto& out = interp[name];
        for (const auto& t : tuples) {
          Tuple m(t.size());
          for (std::size_t i = 0; i < t.size(); ++i) m[i] = f.at(t[i]);
          out.insert(std::move(m));
        }
      }
      Structure renamed = Structure::make(s.signature(),
                                          std::set<Element>(image.begin(), image.end()),
                                          std::move(interp));

      std::vector<RelValue> args_orig, args_ren;
      for (const auto& t : arg_terms) {
        args_orig.push_back(eval_term(t, s));
        args_ren.push_back(eval_term(t, renamed));
      }
      RelValue out_orig = op->fn(s.domain(), args_orig);
      RelValue out_ren = op->fn(renamed.domain(), args_ren);
      RelValue mapped;
      mapped.arity = out_orig.arity;
      for (const auto& t : out_orig.tuples) {
        Tuple m(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) m[i] = f.at(t[i]);
        mapped.tuples.insert(std::move(m));
      }
      if (mapped != out_ren)
        return OperatorViolation{s, renamed, f, out_ren, mapped};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Term grammar: u, R, I(t), not(t), p(t), s(t), ex(t), J(t,t), op:name(t,...)

inline std::string print_term(const LTerm& t) {
  switch (t->kind) {
    case TKind::Universe: return "u";
    case TKind::RelSym: return t->name;
    case TKind::Identity: return "I(" + print_term(t->args[0]) + ")";
    case TKind::Neg: return "not(" + print_term(t->args[0]) + ")";
    case TKind::Cyc: return "p(" + print_term(t->args[0]) + ")";
    case TKind::Swap: return "s(" + print_term(t->args[0]) + ")";
    case TKind::Exists: return "ex(" + print_term(t->args[0]) + ")";
    case TKind::Join:
      return "J(" + print_term(t->args[0]) + "," + print_term(t->args[1]) + ")";
    case TKind::OpApp: {
      std::string out = "op:" + t->name + "(";
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ",";
        out += print_term(t->args[i]);
      }
      return out + ")";
    }
  }
  return {};
}

namespace relalg_detail {

struct TermParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw parse_error(msg, line, col);
  }

  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
        ++pos;
      else
        break;
    }
    if (start == pos) fail("expected an identifier");
    return std::string(text.substr(start, pos - start));
  }

  LTerm term() {
    std::string id = ident();
    if (id == "u") return tb::u();
    if (id == "op") {
      if (!eat(':')) fail("expected ':' after op");
      std::string name = ident();
      if (!eat('(')) fail("expected '('");
      std::vector<LTerm> args;
      args.push_back(term());
      while (eat(',')) args.push_back(term());
      if (!eat(')')) fail("expected ')'");
      return tb::op(std::move(name), std::move(args));
    }
    auto unary = [&](TKind k) {
      if (!eat('(')) fail("expected '('");
      LTerm inner = term();
      if (!eat(')')) fail("expected ')'");
      return tb::node(k, {}, {std::move(inner)});
    };
    if (id == "I") return unary(TKind::Identity);
    if (id == "not") return unary(TKind::Neg);
    if (id == "p") return unary(TKind::Cyc);
    if (id == "s") return unary(TKind::Swap);
    if (id == "ex") return unary(TKind::Exists);
    if (id == "J") {
      if (!eat('(')) fail("expected '('");
      LTerm a = term();
      if (!eat(',')) fail("expected ','");
      LTerm b = term();
      if (!eat(')')) fail("expected ')'");
      return tb::J(std::move(a), std::move(b));
    }
    return tb::rel(std::move(id));
  }
};

}  // namespace relalg_detail

inline LTerm parse_term(std::string_view text) {
  relalg_detail::TermParser p{text};
  LTerm t = p.term();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input after term");
  return t;
}

}  // namespace structura

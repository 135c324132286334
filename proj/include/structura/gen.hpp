#pragma once

// Seeded corpus generators for formulas, l-terms and structures. Every
// generated corpus is a pure function of its seed.

#include <cstdint>
#include <random>
#include <vector>

#include "structura/formula.hpp"
#include "structura/relalg.hpp"
#include "structura/structure.hpp"

namespace structura {

// The signature driving the exhaustive small-structure sweeps.
inline Signature sweep_signature() { return Signature{{"P", 1}, {"R", 2}}; }

// The wider signature used by compiler corpora (arities up to three).
inline Signature compiler_signature() { return Signature{{"P", 1}, {"R", 2}, {"T", 3}}; }

namespace gen_detail {

inline int pick(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % n); }

}  // namespace gen_detail

inline Structure gen_structure(std::mt19937_64& rng, const Signature& sig, int domain_size,
                               int density_percent = 50) {
  std::set<Element> dom;
  for (int i = 0; i < domain_size; ++i) dom.insert(i);
  std::map<std::string, std::set<Tuple>> interp;
  for (const auto& [name, arity] : sig.relations) {
    auto& set = interp[name];
    Tuple t(arity);
    std::function<void(int)> rec = [&](int i) {
      if (i == arity) {
        if (gen_detail::pick(rng, 100) < density_percent) set.insert(t);
        return;
      }
      for (int e = 0; e < domain_size; ++e) {
        t[i] = e;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return Structure::make(sig, std::move(dom), std::move(interp));
}

// First-order formulas with bounded quantifier depth over variables
// x1..max_vars; atoms draw from the variables currently in scope, so a
// generated formula with `free` empty is a sentence.
inline Formula gen_fo(std::mt19937_64& rng, const Signature& sig, int quant_depth,
                      const std::vector<int>& in_scope, int size_budget, int max_vars = 3) {
  using gen_detail::pick;
  auto atom = [&]() -> Formula {
    if (in_scope.empty()) {
      // no variables to use: force a closed tautology-shaped equality
      return fb::eqv(1, 1);  // callers quantify; reached only at the root
    }
    const auto& rel = sig.relations[pick(rng, static_cast<int>(sig.relations.size()))];
    if (pick(rng, 5) == 0) {
      int a = in_scope[pick(rng, static_cast<int>(in_scope.size()))];
      int b = in_scope[pick(rng, static_cast<int>(in_scope.size()))];
      return fb::eqv(a, b);
    }
    std::vector<int> args;
    for (int i = 0; i < rel.second; ++i)
      args.push_back(in_scope[pick(rng, static_cast<int>(in_scope.size()))]);
    return fb::atomv(rel.first, args);
  };
  if (size_budget <= 1) {
    if (!in_scope.empty()) return atom();
    int v = 1 + pick(rng, max_vars);
    std::vector<int> scope = {v};
    return fb::exists(v, gen_fo(rng, sig, 0, scope, 1, max_vars));
  }
  int kind = pick(rng, in_scope.empty() ? 2 : (quant_depth > 0 ? 10 : 7));
  switch (kind) {
    case 0:
    case 1: {
      if (quant_depth <= 0 && in_scope.empty()) return atom();
      if (quant_depth <= 0) return atom();
      int v = 1 + pick(rng, max_vars);
      std::vector<int> scope = in_scope;
      bool have = false;
      for (int x : scope)
        if (x == v) have = true;
      if (!have) scope.push_back(v);
      Formula body = gen_fo(rng, sig, quant_depth - 1, scope, size_budget - 1, max_vars);
      return kind == 0 ? fb::exists(v, body) : fb::forall(v, body);
    }
    case 2:
      return fb::lnot(gen_fo(rng, sig, quant_depth, in_scope, size_budget - 1, max_vars));
    case 3:
    case 4: {
      int lhs = size_budget / 2;
      Formula a = gen_fo(rng, sig, quant_depth, in_scope, lhs, max_vars);
      Formula b = gen_fo(rng, sig, quant_depth, in_scope, size_budget - 1 - lhs, max_vars);
      return kind == 3 ? fb::land(a, b) : fb::lor(a, b);
    }
    default:
      return atom();
  }
}

inline Formula gen_fo_sentence(std::mt19937_64& rng, const Signature& sig, int quant_depth = 3,
                               int size_budget = 9, int max_vars = 3) {
  return gen_fo(rng, sig, quant_depth, {}, size_budget, max_vars);
}

// Open formulas whose free variables are a subset of x1..x3.
inline Formula gen_fo_open(std::mt19937_64& rng, const Signature& sig, int quant_depth = 2,
                           int size_budget = 7) {
  std::vector<int> scope;
  int n = 1 + gen_detail::pick(rng, 3);
  for (int i = 1; i <= n; ++i) scope.push_back(i);
  return gen_fo(rng, sig, quant_depth, scope, size_budget);
}

// Game formulas: the FO repertoire plus point and tuple modification,
// claims and tape atoms. Sized small so position graphs stay closed.
inline Formula gen_game(std::mt19937_64& rng, const Signature& sig,
                        const std::vector<int>& in_scope, int size_budget,
                        bool allow_claims = true) {
  using gen_detail::pick;
  auto sub = [&](int budget, std::vector<int> scope) {
    return gen_game(rng, sig, scope, budget, allow_claims);
  };
  if (size_budget <= 1) {
    if (in_scope.empty()) return allow_claims && pick(rng, 3) == 0 ? fb::claim_atom(1)
                                                                   : fb::eqv(7, 7);
    int a = in_scope[pick(rng, static_cast<int>(in_scope.size()))];
    if (pick(rng, 4) == 0) return fb::tape_atom("W", 1, {AtomArg::v(a)});
    const auto& rel = sig.relations[pick(rng, static_cast<int>(sig.relations.size()))];
    std::vector<int> args;
    for (int i = 0; i < rel.second; ++i)
      args.push_back(in_scope[pick(rng, static_cast<int>(in_scope.size()))]);
    return fb::atomv(rel.first, args);
  }
  int kind = pick(rng, 12);
  int next_var = 1;
  for (int v : in_scope) next_var = std::max(next_var, v + 1);
  std::vector<int> extended = in_scope;
  extended.push_back(next_var);
  switch (kind) {
    case 0:
      return fb::exists(next_var, sub(size_budget - 1, extended));
    case 1:
      return fb::forall(next_var, sub(size_budget - 1, extended));
    case 2:
      return fb::lnot(sub(size_budget - 1, in_scope));
    case 3: {
      Formula a = sub(size_budget / 2, in_scope);
      Formula b = sub(size_budget - 1 - size_budget / 2, in_scope);
      return pick(rng, 2) ? fb::land(a, b) : fb::lor(a, b);
    }
    case 4:
      return fb::ins_point(next_var, sub(size_budget - 1, extended));
    case 5:
      return in_scope.empty() ? sub(size_budget, in_scope)
                              : fb::del_point(in_scope[pick(rng, (int)in_scope.size())],
                                              sub(size_budget - 1, in_scope));
    case 6: {
      std::vector<int> vars = {next_var, next_var + 1};
      std::vector<int> scope = in_scope;
      scope.push_back(next_var);
      scope.push_back(next_var + 1);
      return fb::ins_tuple("R", vars, sub(size_budget - 1, scope));
    }
    case 7: {
      std::vector<int> vars = {next_var, next_var + 1};
      std::vector<int> scope = in_scope;
      scope.push_back(next_var);
      scope.push_back(next_var + 1);
      return fb::del_tuple("R", vars, sub(size_budget - 1, scope));
    }
    case 8:
      if (allow_claims) return fb::claim(1 + pick(rng, 2), sub(size_budget - 1, in_scope));
      return sub(size_budget - 1, in_scope);
    case 9: {
      std::vector<int> vars = {next_var};
      std::vector<int> scope = in_scope;
      scope.push_back(next_var);
      return fb::ins_tuple("W", vars, sub(size_budget - 1, scope), true);
    }
    case 10: {
      Formula a = sub(size_budget / 2, in_scope);
      Formula b = sub(size_budget - 1 - size_budget / 2, in_scope);
      return fb::compose(a, b);
    }
    default:
      return sub(size_budget - 1, in_scope);
  }
}

inline Formula gen_game_sentence(std::mt19937_64& rng, const Signature& sig,
                                 int size_budget = 6) {
  return gen_game(rng, sig, {}, size_budget);
}

// l-terms of bounded depth with tracked arity kept small enough for
// complementation to stay cheap.
inline LTerm gen_lterm(std::mt19937_64& rng, const Signature& sig, int depth,
                       int max_arity = 4) {
  using gen_detail::pick;
  auto leaf = [&]() -> std::pair<LTerm, int> {
    if (pick(rng, 3) == 0) return {tb::u(), 1};
    const auto& rel = sig.relations[pick(rng, static_cast<int>(sig.relations.size()))];
    return {tb::rel(rel.first), rel.second};
  };
  std::function<std::pair<LTerm, int>(int)> rec = [&](int d) -> std::pair<LTerm, int> {
    if (d <= 0) return leaf();
    switch (pick(rng, 8)) {
      case 0: {
        auto [t, k] = rec(d - 1);
        return {tb::I(t), k};
      }
      case 1: {
        auto [t, k] = rec(d - 1);
        return {tb::neg(t), k};
      }
      case 2: {
        auto [t, k] = rec(d - 1);
        return {tb::p(t), k};
      }
      case 3: {
        auto [t, k] = rec(d - 1);
        return {tb::s(t), k};
      }
      case 4: {
        auto [t, k] = rec(d - 1);
        return {tb::ex(t), k > 0 ? k - 1 : 0};
      }
      case 5:
      case 6: {
        auto [a, ka] = rec(d - 1);
        auto [b, kb] = rec(d - 1);
        if (ka + kb > max_arity) return ka >= kb ? std::pair<LTerm, int>{a, ka}
                                                 : std::pair<LTerm, int>{b, kb};
        return {tb::J(a, b), ka + kb};
      }
      default:
        return leaf();
    }
  };
  return rec(depth).first;
}

}  // namespace structura

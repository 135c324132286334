#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "structura/formula_parse.hpp"
#include "structura/formula_print.hpp"
#include "structura/relalg.hpp"

using namespace structura;

namespace {

Structure abc(std::set<Tuple> r3) {
  // domain {1,2,3} with a ternary relation, matching the clause examples
  return Structure::make(Signature{{"R", 3}}, {1, 2, 3}, {{"R", std::move(r3)}});
}

Structure rand_structure(std::mt19937_64& rng, const Signature& sig, int n) {
  std::set<Element> dom;
  for (int i = 0; i < n; ++i) dom.insert(i);
  std::map<std::string, std::set<Tuple>> interp;
  for (const auto& [name, arity] : sig.relations) {
    auto& set = interp[name];
    Tuple t(arity);
    std::function<void(int)> rec = [&](int i) {
      if (i == arity) {
        if (rng() % 2) set.insert(t);
        return;
      }
      for (int e = 0; e < n; ++e) {
        t[i] = e;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return Structure::make(sig, std::move(dom), std::move(interp));
}

bool register_test_ops() {
  register_operator({"tc", 1, [](const std::set<Element>&, const std::vector<RelValue>& args) {
                       if (args[0].arity != 2) throw error("tc expects a binary relation");
                       RelValue out = args[0];
                       bool changed = true;
                       while (changed) {
                         changed = false;
                         auto snapshot = out.tuples;
                         for (const auto& a : snapshot)
                           for (const auto& b : snapshot)
                             if (a[1] == b[0] && out.tuples.insert({a[0], b[1]}).second)
                               changed = true;
                       }
                       return out;
                     }});
  register_operator({"parity", 1, [](const std::set<Element>&, const std::vector<RelValue>& args) {
                       return RelValue::nullary(args[0].tuples.size() % 2 == 0);
                     }});
  register_operator({"pick-min", 1, [](const std::set<Element>& dom, const std::vector<RelValue>&) {
                       // depends on element identity: deliberately not invariant
                       RelValue out;
                       out.arity = 1;
                       if (!dom.empty()) out.tuples.insert({*dom.begin()});
                       return out;
                     }});
  return true;
}

const bool ops_registered = register_test_ops();

}  // namespace

TEST_CASE("algebra clause examples") {
  // p moves the first element to the end
  Structure s = abc({{1, 2, 3}});
  CHECK(eval_term(tb::p(tb::rel("R")), s).tuples == std::set<Tuple>{{2, 3, 1}});

  // I keeps tuples whose first two coordinates agree; unary/nullary pass through
  Structure si = abc({{1, 1, 2}, {1, 2, 2}});
  CHECK(eval_term(tb::I(tb::rel("R")), si).tuples == std::set<Tuple>{{1, 1, 2}});
  CHECK(eval_term(tb::I(tb::u()), si) == eval_term(tb::u(), si));

  // complement of the complement on nullary values
  CHECK(eval_term(tb::neg(bottom_term()), si) == RelValue::nullary(true));
  CHECK(eval_term(tb::neg(top_term()), si) == RelValue::nullary(false));
  CHECK(eval_term(tb::neg(tb::neg(top_term())), si) == RelValue::nullary(true));

  // s swaps the first two coordinates
  CHECK(eval_term(tb::s(tb::rel("R")), s).tuples == std::set<Tuple>{{2, 1, 3}});

  // ex removes the first coordinate; on nullary values it passes through
  CHECK(eval_term(tb::ex(tb::rel("R")), s).tuples == std::set<Tuple>{{2, 3}});
  CHECK(eval_term(tb::ex(top_term()), s) == RelValue::nullary(true));

  // J with a nullary operand represents the other operand's tuples
  Structure su = Structure::make(Signature{{"P", 1}}, {1}, {{"P", {{1}}}});
  RelValue j = eval_term(tb::J(top_term(), tb::rel("P")), su);
  CHECK(j.arity == 1);
  CHECK(j.tuples == std::set<Tuple>{{1}});
  CHECK(eval_term(tb::J(top_term(), top_term()), su) == RelValue::nullary(true));
  CHECK(eval_term(tb::J(bottom_term(), tb::rel("P")), su).tuples.empty());

  // u is the universal unary relation
  RelValue uni = eval_term(tb::u(), s);
  CHECK(uni.arity == 1);
  CHECK(uni.tuples == std::set<Tuple>{{1}, {2}, {3}});

  // arity bookkeeping: each arity has its own empty relation
  RelValue e2 = eval_term(tb::neg(tb::J(tb::u(), tb::u())), s);
  CHECK(e2.arity == 2);
  CHECK(e2.tuples.empty());
  CHECK(eval_term(tb::neg(tb::neg(tb::rel("R"))), s) == eval_term(tb::rel("R"), s));

  CHECK_THROWS_AS(eval_term(tb::u(), Structure::make(Signature{{"R", 3}})), error);
  CHECK_THROWS_AS(eval_term(tb::rel("Q"), s), error);
}

TEST_CASE("p and s identities hold pointwise") {
  std::mt19937_64 rng(3);
  Signature sig{{"R", 3}, {"S", 2}};
  for (int i = 0; i < 20; ++i) {
    Structure s = rand_structure(rng, sig, 1 + static_cast<int>(rng() % 3));
    for (const char* rel : {"R", "S"}) {
      LTerm base = tb::rel(rel);
      int k = *sig.arity_of(rel);
      LTerm rotated = base;
      for (int j = 0; j < k; ++j) rotated = tb::p(rotated);
      CHECK(eval_term(rotated, s) == eval_term(base, s));
      CHECK(eval_term(tb::s(tb::s(base)), s) == eval_term(base, s));
      CHECK(eval_term(tb::neg(tb::neg(base)), s) == eval_term(base, s));
    }
  }
}

TEST_CASE("compile_fo on the worked cases") {
  CHECK(print_term(compile_fo(parse_formula("x1=x2"))) == "I(J(u,u))");
  CHECK(print_term(compile_fo(parse_formula("x3=x3"))) == "u");
  CHECK(print_term(compile_fo(parse_formula("R(x1,x2,x3)"))) == "R");
  CHECK(print_term(top_term()) == "ex(u)");
  CHECK(print_term(bottom_term()) == "not(ex(u))");

  // top and bottom terms evaluate to the nullary truth values everywhere
  std::mt19937_64 rng0(5);
  for (int i = 0; i < 6; ++i) {
    Structure s = rand_structure(rng0, Signature{{"R", 2}}, 1 + static_cast<int>(rng0() % 3));
    CHECK(eval_term(top_term(), s) == RelValue::nullary(true));
    CHECK(eval_term(bottom_term(), s) == RelValue::nullary(false));
  }

  // the atom with repetition: the emitted term must define the same
  // relation as the recipe term p(ex(I(p(p(R))))) on random structures
  LTerm recipe = parse_term("p(ex(I(p(p(R)))))");
  LTerm compiled = compile_fo(parse_formula("R(x2,x1,x2)"));
  Formula atom = parse_formula("R(x2,x1,x2)");
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    Structure s = rand_structure(rng, Signature{{"R", 3}}, 1 + static_cast<int>(rng() % 3));
    RelValue want = defined_relation(s, atom);
    CHECK(eval_term(recipe, s) == want);
    CHECK(eval_term(compiled, s) == want);
  }
}

TEST_CASE("compile_fo is sound against the oracle") {
  const char* formulas[] = {
      "R(x1,x2)",
      "R(x2,x1)",
      "R(x1,x1)",
      "P(x1) & R(x1,x2)",
      "R(x1,x2) & R(x2,x3)",
      "~R(x1,x2)",
      "Ex x2. R(x1,x2)",
      "Ex x1. R(x1,x1)",
      "All x1. (P(x1) -> Ex x2. R(x2,x1))",
      "P(x2) | Ex x3. (R(x2,x3) & P(x3))",
      "Ex x9. x9=x9",
      "R(x1,x2) & x1=x2",
      "~(P(x1) & ~P(x1))",
      "T(x1,x2,x1) & P(x2)",
      "Ex x2. (T(x1,x2,x3) | R(x3,x1))",
  };
  Signature sig{{"P", 1}, {"R", 2}, {"T", 3}};
  std::mt19937_64 rng(23);
  for (const char* text : formulas) {
    Formula f = parse_formula(text);
    LTerm term = compile_fo(f);
    for (int i = 0; i < 12; ++i) {
      Structure s = rand_structure(rng, sig, 1 + static_cast<int>(rng() % 4));
      INFO(text << " on sample " << i);
      CHECK(eval_term(term, s) == defined_relation(s, f));
    }
  }
  CHECK_THROWS_AS(compile_fo(parse_formula("ins x1. x1=x1")), error);
}

TEST_CASE("defined_relation conventions") {
  Structure s = Structure::make(Signature{{"R", 2}}, {0, 1}, {{"R", {{0, 1}}}});
  CHECK(defined_relation(s, parse_formula("Ex x1. R(x1,x1) | ~Ex x1. R(x1,x1)")) ==
        RelValue::nullary(true));
  CHECK(defined_relation(s, parse_formula("Ex x1. R(x1,x1)")) == RelValue::nullary(false));
  CHECK(defined_relation(s, parse_formula("R(x1,x2)")).tuples == std::set<Tuple>{{0, 1}});

  // shifting all subindices leaves the defined relation unchanged
  CHECK(defined_relation(s, parse_formula("R(x1,x2) & ~x1=x2")) ==
        defined_relation(s, parse_formula("R(x2,x3) & ~x2=x3")));

  CHECK_THROWS_AS(defined_relation(Structure::make(Signature{{"R", 2}}),
                                   parse_formula("R(x1,x2)")),
                  error);
}

TEST_CASE("permute_term realizes every permutation for k <= 5") {
  int cases = 0;
  for (int k = 1; k <= 5; ++k) {
    Signature sig{{"K", k}};
    Tuple canonical;
    for (int i = 1; i <= k; ++i) canonical.push_back(i);
    std::set<Element> dom(canonical.begin(), canonical.end());
    Structure s = Structure::make(sig, dom, {{"K", {canonical}}});
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    do {
      LTerm t = permute_term(tb::rel("K"), perm);
      // only p and s may appear above the base relation
      for (LTerm walk = t; walk->kind != TKind::RelSym; walk = walk->args[0])
        CHECK((walk->kind == TKind::Cyc || walk->kind == TKind::Swap));
      RelValue v = eval_term(t, s);
      Tuple expected(k);
      for (int i = 0; i < k; ++i) expected[i] = canonical[perm[i]];
      CHECK(v.tuples == std::set<Tuple>{expected});
      ++cases;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  CHECK(cases == 153);

  CHECK(print_term(permute_term(tb::rel("K"), {0})) == "K");
  CHECK(print_term(permute_term(tb::rel("K"), {1, 0})) == "s(K)");
  CHECK_THROWS_AS(permute_term(tb::rel("K"), {0, 0}), error);
}

TEST_CASE("term_to_fo and the round trip") {
  Signature sig{{"P", 1}, {"R", 2}, {"S", 2}};
  CHECK(print_formula(term_to_fo(parse_term("u"), sig)) == "x1=x1");
  {
    Formula f = term_to_fo(parse_term("J(R,S)"), sig);
    CHECK(free_vars(f) == std::vector<int>{1, 2, 3, 4});
  }
  CHECK_THROWS_AS(term_to_fo(parse_term("op:tc(R)"), sig), error);

  const char* terms[] = {
      "u", "R", "P", "I(J(u,u))", "s(R)", "p(R)", "ex(R)", "not(R)",
      "J(R,P)", "J(P,J(u,u))", "not(ex(s(R)))", "I(J(R,R))",
      "ex(I(p(p(J(R,u)))))", "J(not(P),ex(R))",
  };
  std::mt19937_64 rng(31);
  for (const char* text : terms) {
    LTerm t = parse_term(text);
    Formula f = term_to_fo(t, sig);
    LTerm back = compile_fo(f);
    for (int i = 0; i < 8; ++i) {
      Structure s = rand_structure(rng, sig, 1 + static_cast<int>(rng() % 3));
      RelValue direct = eval_term(t, s);
      INFO(text);
      CHECK(defined_relation(s, f) == direct);
      CHECK(eval_term(back, s) == direct);
    }
  }
}

TEST_CASE("registered operators evaluate and are checked for invariance") {
  REQUIRE(ops_registered);
  Signature sig{{"R", 2}};
  Structure chain = Structure::make(sig, {0, 1, 2}, {{"R", {{0, 1}, {1, 2}}}});

  RelValue closed = eval_term(tb::op("tc", {tb::rel("R")}), chain);
  CHECK(closed.tuples == std::set<Tuple>{{0, 1}, {1, 2}, {0, 2}});

  CHECK(eval_term(tb::op("parity", {tb::rel("R")}), chain) == RelValue::nullary(true));
  CHECK(eval_term(tb::op("parity", {tb::op("tc", {tb::rel("R")})}), chain) ==
        RelValue::nullary(false));

  CHECK_THROWS_AS(register_operator({"tc", 1, nullptr}), error);  // duplicate name
  CHECK_THROWS_AS(eval_term(tb::op("nope", {tb::rel("R")}), chain), error);

  std::mt19937_64 rng(41);
  std::vector<Structure> samples;
  for (int i = 0; i < 12; ++i) samples.push_back(rand_structure(rng, sig, 2 + (i % 3)));

  CHECK_FALSE(check_operator_invariance("tc", {tb::rel("R")}, samples, 4, 99).has_value());
  CHECK_FALSE(check_operator_invariance("parity", {tb::rel("R")}, samples, 4, 99).has_value());

  auto violation = check_operator_invariance("pick-min", {tb::rel("R")}, samples, 4, 99);
  REQUIRE(violation.has_value());
  CHECK(violation->got != violation->expected);
}

TEST_CASE("term grammar round trips") {
  const char* terms[] = {"u", "R", "I(J(u,u))", "not(ex(u))", "op:tc(R)",
                         "J(p(s(R)),ex(u))"};
  for (const char* text : terms) {
    LTerm t = parse_term(text);
    CHECK(print_term(t) == text);
    CHECK(equal_term(t, parse_term(print_term(t))));
  }
  CHECK_THROWS_AS(parse_term("J(u"), parse_error);
  CHECK_THROWS_AS(parse_term("u u"), parse_error);
}

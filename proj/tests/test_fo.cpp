#include <catch2/catch_amalgamated.hpp>

#include "structura/fo.hpp"
#include "structura/formula_parse.hpp"

using namespace structura;

TEST_CASE("Tarskian evaluation basics") {
  Structure empty = Structure::make(Signature{{"R", 2}});
  CHECK_FALSE(eval_fo(empty, {}, parse_formula("Ex x1. x1=x1")));
  CHECK(eval_fo(empty, {}, parse_formula("All x1. x1=x1")));

  Structure s = Structure::make(Signature{{"R", 2}}, {0}, {{"R", {{0, 0}}}});
  CHECK(eval_fo(s, {}, parse_formula("All x1. R(x1,x1)")));
  CHECK(eval_fo(s, {}, parse_formula("Ex x1. R(x1,x1) & ~Ex x2. ~R(x2,x2)")));

  CHECK_THROWS_AS(eval_fo(s, {}, parse_formula("R(x1,x2)")), error);  // unbound variable
  CHECK_THROWS_AS(eval_fo(s, {}, parse_formula("ins x1. x1=x1")), error);

  NameMap names{{"a", 0}};
  CHECK(eval_fo(s, {}, parse_formula("R(a,a)"), &names));
  CHECK_THROWS_AS(eval_fo(s, {}, parse_formula("R(b,b)"), &names), error);
}

TEST_CASE("random sentences agree with truth-table expansion on 2-element structures") {
  // Independent route: evaluate by explicitly expanding quantifiers into
  // Boolean combinations over the two elements.
  std::function<bool(const Structure&, std::map<int, Element>, const Formula&)> expand_eval =
      [&](const Structure& s, std::map<int, Element> env, const Formula& f) -> bool {
    switch (f->kind) {
      case FKind::Atom: {
        Tuple t;
        for (const auto& a : f->args) t.push_back(env.at(a.var));
        return s.tuples(f->rel).count(t) > 0;
      }
      case FKind::Eq:
        return env.at(f->args[0].var) == env.at(f->args[1].var);
      case FKind::Not:
        return !expand_eval(s, env, f->left);
      case FKind::And:
        return expand_eval(s, env, f->left) && expand_eval(s, env, f->right);
      case FKind::Or:
        return expand_eval(s, env, f->left) || expand_eval(s, env, f->right);
      case FKind::Exists: {
        bool any = false;
        for (Element e : s.domain()) {
          auto env2 = env;
          env2[f->var] = e;
          any = any || expand_eval(s, env2, f->left);
        }
        return any;
      }
      case FKind::Forall: {
        bool all = true;
        for (Element e : s.domain()) {
          auto env2 = env;
          env2[f->var] = e;
          all = all && expand_eval(s, env2, f->left);
        }
        return all;
      }
      default:
        FAIL("not FO");
        return false;
    }
  };

  const char* sentences[] = {
      "Ex x1. R(x1,x1)",
      "All x1. Ex x2. R(x1,x2)",
      "Ex x1. Ex x2. (R(x1,x2) & ~x1=x2)",
      "All x1. All x2. (R(x1,x2) -> R(x2,x1))",
      "Ex x1. All x2. (R(x2,x1) | x2=x1)",
      "~Ex x1. (P(x1) & ~P(x1))",
      "All x1. (P(x1) -> Ex x2. R(x1,x2))",
  };
  auto structures = all_structures(Signature{{"R", 2}, {"P", 1}}, 2, 2);
  REQUIRE(structures.size() == 64);
  for (const char* text : sentences) {
    Formula f = parse_formula(text);
    for (const auto& s : structures)
      CHECK(eval_fo(s, {}, f) == expand_eval(s, {}, f));
  }
}

TEST_CASE("model set satisfaction is universal over members") {
  Formula phi = parse_formula("R(x1,x1)");
  CHECK(model_set_sat(ModelSet{}, phi));  // vacuous

  Structure yes = Structure::make(Signature{{"R", 2}}, {0}, {{"R", {{0, 0}}}});
  Structure no = Structure::make(Signature{{"R", 2}}, {0}, {});
  Assignment f = Assignment{}.set(1, 0);
  CHECK(model_set_sat(ModelSet{{{yes, f}}}, phi));
  CHECK_FALSE(model_set_sat(ModelSet{{{yes, f}, {no, f}}}, phi));

  // tautology over every one-element {R}-structure
  ModelSet all;
  for (const auto& s : all_structures(Signature{{"R", 2}}, 1, 1))
    all.members.push_back({s, Assignment{}.set(1, 0)});
  CHECK(all.members.size() == 2);
  CHECK(model_set_sat(all, parse_formula("R(x1,x1) | ~R(x1,x1)")));
}

TEST_CASE("structure enumeration is exhaustive and deterministic") {
  StructureEnumerator unary(Signature{{"P", 1}}, {0});
  std::vector<Structure> out;
  while (auto s = unary.next()) out.push_back(*s);
  CHECK(out.size() == 2);

  StructureEnumerator binary(Signature{{"R", 2}}, {0, 1});
  CHECK(binary.total_unconstrained() == 16);
  int n = 0;
  std::set<Structure> seen;
  while (auto s = binary.next()) {
    ++n;
    seen.insert(*s);
  }
  CHECK(n == 16);
  CHECK(seen.size() == 16);  // each exactly once

  // irreflexive constraint filters 16 down to 4
  StructureEnumerator constrained(Signature{{"R", 2}}, {0, 1},
                                  parse_formula("All x1. ~R(x1,x1)"));
  int m = 0;
  while (auto s = constrained.next()) ++m;
  CHECK(m == 4);

  CHECK_THROWS_AS(StructureEnumerator(Signature{{"R", 3}}, {0, 1, 2, 3}, nullptr, nullptr, 26),
                  error);  // 64 bits over the cap

  // deterministic order
  StructureEnumerator again(Signature{{"R", 2}}, {0, 1});
  std::vector<Structure> out2;
  while (auto s = again.next()) out2.push_back(*s);
  StructureEnumerator third(Signature{{"R", 2}}, {0, 1});
  std::vector<Structure> out3;
  while (auto s = third.next()) out3.push_back(*s);
  CHECK(out2 == out3);
  CHECK(out2.front().tuples("R").empty());
}

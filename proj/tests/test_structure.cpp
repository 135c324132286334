#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "structura/structure.hpp"
#include "structura/structure_io.hpp"

using namespace structura;

namespace {

Structure two_elem(std::set<Tuple> r) {
  return Structure::make(Signature{{"R", 2}}, {0, 1}, {{"R", std::move(r)}});
}

}  // namespace

TEST_CASE("insert_element adds a fresh isolated point") {
  Structure empty;
  auto [s1, e1] = insert_element(empty);
  CHECK(s1.domain() == std::set<Element>{0});
  CHECK(e1 == 0);

  Structure s = Structure::make(Signature{{"R", 2}}, {0}, {{"R", {{0, 0}}}});
  auto [s2, e2] = insert_element(s);
  CHECK(s2.domain() == std::set<Element>{0, 1});
  CHECK(s2.tuples("R") == std::set<Tuple>{{0, 0}});  // relations untouched
  for (const auto& t : s2.tuples("R"))
    CHECK(std::find(t.begin(), t.end(), e2) == t.end());

  auto [s3, e3] = insert_element(s2);
  CHECK(e3 != e2);
  CHECK(s3.domain().size() == 3);
}

TEST_CASE("delete_element purges tuples and keeps well-formedness") {
  Structure s = two_elem({{0, 1}, {1, 1}});
  Structure t = delete_element(s, 0);
  CHECK(t.domain() == std::set<Element>{1});
  CHECK(t.tuples("R") == std::set<Tuple>{{1, 1}});
  CHECK(well_formed(t));

  Structure single = Structure::make(Signature{{"R", 2}}, {0}, {});
  Structure emptied = delete_element(single, 0);
  CHECK(emptied.domain().empty());

  // deleting an isolated element leaves relations unchanged
  Structure iso = Structure::make(Signature{{"R", 2}}, {0, 1, 2}, {{"R", {{0, 1}}}});
  CHECK(delete_element(iso, 2).tuples("R") == std::set<Tuple>{{0, 1}});

  CHECK_THROWS_AS(delete_element(t, 42), error);
}

TEST_CASE("tuple insertion and deletion") {
  Structure s = two_elem({});
  Structure s1 = insert_tuple(s, "R", {0, 1});
  CHECK(s1.tuples("R") == std::set<Tuple>{{0, 1}});
  CHECK(insert_tuple(s1, "R", {0, 1}) == s1);  // set semantics

  CHECK(delete_tuple(s1, "R", {0, 1}).tuples("R").empty());
  CHECK(delete_tuple(s1, "R", {1, 0}) == s1);  // absent tuple: stays as it is
  CHECK(delete_tuple(s, "R", {0, 1}) == s);

  CHECK_THROWS_AS(insert_tuple(s, "R", {0}), error);          // arity-mismatch
  CHECK_THROWS_AS(insert_tuple(s, "Q", Tuple{0, 1}), error);  // unknown relation
  CHECK_THROWS_AS(insert_tuple(s, "R", {0, 7}), error);       // element not in domain

  TapeSymbol x{"X", 2};
  Structure st = insert_tape_tuple(s, x, {1, 0});
  CHECK(st.tape_tuples(x) == std::set<Tuple>{{1, 0}});
  CHECK(s.tape_tuples(x).empty());
  Structure back = delete_tape_tuple(st, x, {1, 0});
  CHECK(back.tape_interp().empty());
  CHECK(back == s);
}

TEST_CASE("mutation round trips") {
  Structure s = two_elem({{0, 0}});
  auto [grown, fresh] = insert_element(s);
  CHECK(delete_element(grown, fresh) == s);
  CHECK(delete_tuple(insert_tuple(s, "R", {0, 1}), "R", {0, 1}) == s);
  CHECK(insert_tuple(delete_tuple(s, "R", {0, 0}), "R", {0, 0}) == s);
}

TEST_CASE("isomorphism is checked by brute force") {
  Structure s = two_elem({{0, 1}});
  CHECK(is_isomorphic(s, s));

  Structure cycle = two_elem({{0, 1}, {1, 0}});
  Structure anti = two_elem({});
  CHECK_FALSE(is_isomorphic(cycle, anti));

  // same 3-element graph with renamed elements
  Structure a = Structure::make(Signature{{"R", 2}}, {0, 1, 2}, {{"R", {{0, 1}, {1, 2}}}});
  Structure b = Structure::make(Signature{{"R", 2}}, {5, 7, 9}, {{"R", {{7, 9}, {9, 5}}}});
  CHECK(is_isomorphic(a, b));

  Structure other_sig = Structure::make(Signature{{"Q", 2}}, {0, 1}, {});
  CHECK_THROWS_AS(is_isomorphic(s, other_sig), error);

  // equivalence on a small set
  std::vector<Structure> set = {s, cycle, anti, a, b};
  for (const auto& x : set) CHECK(is_isomorphic(x, x));
  for (const auto& x : set)
    for (const auto& y : set)
      if (x.signature() == y.signature()) CHECK(is_isomorphic(x, y) == is_isomorphic(y, x));
  for (const auto& x : set)
    for (const auto& y : set)
      for (const auto& z : set)
        if (x.signature() == y.signature() && y.signature() == z.signature())
          if (is_isomorphic(x, y) && is_isomorphic(y, z)) CHECK(is_isomorphic(x, z));
}

TEST_CASE("three-valued atom evaluation") {
  Structure s = Structure::make(Signature{{"R", 2}}, {0, 1}, {{"R", {{0, 1}}}});
  Assignment f = Assignment{}.set(1, 0).set(2, 1);
  RelTarget r{"R", 2, false};
  CHECK(eval_rel_atom(s, f, r, {1, 2}) == AtomEval::Holds);
  CHECK(eval_rel_atom(s, f, r, {2, 1}) == AtomEval::Fails);
  CHECK(eval_rel_atom(s, Assignment{}.set(1, 0), r, {1, 2}) == AtomEval::UndefinedVariable);

  CHECK(eval_eq_atom(Assignment{}.set(1, 0), 1, 2) == AtomEval::UndefinedVariable);
  CHECK(eval_eq_atom(Assignment{}, 1, 1) == AtomEval::UndefinedVariable);
  CHECK(eval_eq_atom(f, 1, 1) == AtomEval::Holds);
  CHECK(eval_eq_atom(f, 1, 2) == AtomEval::Fails);
}

TEST_CASE("structure text format round trips") {
  Structure s = Structure::make(Signature{{"R", 2}, {"P", 1}}, {0, 1, 2},
                                {{"R", {{0, 1}, {1, 2}}}, {"P", {{2}}}});
  s = insert_tape_tuple(s, {"X", 1}, {0});
  auto parsed = parse_structure(print_structure(s));
  CHECK(parsed.structure == s);

  auto named = parse_structure("# a comment\ndomain: a b c\nR/2: (a,b) (b,c)\nP/1:\n");
  CHECK(named.structure.domain().size() == 3);
  CHECK(named.name_to_element.at("a") == 0);
  CHECK(named.structure.tuples("R").count({0, 1}) == 1);
  CHECK(named.structure.tuples("P").empty());
  CHECK(parse_structure(print_structure(named.structure)).structure == named.structure);

  // empty structure round trip
  auto empty = parse_structure("domain:\n");
  CHECK(empty.structure.domain().empty());
  CHECK(parse_structure(print_structure(empty.structure)).structure == empty.structure);

  CHECK_THROWS_AS(parse_structure("R/2: (a,b)\n"), parse_error);
  CHECK_THROWS_AS(parse_structure("domain: a\nR/2: (a,b)\n"), parse_error);
  CHECK_THROWS_AS(parse_structure("domain: a\nR/2: (a,a,a)\n"), parse_error);
}

TEST_CASE("well-formedness holds after random mutation chains") {
  std::mt19937_64 rng(7);
  Structure s = Structure::make(Signature{{"R", 2}, {"P", 1}}, {0, 1}, {});
  for (int i = 0; i < 300; ++i) {
    switch (rng() % 5) {
      case 0:
        s = insert_element(s).first;
        break;
      case 1: {
        if (s.domain().empty()) break;
        auto it = s.domain().begin();
        std::advance(it, rng() % s.domain().size());
        s = delete_element(s, *it);
        break;
      }
      case 2:
      case 3: {
        if (s.domain().empty()) break;
        std::vector<Element> dom(s.domain().begin(), s.domain().end());
        Tuple t{dom[rng() % dom.size()], dom[rng() % dom.size()]};
        s = rng() % 2 ? insert_tuple(s, "R", t) : delete_tuple(s, "R", t);
        break;
      }
      default: {
        if (s.domain().empty()) break;
        std::vector<Element> dom(s.domain().begin(), s.domain().end());
        Tuple t{dom[rng() % dom.size()]};
        s = rng() % 2 ? insert_tape_tuple(s, {"X", 1}, t) : delete_tape_tuple(s, {"X", 1}, t);
        break;
      }
    }
    REQUIRE(well_formed(s));
    if (s.domain().size() > 6) {
      while (s.domain().size() > 2) s = delete_element(s, *s.domain().begin());
    }
  }
}

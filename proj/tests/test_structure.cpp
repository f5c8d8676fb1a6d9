#include <doctest.h>

#include "clopen/errors.hpp"
#include "clopen/satisfaction.hpp"
#include "clopen/structure.hpp"
#include "clopen/truth_game.hpp"

using namespace clopen;

namespace {

// Evaluates closed formulas by substituting constants for bound variables,
// with no environment.
bool by_substitution(const Structure& m, const FormulaPtr& f) {
  switch (f->kind()) {
    case Formula::Kind::membership:
      return member(f->terms()[0].value(), f->terms()[1].value());
    case Formula::Kind::equality:
      return f->terms()[0].value() == f->terms()[1].value();
    case Formula::Kind::predicate: {
      std::vector<Code> tuple;
      for (const Term& t : f->terms()) tuple.push_back(t.value());
      return m.predicate(f->symbol())->contains(tuple);
    }
    case Formula::Kind::negation:
      return !by_substitution(m, f->sub());
    case Formula::Kind::conjunction:
      return by_substitution(m, f->lhs()) && by_substitution(m, f->rhs());
    case Formula::Kind::exists:
      for (Code b : m.domain()) {
        if (by_substitution(m, substitute(f->sub(), f->bound_variable(), b))) return true;
      }
      return false;
  }
  return false;
}

FormulaInstance I(const char* s, const Signature& sig = {}) {
  return closed_instance(parse_formula(s, sig));
}

}  // namespace

TEST_CASE("eval agrees with evaluation by substitution") {
  const Structure m =
      Structure(build_universe(3)).with_predicate("Z", Relation::unary({1, 3}));
  const auto instances = enumerate_instances(truth_game(m), 4);
  CHECK(instances.size() > 1000);
  for (const auto& inst : instances) {
    REQUIRE(eval(m, inst) == by_substitution(m, inst.closed()));
  }
}

TEST_CASE("eval examples") {
  const Structure v2(build_universe(2));
  CHECK(eval(v2, I("#0 in #1")));
  CHECK_FALSE(eval(v2, I("Ex. (x in #0)")));
  const Structure v4(build_universe(4));
  bool pair_exists = false;
  for (Code x = 0; x < 16; ++x) {
    for (Code y = 0; y < 16; ++y) pair_exists |= x != y && member(x, 3) && member(y, 3);
  }
  CHECK(eval(v4, I("Ex. Ey. (!(x=y) & x in #3 & y in #3)")) == pair_exists);
  CHECK_THROWS_AS(eval(v2, I("#5 in #1")), MalformedInstanceError);
  CHECK_THROWS_AS(eval(v2, *parse_formula("x in #1")), MalformedInstanceError);
  CHECK_THROWS_AS(eval(v2, I("Z(#0)", {{"Z", 1}})), SignatureError);
}

TEST_CASE("least witnesses") {
  const Structure v2(build_universe(2));
  const Structure v4(build_universe(4));
  CHECK(skolem_witness(v2, I("Ex. (x in #1)")) == 0);
  CHECK(skolem_witness(v4, I("Ex. (x in #3)")) == 0);
  CHECK(skolem_witness(v4, I("Ex. (x in #12)")) == 2);
  CHECK_THROWS_AS(skolem_witness(v2, I("Ex. (x in #0)")), NoWitnessError);
  CHECK_THROWS_AS(skolem_witness(v2, I("#0 in #1")), InvariantError);

  const TruthGame g = truth_game(v4);
  for (const auto& inst : enumerate_instances(g, 3)) {
    if (inst.closed()->kind() != Formula::Kind::exists || !eval(v4, inst)) continue;
    const Code w = skolem_witness(v4, inst);
    CHECK(eval(v4, instantiate_body(inst, w)));
    for (Code b = 0; b < w; ++b) CHECK_FALSE(eval(v4, instantiate_body(inst, b)));
  }
}

TEST_CASE("domain extension") {
  const Structure m = Structure(build_universe(2)).with_domain({7, 9});
  CHECK(m.domain() == std::vector<Code>{0, 1, 7, 9});
  CHECK(eval(m, I("Ex. (#0 in x & #1 in x)")));
  CHECK_FALSE(eval(Structure(build_universe(2)), I("Ex. (#0 in x & #1 in x)")));
  CHECK_THROWS_AS(Structure(build_universe(2)).with_predicate("Z", Relation::unary({4})),
                  InvariantError);
}

TEST_CASE("truth predicates") {
  const Structure v2(build_universe(2));
  CHECK(build_truth_predicate(v2, {}).size() == 0);
  std::vector<FormulaInstance> atoms;
  for (Code a = 0; a < 2; ++a) {
    for (Code b = 0; b < 2; ++b) {
      atoms.push_back(FormulaInstance(parse_formula("x in y"), {{"x", a}, {"y", b}}));
    }
  }
  const auto s = build_truth_predicate(v2, atoms);
  CHECK(s.size() == 1);
  CHECK(s.marked("#0 in #1"));

  const Structure v3(build_universe(3));
  const auto targets = enumerate_instances(truth_game(v3), 5);
  const auto t = build_truth_predicate(v3, targets);
  for (const auto& inst : targets) REQUIRE(t.marked(inst) == by_substitution(v3, inst.closed()));
  CHECK(tarski_check(v3, t, targets).empty());
}

TEST_CASE("Tarski audit") {
  const Structure v2(build_universe(2));
  SatisfactionClass both;
  both.mark_true(I("#0 in #1"));
  both.mark_true(I("!(#0 in #1)"));
  auto v = tarski_check(v2, both, {I("#0 in #1"), I("!(#0 in #1)")});
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == TarskiViolation::Kind::negation);

  SatisfactionClass no_exists;
  no_exists.mark_true(I("#0 in #1"));
  v = tarski_check(v2, no_exists, {I("Ex. (x in #1)"), I("#0 in #1"), I("#1 in #1")});
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == TarskiViolation::Kind::quantifier);

  SatisfactionClass lie;
  lie.mark_true(I("#1 in #1"));
  v = tarski_check(v2, lie, {I("#1 in #1")});
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == TarskiViolation::Kind::atomic);
}

TEST_CASE("satisfaction text round trip") {
  const Structure v3(build_universe(3));
  const auto targets = enumerate_instances(truth_game(v3), 3);
  const auto t = build_truth_predicate(v3, targets);
  const auto back = parse_satisfaction(serialize_satisfaction(t, targets));
  CHECK(back.marks == t);
  CHECK(back.closure.size() == targets.size());
  CHECK_THROWS_AS(parse_satisfaction("X #0 in #1\n"), ParseError);
}

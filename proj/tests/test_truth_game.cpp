#include <doctest.h>

#include <random>

#include "clopen/errors.hpp"
#include "clopen/solvers.hpp"
#include "clopen/truth_game.hpp"

using namespace clopen;

namespace {

FormulaInstance inst(const std::string& text, const Signature& sig = {}) {
  return closed_instance(parse_formula(text, sig));
}

Turn turn(std::uint64_t clock, const std::string& text, bool v) {
  return Turn{Ordinal(clock), inst(text), Pronouncement{v, std::nullopt}};
}

}  // namespace

TEST_CASE("clock schedules") {
  CHECK(clock_schedule(3, ClockMode::first_move_natural) ==
        std::vector<Ordinal>{Ordinal(2), Ordinal(1), Ordinal(0)});
  CHECK(clock_schedule(3, ClockMode::ordinal_countdown) ==
        std::vector<Ordinal>{Ordinal::omega(), Ordinal(1), Ordinal(0)});
}

TEST_CASE("referee examples") {
  const TruthGame g = truth_game(Structure(build_universe(2)));

  SUBCASE("honest atom answers survive the countdown") {
    const auto t = referee(g, {turn(3, "#0 in #0", false), turn(2, "#0 in #1", true),
                               turn(1, "#1 in #0", false), turn(0, "#0 = #0", true)});
    CHECK(t.status == Status::teller_wins);
    CHECK_FALSE(t.violation.has_value());
  }
  SUBCASE("the game stays open before clock 0") {
    const auto t = referee(g, {turn(3, "#0 in #1", true)});
    CHECK(t.status == Status::ongoing);
  }
  SUBCASE("a false atom is caught at once") {
    const auto t = referee(g, {turn(3, "#0 in #0", true)});
    CHECK(t.status == Status::interrogator_wins);
    REQUIRE(t.violation.has_value());
    CHECK(t.violation->kind == "atomic");
  }
  SUBCASE("a formula and its negation both true") {
    const auto t = referee(g, {turn(5, "Ex. (x in #1)", false), turn(4, "!(Ex. (x in #1))", false)});
    CHECK(t.status == Status::interrogator_wins);
    CHECK(t.violation->kind == "negation");
  }
  SUBCASE("a conjunction against its conjuncts") {
    const auto t = referee(g, {turn(5, "#0 = #0 & #1 = #1", false), turn(4, "#0 = #0", true),
                               turn(3, "#1 = #1", true)});
    CHECK(t.status == Status::interrogator_wins);
    CHECK(t.violation->kind == "conjunction");
  }
  SUBCASE("same key answered both ways") {
    const auto t = referee(g, {turn(5, "Ex. (x = x)", false), turn(4, "Ex. (x = x)", true)});
    CHECK(t.status == Status::interrogator_wins);
  }
  SUBCASE("clock protocol") {
    CHECK_THROWS_AS(referee(g, {turn(3, "#0 = #0", true), turn(3, "#1 = #1", true)}),
                    MalformedTranscriptError);
    CHECK_THROWS_AS(referee(g, {turn(0, "#0 = #0", true), turn(0, "#1 = #1", true)}),
                    MalformedTranscriptError);
    CHECK_THROWS_AS(referee(g, {Turn{Ordinal::omega(), inst("#0 = #0"), {true, {}}}}),
                    MalformedTranscriptError);
    TruthGame ord = g;
    ord.clock_mode = ClockMode::ordinal_countdown;
    CHECK(referee(ord, {Turn{Ordinal::omega(), inst("#0 = #0"), {true, {}}},
                        turn(0, "#1 = #1", true)})
              .status == Status::teller_wins);
  }
  SUBCASE("inquiries must be closed and in the signature") {
    CHECK_THROWS_AS(check_inquiry(g, inst("#9 in #0")), MalformedInstanceError);
    CHECK_THROWS_AS(check_inquiry(g, inst("Z(#0)", Signature{{"Z", 1}})), SignatureError);
  }
}

TEST_CASE("witnesses") {
  const Structure m(build_universe(2));
  const TruthGame g = truth_game(m);
  const auto honest = honest_teller(m);
  const auto target = inst("Ex. (x in #1)");
  const Pronouncement p = honest->respond({}, Ordinal(1), target);
  CHECK(p.verdict);
  REQUIRE(p.witness.has_value());
  CHECK(p.witness->element == 0);
  CHECK(p.witness->body.key() == "#0 in #1");
  CHECK_FALSE(honest->respond({}, Ordinal(1), inst("Ex. (x in #0)")).witness.has_value());

  Turn bad{Ordinal(2), target, Pronouncement{true, Witness{1, inst("#1 in #1")}}};
  const auto t = referee(g, {bad});
  CHECK(t.status == Status::interrogator_wins);
  CHECK(t.violation->kind == "atomic");
  Turn mismatched{Ordinal(2), target, Pronouncement{true, Witness{0, inst("#0 in #0")}}};
  CHECK(referee(g, {mismatched}).violation->kind == "witness");
  Turn missing{Ordinal(2), target, Pronouncement{true, std::nullopt}};
  CHECK(referee(g, {missing}).status == Status::interrogator_wins);
}

TEST_CASE("marking teller needs coverage") {
  const Structure m(build_universe(2));
  const TruthGame g = truth_game(m);
  const std::vector<FormulaInstance> closure{inst("#0 in #1")};
  const auto s = build_truth_predicate(m, closure);
  const auto teller = honest_teller(s, closure, g);
  CHECK(teller->respond({}, Ordinal(0), closure[0]).verdict);
  CHECK_THROWS_AS(teller->respond({}, Ordinal(0), inst("#1 in #0")), CoverageError);
  const auto with_fallback = honest_teller(s, closure, g, true);
  CHECK_FALSE(with_fallback->respond({}, Ordinal(0), inst("#1 in #0")).verdict);
}

TEST_CASE("interrogator search") {
  const Structure m(build_universe(2));
  const TruthGame g = truth_game(m);
  const auto honest = honest_teller(m);

  const auto none = interrogator_search(g, *honest, 2, kDefaultSearchBudget);
  CHECK(none.result == InterrogatorSearch::Result::proven_none);

  const auto liar = lying_teller(honest, g, "#0 in #0");
  const auto found = interrogator_search(g, *liar, 3, kDefaultSearchBudget);
  REQUIRE(found.result == InterrogatorSearch::Result::found);
  CHECK(found.strategy.size() == 1);
  CHECK(found.strategy[0].key() == "#0 in #0");

  // A lie about a compound formula needs a follow-up.
  const auto deep = lying_teller(honest, g, "Ex. (x in #1)");
  const auto r = interrogator_search(g, *deep, 3, kDefaultSearchBudget);
  REQUIRE(r.result == InterrogatorSearch::Result::found);
  CHECK(r.strategy.size() == 2);
  ScriptedInterrogator replay(r.strategy, g.clock_mode);
  CHECK(play_truth_game(g, *deep, replay).status == Status::interrogator_wins);

  const auto bw = interrogator_search(g, *bad_witness_teller(m), 3, kDefaultSearchBudget);
  REQUIRE(bw.result == InterrogatorSearch::Result::found);
  CHECK(bw.strategy.size() <= 2);

  const auto tight = interrogator_search(g, *honest, 3, 10);
  CHECK(tight.result == InterrogatorSearch::Result::none_within_budget);
}

TEST_CASE("extraction") {
  const Structure m(build_universe(2));
  const TruthGame g = truth_game(m);
  const auto targets = enumerate_instances(g, 3);
  const auto honest = honest_teller(m);
  const auto verdicts = extract_verdicts(g, *honest, targets);
  for (const auto& t : targets) CHECK(verdicts.at(t.key()) == eval(m, t));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto relaxed = extract_verdicts(g, *relaxed_teller(honest, g, seed), targets);
    CHECK(relaxed == verdicts);
  }
  CHECK_THROWS_AS(extract_verdicts(g, *lying_teller(honest, g, "#0 in #1"), targets),
                  NotWinningStrategyError);
}

TEST_CASE("transcript json round trip") {
  const Structure m(build_universe(2));
  const TruthGame g = truth_game(m);
  const auto t = probe(g, *honest_teller(m), inst("Ex. (x in #1 & !(x = #1))"), 8);
  CHECK(t.status == Status::teller_wins);
  const auto j = transcript_json(t);
  CHECK(j["status"] == "teller_wins");
  const auto turns = parse_transcript_json(j["turns"].dump(), g);
  REQUIRE(turns.size() == t.turns.size());
  CHECK(referee(g, turns).status == t.status);
  CHECK_THROWS_AS(parse_transcript_json("[{\"clock\": 1}]", g), ParseError);
}

TEST_CASE("recursion games") {
  const Structure m(build_universe(2));
  const auto accumulate = RecursionRule::parse("x = #0 | Ej. (j <| i & F(j, x))");

  SUBCASE("empty relation") {
    const WellFoundedRelation rel({0, 1, 2}, {});
    const Solution sol = etr_solve(m, rel, accumulate);
    for (Code i : rel.carrier()) CHECK(sol.slice(i) == std::set<Code>{0});
    const TruthGame rg = recursion_game(m, rel, accumulate);
    CHECK(extract_solution(*recursion_teller(rg, sol), rg) == sol);
  }
  SUBCASE("accumulation along a chain") {
    const auto rel = chain(4);
    const Solution sol = etr_solve(m, rel, accumulate);
    for (Code i = 0; i < 4; ++i) CHECK(sol.slice(i) == std::set<Code>{0});
    const auto shift = RecursionRule::parse("Ej. (j <| i & x = j)");
    const Solution s2 = etr_solve(m, rel, shift);
    CHECK(s2.slice(0).empty());
    CHECK(s2.slice(3) == std::set<Code>{2});
  }
  SUBCASE("denying a rule instance loses") {
    const auto rel = chain(2);
    const TruthGame rg = recursion_game(m, rel, accumulate);
    const Signature sig = rg.signature();
    const auto deny = Turn{Ordinal(0), rg.rule_instance(1, 0), {false, std::nullopt}};
    const auto t = referee(rg, {deny});
    CHECK(t.status == Status::interrogator_wins);
    CHECK(t.violation->kind == "recursion");
    const auto affirm = Turn{Ordinal(1), closed_instance(parse_formula("F(#1, #0)", sig)),
                             {true, std::nullopt}};
    CHECK(referee(rg, {affirm, deny}).status == Status::interrogator_wins);
  }
  SUBCASE("a spurious pair is exposed") {
    const auto rel = chain(3);
    const Solution sol = etr_solve(m, rel, accumulate);
    Solution bad = sol;
    bad.insert(2, 1);
    const TruthGame rg = recursion_game(m, rel, accumulate);
    CHECK_THROWS_AS(extract_solution(*recursion_teller(rg, bad), rg), NotWinningStrategyError);
    const auto r = interrogator_search(rg, *recursion_teller(rg, bad), 2, kDefaultSearchBudget);
    CHECK(r.result == InterrogatorSearch::Result::found);
    CHECK(interrogator_search(rg, *recursion_teller(rg, sol), 2, kDefaultSearchBudget).result ==
          InterrogatorSearch::Result::proven_none);
  }
  SUBCASE("random 30-node DAG round trip") {
    const auto rel = random_dag(7, 30, 10);
    const auto rule = random_rule(7);
    const Solution sol = etr_solve(m, rel, rule);
    const TruthGame rg = recursion_game(m, rel, rule);
    CHECK(extract_solution(*recursion_teller(rg, sol), rg) == sol);
  }
  SUBCASE("random interrogators never beat the recursion teller") {
    const auto rel = random_dag(3, 6);
    const auto rule = random_rule(3);
    const TruthGame rg = recursion_game(m, rel, rule);
    const auto teller = recursion_teller(rg, etr_solve(m, rel, rule));
    const auto pool = inquiry_pool(rg);
    std::size_t won = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      won += random_interrogation(rg, *teller, pool, 6, seed).status == Status::teller_wins;
    }
    CHECK(won == 1000);
  }
}

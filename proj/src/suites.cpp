#include "clopen/suites.hpp"

#include <functional>
#include <sstream>

#include "clopen/errors.hpp"
#include "clopen/satisfaction.hpp"
#include "clopen/truth_game.hpp"

namespace clopen {

using Json = nlohmann::ordered_json;

void RunConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw InvariantError(std::string(name) + " must be positive");
  };
  positive(rank, "rank");
  positive(random_rank, "random rank");
  positive(play_cap, "play cap");
  positive(clock_factor, "clock budget factor");
  positive(node_budget, "node budget");
  positive(search_budget, "search budget");
  positive(cases, "case count");
}

Json RunConfig::to_json() const {
  Json j;
  j["rank"] = rank;
  j["random_rank"] = random_rank;
  j["play_cap"] = play_cap;
  j["clock_factor"] = clock_factor;
  j["seed"] = seed;
  j["node_budget"] = node_budget;
  j["search_budget"] = search_budget;
  j["cases"] = cases;
  j["mutate"] = mutate;
  return j;
}

std::size_t Report::passed() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.passed;
  return n;
}

int Report::exit_code() const {
  if (resource_error) return 3;
  return failed() == 0 ? 0 : 1;
}

Json Report::to_json() const {
  Json j;
  j["suite"] = suite;
  j["config"] = config.to_json();
  j["cases_run"] = cases.size();
  j["passed"] = passed();
  j["failed"] = failed();
  j["resource_error"] = resource_error;
  auto arr = Json::array();
  for (const auto& c : cases) {
    Json e;
    e["id"] = c.id;
    e["passed"] = c.passed;
    e["detail"] = c.detail;
    if (!c.passed) e["witness"] = c.witness;
    arr.push_back(std::move(e));
  }
  j["cases"] = std::move(arr);
  return j;
}

std::string Report::to_text() const {
  std::ostringstream out;
  for (const auto& c : cases) {
    out << (c.passed ? "PASS " : "FAIL ") << c.id;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
    if (!c.passed && !c.witness.is_null()) out << "     witness: " << c.witness.dump() << "\n";
  }
  out << suite << ": " << passed() << "/" << cases.size() << " passed";
  if (resource_error) out << " (resource bound hit)";
  out << "\n";
  return out.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"logic", "games", "truthgames", "etr"};
  return names;
}

Player mutated_value_winner(const Game& g, std::size_t budget) {
  std::size_t used = 0;
  std::function<bool(Position&)> valued = [&](Position& p) -> bool {
    if (++used > budget) throw ResourceError("mutated solver exceeds its budget");
    const Outcome o = g.outcome(p);
    if (o != Outcome::undecided) return o == win_for(g.open_player());
    bool any = false;
    for (Move m : g.move_space()) {
      p.push_back(m);
      any = valued(p) || any;
      p.pop_back();
    }
    return any;
  };
  Position root;
  return valued(root) ? g.open_player() : g.closed_player();
}

namespace {

struct Check {
  bool passed = true;
  std::string detail;
  Json witness;
};

class Runner {
 public:
  explicit Runner(Report& r) : report_(r) {}

  void run(const std::string& id, const std::function<Check()>& body, Json witness = {}) {
    CaseResult c;
    c.id = id;
    try {
      Check k = body();
      c.passed = k.passed;
      c.detail = std::move(k.detail);
      c.witness = k.witness.is_null() ? witness : k.witness;
    } catch (const ResourceError& e) {
      c.passed = false;
      c.detail = std::string("resource: ") + e.what();
      c.witness = witness;
      report_.resource_error = true;
    } catch (const Error& e) {
      c.passed = false;
      c.detail = std::string("error: ") + e.what();
      c.witness = witness;
    }
    report_.cases.push_back(std::move(c));
  }

 private:
  Report& report_;
};

std::uint64_t derive(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + k + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

bool quotes_outside(const Formula& f, const WellOrder& index) {
  switch (f.kind()) {
    case Formula::Kind::predicate:
      return f.symbol() == kTruthSymbol && !f.terms()[0].is_variable() &&
             !index.contains(f.terms()[0].value());
    case Formula::Kind::negation:
    case Formula::Kind::exists:
      return quotes_outside(*f.sub(), index);
    case Formula::Kind::conjunction:
      return quotes_outside(*f.lhs(), index) || quotes_outside(*f.rhs(), index);
    default:
      return false;
  }
}

std::string first_difference(const std::map<std::string, bool>& got,
                             const std::vector<FormulaInstance>& targets, const Structure& m) {
  for (const auto& t : targets) {
    if (got.at(t.key()) != eval(m, t)) return t.key();
  }
  return {};
}

void logic_suite(const RunConfig& cfg, Runner& run) {
  const Structure m(build_universe(cfg.rank));
  const TruthGame g = truth_game(m);
  const auto targets = enumerate_instances(g, 4);
  const Json w{{"rank", cfg.rank}, {"max_size", 4}};

  run.run("logic/print-parse-roundtrip", [&] {
    for (const auto& t : targets) {
      const auto back = parse_formula(t.key());
      if (!equal(*back, *t.closed())) return Check{false, "mismatch on " + t.key(), {}};
    }
    return Check{true, std::to_string(targets.size()) + " instances", {}};
  }, w);

  const SatisfactionClass truth = build_truth_predicate(m, targets);
  run.run("logic/truth-predicate-is-tarskian", [&] {
    const auto v = tarski_check(m, truth, targets);
    if (!v.empty()) return Check{false, v.front().instance + ": " + v.front().detail, {}};
    return Check{true, std::to_string(truth.size()) + " marked true", {}};
  }, w);

  run.run("logic/tarski-check-catches-flip", [&] {
    for (const auto& t : targets) {
      if (t.closed()->kind() != Formula::Kind::negation || truth.marked(t)) continue;
      SatisfactionClass bad = truth;
      bad.mark_true(t);
      const bool caught = !tarski_check(m, bad, targets).empty();
      return Check{caught, "flipped " + t.key(), {}};
    }
    return Check{false, "no false negation among targets", {}};
  }, w);

  run.run("logic/satisfaction-serialization", [&] {
    const auto parsed = parse_satisfaction(serialize_satisfaction(truth, targets));
    return Check{parsed.marks == truth && parsed.closure.size() == targets.size(), "", {}};
  }, w);

  run.run("logic/extraction-equals-truth", [&] {
    const auto teller = honest_teller(m);
    ExtractionOptions opt;
    opt.clock_factor = cfg.clock_factor;
    const auto got = extract_verdicts(g, *teller, targets, opt);
    const std::string diff = first_difference(got, targets, m);
    if (!diff.empty()) return Check{false, "verdict differs on " + diff, {}};
    return Check{true, std::to_string(targets.size()) + " targets", {}};
  }, w);
}

void games_suite(const RunConfig& cfg, Runner& run) {
  for (std::size_t k = 0; k < cfg.cases; ++k) {
    const std::uint64_t seed = derive(cfg.seed, k);
    const Json w{{"seed", seed}};
    run.run("games/random-clopen/" + std::to_string(k), [&] {
      const Game g = random_clopen_game(seed);
      const Player by_value =
          cfg.mutate ? mutated_value_winner(g, cfg.search_budget)
                     : value_strategy(g, cfg.search_budget).winner;
      const LabeledGame labeled = label_clopen(g, cfg.search_budget);
      const auto region = winning_region(g, cfg.search_budget);
      const Player by_minimax = region.contains(Position{}) ? Player::I : Player::II;
      Json cw{{"seed", seed}};
      if (g.decisions() && g.decisions()->size() <= 64) cw["game"] = serialize_game(g);
      if (by_value != labeled.winner || by_value != by_minimax) {
        return Check{false,
                     std::string("winners differ: value ") + to_string(by_value) +
                         ", labeling " + to_string(labeled.winner) + ", minimax " +
                         to_string(by_minimax),
                     cw};
      }
      if (!cfg.mutate) {
        const SolvedGame solved = value_strategy(g, cfg.search_budget);
        const auto v1 = verify_strategy(g, solved.strategy, cfg.search_budget);
        const auto v2 = verify_strategy(g, labeled.strategy, cfg.search_budget);
        if (!v1.verified || !v2.verified) {
          const auto& ce = v1.verified ? v2.counterexample : v1.counterexample;
          cw["counterexample"] = ce ? position_string(*ce) : "";
          return Check{false, "strategy fails verification", cw};
        }
      }
      return Check{true, std::string("winner ") + to_string(by_value), {}};
    }, w);
  }

  for (unsigned n = 1; n <= std::min(cfg.rank, 4u); ++n) {
    run.run("games/choice-function/rank=" + std::to_string(n), [&] {
      const Universe u = build_universe(n);
      const Game g = choice_game(u);
      const SolvedGame s = value_strategy(g, cfg.search_budget);
      if (s.winner != Player::II) return Check{false, "player I wins", {}};
      for (Code b : u.elements()) {
        if (b == 0) continue;
        const auto a = s.strategy.lookup(Position{b});
        Code least = 0;
        while (!member(least, b)) ++least;
        if (!a || *a != least) {
          return Check{false, "table(#" + std::to_string(b) + ") is not its least element", {}};
        }
      }
      return Check{true, std::to_string(u.size() - 1) + " nonempty sets", {}};
    }, Json{{"rank", n}});
  }
}

void truthgames_suite(const RunConfig& cfg, Runner& run) {
  const Structure m(build_universe(cfg.rank));
  const TruthGame g = truth_game(m);
  const auto honest = honest_teller(m);
  const auto pool = inquiry_pool(g);
  const Json w{{"rank", cfg.rank}};

  run.run("truthgames/search/honest-depth-3", [&] {
    const auto r = interrogator_search(g, *honest, 3, cfg.search_budget, pool);
    return Check{r.result == InterrogatorSearch::Result::proven_none,
                 std::string(to_string(r.result)) + " after " + std::to_string(r.nodes) +
                     " nodes",
                 {}};
  }, w);

  run.run("truthgames/search/atomic-liar", [&] {
    const auto liar = lying_teller(honest, g, "#0 in #0");
    const auto r = interrogator_search(g, *liar, 3, cfg.search_budget, pool);
    return Check{r.result == InterrogatorSearch::Result::found && r.strategy.size() == 1,
                 std::string(to_string(r.result)) + " with " +
                     std::to_string(r.strategy.size()) + " inquiries",
                 {}};
  }, w);

  run.run("truthgames/search/bad-witness", [&] {
    const auto r = interrogator_search(g, *bad_witness_teller(m), 3, cfg.search_budget, pool);
    return Check{r.result == InterrogatorSearch::Result::found && r.strategy.size() <= 2,
                 std::string(to_string(r.result)) + " with " +
                     std::to_string(r.strategy.size()) + " inquiries",
                 {}};
  }, w);

  {
    const unsigned rr = std::min(cfg.random_rank, 4u);
    const Structure big(build_universe(rr));
    const TruthGame gb = truth_game(big);
    const auto teller = honest_teller(big);
    const auto big_pool = inquiry_pool(gb);
    run.run("truthgames/random-interrogators", [&] {
      for (std::size_t k = 0; k < cfg.cases; ++k) {
        const std::uint64_t seed = derive(cfg.seed ^ 0x7275ull, k);
        const auto t = random_interrogation(gb, *teller, big_pool, cfg.play_cap, seed);
        if (t.status != Status::teller_wins) {
          return Check{false, "honest teller lost", Json{{"rank", rr}, {"seed", seed}}};
        }
      }
      return Check{true, std::to_string(cfg.cases) + " plays on rank " + std::to_string(rr), {}};
    }, Json{{"rank", rr}});
  }

  const auto targets = enumerate_instances(g, 3);
  run.run("truthgames/extraction-stability", [&] {
    ExtractionOptions base;
    base.clock_factor = cfg.clock_factor;
    ExtractionOptions later = base;
    later.extra_clock = 5;
    TruthGame ordinal = g;
    ordinal.clock_mode = ClockMode::ordinal_countdown;
    const auto a = extract_verdicts(g, *honest, targets, base);
    const auto b = extract_verdicts(g, *honest, targets, later);
    const auto c = extract_verdicts(ordinal, *honest, targets, base);
    if (a != b) return Check{false, "verdicts move between B and B+5", {}};
    if (a != c) return Check{false, "verdicts differ between clock modes", {}};
    return Check{true, std::to_string(targets.size()) + " targets", {}};
  }, w);

  run.run("truthgames/relaxed-teller-extraction", [&] {
    const auto relaxed = relaxed_teller(honest, g, cfg.seed);
    const auto got = extract_verdicts(g, *relaxed, targets);
    const std::string diff = first_difference(got, targets, m);
    return Check{diff.empty(), diff.empty() ? "" : "differs on " + diff, {}};
  }, w);

  run.run("truthgames/marking-teller-roundtrip", [&] {
    const SatisfactionClass s = extract_satisfaction(*honest, g, targets);
    const auto again = honest_teller(s, targets, g);
    const SatisfactionClass s2 = extract_satisfaction(*again, g, targets);
    return Check{s == s2, "", {}};
  }, w);

  run.run("truthgames/transcript-replay", [&] {
    for (std::size_t k = 0; k < 20; ++k) {
      const auto t = random_interrogation(g, *lying_teller(honest, g, "#1 in #0"), pool, 6,
                                          derive(cfg.seed, k));
      const std::string text = transcript_json(t).dump();
      const Transcript back = referee(g, parse_transcript_json(text, g));
      if (back.status != t.status) return Check{false, "replayed status differs", {}};
    }
    return Check{true, "", {}};
  }, w);

  const std::size_t recursion_cases = std::max<std::size_t>(cfg.cases / 5, 1);
  for (std::size_t k = 0; k < recursion_cases; ++k) {
    const std::uint64_t seed = derive(cfg.seed ^ 0x5245ull, k);
    const std::size_t nodes = 3 + seed % 6;
    const Json rw{{"seed", seed}, {"nodes", nodes}};
    run.run("truthgames/recursion-roundtrip/" + std::to_string(k), [&] {
      const auto rel = random_dag(seed, nodes);
      const auto rule = random_rule(seed);
      const Solution sol = etr_solve(m, rel, rule);
      const TruthGame rg = recursion_game(m, rel, rule);
      const Solution got = extract_solution(*recursion_teller(rg, sol), rg);
      Json cw = rw;
      cw["rule"] = print(rule.formula);
      return Check{got == sol, "", got == sol ? Json{} : cw};
    }, rw);
  }
}

void etr_suite(const RunConfig& cfg, Runner& run) {
  const Structure m(build_universe(cfg.rank));
  for (std::size_t k = 0; k < cfg.cases; ++k) {
    const std::uint64_t seed = derive(cfg.seed ^ 0x4554ull, k);
    const std::size_t nodes = 3 + seed % 6;
    const Json w{{"seed", seed}, {"nodes", nodes}};
    run.run("etr/reduction-chain/" + std::to_string(k), [&] {
      const auto rel = random_dag(seed, nodes);
      const auto rule = random_rule(seed);
      Json cw = w;
      cw["rule"] = print(rule.formula);
      const Solution sol = etr_solve(m, rel, rule);
      if (!check_solution(m, rel, rule, sol)) return Check{false, "check_solution fails", cw};
      const Solution other =
          etr_solve(m, rel, rule, WellFoundedRelation::TopoOrder::greatest_first);
      if (other != sol) return Check{false, "solution depends on the topological order", cw};
      const ClosureTransport ct = transport_to_closure(m, rel, rule);
      if (etr_solve(ct.structure, ct.order, ct.rule) != sol) {
        return Check{false, "closure transport changes the solution", cw};
      }
      const TreeOrder tree = descending_tree(ct.order, cfg.node_budget);
      const Solution on_tree = solve_on_tree(ct, tree);
      if (!tree_solution_matches(tree, on_tree, sol, rel.carrier())) {
        return Check{false, "tree transport changes the solution", cw};
      }
      const WellOrder kb = kleene_brouwer(tree);
      const auto audit = audit_well_order(
          kb.sequence(), [&](Code a, Code b) { return kb.precedes(a, b); }, 16, seed);
      if (!audit.ok()) return Check{false, "Kleene-Brouwer order is not a well-order", cw};
      if (solve_on_well_order(ct, tree, kb) != on_tree) {
        return Check{false, "well-order transport changes the solution", cw};
      }
      return Check{true, std::to_string(tree.nodes.size()) + " tree nodes", {}};
    }, w);
  }

  const std::size_t length = 12;
  run.run("etr/long-chain", [&] {
    const auto rel = chain(length);
    const auto rule = RecursionRule::parse("x = #0 | Ej. (j <| i & F(j, x))");
    const Solution sol = etr_solve(m, rel, rule);
    for (Code i = 0; i < length; ++i) {
      if (sol.slice(i) != std::set<Code>{0}) return Check{false, "slice is not {#0}", {}};
    }
    const ClosureTransport ct = transport_to_closure(m, rel, rule);
    const TreeOrder tree = descending_tree(ct.order, cfg.node_budget);
    const bool ok = tree_solution_matches(tree, solve_on_tree(ct, tree), sol, rel.carrier());
    return Check{ok, std::to_string(tree.nodes.size()) + " tree nodes", {}};
  }, Json{{"chain", length}, {"node_budget", cfg.node_budget}});

  run.run("etr/iterated-truth", [&] {
    const Relation z = Relation::unary({1, 2});
    for (std::size_t len = 1; len <= 4; ++len) {
      std::vector<Code> seq;
      for (std::size_t k = 0; k < len; ++k) seq.push_back((k * 3 + cfg.seed) % 4);
      std::sort(seq.begin(), seq.end());
      seq.erase(std::unique(seq.begin(), seq.end()), seq.end());
      const WellOrder index(seq);
      const Structure with_t =
          m.with_predicate("Z", z).with_predicate(kTruthSymbol, Relation(2));
      std::vector<FormulaInstance> closure;
      for (auto& inst : enumerate_instances(truth_game(with_t), 2)) {
        if (!quotes_outside(*inst.closed(), index)) closure.push_back(std::move(inst));
      }
      const auto it = iterated_truth(m, index, "Z", z, closure);
      for (Code i : index.sequence()) {
        const auto v = tarski_check(it.structure_at(i), it.slices.at(i), closure);
        if (!v.empty()) {
          return Check{false, "slice " + std::to_string(i) + ": " + v.front().detail,
                       Json{{"length", len}}};
        }
      }
    }
    return Check{true, "", {}};
  }, Json{{"rank", cfg.rank}});
}

}  // namespace

Report run_suite(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  Report r;
  r.suite = name;
  r.config = cfg;
  Runner run(r);
  auto one = [&](const std::string& s) {
    if (s == "logic") {
      logic_suite(cfg, run);
    } else if (s == "games") {
      games_suite(cfg, run);
    } else if (s == "truthgames") {
      truthgames_suite(cfg, run);
    } else if (s == "etr") {
      etr_suite(cfg, run);
    } else {
      throw InvariantError("unknown suite '" + s + "'");
    }
  };
  if (name == "all") {
    for (const auto& s : suite_names()) one(s);
  } else {
    one(name);
  }
  return r;
}

}  // namespace clopen

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "clopen/errors.hpp"
#include "clopen/etr.hpp"
#include "clopen/game.hpp"
#include "clopen/solvers.hpp"
#include "clopen/structure.hpp"
#include "clopen/suites.hpp"
#include "clopen/truth_game.hpp"

using namespace clopen;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvariantError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RelationSpec {
  std::size_t chain = 0;
  std::uint64_t dag_seed = 0;
  std::size_t nodes = 0;
  std::string file;

  void add(CLI::App* app) {
    app->add_option("--chain", chain, "0 <| 1 <| ... <| n-1");
    app->add_option("--dag-seed", dag_seed, "seed of a random DAG");
    app->add_option("--nodes", nodes, "nodes of the random DAG");
    app->add_option("--relation", file, "relation file (node a / edge a b lines)");
  }

  WellFoundedRelation build() const {
    if (!file.empty()) return parse_relation(read_file(file));
    if (chain > 0) return clopen::chain(chain);
    if (nodes > 0) return random_dag(dag_seed, nodes);
    throw InvariantError("give --chain, --nodes (with --dag-seed) or --relation");
  }
};

void print_strategy(const Strategy& s) {
  std::cout << "strategy for " << to_string(s.player) << ":\n";
  for (const auto& [p, m] : s.table) std::cout << "  " << position_string(p) << " -> " << m << "\n";
}

int solve_game(const Game& g, bool json) {
  const SolvedGame solved = value_strategy(g);
  const LabeledGame labeled = label_clopen(g);
  const bool agree = solved.winner == labeled.winner;
  if (json) {
    nlohmann::ordered_json j;
    j["winner"] = to_string(solved.winner);
    auto table = nlohmann::ordered_json::array();
    for (const auto& [p, m] : solved.strategy.table) table.push_back({{"position", p}, {"move", m}});
    j["strategy"] = table;
    j["labeling_agrees"] = agree;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "winner " << to_string(solved.winner) << "\n";
    print_strategy(solved.strategy);
    std::cout << "cross-check: game values and labeling "
              << (agree ? "agree" : "DISAGREE") << "\n";
  }
  return agree ? kPass : kFail;
}

TellerPtr make_teller(const std::string& kind, const TruthGame& g, const std::string& lie,
                      std::uint64_t seed) {
  const auto honest = honest_teller(g.structure);
  if (kind == "honest") return honest;
  if (kind == "relaxed") return relaxed_teller(honest, g, seed);
  if (kind == "bad-witness") return bad_witness_teller(g.structure);
  const auto inst = closed_instance(parse_formula(lie, g.signature()));
  return lying_teller(honest, g, inst.key());
}

class StdinInterrogator : public Interrogator {
 public:
  StdinInterrogator(const TruthGame& g, std::size_t moves)
      : g_(g), clocks_(clock_schedule(moves, g.clock_mode)) {}

  std::optional<Move> next(const std::vector<Turn>& history) override {
    if (!history.empty()) {
      const auto& a = history.back().answer;
      std::cout << "  teller: " << (a.verdict ? "true" : "false");
      if (a.witness) std::cout << ", witness #" << a.witness->element;
      std::cout << "\n";
    }
    const std::size_t k = history.size();
    if (k >= clocks_.size()) return std::nullopt;
    for (;;) {
      std::cout << "[clock " << clocks_[k].to_string() << "] inquiry> " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) return std::nullopt;
      if (line.empty()) continue;
      try {
        auto inst = closed_instance(parse_formula(line, g_.signature()));
        check_inquiry(g_, inst);
        return Move{clocks_[k], std::move(inst)};
      } catch (const Error& e) {
        std::cout << "  rejected: " << e.what() << "\n";
      }
    }
  }

 private:
  const TruthGame& g_;
  std::vector<Ordinal> clocks_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clopen determinacy, truth-telling games and transfinite recursion"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a closed formula in V_n");
  unsigned eval_rank = 3;
  std::string formula_text;
  eval_cmd->add_option("--rank", eval_rank, "universe rank");
  eval_cmd->add_option("formula", formula_text, "formula text")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve a game");
  solve_cmd->require_subcommand(1);
  auto* choice_cmd = solve_cmd->add_subcommand("choice", "the choice game on V_n");
  unsigned choice_rank = 3;
  choice_cmd->add_option("--rank", choice_rank, "universe rank");
  auto* random_cmd = solve_cmd->add_subcommand("random-clopen", "seeded random clopen game");
  std::uint64_t game_seed = 1;
  std::size_t max_nodes = 10000;
  random_cmd->add_option("--seed", game_seed, "game seed");
  random_cmd->add_option("--max-nodes", max_nodes, "node bound of the game tree");
  auto* tt_cmd = solve_cmd->add_subcommand("truthtelling", "search for a winning interrogator");
  unsigned tt_rank = 3;
  std::string teller_kind = "honest";
  std::string lie = "#0 in #0";
  std::size_t depth = 3;
  std::size_t search_budget = kDefaultSearchBudget;
  std::uint64_t teller_seed = 1;
  tt_cmd->add_option("--rank", tt_rank, "universe rank");
  tt_cmd->add_option("--teller", teller_kind, "honest, relaxed, liar or bad-witness")
      ->check(CLI::IsMember({"honest", "relaxed", "liar", "bad-witness"}));
  tt_cmd->add_option("--lie", lie, "instance the liar flips");
  tt_cmd->add_option("--depth", depth, "interrogation length");
  tt_cmd->add_option("--search-budget", search_budget, "search node bound")
      ->envname("CLOPEN_SEARCH_BUDGET");
  tt_cmd->add_option("--teller-seed", teller_seed, "seed of the relaxed teller");
  auto* rec_cmd = solve_cmd->add_subcommand("recursion", "solve a recursion along a relation");
  unsigned rec_rank = 3;
  std::string rule_text;
  RelationSpec rec_rel;
  rec_cmd->add_option("--rank", rec_rank, "universe rank");
  rec_cmd->add_option("--rule", rule_text, "rule phi(x, i, F)")->required();
  rec_rel.add(rec_cmd);

  // play
  auto* play_cmd = app.add_subcommand("play", "play the truth-telling game");
  unsigned play_rank = 3;
  std::string play_teller = "honest";
  std::string play_lie = "#0 in #0";
  std::size_t moves = 4;
  bool interactive = false;
  bool ordinal = false;
  std::string script_file, replay_file, out_file;
  play_cmd->add_option("--rank", play_rank, "universe rank");
  play_cmd->add_option("--teller", play_teller, "honest, relaxed, liar or bad-witness")
      ->check(CLI::IsMember({"honest", "relaxed", "liar", "bad-witness"}));
  play_cmd->add_option("--lie", play_lie, "instance the liar flips");
  play_cmd->add_option("--moves", moves, "number of inquiries");
  play_cmd->add_flag("--interactive", interactive, "type inquiries on stdin");
  play_cmd->add_flag("--ordinal", ordinal, "open with clock w");
  play_cmd->add_option("--script", script_file, "file with one inquiry per line");
  play_cmd->add_option("--replay", replay_file, "re-referee a JSON transcript");
  play_cmd->add_option("--out", out_file, "write the JSON transcript here");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
  std::string suite;
  RunConfig cfg;
  verify_cmd->add_option("suite", suite, "logic, games, truthgames, etr or all")
      ->required()
      ->check(CLI::IsMember({"logic", "games", "truthgames", "etr", "all"}));
  verify_cmd->add_option("--seed", cfg.seed, "master seed");
  verify_cmd->add_option("--rank", cfg.rank, "rank for exhaustive checks");
  verify_cmd->add_option("--random-rank", cfg.random_rank, "rank for randomized checks");
  verify_cmd->add_option("--cases", cfg.cases, "random cases per property");
  verify_cmd->add_option("--play-cap", cfg.play_cap, "longest random interrogation");
  verify_cmd->add_option("--clock-factor", cfg.clock_factor, "B = factor * size + 2");
  verify_cmd->add_option("--node-budget", cfg.node_budget, "descending tree node bound")
      ->envname("CLOPEN_NODE_BUDGET");
  verify_cmd->add_option("--search-budget", cfg.search_budget, "game and search node bound")
      ->envname("CLOPEN_SEARCH_BUDGET");
  verify_cmd->add_flag("--mutate", cfg.mutate, "use the faulty value solver");

  // etr
  auto* etr_cmd = app.add_subcommand("etr", "solve a recursion and run the reduction chain");
  unsigned etr_rank = 3;
  std::string etr_rule;
  RelationSpec etr_rel;
  std::size_t node_budget = kDefaultNodeBudget;
  etr_cmd->add_option("--rank", etr_rank, "universe rank");
  etr_cmd->add_option("--rule", etr_rule, "rule phi(x, i, F)")->required();
  etr_cmd->add_option("--node-budget", node_budget, "descending tree node bound")
      ->envname("CLOPEN_NODE_BUDGET");
  etr_rel.add(etr_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*eval_cmd) {
      const Structure m(build_universe(eval_rank));
      const auto inst = closed_instance(parse_formula(formula_text, m.signature()));
      const bool v = eval(m, inst);
      std::optional<Code> w;
      if (v && inst.closed()->kind() == Formula::Kind::exists) w = skolem_witness(m, inst);
      if (json) {
        nlohmann::ordered_json j{{"formula", inst.key()}, {"verdict", v}};
        if (w) j["witness"] = *w;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << (v ? "true" : "false");
        if (w) std::cout << ", witness #" << *w;
        std::cout << "\n";
      }
      return kPass;
    }

    if (*choice_cmd) return solve_game(choice_game(build_universe(choice_rank)), json);
    if (*random_cmd) {
      RandomGameParams params;
      params.max_nodes = max_nodes;
      return solve_game(random_clopen_game(game_seed, params), json);
    }
    if (*tt_cmd) {
      const Structure m(build_universe(tt_rank));
      const TruthGame g = truth_game(m);
      const auto teller = make_teller(teller_kind, g, lie, teller_seed);
      const auto r = interrogator_search(g, *teller, depth, search_budget);
      if (json) {
        nlohmann::ordered_json j{{"result", to_string(r.result)}, {"nodes", r.nodes}};
        if (r.transcript) j["transcript"] = transcript_json(*r.transcript);
        std::cout << j.dump(2) << "\n";
      } else if (r.result == InterrogatorSearch::Result::found) {
        std::cout << "interrogator wins with:\n";
        for (const auto& q : r.strategy) std::cout << "  " << q.key() << "\n";
        std::cout << "violation: " << r.transcript->violation->kind << " on "
                  << r.transcript->violation->instance << "\n";
      } else {
        std::cout << "teller wins: no interrogator strategy up to depth " << depth << " ("
                  << to_string(r.result) << ", " << r.nodes << " nodes)\n";
      }
      return r.result == InterrogatorSearch::Result::none_within_budget ? kResource : kPass;
    }
    if (*rec_cmd) {
      const Structure m(build_universe(rec_rank));
      const auto rel = rec_rel.build();
      const auto rule = RecursionRule::parse(rule_text);
      const Solution sol = etr_solve(m, rel, rule);
      std::cout << serialize_solution(sol);
      return check_solution(m, rel, rule, sol) ? kPass : kFail;
    }

    if (*play_cmd) {
      const Structure m(build_universe(play_rank));
      TruthGame g = truth_game(m, ordinal ? ClockMode::ordinal_countdown
                                          : ClockMode::first_move_natural);
      Transcript t;
      if (!replay_file.empty()) {
        t = referee(g, parse_transcript_json(read_file(replay_file), g));
      } else {
        const auto teller = make_teller(play_teller, g, play_lie, 1);
        if (interactive) {
          StdinInterrogator in(g, moves);
          t = play_truth_game(g, *teller, in);
        } else {
          if (script_file.empty()) {
            std::cerr << "error: give --script, --interactive or --replay\n";
            return kUsage;
          }
          std::vector<FormulaInstance> script;
          std::istringstream lines(read_file(script_file));
          for (std::string line; std::getline(lines, line);) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            script.push_back(closed_instance(parse_formula(line, g.signature())));
          }
          ScriptedInterrogator in(std::move(script), g.clock_mode);
          t = play_truth_game(g, *teller, in);
        }
      }
      const std::string text = transcript_json(t).dump(2);
      if (!out_file.empty()) {
        std::ofstream(out_file) << text << "\n";
      }
      if (json || out_file.empty()) {
        std::cout << text << "\n";
      } else {
        std::cout << to_string(t.status) << "\n";
      }
      return kPass;
    }

    if (*verify_cmd) {
      cfg.json = json;
      const Report r = run_suite(suite, cfg);
      std::cout << (json ? r.to_json().dump(2) + "\n" : r.to_text());
      return r.exit_code();
    }

    if (*etr_cmd) {
      const Structure m(build_universe(etr_rank));
      const auto rel = etr_rel.build();
      const auto rule = RecursionRule::parse(etr_rule);
      const Solution sol = etr_solve(m, rel, rule);
      const ClosureTransport ct = transport_to_closure(m, rel, rule);
      const bool closure_ok = etr_solve(ct.structure, ct.order, ct.rule) == sol;
      const TreeOrder tree = descending_tree(ct.order, node_budget);
      const Solution on_tree = solve_on_tree(ct, tree);
      const bool tree_ok = tree_solution_matches(tree, on_tree, sol, rel.carrier());
      const WellOrder kb = kleene_brouwer(tree);
      const bool kb_ok = solve_on_well_order(ct, tree, kb) == on_tree;
      if (json) {
        nlohmann::ordered_json j;
        j["solution"] = sol.pairs();
        j["closure_agrees"] = closure_ok;
        j["tree_nodes"] = tree.nodes.size();
        j["tree_agrees"] = tree_ok;
        j["kleene_brouwer_agrees"] = kb_ok;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << serialize_solution(sol);
        std::cout << "transitive closure: " << (closure_ok ? "agrees" : "DIFFERS") << "\n";
        std::cout << "descending tree (" << tree.nodes.size()
                  << " nodes): " << (tree_ok ? "agrees" : "DIFFERS") << "\n";
        std::cout << "Kleene-Brouwer order: " << (kb_ok ? "agrees" : "DIFFERS") << "\n";
      }
      return closure_ok && tree_ok && kb_ok ? kPass : kFail;
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return kResource;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const SignatureError& e) {
    std::cerr << "signature error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}

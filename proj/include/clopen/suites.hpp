#ifndef CLOPEN_SUITES_HPP
#define CLOPEN_SUITES_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "clopen/etr.hpp"
#include "clopen/game.hpp"
#include "clopen/solvers.hpp"

namespace clopen {

struct RunConfig {
  unsigned rank = 3;             // exhaustive suites
  unsigned random_rank = 4;      // randomized suites
  std::size_t play_cap = 8;      // longest random interrogation
  std::size_t clock_factor = 2;
  std::uint64_t seed = 1;
  std::size_t node_budget = kDefaultNodeBudget;
  std::size_t search_budget = kDefaultSearchBudget;
  std::size_t cases = 100;       // random cases per property
  bool json = false;
  bool mutate = false;           // swap in the faulty value solver

  // Throws InvariantError naming the first non-positive bound.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

struct CaseResult {
  std::string id;
  bool passed = false;
  std::string detail;
  nlohmann::ordered_json witness;  // seed and inputs, set on failure
};

struct Report {
  std::string suite;
  RunConfig config;
  std::vector<CaseResult> cases;
  bool resource_error = false;

  std::size_t passed() const;
  std::size_t failed() const { return cases.size() - passed(); }
  bool ok() const { return !resource_error && failed() == 0; }
  // 0 pass, 1 failure, 3 resource bound hit.
  int exit_code() const;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

const std::vector<std::string>& suite_names();

// "logic", "games", "truthgames", "etr" or "all". Throws InvariantError on an
// unknown name.
Report run_suite(const std::string& name, const RunConfig& cfg);

// Deliberately broken value solver for mutation testing: at closed-player
// nodes it settles for any valued child instead of requiring all of them.
Player mutated_value_winner(const Game& g, std::size_t budget = kDefaultSearchBudget);

}  // namespace clopen

#endif  // CLOPEN_SUITES_HPP

#ifndef CLOPEN_SOLVERS_HPP
#define CLOPEN_SOLVERS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>

#include "clopen/game.hpp"
#include "clopen/ordinal.hpp"

namespace clopen {

constexpr std::size_t kDefaultSearchBudget = 2'000'000;

struct GameValue {
  std::optional<Ordinal> value;  // absent = unvalued

  bool valued() const { return value.has_value(); }
  friend bool operator==(const GameValue&, const GameValue&) = default;
};

// Ordinal game value for the open player:
//   0         if p is decided for the open player,
//   1 + min   over valued children when the open player moves,
//   max       over children when the closed player moves and all are valued,
//   unvalued  otherwise (including decided for the closed player, or an
//             undecided play at the cap).
// Throws RangeError if p is longer than the cap or uses an illegal move;
// ResourceError if the subtree exceeds the budget.
GameValue game_value(const Game& g, const Position& p,
                     std::size_t budget = kDefaultSearchBudget);

// Values of every position in the subtree below the root (stopping at decided
// positions).
std::map<Position, GameValue> value_table(const Game& g,
                                          std::size_t budget = kDefaultSearchBudget);

struct SolvedGame {
  Player winner;
  Strategy strategy;
};

// Valued root: the open player always moves to the least child of strictly
// smaller value. Unvalued root: the closed player always moves to the least
// unvalued child. Tables cover exactly the positions reachable under the
// strategy.
SolvedGame value_strategy(const Game& g, std::size_t budget = kDefaultSearchBudget);

using Labeling = std::map<Position, Player>;

struct LabeledGame {
  Labeling labels;
  Player winner;
  Strategy strategy;
};

// Backward-induction labeling: decided positions carry their winner; a mover
// who can reach a node with their own label gets it, otherwise the opponent's.
// The winner's strategy moves to the least child carrying its label.
// Throws NotClopenError if an undecided position sits at the cap.
LabeledGame label_clopen(const Game& g, std::size_t budget = kDefaultSearchBudget);

// Positions (up to and including decided ones) from which player I wins under
// exhaustive minimax.
std::set<Position> winning_region(const Game& g,
                                  std::size_t budget = kDefaultSearchBudget);

struct PlayResult {
  Player winner;
  Position transcript;
};

// Throws IncompleteStrategyError when a table misses a reached position.
PlayResult play(const Game& g, const Strategy& s_I, const Strategy& s_II);

struct Verification {
  bool verified = false;
  // First losing (or uncovered) play found in move order.
  std::optional<Position> counterexample;
};

// Walks every opposing line against s.
Verification verify_strategy(const Game& g, const Strategy& s,
                             std::size_t budget = kDefaultSearchBudget);

}  // namespace clopen

#endif  // CLOPEN_SOLVERS_HPP

#ifndef CLOPEN_GAME_HPP
#define CLOPEN_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clopen/universe.hpp"

namespace clopen {

enum class Player { I, II };

inline Player opponent(Player p) { return p == Player::I ? Player::II : Player::I; }
const char* to_string(Player p);
Player parse_player(const std::string& s);

enum class Outcome { undecided, I_wins, II_wins };

inline Outcome win_for(Player p) {
  return p == Player::I ? Outcome::I_wins : Outcome::II_wins;
}

using Move = Code;
using Position = std::vector<Move>;

// Player I moves at even lengths.
inline Player to_move(std::span<const Move> p) {
  return p.size() % 2 == 0 ? Player::I : Player::II;
}

enum class GameKind { clopen, open_for_I, open_for_II };
const char* to_string(GameKind k);

// Finite-branching game of bounded length. Every move of the move space is
// legal at every position; decide must be prefix-monotone. A play that
// reaches the cap undecided is a win for the closed player (player II for
// clopen games, whose open player is taken to be I).
class Game {
 public:
  using Decider = std::function<Outcome(std::span<const Move>)>;

  Game(std::vector<Move> move_space, Decider decide, std::size_t play_cap,
       GameKind kind, std::string rule = "custom");

  // Decided-position table; decide(p) is the verdict of p's shortest decided
  // prefix.
  static Game from_decisions(std::vector<Move> move_space, std::size_t play_cap,
                             GameKind kind, std::map<Position, Player> decisions);

  const std::vector<Move>& move_space() const { return moves_; }
  std::size_t play_cap() const { return cap_; }
  GameKind kind() const { return kind_; }
  const std::string& rule() const { return rule_; }
  // Serialized parameters of a built-in rule, e.g. "rank=3".
  const std::string& rule_params() const { return rule_params_; }
  Game& set_rule(std::string rule, std::string params);
  const std::optional<std::map<Position, Player>>& decisions() const { return decisions_; }

  Outcome decide(std::span<const Move> p) const { return decide_(p); }
  Player open_player() const { return kind_ == GameKind::open_for_II ? Player::II : Player::I; }
  Player closed_player() const { return opponent(open_player()); }
  bool legal(Move m) const;

  // decide(p), or the closed player's win for an undecided play at the cap.
  Outcome outcome(std::span<const Move> p) const;
  bool terminal(std::span<const Move> p) const { return outcome(p) != Outcome::undecided; }

  // Samples random positions and checks decided verdicts persist on
  // extensions; returns a violating position if one is found.
  std::optional<Position> find_monotonicity_violation(std::size_t samples,
                                                      std::uint64_t seed) const;

 private:
  std::vector<Move> moves_;
  Decider decide_;
  std::size_t cap_;
  GameKind kind_;
  std::string rule_;
  std::string rule_params_;
  std::optional<std::map<Position, Player>> decisions_;
};

// Position -> move for the positions where `player` is to move.
struct Strategy {
  Player player = Player::I;
  std::map<Position, Move> table;

  std::optional<Move> lookup(const Position& p) const {
    auto it = table.find(p);
    if (it == table.end()) return std::nullopt;
    return it->second;
  }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

// I names a set b, II names an a; II wins iff a is an element of b. I naming
// the empty set loses on the spot.
Game choice_game(const Universe& u);

struct RandomGameParams {
  std::size_t max_nodes = 10000;
  std::size_t min_branching = 2;
  std::size_t max_branching = 3;
  double early_decision = 0.2;  // chance an interior position is decided
};

// Seeded random clopen game with an explicit decision table whose full tree
// has at most max_nodes positions.
Game random_clopen_game(std::uint64_t seed, const RandomGameParams& params = {});

// Text format:
//   game kind=<clopen|open_for_I|open_for_II> cap=<n>
//   moves <m1> <m2> ...
//   decided <I|II> <move>...        (explicit table, one line per entry)
// or in place of the decided lines:
//   rule choice rank=<n>
std::string serialize_game(const Game& g);
Game parse_game(const std::string& text);

// {"moves":[...],"winner":"I"}
std::string transcript_json(const Position& moves, Player winner);

std::string position_string(const Position& p);

}  // namespace clopen

#endif  // CLOPEN_GAME_HPP

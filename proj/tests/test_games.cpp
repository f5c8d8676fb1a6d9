#include <doctest.h>

#include <map>
#include <set>

#include "clopen/errors.hpp"
#include "clopen/game.hpp"
#include "clopen/solvers.hpp"

using namespace clopen;

namespace {

void collect(const Game& g, Position& p, std::vector<Position>& out) {
  out.push_back(p);
  if (g.terminal(p)) return;
  for (Move m : g.move_space()) {
    p.push_back(m);
    collect(g, p, out);
    p.pop_back();
  }
}

// Stage k holds the positions of value <= k. An open mover enters stage k
// when some child sits in stage k-1; a closed mover enters the first stage
// containing all of its children.
std::map<Position, std::size_t> retrograde_values(const Game& g) {
  std::vector<Position> all;
  Position root;
  collect(g, root, all);
  std::map<Position, std::size_t> value;
  auto child = [](Position p, Move m) {
    p.push_back(m);
    return p;
  };
  for (std::size_t k = 0;; ++k) {
    const auto before = value;
    for (const auto& p : all) {
      if (value.contains(p)) continue;
      if (g.outcome(p) == win_for(g.open_player())) {
        value[p] = 0;
        continue;
      }
      if (k == 0 || g.terminal(p) || to_move(p) != g.open_player()) continue;
      for (Move m : g.move_space()) {
        if (before.contains(child(p, m))) {
          value[p] = k;
          break;
        }
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& p : all) {
        if (value.contains(p) || g.terminal(p) || to_move(p) == g.open_player()) continue;
        bool all_in = true;
        for (Move m : g.move_space()) all_in = all_in && value.contains(child(p, m));
        if (all_in) {
          value[p] = k;
          changed = true;
        }
      }
    }
    if (value.size() == before.size() && k > 0) return value;
  }
}

bool minimax_I_wins(const Game& g, Position& p) {
  const Outcome o = g.outcome(p);
  if (o != Outcome::undecided) return o == Outcome::I_wins;
  const bool i_moves = to_move(p) == Player::I;
  for (Move m : g.move_space()) {
    p.push_back(m);
    const bool w = minimax_I_wins(g, p);
    p.pop_back();
    if (w == i_moves) return i_moves;
  }
  return !i_moves;
}

Game explicit_game(std::vector<Move> moves, std::size_t cap,
                   std::map<Position, Player> decisions) {
  return Game::from_decisions(std::move(moves), cap, GameKind::clopen, std::move(decisions));
}

}  // namespace

TEST_CASE("value examples") {
  const Game won = explicit_game({0, 1}, 3, {{{}, Player::I}});
  CHECK(game_value(won, {}).value == Ordinal(0));
  const SolvedGame s = value_strategy(won);
  CHECK(s.winner == Player::I);
  CHECK(s.strategy.table.empty());

  const Game one = explicit_game({0, 1}, 2, {{{0}, Player::II}, {{1}, Player::I}});
  CHECK(game_value(one, {}).value == Ordinal(1));

  // At {0} the closed player chooses between values 0 and 1.
  const Game sup = explicit_game({0, 1}, 6,
                                 {{{0, 0}, Player::I}, {{0, 1, 0}, Player::I},
                                  {{0, 1, 1}, Player::II}, {{1, 0}, Player::II},
                                  {{1, 1}, Player::II}});
  CHECK(game_value(sup, {0, 1}).value == Ordinal(1));
  CHECK(game_value(sup, {0}).value == Ordinal(1));
  CHECK_FALSE(game_value(sup, {0, 1, 1}).valued());
  CHECK_FALSE(game_value(sup, {1}).valued());
  CHECK(game_value(sup, {}).value == Ordinal(2));

  CHECK_THROWS_AS(game_value(one, {0, 0, 0}), RangeError);
  CHECK_THROWS_AS(game_value(one, {5}), RangeError);
}

TEST_CASE("values equal the retrograde stage numbers") {
  RandomGameParams params;
  params.max_nodes = 1000;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Game g = random_clopen_game(seed, params);
    const auto oracle = retrograde_values(g);
    for (const auto& [p, v] : value_table(g)) {
      auto it = oracle.find(p);
      if (v.valued()) {
        REQUIRE(it != oracle.end());
        CHECK(*v.value == Ordinal(it->second));
      } else {
        CHECK(it == oracle.end());
      }
    }
  }
}

TEST_CASE("three solvers agree and strategies verify") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const Game g = random_clopen_game(seed);
    Position root;
    const Player mm = minimax_I_wins(g, root) ? Player::I : Player::II;
    const SolvedGame s = value_strategy(g);
    const LabeledGame l = label_clopen(g);
    CHECK(s.winner == mm);
    CHECK(l.winner == mm);
    CHECK(winning_region(g).contains(Position{}) == (mm == Player::I));
    CHECK(verify_strategy(g, s.strategy).verified);
    CHECK(verify_strategy(g, l.strategy).verified);
  }
}

TEST_CASE("labeling examples") {
  const Game all_ii = explicit_game({0, 1}, 1, {{{0}, Player::II}, {{1}, Player::II}});
  CHECK(label_clopen(all_ii).winner == Player::II);
  const Game reach = explicit_game({0, 1}, 2,
                                   {{{0, 0}, Player::II}, {{0, 1}, Player::II},
                                    {{1, 0}, Player::I}, {{1, 1}, Player::I}});
  const LabeledGame l = label_clopen(reach);
  CHECK(l.winner == Player::I);
  CHECK(l.strategy.lookup({}) == Move(1));
  const Game open_end = explicit_game({0, 1}, 1, {{{0}, Player::II}});
  CHECK_THROWS_AS(label_clopen(open_end), NotClopenError);
}

TEST_CASE("winning region and the avoidance rule") {
  CHECK_FALSE(winning_region(choice_game(build_universe(3))).contains(Position{}));
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const Game g = random_clopen_game(seed);
    const auto w = winning_region(g);
    std::vector<Position> all;
    Position root;
    collect(g, root, all);
    for (const auto& p : all) {
      if (g.outcome(p) == Outcome::I_wins) CHECK(w.contains(p));
      if (w.contains(p) || g.terminal(p) || to_move(p) != Player::II) continue;
      bool stays_out = false;
      for (Move m : g.move_space()) {
        Position c = p;
        c.push_back(m);
        stays_out = stays_out || !w.contains(c);
      }
      CHECK(stays_out);
    }
  }
}

TEST_CASE("choice game") {
  const Universe u2 = build_universe(2);
  const Game g2 = choice_game(u2);
  CHECK(g2.outcome(Position{0}) == Outcome::II_wins);
  CHECK(g2.outcome(Position{1, 0}) == Outcome::II_wins);
  const SolvedGame s2 = value_strategy(g2);
  CHECK(s2.winner == Player::II);
  CHECK(s2.strategy.table == std::map<Position, Move>{{{1}, 0}});

  for (unsigned n = 1; n <= 4; ++n) {
    const Universe u = build_universe(n);
    const SolvedGame s = value_strategy(choice_game(u));
    CHECK(s.winner == Player::II);
    for (Code b = 1; b < u.size(); ++b) {
      Code least = 0;
      while (!member(least, b)) ++least;
      CHECK(s.strategy.lookup({b}) == least);
    }
  }

  Strategy i_plays{Player::I, {{{}, 1}}};
  Strategy ii_answers{Player::II, {{{1}, 0}}};
  const PlayResult r = play(g2, i_plays, ii_answers);
  CHECK(r.winner == Player::II);
  CHECK(r.transcript == Position{1, 0});
  CHECK(transcript_json(r.transcript, r.winner) == R"({"moves":[1,0],"winner":"II"})");
  CHECK_THROWS_AS(play(g2, i_plays, Strategy{Player::II, {}}), IncompleteStrategyError);
}

TEST_CASE("verification finds counterexamples") {
  const Game g = explicit_game({0, 1}, 2, {{{0, 0}, Player::II}, {{0, 1}, Player::II},
                                           {{1, 0}, Player::I}, {{1, 1}, Player::I}});
  const auto bad = verify_strategy(g, Strategy{Player::I, {{{}, 0}}});
  CHECK_FALSE(bad.verified);
  CHECK(bad.counterexample == Position{0, 0});
  // Player II cannot win a game player I wins, whatever II's table says.
  const auto wrong = verify_strategy(g, Strategy{Player::II, {{{1}, 0}, {{0}, 0}}});
  CHECK_FALSE(wrong.verified);
  CHECK(wrong.counterexample.has_value());
}

TEST_CASE("game text round trip and monotonicity") {
  const Game g = random_clopen_game(5);
  const Game back = parse_game(serialize_game(g));
  CHECK(back.decisions() == g.decisions());
  CHECK(back.play_cap() == g.play_cap());
  const Game c = parse_game(serialize_game(choice_game(build_universe(3))));
  CHECK(c.move_space().size() == 4);
  CHECK(c.rule() == "choice");
  CHECK_FALSE(g.find_monotonicity_violation(500, 1).has_value());
  const Game flip({0, 1}, [](std::span<const Move> p) {
    if (p.size() == 1) return Outcome::I_wins;
    if (p.size() == 2) return Outcome::II_wins;
    return Outcome::undecided;
  }, 3, GameKind::clopen);
  CHECK(flip.find_monotonicity_violation(500, 1).has_value());
  CHECK_THROWS_AS(parse_game("game kind=clopen cap=x\n"), ParseError);
}

TEST_CASE("value properties along plays") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    const Game g = random_clopen_game(seed);
    const auto values = value_table(g);
    std::vector<Position> all;
    Position root;
    collect(g, root, all);
    for (const auto& p : all) {
      if (g.terminal(p)) continue;
      auto it = values.find(p);
      if (it == values.end() || it->second.valued()) continue;
      // Unvalued: the closed player has an unvalued reply, the open player has none.
      std::size_t unvalued = 0;
      for (Move m : g.move_space()) {
        Position c = p;
        c.push_back(m);
        unvalued += !values.at(c).valued();
      }
      if (to_move(p) == g.open_player()) {
        CHECK(unvalued == g.move_space().size());
      } else {
        CHECK(unvalued > 0);
      }
    }

    const SolvedGame s = value_strategy(g);
    if (s.winner != g.open_player()) continue;
    // Against every reply the value drops strictly at each open move.
    std::vector<Position> frontier{Position{}};
    while (!frontier.empty()) {
      Position p = frontier.back();
      frontier.pop_back();
      if (g.terminal(p)) continue;
      if (to_move(p) == g.open_player()) {
        Position c = p;
        c.push_back(*s.strategy.lookup(p));
        CHECK(*values.at(c).value < *values.at(p).value);
        frontier.push_back(c);
      } else {
        for (Move m : g.move_space()) {
          Position c = p;
          c.push_back(m);
          CHECK(*values.at(c).value <= *values.at(p).value);
          frontier.push_back(c);
        }
      }
    }
  }
}

TEST_CASE("region complement under I to move") {
  for (std::uint64_t seed = 400; seed < 420; ++seed) {
    const Game g = random_clopen_game(seed);
    const auto w = winning_region(g);
    std::vector<Position> all;
    Position root;
    collect(g, root, all);
    for (const auto& p : all) {
      if (w.contains(p) || g.terminal(p) || to_move(p) != Player::I) continue;
      for (Move m : g.move_space()) {
        Position c = p;
        c.push_back(m);
        CHECK_FALSE(w.contains(c));
      }
    }
  }
}

TEST_CASE("play on small games") {
  const Game won = explicit_game({0, 1}, 3, {{{}, Player::II}});
  const PlayResult r = play(won, Strategy{Player::I, {}}, Strategy{Player::II, {}});
  CHECK(r.winner == Player::II);
  CHECK(r.transcript.empty());

  // The value strategy beats a table that answers every position with move 1.
  for (std::uint64_t seed = 500; seed < 520; ++seed) {
    const Game g = random_clopen_game(seed);
    const SolvedGame s = value_strategy(g);
    Strategy other{opponent(s.winner), {}};
    std::vector<Position> all;
    Position root;
    collect(g, root, all);
    for (const auto& p : all) {
      if (!g.terminal(p) && to_move(p) == other.player) other.table[p] = g.move_space().back();
    }
    const PlayResult pr = s.winner == Player::I ? play(g, s.strategy, other)
                                                : play(g, other, s.strategy);
    CHECK(pr.winner == s.winner);
  }
}

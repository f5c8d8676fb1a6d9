#include "clopen/solvers.hpp"

#include <functional>

#include "clopen/errors.hpp"

namespace clopen {

namespace {

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void tick() {
    if (++used_ > limit_) {
      throw ResourceError("game tree exceeds search budget of " + std::to_string(limit_) +
                          " positions");
    }
  }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

void check_position(const Game& g, const Position& p) {
  if (p.size() > g.play_cap()) {
    throw RangeError("position " + position_string(p) + " exceeds play cap " +
                     std::to_string(g.play_cap()));
  }
  for (Move m : p) {
    if (!g.legal(m)) throw RangeError("illegal move " + std::to_string(m));
  }
}

GameValue compute_value(const Game& g, Position& p, Budget& budget,
                        std::map<Position, GameValue>* table) {
  budget.tick();
  GameValue out;
  const Outcome o = g.outcome(p);
  if (o == win_for(g.open_player())) {
    out.value = Ordinal();
  } else if (o == Outcome::undecided) {
    const bool open_moves = to_move(p) == g.open_player();
    bool all_valued = true;
    std::optional<Ordinal> best;
    for (Move m : g.move_space()) {
      p.push_back(m);
      GameValue child = compute_value(g, p, budget, table);
      p.pop_back();
      if (!child.valued()) {
        all_valued = false;
        continue;
      }
      if (!best) {
        best = *child.value;
      } else if (open_moves ? (*child.value < *best) : (*child.value > *best)) {
        best = *child.value;
      }
    }
    if (open_moves) {
      if (best) out.value = best->successor();
    } else if (all_valued) {
      out.value = best.value_or(Ordinal());
    }
  }
  if (table) table->emplace(p, out);
  return out;
}

}  // namespace

GameValue game_value(const Game& g, const Position& p, std::size_t budget) {
  check_position(g, p);
  Budget b(budget);
  Position work = p;
  return compute_value(g, work, b, nullptr);
}

std::map<Position, GameValue> value_table(const Game& g, std::size_t budget) {
  std::map<Position, GameValue> table;
  Budget b(budget);
  Position root;
  compute_value(g, root, b, &table);
  return table;
}

SolvedGame value_strategy(const Game& g, std::size_t budget) {
  const auto values = value_table(g, budget);
  const bool open_wins = values.at(Position{}).valued();
  SolvedGame out{open_wins ? g.open_player() : g.closed_player(), {}};
  out.strategy.player = out.winner;

  std::function<void(Position&)> walk = [&](Position& p) {
    if (g.terminal(p)) return;
    if (to_move(p) == out.winner) {
      const GameValue& here = values.at(p);
      for (Move m : g.move_space()) {
        p.push_back(m);
        const GameValue& child = values.at(p);
        p.pop_back();
        bool good = open_wins ? (child.valued() && *child.value < *here.value)
                              : !child.valued();
        if (good) {
          out.strategy.table.emplace(p, m);
          p.push_back(m);
          walk(p);
          p.pop_back();
          return;
        }
      }
      return;  // unreachable for a correct value table
    }
    for (Move m : g.move_space()) {
      p.push_back(m);
      walk(p);
      p.pop_back();
    }
  };
  Position root;
  walk(root);
  return out;
}

LabeledGame label_clopen(const Game& g, std::size_t budget) {
  LabeledGame out;
  Budget b(budget);
  std::function<Player(Position&)> label = [&](Position& p) -> Player {
    b.tick();
    const Outcome o = g.decide(p);
    Player l;
    if (o != Outcome::undecided) {
      l = o == Outcome::I_wins ? Player::I : Player::II;
    } else if (p.size() >= g.play_cap()) {
      throw NotClopenError("position " + position_string(p) +
                           " reaches the play cap undecided");
    } else {
      const Player mover = to_move(p);
      bool reach = false;
      for (Move m : g.move_space()) {
        p.push_back(m);
        if (label(p) == mover) reach = true;
        p.pop_back();
      }
      l = reach ? mover : opponent(mover);
    }
    out.labels.emplace(p, l);
    return l;
  };
  Position root;
  out.winner = label(root);
  out.strategy.player = out.winner;

  std::function<void(Position&)> walk = [&](Position& p) {
    if (g.decide(p) != Outcome::undecided) return;
    if (to_move(p) == out.winner) {
      for (Move m : g.move_space()) {
        p.push_back(m);
        const bool keeps = out.labels.at(p) == out.winner;
        if (keeps) {
          out.strategy.table.emplace(Position(p.begin(), p.end() - 1), m);
          walk(p);
          p.pop_back();
          return;
        }
        p.pop_back();
      }
      return;
    }
    for (Move m : g.move_space()) {
      p.push_back(m);
      walk(p);
      p.pop_back();
    }
  };
  walk(root);
  return out;
}

std::set<Position> winning_region(const Game& g, std::size_t budget) {
  std::set<Position> region;
  Budget b(budget);
  std::function<bool(Position&)> wins = [&](Position& p) -> bool {
    b.tick();
    bool w;
    const Outcome o = g.outcome(p);
    if (o != Outcome::undecided) {
      w = o == Outcome::I_wins;
    } else {
      const bool i_moves = to_move(p) == Player::I;
      bool any = false, all = true;
      for (Move m : g.move_space()) {
        p.push_back(m);
        bool c = wins(p);
        p.pop_back();
        any = any || c;
        all = all && c;
      }
      w = i_moves ? any : all;
    }
    if (w) region.insert(p);
    return w;
  };
  Position root;
  wins(root);
  return region;
}

PlayResult play(const Game& g, const Strategy& s_I, const Strategy& s_II) {
  PlayResult out;
  Position& p = out.transcript;
  while (!g.terminal(p)) {
    const Strategy& s = to_move(p) == Player::I ? s_I : s_II;
    auto m = s.lookup(p);
    if (!m) {
      throw IncompleteStrategyError(std::string("strategy for ") + to_string(to_move(p)) +
                                    " has no move at " + position_string(p));
    }
    p.push_back(*m);
  }
  out.winner = g.outcome(p) == Outcome::I_wins ? Player::I : Player::II;
  return out;
}

Verification verify_strategy(const Game& g, const Strategy& s, std::size_t budget) {
  Verification out;
  Budget b(budget);
  std::function<bool(Position&)> walk = [&](Position& p) -> bool {
    b.tick();
    const Outcome o = g.outcome(p);
    if (o != Outcome::undecided) {
      if (o == win_for(s.player)) return true;
      out.counterexample = p;
      return false;
    }
    if (to_move(p) == s.player) {
      auto m = s.lookup(p);
      if (!m || !g.legal(*m)) {
        out.counterexample = p;
        return false;
      }
      p.push_back(*m);
      bool ok = walk(p);
      p.pop_back();
      return ok;
    }
    for (Move m : g.move_space()) {
      p.push_back(m);
      bool ok = walk(p);
      p.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  Position root;
  out.verified = walk(root);
  return out;
}

}  // namespace clopen

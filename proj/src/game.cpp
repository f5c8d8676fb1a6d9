#include "clopen/game.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

#include <json.hpp>

#include "clopen/errors.hpp"

namespace clopen {

const char* to_string(Player p) { return p == Player::I ? "I" : "II"; }

Player parse_player(const std::string& s) {
  if (s == "I") return Player::I;
  if (s == "II") return Player::II;
  throw ParseError("expected player I or II, got '" + s + "'", 0);
}

const char* to_string(GameKind k) {
  switch (k) {
    case GameKind::clopen: return "clopen";
    case GameKind::open_for_I: return "open_for_I";
    case GameKind::open_for_II: return "open_for_II";
  }
  return "?";
}

Game::Game(std::vector<Move> move_space, Decider decide, std::size_t play_cap,
           GameKind kind, std::string rule)
    : moves_(std::move(move_space)),
      decide_(std::move(decide)),
      cap_(play_cap),
      kind_(kind),
      rule_(std::move(rule)) {}

Game Game::from_decisions(std::vector<Move> move_space, std::size_t play_cap,
                          GameKind kind, std::map<Position, Player> decisions) {
  auto table = std::make_shared<const std::map<Position, Player>>(decisions);
  Decider d = [table](std::span<const Move> p) {
    Position prefix;
    prefix.reserve(p.size());
    for (std::size_t n = 0;; ++n) {
      auto it = table->find(prefix);
      if (it != table->end()) return win_for(it->second);
      if (n == p.size()) return Outcome::undecided;
      prefix.push_back(p[n]);
    }
  };
  Game g(std::move(move_space), std::move(d), play_cap, kind, "explicit");
  g.decisions_ = std::move(decisions);
  return g;
}

Game& Game::set_rule(std::string rule, std::string params) {
  rule_ = std::move(rule);
  rule_params_ = std::move(params);
  return *this;
}

bool Game::legal(Move m) const {
  return std::find(moves_.begin(), moves_.end(), m) != moves_.end();
}

Outcome Game::outcome(std::span<const Move> p) const {
  Outcome o = decide_(p);
  if (o == Outcome::undecided && p.size() >= cap_) return win_for(closed_player());
  return o;
}

std::optional<Position> Game::find_monotonicity_violation(std::size_t samples,
                                                          std::uint64_t seed) const {
  if (moves_.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Position p;
    Outcome first = Outcome::undecided;
    std::size_t len = rng() % (cap_ + 1);
    for (std::size_t n = 0; n <= len; ++n) {
      Outcome o = decide_(p);
      if (first == Outcome::undecided) {
        first = o;
      } else if (o != first) {
        return p;
      }
      if (n < len) p.push_back(moves_[rng() % moves_.size()]);
    }
  }
  return std::nullopt;
}

Game choice_game(const Universe& u) {
  Game::Decider d = [](std::span<const Move> p) {
    if (p.empty()) return Outcome::undecided;
    if (p[0] == 0) return Outcome::II_wins;
    if (p.size() == 1) return Outcome::undecided;
    return member(p[1], p[0]) ? Outcome::II_wins : Outcome::I_wins;
  };
  Game g(u.elements(), std::move(d), 2, GameKind::clopen);
  g.set_rule("choice", "rank=" + std::to_string(u.rank()));
  return g;
}

Game random_clopen_game(std::uint64_t seed, const RandomGameParams& params) {
  std::mt19937_64 rng(seed);
  const std::size_t span = params.max_branching - params.min_branching + 1;
  const std::size_t k = params.min_branching + rng() % span;

  // Deepest cap whose full k-ary tree stays within the node budget.
  std::size_t max_cap = 0;
  for (std::size_t nodes = 1, level = 1;;) {
    level *= k;
    if (nodes + level > params.max_nodes) break;
    nodes += level;
    ++max_cap;
  }
  const std::size_t cap = 1 + rng() % std::max<std::size_t>(max_cap, 1);

  std::vector<Move> moves(k);
  for (std::size_t m = 0; m < k; ++m) moves[m] = m;

  std::map<Position, Player> decisions;
  auto coin = [&] { return (rng() % 2) ? Player::I : Player::II; };
  const auto threshold = static_cast<std::uint64_t>(params.early_decision * 1000);
  std::vector<Position> frontier{Position{}};
  while (!frontier.empty()) {
    Position p = std::move(frontier.back());
    frontier.pop_back();
    if (p.size() == cap) {
      decisions.emplace(p, coin());
      continue;
    }
    if (!p.empty() && rng() % 1000 < threshold) {
      decisions.emplace(p, coin());
      continue;
    }
    for (Move m = k; m-- > 0;) {
      Position c = p;
      c.push_back(m);
      frontier.push_back(std::move(c));
    }
  }
  Game g = Game::from_decisions(std::move(moves), cap, GameKind::clopen, std::move(decisions));
  g.set_rule("explicit", "seed=" + std::to_string(seed));
  return g;
}

std::string position_string(const Position& p) {
  std::string s = "(";
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (n) s += ",";
    s += std::to_string(p[n]);
  }
  return s + ")";
}

std::string serialize_game(const Game& g) {
  std::ostringstream out;
  out << "game kind=" << to_string(g.kind()) << " cap=" << g.play_cap() << "\n";
  out << "moves";
  for (Move m : g.move_space()) out << " " << m;
  out << "\n";
  if (g.decisions()) {
    for (const auto& [p, w] : *g.decisions()) {
      out << "decided " << to_string(w);
      for (Move m : p) out << " " << m;
      out << "\n";
    }
  } else {
    out << "rule " << g.rule();
    if (!g.rule_params().empty()) out << " " << g.rule_params();
    out << "\n";
  }
  return out.str();
}

namespace {

std::string field(const std::string& tok, const std::string& name, std::size_t line) {
  if (tok.rfind(name + "=", 0) != 0) throw ParseError("expected " + name + "=", line);
  return tok.substr(name.size() + 1);
}

std::uint64_t number(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
  return std::stoull(tok);
}

GameKind parse_kind(const std::string& s, std::size_t line) {
  if (s == "clopen") return GameKind::clopen;
  if (s == "open_for_I") return GameKind::open_for_I;
  if (s == "open_for_II") return GameKind::open_for_II;
  throw ParseError("unknown game kind '" + s + "'", line);
}

}  // namespace

Game parse_game(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<GameKind> kind;
  std::size_t cap = 0;
  std::vector<Move> moves;
  std::map<Position, Player> decisions;
  std::optional<Game> builtin;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (kw == "game") {
      std::string k, c;
      ls >> k >> c;
      kind = parse_kind(field(k, "kind", line_no), line_no);
      cap = number(field(c, "cap", line_no), line_no);
    } else if (kw == "moves") {
      for (std::string tok; ls >> tok;) moves.push_back(number(tok, line_no));
    } else if (kw == "decided") {
      std::string w;
      ls >> w;
      Position p;
      for (std::string tok; ls >> tok;) p.push_back(number(tok, line_no));
      decisions.emplace(std::move(p), parse_player(w));
    } else if (kw == "rule") {
      std::string name, param;
      ls >> name >> param;
      if (name != "choice") {
        throw ParseError("unknown built-in rule '" + name + "'", line_no);
      }
      builtin = choice_game(build_universe(
          static_cast<unsigned>(number(field(param, "rank", line_no), line_no))));
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line_no);
    }
  }
  if (!kind) throw ParseError("missing 'game' header", 0);
  if (builtin) return *builtin;
  return Game::from_decisions(std::move(moves), cap, *kind, std::move(decisions));
}

std::string transcript_json(const Position& moves, Player winner) {
  nlohmann::ordered_json j;
  j["moves"] = moves;
  j["winner"] = to_string(winner);
  return j.dump();
}

}  // namespace clopen

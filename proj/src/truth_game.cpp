#include "clopen/truth_game.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "clopen/errors.hpp"

namespace clopen {

const char* to_string(Status s) {
  switch (s) {
    case Status::ongoing: return "ongoing";
    case Status::interrogator_wins: return "interrogator_wins";
    case Status::teller_wins: return "teller_wins";
  }
  return "?";
}

const char* to_string(ClockMode m) {
  return m == ClockMode::ordinal_countdown ? "ordinal_countdown" : "first_move_natural";
}

const char* to_string(InterrogatorSearch::Result r) {
  switch (r) {
    case InterrogatorSearch::Result::found: return "found";
    case InterrogatorSearch::Result::proven_none: return "proven_none";
    case InterrogatorSearch::Result::none_within_budget: return "none_within_budget";
  }
  return "?";
}

Signature TruthGame::signature() const {
  Signature sig = structure.signature();
  if (obligation) sig[kSolutionSymbol] = 2;
  return sig;
}

FormulaInstance TruthGame::rule_instance(Code i, Code x) const {
  if (!obligation) throw InvariantError("not a recursion game");
  const RecursionRule& r = obligation->rule;
  return FormulaInstance(obligation->instance_formula, {{r.i_var, i}, {r.x_var, x}});
}

TruthGame truth_game(const Structure& m, ClockMode mode) {
  TruthGame g;
  g.structure = m;
  g.clock_mode = mode;
  return g;
}

TruthGame recursion_game(const Structure& m, const WellFoundedRelation& rel,
                         const RecursionRule& rule, ClockMode mode) {
  rule.validate();
  TruthGame g;
  g.structure = recursion_structure(m, rel);
  g.clock_mode = mode;
  RecursionObligation ob;
  ob.relation = rel;
  ob.rule = rule;
  ob.instance_formula = Formula::biconditional(
      Formula::predicate(kSolutionSymbol,
                         {Term::variable(rule.i_var), Term::variable(rule.x_var)}),
      rule.relativized(Term::variable(rule.i_var)));
  g.obligation = std::move(ob);
  auto keys = std::make_shared<std::set<std::string>>();
  for (Code i : rel.carrier()) {
    for (Code x : g.structure.domain()) keys->insert(g.rule_instance(i, x).key());
  }
  g.obligation->instance_keys = std::move(keys);
  return g;
}

namespace {

void check_formula(const TruthGame& g, const Signature& sig, const Formula& f) {
  auto check_term = [&](const Term& t) {
    if (t.is_variable()) {
      throw MalformedInstanceError("inquiry has free variable '" + t.name() + "'");
    }
    if (!g.structure.in_domain(t.value())) {
      throw MalformedInstanceError("constant " + t.to_string() + " is outside the domain");
    }
  };
  switch (f.kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
      for (const Term& t : f.terms()) check_term(t);
      return;
    case Formula::Kind::predicate: {
      auto it = sig.find(f.symbol());
      if (it == sig.end()) throw SignatureError("unknown predicate " + f.symbol());
      if (it->second != f.terms().size()) {
        throw SignatureError("predicate " + f.symbol() + " takes " +
                             std::to_string(it->second) + " arguments");
      }
      for (const Term& t : f.terms()) check_term(t);
      return;
    }
    case Formula::Kind::negation:
      check_formula(g, sig, *f.sub());
      return;
    case Formula::Kind::conjunction:
      check_formula(g, sig, *f.lhs());
      check_formula(g, sig, *f.rhs());
      return;
    case Formula::Kind::exists: {
      // Plug in any element so only genuine constants reach check_term.
      const auto& dom = g.structure.domain();
      check_formula(g, sig, *substitute(f.sub(), f.bound_variable(), dom.empty() ? 0 : dom[0]));
      return;
    }
  }
}

bool is_solution_atom(const TruthGame& g, const Formula& f) {
  return g.recursion_mode() && f.kind() == Formula::Kind::predicate &&
         f.symbol() == kSolutionSymbol;
}

}  // namespace

void check_inquiry(const TruthGame& g, const FormulaInstance& inst) {
  check_formula(g, g.signature(), *inst.closed());
}

std::vector<FormulaInstance> constituents(const TruthGame& g, const FormulaInstance& inst) {
  const FormulaPtr& f = inst.closed();
  switch (f->kind()) {
    case Formula::Kind::negation:
      return {closed_instance(f->sub())};
    case Formula::Kind::conjunction:
      return {closed_instance(f->lhs()), closed_instance(f->rhs())};
    case Formula::Kind::exists: {
      std::vector<FormulaInstance> out;
      for (Code b : g.structure.domain()) out.push_back(instantiate_body(inst, b));
      return out;
    }
    default:
      return {};
  }
}

std::vector<FormulaInstance> follow_ups(const TruthGame& g, const FormulaInstance& inquiry,
                                        const Pronouncement& p) {
  const FormulaPtr& f = inquiry.closed();
  switch (f->kind()) {
    case Formula::Kind::negation:
    case Formula::Kind::conjunction:
      return constituents(g, inquiry);
    case Formula::Kind::exists:
      if (p.verdict) {
        if (p.witness) return {p.witness->body};
        return {};
      }
      return constituents(g, inquiry);
    case Formula::Kind::predicate:
      if (is_solution_atom(g, *f)) {
        return {g.rule_instance(f->terms()[0].value(), f->terms()[1].value())};
      }
      return {};
    default:
      return {};
  }
}

Referee::Referee(const TruthGame& g) : game_(&g) {}

std::optional<bool> Referee::verdict(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.verdict;
}

const FormulaInstance& Referee::instance(const std::string& key) const {
  return entries_.at(key).inst;
}

std::optional<Violation> Referee::record(const FormulaInstance& inquiry,
                                         const Pronouncement& p) {
  check_inquiry(*game_, inquiry);
  const std::string& key = inquiry.key();
  const bool is_exists = inquiry.closed()->kind() == Formula::Kind::exists;
  if (p.witness && !(is_exists && p.verdict)) {
    return Violation{"witness", key, "witness offered without a true existential"};
  }
  if (is_exists && p.verdict && !p.witness) {
    return Violation{"quantifier", key, "existential pronounced true without a witness"};
  }
  if (auto v = assert_verdict(inquiry, p.verdict)) return v;
  if (p.witness) {
    const Code b = p.witness->element;
    if (!game_->structure.in_domain(b)) {
      return Violation{"witness", key, "witness #" + std::to_string(b) + " is outside the domain"};
    }
    FormulaInstance body = instantiate_body(inquiry, b);
    if (body.key() != p.witness->body.key()) {
      return Violation{"witness", key, "witness body " + p.witness->body.key() +
                                           " is not the body at #" + std::to_string(b)};
    }
    if (auto v = assert_verdict(body, true)) return v;
  }
  return std::nullopt;
}

std::optional<Violation> Referee::assert_verdict(const FormulaInstance& inst, bool v) {
  const std::string& key = inst.key();
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    if (it->second.verdict != v) {
      return Violation{"inconsistent", key, "pronounced both true and false"};
    }
    return std::nullopt;
  }
  const Formula& f = *inst.closed();
  if (f.is_atomic() && !is_solution_atom(*game_, f)) {
    const bool truth = eval(game_->structure, f);
    if (truth != v) {
      return Violation{"atomic", key,
                       std::string("the structure makes it ") + (truth ? "true" : "false")};
    }
  }
  if (!v && game_->recursion_mode() && game_->obligation->instance_keys->contains(key)) {
    return Violation{"recursion", key, "recursion rule instance pronounced false"};
  }
  Entry e{inst, v, {}};
  for (const FormulaInstance& c : constituents(*game_, inst)) {
    e.constituents.push_back(c.key());
    parents_[c.key()].push_back(key);
  }
  entries_.emplace(key, std::move(e));
  order_.push_back(key);
  if (auto x = check_clause(key)) return x;
  auto pit = parents_.find(key);
  if (pit != parents_.end()) {
    for (const std::string& parent : pit->second) {
      if (parent == key) continue;
      if (!entries_.contains(parent)) continue;
      if (auto x = check_clause(parent)) return x;
    }
  }
  return std::nullopt;
}

std::optional<Violation> Referee::check_clause(const std::string& key) const {
  const Entry& e = entries_.at(key);
  switch (e.inst.closed()->kind()) {
    case Formula::Kind::negation: {
      const std::string& c = e.constituents[0];
      if (verdict(c) == e.verdict) {
        return Violation{"negation", key,
                         std::string("pronounced ") + (e.verdict ? "true" : "false") +
                             " together with " + c};
      }
      return std::nullopt;
    }
    case Formula::Kind::conjunction: {
      const auto a = verdict(e.constituents[0]);
      const auto b = verdict(e.constituents[1]);
      if (e.verdict && (a == false || b == false)) {
        return Violation{"conjunction", key, "true conjunction with a false conjunct"};
      }
      if (!e.verdict && a == true && b == true) {
        return Violation{"conjunction", key, "false conjunction with both conjuncts true"};
      }
      return std::nullopt;
    }
    case Formula::Kind::exists:
      if (!e.verdict) {
        for (const std::string& c : e.constituents) {
          if (verdict(c) == true) {
            return Violation{"quantifier", key, "false existential with true instance " + c};
          }
        }
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

namespace {

void check_clock(const TruthGame& g, const std::optional<Ordinal>& prev, const Ordinal& clock) {
  if (g.clock_mode == ClockMode::first_move_natural && !clock.is_finite()) {
    throw MalformedTranscriptError("clock " + clock.to_string() +
                                   " is not a natural number in natural mode");
  }
  if (!prev) return;
  if (prev->is_zero()) throw MalformedTranscriptError("move after the clock reached 0");
  if (!(clock < *prev)) {
    throw MalformedTranscriptError("clock " + clock.to_string() + " does not decrease from " +
                                   prev->to_string());
  }
}

}  // namespace

Transcript referee(const TruthGame& g, const std::vector<Turn>& turns) {
  Transcript t;
  Referee r(g);
  std::optional<Ordinal> prev;
  for (const Turn& turn : turns) {
    if (t.status != Status::ongoing) {
      throw MalformedTranscriptError("move after the game was decided");
    }
    check_clock(g, prev, turn.clock);
    prev = turn.clock;
    t.turns.push_back(turn);
    if (auto v = r.record(turn.inquiry, turn.answer)) {
      t.status = Status::interrogator_wins;
      t.violation = std::move(v);
    } else if (turn.clock.is_zero()) {
      t.status = Status::teller_wins;
    }
  }
  return t;
}

nlohmann::ordered_json transcript_json(const Transcript& t) {
  nlohmann::ordered_json j;
  j["status"] = to_string(t.status);
  if (t.violation) {
    j["violation"] = {{"kind", t.violation->kind},
                      {"instance", t.violation->instance},
                      {"detail", t.violation->detail}};
  }
  auto turns = nlohmann::ordered_json::array();
  for (const Turn& turn : t.turns) {
    nlohmann::ordered_json e;
    e["clock"] = turn.clock.to_string();
    e["inquiry"] = turn.inquiry.key();
    e["verdict"] = turn.answer.verdict;
    if (turn.answer.witness) {
      e["witness"] = {{"element", turn.answer.witness->element},
                      {"body", turn.answer.witness->body.key()}};
    }
    turns.push_back(std::move(e));
  }
  j["turns"] = std::move(turns);
  return j;
}

std::vector<Turn> parse_transcript_json(const std::string& text, const TruthGame& g) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid transcript JSON: ") + e.what(), e.byte);
  }
  if (j.is_object() && j.contains("turns")) j = j["turns"];
  if (!j.is_array()) throw ParseError("transcript must be an array of turns", 0);
  const Signature sig = g.signature();
  std::vector<Turn> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& e = j[k];
    try {
      Turn t;
      t.clock = Ordinal::parse(e.at("clock").get<std::string>());
      t.inquiry = closed_instance(parse_formula(e.at("inquiry").get<std::string>(), sig));
      t.answer.verdict = e.at("verdict").get<bool>();
      if (e.contains("witness")) {
        const auto& w = e["witness"];
        t.answer.witness = Witness{
            w.at("element").get<Code>(),
            closed_instance(parse_formula(w.at("body").get<std::string>(), sig))};
      }
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(std::string("malformed turn: ") + ex.what(), k);
    }
  }
  return out;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Pronouncement true_with_witness(const FormulaInstance& inquiry, Code b) {
  return Pronouncement{true, Witness{b, instantiate_body(inquiry, b)}};
}

class StructureTeller : public Teller {
 public:
  explicit StructureTeller(Structure m) : m_(std::move(m)) {}

  Pronouncement respond(const std::vector<Turn>&, const Ordinal&,
                        const FormulaInstance& inquiry) const override {
    auto it = cache_.find(inquiry.key());
    if (it != cache_.end()) return it->second;
    Pronouncement p;
    p.verdict = eval(m_, inquiry);
    if (p.verdict && inquiry.closed()->kind() == Formula::Kind::exists) {
      p = true_with_witness(inquiry, skolem_witness(m_, inquiry));
    }
    cache_.emplace(inquiry.key(), p);
    return p;
  }

 private:
  Structure m_;
  mutable std::map<std::string, Pronouncement> cache_;
};

class MarkingTeller : public Teller {
 public:
  MarkingTeller(const SatisfactionClass& s, const std::vector<FormulaInstance>& closure,
                const TruthGame& g, bool fallback)
      : structure_(g.structure), fallback_(fallback) {
    for (const FormulaInstance& inst : closure) verdicts_[inst.key()] = s.marked(inst);
  }

  Pronouncement respond(const std::vector<Turn>&, const Ordinal&,
                        const FormulaInstance& inquiry) const override {
    Pronouncement p;
    p.verdict = truth(inquiry);
    if (p.verdict && inquiry.closed()->kind() == Formula::Kind::exists) {
      for (Code b : structure_.domain()) {
        if (truth(instantiate_body(inquiry, b))) return true_with_witness(inquiry, b);
      }
    }
    return p;
  }

 private:
  bool truth(const FormulaInstance& inst) const {
    auto it = verdicts_.find(inst.key());
    if (it != verdicts_.end()) return it->second;
    if (!fallback_) throw CoverageError("inquiry " + inst.key() + " is outside the closure");
    return eval(structure_, inst);
  }

  Structure structure_;
  bool fallback_;
  std::map<std::string, bool> verdicts_;
};

class RelaxedTeller : public Teller {
 public:
  RelaxedTeller(TellerPtr base, const TruthGame& g, std::uint64_t seed)
      : base_(std::move(base)), game_(g), seed_(seed) {}

  Pronouncement respond(const std::vector<Turn>& history, const Ordinal& clock,
                        const FormulaInstance& inquiry) const override {
    Pronouncement p = base_->respond(history, clock, inquiry);
    if (!clock.is_zero() || inquiry.closed()->is_atomic() || related(history, inquiry)) {
      return p;
    }
    std::mt19937_64 rng(seed_ ^ fnv1a(inquiry.key()));
    const bool coin = rng() % 2;
    if (inquiry.closed()->kind() == Formula::Kind::exists) {
      if (p.verdict && coin) return Pronouncement{};
      return p;
    }
    return Pronouncement{coin, std::nullopt};
  }

  bool memoryless() const override { return false; }

 private:
  bool related(const std::vector<Turn>& history, const FormulaInstance& inquiry) const {
    std::set<std::string> near{inquiry.key()};
    for (const auto& c : constituents(game_, inquiry)) near.insert(c.key());
    for (const Turn& t : history) {
      std::vector<FormulaInstance> seen{t.inquiry};
      if (t.answer.witness) seen.push_back(t.answer.witness->body);
      for (const FormulaInstance& h : seen) {
        if (near.contains(h.key())) return true;
        for (const auto& c : constituents(game_, h)) {
          if (c.key() == inquiry.key()) return true;
        }
      }
    }
    return false;
  }

  TellerPtr base_;
  TruthGame game_;
  std::uint64_t seed_;
};

class LyingTeller : public Teller {
 public:
  LyingTeller(TellerPtr base, const TruthGame& g, std::string key)
      : base_(std::move(base)), game_(g), key_(std::move(key)) {}

  Pronouncement respond(const std::vector<Turn>& history, const Ordinal& clock,
                        const FormulaInstance& inquiry) const override {
    Pronouncement p = base_->respond(history, clock, inquiry);
    if (inquiry.key() != key_) return p;
    if (p.verdict) return Pronouncement{};
    if (inquiry.closed()->kind() == Formula::Kind::exists && !game_.structure.domain().empty()) {
      return true_with_witness(inquiry, game_.structure.domain()[0]);
    }
    return Pronouncement{true, std::nullopt};
  }

  bool memoryless() const override { return base_->memoryless(); }

 private:
  TellerPtr base_;
  TruthGame game_;
  std::string key_;
};

class BadWitnessTeller : public StructureTeller {
 public:
  explicit BadWitnessTeller(const Structure& m) : StructureTeller(m), m_(m) {}

  Pronouncement respond(const std::vector<Turn>& history, const Ordinal& clock,
                        const FormulaInstance& inquiry) const override {
    Pronouncement p = StructureTeller::respond(history, clock, inquiry);
    if (!p.witness) return p;
    for (Code b : m_.domain()) {
      if (!eval(m_, instantiate_body(inquiry, b))) return true_with_witness(inquiry, b);
    }
    return p;
  }

 private:
  Structure m_;
};

}  // namespace

TellerPtr honest_teller(const Structure& m) { return std::make_shared<StructureTeller>(m); }

TellerPtr honest_teller(const SatisfactionClass& s, const std::vector<FormulaInstance>& closure,
                        const TruthGame& g, bool structure_fallback) {
  return std::make_shared<MarkingTeller>(s, closure, g, structure_fallback);
}

TellerPtr recursion_teller(const TruthGame& g, const Solution& solution) {
  if (!g.recursion_mode()) throw InvariantError("not a recursion game");
  return honest_teller(g.structure.with_predicate(kSolutionSymbol, solution.as_relation()));
}

TellerPtr relaxed_teller(TellerPtr base, const TruthGame& g, std::uint64_t seed) {
  return std::make_shared<RelaxedTeller>(std::move(base), g, seed);
}

TellerPtr lying_teller(TellerPtr base, const TruthGame& g, const std::string& key) {
  return std::make_shared<LyingTeller>(std::move(base), g, key);
}

TellerPtr bad_witness_teller(const Structure& m) {
  return std::make_shared<BadWitnessTeller>(m);
}

Transcript play_truth_game(const TruthGame& g, const Teller& teller,
                           Interrogator& interrogator) {
  Transcript t;
  Referee r(g);
  std::optional<Ordinal> prev;
  while (auto move = interrogator.next(t.turns)) {
    check_clock(g, prev, move->clock);
    prev = move->clock;
    Pronouncement p = teller.respond(t.turns, move->clock, move->inquiry);
    t.turns.push_back(Turn{move->clock, move->inquiry, p});
    if (auto v = r.record(move->inquiry, p)) {
      t.status = Status::interrogator_wins;
      t.violation = std::move(v);
      return t;
    }
    if (move->clock.is_zero()) {
      t.status = Status::teller_wins;
      return t;
    }
  }
  return t;
}

std::vector<Ordinal> clock_schedule(std::size_t moves, ClockMode mode) {
  std::vector<Ordinal> out;
  if (moves == 0) return out;
  if (mode == ClockMode::ordinal_countdown && moves > 1) {
    out.push_back(Ordinal::omega());
    --moves;
  }
  for (std::size_t k = moves; k-- > 0;) out.push_back(Ordinal(k));
  return out;
}

ScriptedInterrogator::ScriptedInterrogator(std::vector<FormulaInstance> script, ClockMode mode)
    : script_(std::move(script)), mode_(mode) {}

std::optional<Interrogator::Move> ScriptedInterrogator::next(const std::vector<Turn>& history) {
  const std::size_t k = history.size();
  if (k >= script_.size()) return std::nullopt;
  const auto clocks = clock_schedule(script_.size(), mode_);
  return Move{clocks[k], script_[k]};
}

namespace {

class ProbeInterrogator : public Interrogator {
 public:
  ProbeInterrogator(const TruthGame& g, FormulaInstance target, std::size_t budget,
                    ProbeOrder order)
      : game_(g),
        target_(std::move(target)),
        clocks_(clock_schedule(budget + 1, g.clock_mode)),
        order_(order) {}

  std::optional<Move> next(const std::vector<Turn>& history) override {
    const std::size_t k = history.size();
    if (k > 0) {
      const Turn& last = history.back();
      asked_.insert(last.inquiry.key());
      auto more = follow_ups(game_, last.inquiry, last.answer);
      if (order_ == ProbeOrder::breadth_first) {
        queue_.insert(queue_.end(), more.begin(), more.end());
      } else {
        queue_.insert(queue_.begin(), more.begin(), more.end());
      }
    }
    if (k >= clocks_.size()) return std::nullopt;
    while (!queue_.empty() && asked_.contains(queue_.front().key())) queue_.pop_front();
    if (k == 0 || queue_.empty()) return Move{clocks_[k], target_};
    Move m{clocks_[k], queue_.front()};
    queue_.pop_front();
    return m;
  }

 private:
  const TruthGame& game_;
  FormulaInstance target_;
  std::vector<Ordinal> clocks_;
  ProbeOrder order_;
  std::deque<FormulaInstance> queue_;
  std::set<std::string> asked_;
};

void merge_verdicts(const Transcript& t, std::map<std::string, bool>& seen) {
  auto put = [&](const std::string& key, bool v) {
    auto [it, fresh] = seen.emplace(key, v);
    if (!fresh && it->second != v) {
      throw NotWinningStrategyError("verdict on " + key + " differs between probes");
    }
  };
  for (const Turn& turn : t.turns) {
    put(turn.inquiry.key(), turn.answer.verdict);
    if (turn.answer.witness) put(turn.answer.witness->body.key(), true);
  }
}

void require_win(const Transcript& t, const FormulaInstance& target) {
  if (t.status == Status::teller_wins) return;
  std::string why = t.violation ? t.violation->kind + " violation on " + t.violation->instance +
                                      " (" + t.violation->detail + ")"
                                : "play did not finish";
  throw NotWinningStrategyError("teller loses the probe on " + target.key() + ": " + why);
}

}  // namespace

Transcript probe(const TruthGame& g, const Teller& teller, const FormulaInstance& target,
                 std::size_t budget, ProbeOrder order) {
  ProbeInterrogator interrogator(g, target, budget, order);
  return play_truth_game(g, teller, interrogator);
}

std::map<std::string, bool> extract_verdicts(const TruthGame& g, const Teller& teller,
                                             const std::vector<FormulaInstance>& targets,
                                             const ExtractionOptions& opt) {
  std::map<std::string, bool> out;
  std::map<std::string, bool> seen;
  for (const FormulaInstance& target : targets) {
    const std::size_t budget = opt.budget(target);
    const Transcript bfs = probe(g, teller, target, budget, ProbeOrder::breadth_first);
    require_win(bfs, target);
    const Transcript dfs = probe(g, teller, target, budget, ProbeOrder::depth_first);
    require_win(dfs, target);
    merge_verdicts(bfs, seen);
    merge_verdicts(dfs, seen);
    out[target.key()] = bfs.turns.front().answer.verdict;
  }
  return out;
}

SatisfactionClass extract_satisfaction(const Teller& teller, const TruthGame& g,
                                       const std::vector<FormulaInstance>& targets,
                                       const ExtractionOptions& opt) {
  const auto verdicts = extract_verdicts(g, teller, targets, opt);
  SatisfactionClass s;
  for (const FormulaInstance& target : targets) {
    if (verdicts.at(target.key())) s.mark_true(target);
  }
  return s;
}

Solution extract_solution(const Teller& teller, const TruthGame& g,
                          const ExtractionOptions& opt) {
  if (!g.recursion_mode()) throw InvariantError("extract_solution needs a recursion game");
  std::vector<FormulaInstance> targets;
  std::vector<std::pair<Code, Code>> pairs;
  for (Code i : g.obligation->relation.carrier()) {
    for (Code x : g.structure.domain()) {
      targets.push_back(closed_instance(
          Formula::predicate(kSolutionSymbol, {Term::constant(i), Term::constant(x)})));
      pairs.emplace_back(i, x);
    }
  }
  const auto verdicts = extract_verdicts(g, teller, targets, opt);
  Solution f;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (verdicts.at(targets[k].key())) f.insert(pairs[k].first, pairs[k].second);
  }
  if (!check_solution(g.structure, g.obligation->relation, g.obligation->rule, f)) {
    throw NotWinningStrategyError("extracted F does not solve the recursion");
  }
  return f;
}

namespace {

std::vector<std::vector<FormulaPtr>> formulas_by_size(const Signature& sig,
                                                      const std::vector<std::string>& vars,
                                                      std::size_t max_size) {
  std::vector<std::vector<FormulaPtr>> by(max_size + 1);
  if (max_size == 0) return by;
  for (const auto& a : vars) {
    for (const auto& b : vars) {
      by[1].push_back(Formula::membership(Term::variable(a), Term::variable(b)));
    }
  }
  for (const auto& a : vars) {
    for (const auto& b : vars) {
      by[1].push_back(Formula::equality(Term::variable(a), Term::variable(b)));
    }
  }
  for (const auto& [sym, arity] : sig) {
    if (arity == 1) {
      for (const auto& a : vars) by[1].push_back(Formula::predicate(sym, {Term::variable(a)}));
    } else if (arity == 2) {
      for (const auto& a : vars) {
        for (const auto& b : vars) {
          by[1].push_back(Formula::predicate(sym, {Term::variable(a), Term::variable(b)}));
        }
      }
    }
  }
  for (std::size_t n = 2; n <= max_size; ++n) {
    for (const auto& f : by[n - 1]) by[n].push_back(Formula::negation(f));
    for (const auto& v : vars) {
      for (const auto& f : by[n - 1]) by[n].push_back(Formula::exists(v, f));
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      for (const auto& l : by[k]) {
        for (const auto& r : by[n - 1 - k]) by[n].push_back(Formula::conjunction(l, r));
      }
    }
  }
  return by;
}

}  // namespace

std::vector<FormulaInstance> enumerate_instances(const TruthGame& g, std::size_t max_size,
                                                 const std::vector<std::string>& vars) {
  Signature sig = g.signature();
  sig.erase(std::string(kPrecedesSymbol));
  if (g.recursion_mode() || g.structure.predicate(std::string(kPrecedesSymbol))) {
    sig[std::string(kPrecedesSymbol)] = 2;
  }
  const auto by = formulas_by_size(sig, vars, max_size);
  const auto& dom = g.structure.domain();
  std::vector<FormulaInstance> out;
  std::set<std::string> seen;
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const auto& f : by[n]) {
      const auto fv = f->free_variables();
      const std::vector<std::string> free(fv.begin(), fv.end());
      std::vector<std::size_t> idx(free.size(), 0);
      if (!free.empty() && dom.empty()) continue;
      for (;;) {
        Assignment a;
        for (std::size_t k = 0; k < free.size(); ++k) a[free[k]] = dom[idx[k]];
        FormulaInstance inst(f, a);
        if (seen.insert(inst.key()).second) out.push_back(std::move(inst));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == dom.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  return out;
}

std::vector<FormulaInstance> inquiry_pool(const TruthGame& g) {
  auto pool = enumerate_instances(g, 2);
  if (g.recursion_mode()) {
    for (Code i : g.obligation->relation.carrier()) {
      for (Code x : g.structure.domain()) pool.push_back(g.rule_instance(i, x));
    }
  }
  return pool;
}

namespace {

class Searcher {
 public:
  Searcher(const TruthGame& g, const Teller& teller, std::size_t budget,
           const std::vector<FormulaInstance>& pool)
      : g_(g), teller_(teller), budget_(budget), pool_(pool) {
    for (const auto& p : pool_) pool_keys_.insert(p.key());
  }

  bool run(std::size_t depth) {
    memo_.clear();
    std::vector<Turn> history;
    return dfs(history, Referee(g_), depth);
  }

  bool exhausted = false;
  std::size_t nodes = 0;
  std::optional<Transcript> win;

 private:
  bool dfs(std::vector<Turn>& history, const Referee& ref, std::size_t remaining) {
    if (remaining == 0) return false;
    std::vector<FormulaInstance> extra;
    std::set<std::string> keys;
    for (const Turn& t : history) {
      for (auto& f : follow_ups(g_, t.inquiry, t.answer)) {
        if (!pool_keys_.contains(f.key()) && keys.insert(f.key()).second) {
          extra.push_back(std::move(f));
        }
      }
    }
    const Ordinal clock(remaining - 1);
    auto visit = [&](const FormulaInstance& q) -> bool {
      if (++nodes > budget_) {
        exhausted = true;
        return false;
      }
      Pronouncement p = teller_.respond(history, clock, q);
      Referee next = ref;
      auto v = next.record(q, p);
      history.push_back(Turn{clock, q, p});
      if (v) {
        win = Transcript{history, Status::interrogator_wins, v};
        return true;
      }
      if (remaining > 1) {
        bool skip = false;
        if (teller_.memoryless()) skip = !memo_.insert(memo_key(history, remaining - 1)).second;
        if (!skip && dfs(history, next, remaining - 1)) return true;
      }
      history.pop_back();
      return false;
    };
    for (const auto& q : pool_) {
      if (visit(q)) return true;
      if (exhausted) return false;
    }
    for (const auto& q : extra) {
      if (visit(q)) return true;
      if (exhausted) return false;
    }
    return false;
  }

  static std::string memo_key(const std::vector<Turn>& history, std::size_t remaining) {
    std::set<std::string> asked;
    for (const Turn& t : history) asked.insert(t.inquiry.key());
    std::string key = std::to_string(remaining);
    for (const auto& a : asked) key += "\n" + a;
    return key;
  }

  const TruthGame& g_;
  const Teller& teller_;
  std::size_t budget_;
  const std::vector<FormulaInstance>& pool_;
  std::set<std::string> pool_keys_;
  std::set<std::string> memo_;
};

}  // namespace

InterrogatorSearch interrogator_search(const TruthGame& g, const Teller& teller,
                                       std::size_t depth, std::size_t budget,
                                       const std::vector<FormulaInstance>& pool) {
  // Iterative deepening, so the shortest winning script is found first.
  Searcher s(g, teller, budget, pool);
  InterrogatorSearch out;
  bool found = false;
  for (std::size_t d = 1; d <= depth && !found && !s.exhausted; ++d) found = s.run(d);
  if (found) {
    out.result = InterrogatorSearch::Result::found;
    out.transcript = s.win;
    for (const Turn& t : s.win->turns) out.strategy.push_back(t.inquiry);
  } else {
    out.result = s.exhausted ? InterrogatorSearch::Result::none_within_budget
                             : InterrogatorSearch::Result::proven_none;
  }
  out.nodes = std::min(s.nodes, budget);
  return out;
}

InterrogatorSearch interrogator_search(const TruthGame& g, const Teller& teller,
                                       std::size_t depth, std::size_t budget) {
  return interrogator_search(g, teller, depth, budget, inquiry_pool(g));
}

namespace {

class RandomInterrogator : public Interrogator {
 public:
  RandomInterrogator(const TruthGame& g, const std::vector<FormulaInstance>& pool,
                     std::size_t max_depth, std::uint64_t seed)
      : g_(g), pool_(pool), rng_(seed) {
    const std::size_t depth = 1 + rng_() % std::max<std::size_t>(max_depth, 1);
    clocks_ = clock_schedule(depth, g.clock_mode);
  }

  std::optional<Move> next(const std::vector<Turn>& history) override {
    const std::size_t k = history.size();
    if (k >= clocks_.size()) return std::nullopt;
    if (k > 0) {
      const Turn& last = history.back();
      auto more = follow_ups(g_, last.inquiry, last.answer);
      pending_.insert(pending_.end(), more.begin(), more.end());
    }
    if (!pending_.empty() && rng_() % 2) {
      return Move{clocks_[k], pending_[rng_() % pending_.size()]};
    }
    if (pool_.empty()) throw InvariantError("empty inquiry pool");
    return Move{clocks_[k], pool_[rng_() % pool_.size()]};
  }

 private:
  const TruthGame& g_;
  const std::vector<FormulaInstance>& pool_;
  std::mt19937_64 rng_;
  std::vector<Ordinal> clocks_;
  std::vector<FormulaInstance> pending_;
};

}  // namespace

Transcript random_interrogation(const TruthGame& g, const Teller& teller,
                                const std::vector<FormulaInstance>& pool,
                                std::size_t max_depth, std::uint64_t seed) {
  RandomInterrogator interrogator(g, pool, max_depth, seed);
  return play_truth_game(g, teller, interrogator);
}

}  // namespace clopen

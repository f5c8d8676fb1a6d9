#ifndef CLOPEN_TRUTH_GAME_HPP
#define CLOPEN_TRUTH_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "clopen/etr.hpp"
#include "clopen/formula.hpp"
#include "clopen/ordinal.hpp"
#include "clopen/relation.hpp"
#include "clopen/satisfaction.hpp"
#include "clopen/structure.hpp"

namespace clopen {

struct Witness {
  Code element;
  FormulaInstance body;  // the inquiry's body instantiated at element
};

struct Pronouncement {
  bool verdict = false;
  std::optional<Witness> witness;  // exactly for true existentials
};

struct Turn {
  Ordinal clock;
  FormulaInstance inquiry;
  Pronouncement answer;
};

enum class Status { ongoing, interrogator_wins, teller_wins };
const char* to_string(Status s);

enum class ClockMode { ordinal_countdown, first_move_natural };
const char* to_string(ClockMode m);

struct RecursionObligation {
  WellFoundedRelation relation;
  RecursionRule rule;
  FormulaPtr instance_formula;  // F(i, x) <-> phi(x, i, F|i), free in x and i
  std::shared_ptr<const std::set<std::string>> instance_keys;  // carrier x domain
};

// In recursion mode the structure already interprets <| as the relation and
// has the carrier in its domain; F is left to the teller.
struct TruthGame {
  Structure structure;
  ClockMode clock_mode = ClockMode::first_move_natural;
  std::optional<RecursionObligation> obligation;

  Signature signature() const;
  bool recursion_mode() const { return obligation.has_value(); }
  // F(#i, #x) <-> phi(#x, #i, F|#i)
  FormulaInstance rule_instance(Code i, Code x) const;
};

TruthGame truth_game(const Structure& m, ClockMode mode = ClockMode::first_move_natural);

// Throws SignatureError if the rule is malformed.
TruthGame recursion_game(const Structure& m, const WellFoundedRelation& rel,
                         const RecursionRule& rule,
                         ClockMode mode = ClockMode::first_move_natural);

// Throws MalformedInstanceError unless inst is closed over the game's domain,
// SignatureError if it uses a symbol outside the game's signature.
void check_inquiry(const TruthGame& g, const FormulaInstance& inst);

struct Violation {
  std::string kind;  // inconsistent, atomic, negation, conjunction, quantifier,
                     // witness, recursion
  std::string instance;
  std::string detail;
};

// Incremental referee: feeds pronouncements one at a time and reports the
// first Tarskian (or recursion) violation they expose.
class Referee {
 public:
  explicit Referee(const TruthGame& g);

  std::optional<Violation> record(const FormulaInstance& inquiry, const Pronouncement& p);
  std::optional<bool> verdict(const std::string& key) const;
  // Keys pronounced so far, in pronouncement order.
  const std::vector<std::string>& order() const { return order_; }
  const FormulaInstance& instance(const std::string& key) const;

 private:
  struct Entry {
    FormulaInstance inst;
    bool verdict;
    std::vector<std::string> constituents;
  };

  std::optional<Violation> assert_verdict(const FormulaInstance& inst, bool v);
  std::optional<Violation> check_clause(const std::string& key) const;

  const TruthGame* game_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::vector<std::string>> parents_;
  std::vector<std::string> order_;
};

// Immediate Tarskian constituents of a closed instance: the negated formula,
// both conjuncts, or every instantiation of an existential's body over the
// domain. Atoms have none.
std::vector<FormulaInstance> constituents(const TruthGame& g, const FormulaInstance& inst);

// Inquiries a referee-minded interrogator would follow up with: constituents
// of negations and conjunctions, every instantiation of a false existential,
// the witness body of a true one, and in recursion mode the rule instance
// behind an atom F(i, x).
std::vector<FormulaInstance> follow_ups(const TruthGame& g, const FormulaInstance& inquiry,
                                        const Pronouncement& p);

struct Transcript {
  std::vector<Turn> turns;
  Status status = Status::ongoing;
  std::optional<Violation> violation;
};

// Checks the clock protocol (strictly decreasing; naturals only after the
// first move in natural mode, and no move after clock 0) and replays every
// pronouncement. Throws MalformedTranscriptError on a clock error.
Transcript referee(const TruthGame& g, const std::vector<Turn>& turns);

nlohmann::ordered_json transcript_json(const Transcript& t);
// Reads the array produced by transcript_json(...)["turns"]; throws ParseError.
std::vector<Turn> parse_transcript_json(const std::string& text, const TruthGame& g);

class Teller {
 public:
  virtual ~Teller() = default;
  virtual Pronouncement respond(const std::vector<Turn>& history, const Ordinal& clock,
                                const FormulaInstance& inquiry) const = 0;
  // Answers depend on the inquiry alone.
  virtual bool memoryless() const { return true; }
};

using TellerPtr = std::shared_ptr<const Teller>;

// Answers by eval on m with least witnesses. For a recursion game pass the
// game structure extended by F (see recursion_teller).
TellerPtr honest_teller(const Structure& m);

// Answers by the marking on the closure; outside the closure falls back to
// eval on `fallback`, or throws CoverageError when there is none.
TellerPtr honest_teller(const SatisfactionClass& s, const std::vector<FormulaInstance>& closure,
                        const TruthGame& g, bool structure_fallback = false);

// Honest teller for the recursion game asserting F := solution.
TellerPtr recursion_teller(const TruthGame& g, const Solution& solution);

// Answers like base, except at clock 0 on a non-atomic inquiry unrelated to
// the history, where the verdict is a seeded coin (true existentials may only
// turn false).
TellerPtr relaxed_teller(TellerPtr base, const TruthGame& g, std::uint64_t seed);

// Flips the verdict on one key (dropping or inventing witnesses as needed).
TellerPtr lying_teller(TellerPtr base, const TruthGame& g, const std::string& key);

// Like base, but true existentials are backed by the least element whose body
// is false, when there is one.
TellerPtr bad_witness_teller(const Structure& m);

class Interrogator {
 public:
  virtual ~Interrogator() = default;
  struct Move {
    Ordinal clock;
    FormulaInstance inquiry;
  };
  // nullopt ends play (only legal once the clock has hit 0).
  virtual std::optional<Move> next(const std::vector<Turn>& history) = 0;
};

// Plays until the referee decides or the interrogator stops.
Transcript play_truth_game(const TruthGame& g, const Teller& teller, Interrogator& interrogator);

// Asks the script in order with clocks n-1, ..., 0 (natural mode) or
// w, n-2, ..., 0 (ordinal mode).
class ScriptedInterrogator : public Interrogator {
 public:
  ScriptedInterrogator(std::vector<FormulaInstance> script, ClockMode mode);
  std::optional<Move> next(const std::vector<Turn>& history) override;

  const std::vector<FormulaInstance>& script() const { return script_; }

 private:
  std::vector<FormulaInstance> script_;
  ClockMode mode_;
};

std::vector<Ordinal> clock_schedule(std::size_t moves, ClockMode mode);

enum class ProbeOrder { breadth_first, depth_first };

// Target first, then follow-ups in the given order; once they run out the
// target is asked again. Clocks follow clock_schedule(budget + 1, mode).
Transcript probe(const TruthGame& g, const Teller& teller, const FormulaInstance& target,
                 std::size_t budget, ProbeOrder order = ProbeOrder::breadth_first);

struct ExtractionOptions {
  std::size_t clock_factor = 2;
  std::size_t extra_clock = 0;
  std::size_t budget(const FormulaInstance& target) const {
    return clock_factor * target.closed()->size() + 2 + extra_clock;
  }
};

// Verdicts of the canonical probe on each target, cross-checked against a
// depth-first probe. Throws NotWinningStrategyError if a probe is lost or the
// verdicts disagree.
std::map<std::string, bool> extract_verdicts(const TruthGame& g, const Teller& teller,
                                             const std::vector<FormulaInstance>& targets,
                                             const ExtractionOptions& opt = {});

SatisfactionClass extract_satisfaction(const Teller& teller, const TruthGame& g,
                                       const std::vector<FormulaInstance>& targets,
                                       const ExtractionOptions& opt = {});

// F = pairs (i, x) the teller affirms over carrier x domain. Throws
// NotWinningStrategyError if a probe is lost, slices disagree across probes,
// or the result fails check_solution.
Solution extract_solution(const Teller& teller, const TruthGame& g,
                          const ExtractionOptions& opt = {});

// Distinct closed instances (by key) of every formula of size <= max_size over
// the variables, built from the signature's atoms, closed by all assignments
// over the domain. Listed by formula size, then enumeration order.
std::vector<FormulaInstance> enumerate_instances(const TruthGame& g, std::size_t max_size,
                                                 const std::vector<std::string>& vars = {"x",
                                                                                         "y"});

// Instances of size <= 2 over {x, y}; in recursion mode also every rule
// instance.
std::vector<FormulaInstance> inquiry_pool(const TruthGame& g);

struct InterrogatorSearch {
  enum class Result { found, proven_none, none_within_budget };
  Result result = Result::proven_none;
  std::vector<FormulaInstance> strategy;  // winning inquiry script when found
  std::optional<Transcript> transcript;
  std::size_t nodes = 0;
};

const char* to_string(InterrogatorSearch::Result r);

// Exhaustive search over inquiry sequences of length <= depth drawn from the
// pool plus follow-ups of the history; clocks d-1, ..., 0 for a script of
// length d. Shorter scripts are tried first, then enumeration order decides.
InterrogatorSearch interrogator_search(const TruthGame& g, const Teller& teller,
                                       std::size_t depth, std::size_t budget,
                                       const std::vector<FormulaInstance>& pool);
InterrogatorSearch interrogator_search(const TruthGame& g, const Teller& teller,
                                       std::size_t depth, std::size_t budget);

// Seeded random interrogator: depth in [1, max_depth], each inquiry drawn from
// the pool or, with probability 1/2, from the follow-ups of the history.
Transcript random_interrogation(const TruthGame& g, const Teller& teller,
                                const std::vector<FormulaInstance>& pool,
                                std::size_t max_depth, std::uint64_t seed);

}  // namespace clopen

#endif  // CLOPEN_TRUTH_GAME_HPP

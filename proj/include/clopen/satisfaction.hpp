#ifndef CLOPEN_SATISFACTION_HPP
#define CLOPEN_SATISFACTION_HPP

#include <map>
#include <string>
#include <vector>

#include "clopen/formula.hpp"
#include "clopen/structure.hpp"

namespace clopen {

// Finite set of instances marked true. Within an audited closure, absence
// means "marked false"; outside it an instance is simply unqueried.
class SatisfactionClass {
 public:
  void mark_true(const FormulaInstance& inst) { entries_.emplace(inst.key(), inst); }
  bool marked(const FormulaInstance& inst) const { return entries_.contains(inst.key()); }
  bool marked(const std::string& key) const { return entries_.contains(key); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, FormulaInstance>& entries() const { return entries_; }

  friend bool operator==(const SatisfactionClass& a, const SatisfactionClass& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (auto ia = a.entries_.begin(), ib = b.entries_.begin(); ia != a.entries_.end();
         ++ia, ++ib) {
      if (ia->first != ib->first) return false;
    }
    return true;
  }

 private:
  std::map<std::string, FormulaInstance> entries_;
};

// Marks exactly the listed instances that evaluate true in m.
SatisfactionClass build_truth_predicate(const Structure& m,
                                        const std::vector<FormulaInstance>& instances);

struct TarskiViolation {
  enum class Kind { atomic, negation, conjunction, quantifier };
  Kind kind;
  std::string instance;  // key of the closure instance whose clause fails
  std::string detail;
};

const char* to_string(TarskiViolation::Kind k);

// Audits each closure instance's Tarskian clause against the marking. Marks of
// constituents outside the closure are unknown; a clause is reported only when
// the known marks already contradict it.
std::vector<TarskiViolation> tarski_check(const Structure& m, const SatisfactionClass& s,
                                          const std::vector<FormulaInstance>& closure);

// One line per closure instance, sorted by key: "T <instance>" or
// "F <instance>".
std::string serialize_satisfaction(const SatisfactionClass& s,
                                   const std::vector<FormulaInstance>& closure);

struct ParsedSatisfaction {
  SatisfactionClass marks;
  std::vector<FormulaInstance> closure;
};
ParsedSatisfaction parse_satisfaction(const std::string& text, const Signature& sig = {});

}  // namespace clopen

#endif  // CLOPEN_SATISFACTION_HPP

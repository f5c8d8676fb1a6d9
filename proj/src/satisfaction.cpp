#include "clopen/satisfaction.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "clopen/errors.hpp"

namespace clopen {

SatisfactionClass build_truth_predicate(const Structure& m,
                                        const std::vector<FormulaInstance>& instances) {
  SatisfactionClass s;
  for (const FormulaInstance& inst : instances) {
    if (eval(m, inst)) s.mark_true(inst);
  }
  return s;
}

const char* to_string(TarskiViolation::Kind k) {
  switch (k) {
    case TarskiViolation::Kind::atomic: return "atomic";
    case TarskiViolation::Kind::negation: return "negation";
    case TarskiViolation::Kind::conjunction: return "conjunction";
    case TarskiViolation::Kind::quantifier: return "quantifier";
  }
  return "?";
}

std::vector<TarskiViolation> tarski_check(const Structure& m, const SatisfactionClass& s,
                                          const std::vector<FormulaInstance>& closure) {
  std::set<std::string> in_closure;
  for (const FormulaInstance& c : closure) in_closure.insert(c.key());

  auto mark = [&](const FormulaPtr& closed) -> std::optional<bool> {
    std::string k = print(*closed);
    if (!in_closure.contains(k)) return std::nullopt;
    return s.marked(k);
  };

  std::vector<TarskiViolation> out;
  std::set<std::string> audited;
  for (const FormulaInstance& inst : closure) {
    if (!audited.insert(inst.key()).second) continue;
    const FormulaPtr& f = inst.closed();
    const bool v = s.marked(inst.key());
    switch (f->kind()) {
      case Formula::Kind::membership:
      case Formula::Kind::equality:
      case Formula::Kind::predicate:
        if (v != eval(m, *f)) {
          out.push_back({TarskiViolation::Kind::atomic, inst.key(),
                         v ? "marked true but false in the structure"
                           : "marked false but true in the structure"});
        }
        break;
      case Formula::Kind::negation:
        if (auto sub = mark(f->sub()); sub && *sub == v) {
          out.push_back({TarskiViolation::Kind::negation, inst.key(),
                         "formula and its negation have the same mark"});
        }
        break;
      case Formula::Kind::conjunction: {
        auto l = mark(f->lhs());
        auto r = mark(f->rhs());
        bool bad = v ? ((l && !*l) || (r && !*r)) : (l && *l && r && *r);
        if (bad) {
          out.push_back({TarskiViolation::Kind::conjunction, inst.key(),
                         v ? "conjunction marked true with a false conjunct"
                           : "conjunction marked false with both conjuncts true"});
        }
        break;
      }
      case Formula::Kind::exists: {
        bool any_true = false, all_known = true;
        for (Code b : m.domain()) {
          auto mb = mark(substitute(f->sub(), f->bound_variable(), b));
          if (!mb) {
            all_known = false;
          } else if (*mb) {
            any_true = true;
          }
        }
        if (!v && any_true) {
          out.push_back({TarskiViolation::Kind::quantifier, inst.key(),
                         "existential marked false but an instance is marked true"});
        } else if (v && !any_true && all_known) {
          out.push_back({TarskiViolation::Kind::quantifier, inst.key(),
                         "existential marked true without a marked witness"});
        }
        break;
      }
    }
  }
  return out;
}

std::string serialize_satisfaction(const SatisfactionClass& s,
                                   const std::vector<FormulaInstance>& closure) {
  std::set<std::string> keys;
  for (const FormulaInstance& c : closure) keys.insert(c.key());
  std::string out;
  for (const std::string& k : keys) {
    out += (s.marked(k) ? "T " : "F ") + k + "\n";
  }
  return out;
}

ParsedSatisfaction parse_satisfaction(const std::string& text, const Signature& sig) {
  ParsedSatisfaction out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.size() < 3 || (line[0] != 'T' && line[0] != 'F') || line[1] != ' ') {
      throw ParseError("expected 'T <instance>' or 'F <instance>' on line " +
                           std::to_string(line_no),
                       line_no);
    }
    FormulaInstance inst(parse_formula(line.substr(2), sig));
    if (line[0] == 'T') out.marks.mark_true(inst);
    out.closure.push_back(std::move(inst));
  }
  return out;
}

}  // namespace clopen

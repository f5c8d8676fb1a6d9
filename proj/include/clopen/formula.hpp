#ifndef CLOPEN_FORMULA_HPP
#define CLOPEN_FORMULA_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clopen/universe.hpp"

namespace clopen {

// Reserved binary symbol for the well-founded relation of a recursion.
inline constexpr std::string_view kPrecedesSymbol = "<|";

class Term {
 public:
  static Term variable(std::string name) { return Term(std::move(name), 0); }
  static Term constant(Code c) { return Term({}, c); }

  bool is_variable() const { return !name_.empty(); }
  const std::string& name() const { return name_; }
  Code value() const { return value_; }

  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(std::string name, Code value) : name_(std::move(name)), value_(value) {}

  std::string name_;
  Code value_;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST over the basis {in, =, predicates, !, &, E}. Disjunction,
// implication, biconditional and universal quantification are desugared by
// the parser and never appear here.
class Formula {
 public:
  enum class Kind { membership, equality, predicate, negation, conjunction, exists };

  static FormulaPtr membership(Term a, Term b);
  static FormulaPtr equality(Term a, Term b);
  static FormulaPtr predicate(std::string symbol, std::vector<Term> args);
  static FormulaPtr negation(FormulaPtr sub);
  static FormulaPtr conjunction(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr exists(std::string var, FormulaPtr body);

  // Sugar, desugared on construction.
  static FormulaPtr disjunction(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr implication(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr biconditional(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr forall(std::string var, FormulaPtr body);

  Kind kind() const { return kind_; }
  bool is_atomic() const { return kind_ <= Kind::predicate; }

  // Predicate symbol, or bound variable of an existential.
  const std::string& symbol() const { return symbol_; }
  const std::string& bound_variable() const { return symbol_; }
  const std::vector<Term>& terms() const { return terms_; }
  const FormulaPtr& sub() const { return lhs_; }
  const FormulaPtr& lhs() const { return lhs_; }
  const FormulaPtr& rhs() const { return rhs_; }

  // AST node count; atoms count as one node.
  std::size_t size() const { return size_; }
  std::set<std::string> free_variables() const;
  bool is_closed() const { return free_variables().empty(); }

  Formula(Kind kind, std::string symbol, std::vector<Term> terms,
          FormulaPtr lhs, FormulaPtr rhs);

 private:
  Kind kind_;
  std::string symbol_;
  std::vector<Term> terms_;
  FormulaPtr lhs_;
  FormulaPtr rhs_;
  std::size_t size_;
};

bool equal(const Formula& a, const Formula& b);
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  return equal(*a, *b);
}

// Canonical ASCII rendering; parse_formula(print(f)) is structurally equal
// to f.
std::string print(const Formula& f);
inline std::string print(const FormulaPtr& f) { return print(*f); }

// Replaces free occurrences of var by the constant c.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, Code c);

// Predicate symbol -> arity. The membership and equality symbols are built
// in; "<|" is accepted only when listed.
using Signature = std::map<std::string, unsigned>;

// Grammar (ASCII, whitespace-insensitive):
//   formula := imp ("<->" imp)?
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | ("E"|"A") var "." formula | "(" formula ")" | atom
//   atom    := term ("in"|"="|"<|") term | Pred "(" term ("," term)* ")"
//   term    := var | "#" digits
//   var     := [a-z][a-z0-9_]*   (not "in")
//   Pred    := [A-Z][A-Za-z0-9_]* (not a quantifier prefix)
// Quantifier bodies extend as far right as possible.
// Throws ParseError (syntax, with position) or SignatureError.
FormulaPtr parse_formula(std::string_view text, const Signature& sig = {});

inline constexpr const char* kGrammarVersion = "1";

using Assignment = std::map<std::string, Code>;

// A formula paired with values for its free variables. Two instances are the
// same query when their closed forms print identically, so key() is the
// canonical identity used by satisfaction classes and referees.
class FormulaInstance {
 public:
  FormulaInstance() = default;
  // Restricts the assignment to the free variables; throws
  // MalformedInstanceError if one is missing.
  FormulaInstance(FormulaPtr formula, Assignment assignment = {});

  const FormulaPtr& formula() const { return formula_; }
  const Assignment& assignment() const { return assignment_; }
  // The formula with constants substituted for its free variables.
  const FormulaPtr& closed() const { return closed_; }
  const std::string& key() const { return key_; }
  std::size_t size() const { return formula_->size(); }

 private:
  FormulaPtr formula_;
  Assignment assignment_;
  FormulaPtr closed_;
  std::string key_;
};

inline FormulaInstance closed_instance(FormulaPtr f) {
  return FormulaInstance(std::move(f));
}

}  // namespace clopen

#endif  // CLOPEN_FORMULA_HPP

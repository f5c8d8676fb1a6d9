#include "clopen/formula.hpp"

#include <cctype>

#include "clopen/errors.hpp"

namespace clopen {

std::string Term::to_string() const {
  return is_variable() ? name_ : "#" + std::to_string(value_);
}

Formula::Formula(Kind kind, std::string symbol, std::vector<Term> terms,
                 FormulaPtr lhs, FormulaPtr rhs)
    : kind_(kind),
      symbol_(std::move(symbol)),
      terms_(std::move(terms)),
      lhs_(std::move(lhs)),
      rhs_(std::move(rhs)) {
  size_ = 1 + (lhs_ ? lhs_->size() : 0) + (rhs_ ? rhs_->size() : 0);
}

FormulaPtr Formula::membership(Term a, Term b) {
  return std::make_shared<const Formula>(Kind::membership, "",
                                         std::vector<Term>{std::move(a), std::move(b)},
                                         nullptr, nullptr);
}

FormulaPtr Formula::equality(Term a, Term b) {
  return std::make_shared<const Formula>(Kind::equality, "",
                                         std::vector<Term>{std::move(a), std::move(b)},
                                         nullptr, nullptr);
}

FormulaPtr Formula::predicate(std::string symbol, std::vector<Term> args) {
  return std::make_shared<const Formula>(Kind::predicate, std::move(symbol),
                                         std::move(args), nullptr, nullptr);
}

FormulaPtr Formula::negation(FormulaPtr sub) {
  return std::make_shared<const Formula>(Kind::negation, "", std::vector<Term>{},
                                         std::move(sub), nullptr);
}

FormulaPtr Formula::conjunction(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(Kind::conjunction, "",
                                         std::vector<Term>{}, std::move(lhs),
                                         std::move(rhs));
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
  return std::make_shared<const Formula>(Kind::exists, std::move(var),
                                         std::vector<Term>{}, std::move(body),
                                         nullptr);
}

FormulaPtr Formula::disjunction(FormulaPtr lhs, FormulaPtr rhs) {
  return negation(conjunction(negation(std::move(lhs)), negation(std::move(rhs))));
}

FormulaPtr Formula::implication(FormulaPtr lhs, FormulaPtr rhs) {
  return negation(conjunction(std::move(lhs), negation(std::move(rhs))));
}

FormulaPtr Formula::biconditional(FormulaPtr lhs, FormulaPtr rhs) {
  return conjunction(implication(lhs, rhs), implication(rhs, lhs));
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
  return negation(exists(std::move(var), negation(std::move(body))));
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
    case Formula::Kind::predicate:
      for (const Term& t : f.terms()) {
        if (t.is_variable() && !bound.contains(t.name())) out.insert(t.name());
      }
      return;
    case Formula::Kind::negation:
      collect_free(*f.sub(), bound, out);
      return;
    case Formula::Kind::conjunction:
      collect_free(*f.lhs(), bound, out);
      collect_free(*f.rhs(), bound, out);
      return;
    case Formula::Kind::exists: {
      bool fresh = bound.insert(f.bound_variable()).second;
      collect_free(*f.sub(), bound, out);
      if (fresh) bound.erase(f.bound_variable());
      return;
    }
  }
}

}  // namespace

std::set<std::string> Formula::free_variables() const {
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

bool equal(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.size() != b.size() || a.symbol() != b.symbol() ||
      a.terms() != b.terms()) {
    return false;
  }
  if (a.lhs() && !equal(*a.lhs(), *b.lhs())) return false;
  if (a.rhs() && !equal(*a.rhs(), *b.rhs())) return false;
  return true;
}

namespace {

void print_to(const Formula& f, std::string& out);

void print_group(const Formula& f, std::string& out) {
  if (f.kind() == Formula::Kind::negation) {
    print_to(f, out);
    return;
  }
  out += '(';
  print_to(f, out);
  out += ')';
}

void print_to(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::membership:
      out += f.terms()[0].to_string() + " in " + f.terms()[1].to_string();
      return;
    case Formula::Kind::equality:
      out += f.terms()[0].to_string() + " = " + f.terms()[1].to_string();
      return;
    case Formula::Kind::predicate:
      if (f.symbol() == kPrecedesSymbol && f.terms().size() == 2) {
        out += f.terms()[0].to_string() + " <| " + f.terms()[1].to_string();
        return;
      }
      out += f.symbol() + "(";
      for (std::size_t k = 0; k < f.terms().size(); ++k) {
        if (k) out += ", ";
        out += f.terms()[k].to_string();
      }
      out += ")";
      return;
    case Formula::Kind::negation:
      out += '!';
      print_group(*f.sub(), out);
      return;
    case Formula::Kind::conjunction:
      print_group(*f.lhs(), out);
      out += " & ";
      print_group(*f.rhs(), out);
      return;
    case Formula::Kind::exists:
      out += "E" + f.bound_variable() + ". ";
      print_group(*f.sub(), out);
      return;
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_to(f, out);
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, Code c) {
  switch (f->kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
    case Formula::Kind::predicate: {
      bool hit = false;
      std::vector<Term> terms = f->terms();
      for (Term& t : terms) {
        if (t.is_variable() && t.name() == var) {
          t = Term::constant(c);
          hit = true;
        }
      }
      if (!hit) return f;
      return std::make_shared<const Formula>(f->kind(), f->symbol(),
                                             std::move(terms), nullptr, nullptr);
    }
    case Formula::Kind::negation: {
      FormulaPtr s = substitute(f->sub(), var, c);
      return s == f->sub() ? f : Formula::negation(std::move(s));
    }
    case Formula::Kind::conjunction: {
      FormulaPtr l = substitute(f->lhs(), var, c);
      FormulaPtr r = substitute(f->rhs(), var, c);
      if (l == f->lhs() && r == f->rhs()) return f;
      return Formula::conjunction(std::move(l), std::move(r));
    }
    case Formula::Kind::exists: {
      if (f->bound_variable() == var) return f;
      FormulaPtr s = substitute(f->sub(), var, c);
      return s == f->sub() ? f : Formula::exists(f->bound_variable(), std::move(s));
    }
  }
  return f;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  FormulaPtr parse() {
    FormulaPtr f = formula();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  FormulaPtr formula() {
    FormulaPtr lhs = implication();
    if (accept("<->")) return Formula::biconditional(lhs, implication());
    return lhs;
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (accept("->")) return Formula::implication(lhs, implication());
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (accept("|")) f = Formula::disjunction(f, conjunction());
    return f;
  }

  FormulaPtr conjunction() {
    FormulaPtr f = unary();
    while (accept("&")) f = Formula::conjunction(f, unary());
    return f;
  }

  FormulaPtr unary() {
    skip();
    if (accept("!")) return Formula::negation(unary());
    if (quantifier_ahead()) {
      char q = text_[pos_++];
      std::string var = identifier();
      expect(".");
      FormulaPtr body = formula();
      return q == 'E' ? Formula::exists(var, body) : Formula::forall(var, body);
    }
    if (accept("(")) {
      FormulaPtr f = formula();
      expect(")");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    skip();
    if (pos_ < text_.size() && std::isupper(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t at = pos_;
      std::string sym = symbol_name();
      expect("(");
      std::vector<Term> args{term()};
      while (accept(",")) args.push_back(term());
      expect(")");
      check_signature(sym, args.size(), at);
      return Formula::predicate(sym, std::move(args));
    }
    Term a = term();
    skip();
    if (accept("<|")) {
      std::size_t at = pos_;
      Term b = term();
      check_signature(std::string(kPrecedesSymbol), 2, at);
      return Formula::predicate(std::string(kPrecedesSymbol), {a, b});
    }
    if (accept("=")) return Formula::equality(a, term());
    if (keyword_in()) return Formula::membership(a, term());
    fail("expected 'in', '=' or '<|'");
  }

  Term term() {
    skip();
    if (accept("#")) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (start == pos_) fail("expected digits after '#'");
      return Term::constant(std::stoull(std::string(text_.substr(start, pos_ - start))));
    }
    if (pos_ >= text_.size()) fail("unexpected end of input, expected term");
    return Term::variable(identifier());
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::islower(static_cast<unsigned char>(text_[pos_]))) {
      fail(pos_ >= text_.size() ? "unexpected end of input, expected variable"
                                : "expected variable");
    }
    while (pos_ < text_.size() && (std::islower(static_cast<unsigned char>(text_[pos_])) ||
                                   std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    if (name == "in") {
      pos_ = start;
      fail("'in' is not a variable");
    }
    return name;
  }

  std::string symbol_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // "Ex." / "A y ." : quantifier letter, variable, dot.
  bool quantifier_ahead() {
    if (pos_ >= text_.size() || (text_[pos_] != 'E' && text_[pos_] != 'A')) return false;
    std::size_t p = pos_ + 1;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    if (p >= text_.size() || !std::islower(static_cast<unsigned char>(text_[p]))) return false;
    while (p < text_.size() && (std::islower(static_cast<unsigned char>(text_[p])) ||
                                std::isdigit(static_cast<unsigned char>(text_[p])) ||
                                text_[p] == '_')) {
      ++p;
    }
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == '.';
  }

  bool keyword_in() {
    skip();
    if (text_.substr(pos_, 2) != "in") return false;
    std::size_t after = pos_ + 2;
    if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[after])) ||
                                 text_[after] == '_')) {
      return false;
    }
    pos_ = after;
    return true;
  }

  void check_signature(const std::string& sym, std::size_t arity, std::size_t at) {
    auto it = sig_.find(sym);
    if (it == sig_.end()) {
      throw SignatureError("unknown predicate symbol '" + sym + "' at position " +
                           std::to_string(at));
    }
    if (it->second != arity) {
      throw SignatureError("predicate '" + sym + "' expects " +
                           std::to_string(it->second) + " arguments, got " +
                           std::to_string(arity) + " at position " + std::to_string(at));
    }
  }

  bool accept(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    // "<->" must not be read as "<|" and "->" must not swallow "<->".
    if (tok == "|" && text_.substr(pos_, 2) == "|>") return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) {
      fail(pos_ >= text_.size() ? "unexpected end of input, expected '" + std::string(tok) + "'"
                                : "expected '" + std::string(tok) + "'");
    }
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse();
}

FormulaInstance::FormulaInstance(FormulaPtr formula, Assignment assignment)
    : formula_(std::move(formula)) {
  closed_ = formula_;
  for (const std::string& v : formula_->free_variables()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw MalformedInstanceError("free variable '" + v + "' of " + print(*formula_) +
                                   " is unassigned");
    }
    assignment_.emplace(v, it->second);
    closed_ = substitute(closed_, v, it->second);
  }
  key_ = print(*closed_);
}

}  // namespace clopen

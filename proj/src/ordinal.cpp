#include "clopen/ordinal.hpp"

#include <cctype>

#include "clopen/errors.hpp"

namespace clopen {

Ordinal::Ordinal(std::uint64_t n) {
  if (n != 0) terms_.push_back(OrdinalTerm{Ordinal(), n});
}

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  Ordinal o;
  o.terms_ = std::move(terms);
  o.validate();
  return o;
}

Ordinal Ordinal::omega() { return omega_power(Ordinal(1)); }

Ordinal Ordinal::omega_power(const Ordinal& e) {
  Ordinal o;
  o.terms_.push_back(OrdinalTerm{e, 1});
  return o;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

std::uint64_t Ordinal::finite_value() const {
  return terms_.empty() ? 0 : terms_.back().coefficient;
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

Ordinal Ordinal::successor() const { return *this + Ordinal(1); }

Ordinal Ordinal::operator+(const Ordinal& rhs) const {
  if (rhs.is_zero()) return *this;
  const Ordinal& lead = rhs.terms_.front().exponent;
  Ordinal out;
  for (const OrdinalTerm& t : terms_) {
    auto cmp = ordinal_compare(t.exponent, lead);
    if (cmp > 0) {
      out.terms_.push_back(t);
    } else if (cmp == 0) {
      OrdinalTerm merged = rhs.terms_.front();
      merged.coefficient += t.coefficient;
      out.terms_.push_back(std::move(merged));
      out.terms_.insert(out.terms_.end(), rhs.terms_.begin() + 1,
                        rhs.terms_.end());
      return out;
    } else {
      break;
    }
  }
  out.terms_.insert(out.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return out;
}

void Ordinal::validate() const {
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    terms_[k].exponent.validate();
    if (terms_[k].coefficient == 0) {
      throw InvariantError("CNF coefficient must be positive");
    }
    if (k > 0 && !(ordinal_compare(terms_[k - 1].exponent,
                                   terms_[k].exponent) > 0)) {
      throw InvariantError("CNF exponents must strictly decrease");
    }
  }
}

namespace {

std::strong_ordering compare_unchecked(const Ordinal& x, const Ordinal& y) {
  const auto& a = x.terms();
  const auto& b = y.terms();
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (auto c = compare_unchecked(a[k].exponent, b[k].exponent); c != 0) {
      return c;
    }
    if (auto c = a[k].coefficient <=> b[k].coefficient; c != 0) return c;
  }
  return a.size() <=> b.size();
}

std::string exponent_string(const Ordinal& e) {
  if (e.is_finite()) return std::to_string(e.finite_value());
  if (e == Ordinal::omega()) return "w";
  return "(" + e.to_string() + ")";
}

class OrdinalParser {
 public:
  explicit OrdinalParser(const std::string& text) : text_(text) {}

  Ordinal parse_all() {
    Ordinal o = sum();
    skip();
    if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
    return o;
  }

 private:
  Ordinal sum() {
    Ordinal o = term();
    while (peek() == '+') {
      ++pos_;
      o = o + term();
    }
    return o;
  }

  Ordinal term() {
    if (peek() == 'w') {
      ++pos_;
      Ordinal e(1);
      if (peek() == '^') {
        ++pos_;
        if (peek() == '(') {
          ++pos_;
          e = sum();
          expect(')');
        } else if (peek() == 'w') {
          ++pos_;
          e = Ordinal::omega();
        } else {
          e = Ordinal(natural());
        }
      }
      std::uint64_t c = 1;
      if (peek() == '*') {
        ++pos_;
        c = natural();
        if (c == 0) return Ordinal();
      }
      return Ordinal::from_terms({OrdinalTerm{e, c}});
    }
    return Ordinal(natural());
  }

  std::uint64_t natural() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) throw ParseError("expected ordinal term", pos_);
    return std::stoull(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::strong_ordering ordinal_compare(const Ordinal& x, const Ordinal& y) {
  x.validate();
  y.validate();
  return compare_unchecked(x, y);
}

bool Ordinal::operator==(const Ordinal& rhs) const {
  return terms_ == rhs.terms_;
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const OrdinalTerm& t : terms_) {
    if (!s.empty()) s += "+";
    if (t.exponent.is_zero()) {
      s += std::to_string(t.coefficient);
      continue;
    }
    s += "w";
    if (!(t.exponent == Ordinal(1))) s += "^" + exponent_string(t.exponent);
    if (t.coefficient != 1) s += "*" + std::to_string(t.coefficient);
  }
  return s;
}

Ordinal Ordinal::parse(const std::string& text) {
  return OrdinalParser(text).parse_all();
}

}  // namespace clopen

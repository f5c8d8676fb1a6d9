#ifndef CLOPEN_ORDINAL_HPP
#define CLOPEN_ORDINAL_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace clopen {

struct OrdinalTerm;

// Ordinal below epsilon_0 in Cantor normal form:
//   w^e1 * c1 + w^e2 * c2 + ... with e1 > e2 > ... and every ci > 0.
// Zero is the empty sum.
class Ordinal {
 public:
  Ordinal() = default;
  Ordinal(std::uint64_t n);  // NOLINT: naturals embed implicitly

  // Validates the CNF invariants; throws InvariantError.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);
  static Ordinal omega();
  // w^e
  static Ordinal omega_power(const Ordinal& e);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Only meaningful when is_finite().
  std::uint64_t finite_value() const;
  bool is_successor() const;

  Ordinal successor() const;
  // Ordinal (non-commutative) sum.
  Ordinal operator+(const Ordinal& rhs) const;

  // Throws InvariantError if this or a nested exponent is not in CNF.
  void validate() const;

  // "0", "5", "w", "w*2+1", "w^2+w*3", "w^(w+1)".
  std::string to_string() const;
  // Inverse of to_string; throws ParseError.
  static Ordinal parse(const std::string& text);

  bool operator==(const Ordinal& rhs) const;

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coefficient = 1;

  bool operator==(const OrdinalTerm&) const = default;
};

// Lexicographic comparison on CNF terms; validates both arguments.
std::strong_ordering ordinal_compare(const Ordinal& x, const Ordinal& y);

inline std::strong_ordering operator<=>(const Ordinal& x, const Ordinal& y) {
  return ordinal_compare(x, y);
}

inline const Ordinal& ordinal_max(const Ordinal& a, const Ordinal& b) {
  return ordinal_compare(a, b) < 0 ? b : a;
}

}  // namespace clopen

#endif  // CLOPEN_ORDINAL_HPP

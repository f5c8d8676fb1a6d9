#ifndef CLOPEN_UNIVERSE_HPP
#define CLOPEN_UNIVERSE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace clopen {

// Ackermann code of a hereditarily finite set: i is an element of j iff bit i
// of j is set. Every natural number codes exactly one set.
using Code = std::uint64_t;

inline bool member(Code a, Code b) {
  return a < 64 && ((b >> a) & 1u) != 0;
}

class HFSet {
 public:
  constexpr HFSet() = default;
  constexpr explicit HFSet(Code code) : code_(code) {}

  constexpr Code code() const { return code_; }
  bool contains(HFSet a) const { return member(a.code_, code_); }
  bool empty() const { return code_ == 0; }

  // Elements in ascending code order.
  std::vector<HFSet> elements() const;

  // Nested-brace rendering, e.g. {{}, {{}}} for code 3.
  std::string to_string() const;

  friend constexpr auto operator<=>(HFSet, HFSet) = default;

 private:
  Code code_ = 0;
};

inline bool member(HFSet a, HFSet b) { return b.contains(a); }

// Von Neumann rank of the coded set (0 for the empty set).
unsigned rank_of(Code code);

constexpr unsigned kDefaultMaxRank = 5;

// V_rank: all sets of rank < rank. Its codes are exactly 0..|V_rank|-1, so the
// numeric order on codes doubles as the global well-order.
class Universe {
 public:
  Universe() = default;

  unsigned rank() const { return rank_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Code>& elements() const { return elements_; }
  bool contains(Code c) const { return c < elements_.size(); }

  // Strict global well-order.
  static bool precedes(Code a, Code b) { return a < b; }

  friend Universe build_universe(unsigned rank, unsigned max_rank);
  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  unsigned rank_ = 0;
  std::vector<Code> elements_;
};

// Throws ResourceError when rank exceeds max_rank (or the hard limit of 5,
// beyond which V_n no longer fits in 64-bit codes).
Universe build_universe(unsigned rank, unsigned max_rank = kDefaultMaxRank);

std::string serialize_universe(const Universe& u);
Universe parse_universe(const std::string& text,
                        unsigned max_rank = kDefaultMaxRank);

}  // namespace clopen

#endif  // CLOPEN_UNIVERSE_HPP

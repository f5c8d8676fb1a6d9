#include "clopen/universe.hpp"

#include <algorithm>
#include <sstream>

#include "clopen/errors.hpp"

namespace clopen {

std::vector<HFSet> HFSet::elements() const {
  std::vector<HFSet> out;
  for (Code c = code_, i = 0; c != 0; c >>= 1, ++i) {
    if (c & 1u) out.emplace_back(i);
  }
  return out;
}

std::string HFSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (HFSet e : elements()) {
    if (!first) s += ", ";
    s += e.to_string();
    first = false;
  }
  return s + "}";
}

unsigned rank_of(Code code) {
  unsigned r = 0;
  for (Code c = code, i = 0; c != 0; c >>= 1, ++i) {
    if (c & 1u) r = std::max(r, rank_of(i) + 1);
  }
  return r;
}

Universe build_universe(unsigned rank, unsigned max_rank) {
  if (rank > max_rank || rank > kDefaultMaxRank) {
    throw ResourceError("universe rank " + std::to_string(rank) +
                        " exceeds maximum " +
                        std::to_string(std::min(max_rank, kDefaultMaxRank)));
  }
  std::uint64_t size = 0;
  for (unsigned k = 0; k < rank; ++k) size = std::uint64_t{1} << size;

  Universe u;
  u.rank_ = rank;
  u.elements_.resize(size);
  for (std::uint64_t c = 0; c < size; ++c) u.elements_[c] = c;
  return u;
}

std::string serialize_universe(const Universe& u) {
  return "universe rank=" + std::to_string(u.rank()) + "\n";
}

Universe parse_universe(const std::string& text, unsigned max_rank) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("universe rank=", 0) != 0) {
    throw ParseError("expected 'universe rank=<n>'", 0);
  }
  const std::string digits = header.substr(14);
  if (digits.empty() || digits.find_first_not_of("0123456789") !=
                            std::string::npos) {
    throw ParseError("bad rank '" + digits + "'", 14);
  }
  return build_universe(static_cast<unsigned>(std::stoul(digits)), max_rank);
}

}  // namespace clopen

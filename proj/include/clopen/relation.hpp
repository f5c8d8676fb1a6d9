#ifndef CLOPEN_RELATION_HPP
#define CLOPEN_RELATION_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clopen/universe.hpp"

namespace clopen {

using Edge = std::pair<Code, Code>;  // (a, b) reads a <| b: a precedes b

// Finite binary relation on a carrier. Construction only checks that edge
// endpoints lie in the carrier; acyclicity is what check_wellfounded decides.
class WellFoundedRelation {
 public:
  WellFoundedRelation() = default;
  WellFoundedRelation(std::set<Code> carrier, std::set<Edge> edges);

  const std::set<Code>& carrier() const { return carrier_; }
  const std::set<Edge>& edges() const { return edges_; }

  bool related(Code a, Code b) const { return edges_.contains({a, b}); }
  // Direct predecessors of b, ascending.
  const std::vector<Code>& predecessors(Code b) const;

  // A <|-minimal element of subset (least code among minimal ones), or none
  // if subset is empty or every element has a predecessor inside it.
  std::optional<Code> minimal_element(const std::set<Code>& subset) const;

  // A directed cycle a0 <| a1 <| ... <| a0 (first node not repeated), if any.
  std::optional<std::vector<Code>> find_cycle() const;

  enum class TopoOrder { least_first, greatest_first };
  // Predecessors before successors; ready nodes are taken least-code first
  // (or greatest-code first). Throws WellFoundednessError on a cycle.
  std::vector<Code> topological_order(
      TopoOrder order = TopoOrder::least_first) const;

  friend bool operator==(const WellFoundedRelation& a,
                         const WellFoundedRelation& b) {
    return a.carrier_ == b.carrier_ && a.edges_ == b.edges_;
  }

 private:
  std::set<Code> carrier_;
  std::set<Edge> edges_;
  std::map<Code, std::vector<Code>> preds_;
};

bool check_wellfounded(const WellFoundedRelation& rel);

// Strict total order given by an enumeration, least element first.
class WellOrder {
 public:
  WellOrder() = default;
  // Throws InvariantError on a repeated element.
  explicit WellOrder(std::vector<Code> sequence);

  const std::vector<Code>& sequence() const { return sequence_; }
  std::size_t size() const { return sequence_.size(); }
  bool contains(Code c) const { return index_.contains(c); }
  std::size_t index_of(Code c) const { return index_.at(c); }
  bool precedes(Code a, Code b) const {
    return index_.at(a) < index_.at(b);
  }

  // As a relation: every pair (a, b) with a before b.
  WellFoundedRelation as_relation() const;

  friend bool operator==(const WellOrder& a, const WellOrder& b) {
    return a.sequence_ == b.sequence_;
  }

 private:
  std::vector<Code> sequence_;
  std::map<Code, std::size_t> index_;
};

// Line format:
//   relation
//   node <a>        one per carrier element, ascending
//   edge <a> <b>    one per edge, ascending
std::string serialize_relation(const WellFoundedRelation& rel);
WellFoundedRelation parse_relation(const std::string& text);

}  // namespace clopen

#endif  // CLOPEN_RELATION_HPP

#ifndef CLOPEN_ETR_HPP
#define CLOPEN_ETR_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clopen/formula.hpp"
#include "clopen/relation.hpp"
#include "clopen/satisfaction.hpp"
#include "clopen/structure.hpp"

namespace clopen {

inline constexpr const char* kSolutionSymbol = "F";
inline constexpr const char* kTruthSymbol = "T";

// phi(x, i, F): defines slice F_i from the slices of <|-predecessors of i.
// F may only occur as a binary atom F(j, y); every such atom is read as
// F(j, y) & j <| i, so the rule never sees slice i itself or later slices.
struct RecursionRule {
  FormulaPtr formula;
  std::string x_var = "x";
  std::string i_var = "i";

  // Parses rule text; the signature is `params` plus F/2 and <|/2.
  // Throws SignatureError if free variables other than x and i remain.
  static RecursionRule parse(std::string_view text, const Signature& params = {});
  void validate() const;

  // phi(x, i, F|i) with F(j, y) replaced by F(j, y) & j <| index.
  FormulaPtr relativized(const Term& index) const;
};

// Replaces every atom F(j, y) by F(j, y) & guard(j).
FormulaPtr guard_predicate(const FormulaPtr& f, const std::string& symbol,
                           const std::function<FormulaPtr(const Term&)>& guard);

// Set of pairs (i, x).
class Solution {
 public:
  Solution() = default;
  explicit Solution(std::set<std::pair<Code, Code>> pairs) : pairs_(std::move(pairs)) {}

  void insert(Code i, Code x) { pairs_.emplace(i, x); }
  void erase(Code i, Code x) { pairs_.erase({i, x}); }
  bool contains(Code i, Code x) const { return pairs_.contains({i, x}); }
  std::set<Code> slice(Code i) const;
  const std::set<std::pair<Code, Code>>& pairs() const { return pairs_; }
  Relation as_relation() const;

  friend bool operator==(const Solution&, const Solution&) = default;

 private:
  std::set<std::pair<Code, Code>> pairs_;
};

// "(i, x)" lines, sorted.
std::string serialize_solution(const Solution& s);
Solution parse_solution(const std::string& text);

// m extended by <| := rel and with the carrier added to the domain.
Structure recursion_structure(const Structure& m, const WellFoundedRelation& rel);

// Rank-stratified evaluation: carrier nodes in a topological order, each slice
// computed from the finished slices of its predecessors. Throws
// WellFoundednessError if rel has a cycle.
Solution etr_solve(const Structure& m, const WellFoundedRelation& rel,
                   const RecursionRule& rule,
                   WellFoundedRelation::TopoOrder order =
                       WellFoundedRelation::TopoOrder::least_first);

// Recomputes every slice from f and compares.
bool check_solution(const Structure& m, const WellFoundedRelation& rel,
                    const RecursionRule& rule, const Solution& f);

WellFoundedRelation transitive_closure(const WellFoundedRelation& rel);

// Tree of finite descending sequences of a strict partial order. Node k is
// the sequence nodes[k]; the order relates node indices, s <| t iff s
// properly extends t (so the root () is greatest).
struct TreeOrder {
  std::vector<std::vector<Code>> nodes;
  WellFoundedRelation order;

  std::optional<std::size_t> find(const std::vector<Code>& seq) const;
};

constexpr std::size_t kDefaultNodeBudget = 100000;

// Throws ResourceError when the tree would exceed node_budget nodes.
TreeOrder descending_tree(const WellFoundedRelation& po,
                          std::size_t node_budget = kDefaultNodeBudget);

// s < t iff s properly extends t, or s is smaller at the first disagreement
// (global code order).
bool kleene_brouwer_less(const std::vector<Code>& s, const std::vector<Code>& t);

// Tree node indices in Kleene-Brouwer order, least first. Throws
// InvariantError if a node mentions a code outside u.
WellOrder kleene_brouwer(const TreeOrder& tree, const Universe& u);
WellOrder kleene_brouwer(const TreeOrder& tree);

struct WellOrderAudit {
  bool irreflexive = true;
  bool transitive = true;
  bool total = true;
  bool least_elements = true;  // every sampled nonempty subset has a least element

  bool ok() const { return irreflexive && transitive && total && least_elements; }
};

// Checks the strict order `less` on the carrier pairwise, plus least elements
// in `samples` random nonempty subsets.
WellOrderAudit audit_well_order(const std::vector<Code>& carrier,
                                const std::function<bool(Code, Code)>& less,
                                std::size_t samples, std::uint64_t seed);

// First link of the reduction chain: the same recursion posed on the
// transitive closure. The original relation becomes the parameter predicate
// R, every F(j, y) in the rule is guarded by R(j, i), and <| now names the
// closure.
struct ClosureTransport {
  Structure structure;
  WellFoundedRelation order;
  RecursionRule rule;
};

inline constexpr const char* kOriginalRelationSymbol = "R";

ClosureTransport transport_to_closure(const Structure& m, const WellFoundedRelation& rel,
                                      const RecursionRule& rule);

// Recursion carried to the descending-sequence tree of the closure order.
// Node s with last entry i gets slice F_i, read off its predecessor nodes:
// F(j, y) holds at s iff j <| i and y lies in the slice of some
// predecessor node ending in j. The root gets the empty slice. The result is
// indexed by tree node.
Solution solve_on_tree(const ClosureTransport& ct, const TreeOrder& tree);

// Same transport along the Kleene-Brouwer linearization of the tree.
Solution solve_on_well_order(const ClosureTransport& ct, const TreeOrder& tree,
                             const WellOrder& kb);

// Slice-wise comparison: every non-root node's slice equals F of its last
// entry.
bool tree_solution_matches(const TreeOrder& tree, const Solution& node_solution,
                           const Solution& original, const std::set<Code>& carrier);

// Slices T_i, each a truth predicate for <M, Z, T|i> over a declared closure.
// T(j, n) reads "closure instance n is marked true in slice j" (n is a
// closure index, so only the first |domain| instances can be quoted).
struct IteratedTruthPredicate {
  WellOrder index;
  std::vector<FormulaInstance> closure;
  std::map<Code, SatisfactionClass> slices;
  Structure base;  // M with Z and the index set in its domain

  // base + T := T|i
  Structure structure_at(Code i) const;
};

// Throws SignatureError if a closure instance applies T to a constant slice
// index outside the well-order.
IteratedTruthPredicate iterated_truth(const Structure& m, const WellOrder& index,
                                      const std::string& z_symbol, const Relation& z,
                                      const std::vector<FormulaInstance>& closure);

// Seeded DAG on the codes 0..nodes-1 with edges a <| b only for a < b, each
// present with probability edge_percent / 100.
WellFoundedRelation random_dag(std::uint64_t seed, std::size_t nodes, unsigned edge_percent = 30);

// 0 <| 1 <| ... <| length-1
WellFoundedRelation chain(std::size_t length);

// Seeded rule mixing plain set conditions on x with reads of predecessor
// slices (always through j <| i). Constants stay below `constants`.
RecursionRule random_rule(std::uint64_t seed, Code constants = 4);

}  // namespace clopen

#endif  // CLOPEN_ETR_HPP

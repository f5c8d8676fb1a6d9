#include "clopen/relation.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "clopen/errors.hpp"

namespace clopen {

WellFoundedRelation::WellFoundedRelation(std::set<Code> carrier,
                                         std::set<Edge> edges)
    : carrier_(std::move(carrier)), edges_(std::move(edges)) {
  for (const auto& [a, b] : edges_) {
    if (!carrier_.contains(a) || !carrier_.contains(b)) {
      throw InvariantError("edge " + std::to_string(a) + " " +
                           std::to_string(b) + " leaves the carrier");
    }
    preds_[b].push_back(a);
  }
}

const std::vector<Code>& WellFoundedRelation::predecessors(Code b) const {
  static const std::vector<Code> kNone;
  auto it = preds_.find(b);
  return it == preds_.end() ? kNone : it->second;
}

std::optional<Code> WellFoundedRelation::minimal_element(
    const std::set<Code>& subset) const {
  for (Code b : subset) {
    const auto& ps = predecessors(b);
    if (std::none_of(ps.begin(), ps.end(),
                     [&](Code a) { return subset.contains(a); })) {
      return b;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Code>> WellFoundedRelation::find_cycle() const {
  // Peel off nodes with no remaining predecessors; whatever survives lies on
  // or upstream of a cycle, and walking predecessors inside it must repeat.
  std::map<Code, std::size_t> indeg;
  for (Code c : carrier_) indeg[c] = predecessors(c).size();
  std::map<Code, std::vector<Code>> succs;
  for (const auto& [a, b] : edges_) succs[a].push_back(b);

  std::vector<Code> ready;
  for (auto& [c, d] : indeg) {
    if (d == 0) ready.push_back(c);
  }
  std::set<Code> removed;
  while (!ready.empty()) {
    Code c = ready.back();
    ready.pop_back();
    removed.insert(c);
    for (Code s : succs[c]) {
      if (--indeg[s] == 0) ready.push_back(s);
    }
  }
  if (removed.size() == carrier_.size()) return std::nullopt;

  Code start = 0;
  for (Code c : carrier_) {
    if (!removed.contains(c)) {
      start = c;
      break;
    }
  }
  std::vector<Code> walk;
  std::map<Code, std::size_t> seen;
  Code cur = start;
  while (!seen.contains(cur)) {
    seen[cur] = walk.size();
    walk.push_back(cur);
    for (Code p : predecessors(cur)) {
      if (!removed.contains(p)) {
        cur = p;
        break;
      }
    }
  }
  // walk[seen[cur]..] descends along predecessors; reverse to read as <|.
  std::vector<Code> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen[cur]),
                          walk.end());
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

std::vector<Code> WellFoundedRelation::topological_order(TopoOrder order) const {
  std::map<Code, std::size_t> indeg;
  for (Code c : carrier_) indeg[c] = predecessors(c).size();
  std::map<Code, std::vector<Code>> succs;
  for (const auto& [a, b] : edges_) succs[a].push_back(b);

  std::function<bool(Code, Code)> after = std::greater<Code>();
  if (order == TopoOrder::greatest_first) after = std::less<Code>();
  std::priority_queue<Code, std::vector<Code>, std::function<bool(Code, Code)>>
      ready(after);
  for (auto& [c, d] : indeg) {
    if (d == 0) ready.push(c);
  }
  std::vector<Code> out;
  out.reserve(carrier_.size());
  while (!ready.empty()) {
    Code c = ready.top();
    ready.pop();
    out.push_back(c);
    for (Code s : succs[c]) {
      if (--indeg[s] == 0) ready.push(s);
    }
  }
  if (out.size() != carrier_.size()) {
    throw WellFoundednessError("relation has a directed cycle");
  }
  return out;
}

bool check_wellfounded(const WellFoundedRelation& rel) {
  return !rel.find_cycle().has_value();
}

WellOrder::WellOrder(std::vector<Code> sequence)
    : sequence_(std::move(sequence)) {
  for (std::size_t k = 0; k < sequence_.size(); ++k) {
    if (!index_.emplace(sequence_[k], k).second) {
      throw InvariantError("well-order lists " + std::to_string(sequence_[k]) +
                           " twice");
    }
  }
}

WellFoundedRelation WellOrder::as_relation() const {
  std::set<Edge> edges;
  for (std::size_t a = 0; a < sequence_.size(); ++a) {
    for (std::size_t b = a + 1; b < sequence_.size(); ++b) {
      edges.emplace(sequence_[a], sequence_[b]);
    }
  }
  return WellFoundedRelation(std::set<Code>(sequence_.begin(), sequence_.end()),
                             std::move(edges));
}

std::string serialize_relation(const WellFoundedRelation& rel) {
  std::string out = "relation\n";
  for (Code c : rel.carrier()) out += "node " + std::to_string(c) + "\n";
  for (const auto& [a, b] : rel.edges()) {
    out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
  }
  return out;
}

namespace {

Code parse_code(std::istringstream& in, std::size_t line_no) {
  std::string tok;
  if (!(in >> tok) || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("expected decimal code on line " + std::to_string(line_no),
                     line_no);
  }
  return std::stoull(tok);
}

}  // namespace

WellFoundedRelation parse_relation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::set<Code> carrier;
  std::set<Edge> edges;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "relation") {
      header = true;
    } else if (kw == "node") {
      carrier.insert(parse_code(ls, line_no));
    } else if (kw == "edge") {
      Code a = parse_code(ls, line_no);
      Code b = parse_code(ls, line_no);
      carrier.insert(a);
      carrier.insert(b);
      edges.emplace(a, b);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line_no);
    }
  }
  if (!header) throw ParseError("missing 'relation' header", 0);
  return WellFoundedRelation(std::move(carrier), std::move(edges));
}

}  // namespace clopen

#include "clopen/etr.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "clopen/errors.hpp"

namespace clopen {

namespace {

void check_rule_atoms(const Formula& f, const RecursionRule& rule) {
  switch (f.kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
      return;
    case Formula::Kind::predicate:
      if (f.symbol() == kSolutionSymbol && f.terms().size() != 2) {
        throw SignatureError("F must be applied to two arguments in " + print(f));
      }
      return;
    case Formula::Kind::negation:
      check_rule_atoms(*f.sub(), rule);
      return;
    case Formula::Kind::conjunction:
      check_rule_atoms(*f.lhs(), rule);
      check_rule_atoms(*f.rhs(), rule);
      return;
    case Formula::Kind::exists:
      if (f.bound_variable() == rule.x_var || f.bound_variable() == rule.i_var) {
        throw SignatureError("rule quantifies over its designated variable '" +
                             f.bound_variable() + "'");
      }
      check_rule_atoms(*f.sub(), rule);
      return;
  }
}

FormulaPtr rename_predicate(const FormulaPtr& f, const std::string& from,
                            const std::string& to) {
  switch (f->kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
      return f;
    case Formula::Kind::predicate:
      return f->symbol() == from ? Formula::predicate(to, f->terms()) : f;
    case Formula::Kind::negation:
      return Formula::negation(rename_predicate(f->sub(), from, to));
    case Formula::Kind::conjunction:
      return Formula::conjunction(rename_predicate(f->lhs(), from, to),
                                  rename_predicate(f->rhs(), from, to));
    case Formula::Kind::exists:
      return Formula::exists(f->bound_variable(), rename_predicate(f->sub(), from, to));
  }
  return f;
}

}  // namespace

RecursionRule RecursionRule::parse(std::string_view text, const Signature& params) {
  Signature sig = params;
  sig[kSolutionSymbol] = 2;
  sig[std::string(kPrecedesSymbol)] = 2;
  RecursionRule rule;
  rule.formula = parse_formula(text, sig);
  rule.validate();
  return rule;
}

void RecursionRule::validate() const {
  if (!formula) throw SignatureError("empty recursion rule");
  for (const std::string& v : formula->free_variables()) {
    if (v != x_var && v != i_var) {
      throw SignatureError("recursion rule has stray free variable '" + v + "'");
    }
  }
  check_rule_atoms(*formula, *this);
}

FormulaPtr guard_predicate(const FormulaPtr& f, const std::string& symbol,
                           const std::function<FormulaPtr(const Term&)>& guard) {
  switch (f->kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
      return f;
    case Formula::Kind::predicate:
      if (f->symbol() != symbol) return f;
      return Formula::conjunction(f, guard(f->terms()[0]));
    case Formula::Kind::negation:
      return Formula::negation(guard_predicate(f->sub(), symbol, guard));
    case Formula::Kind::conjunction:
      return Formula::conjunction(guard_predicate(f->lhs(), symbol, guard),
                                  guard_predicate(f->rhs(), symbol, guard));
    case Formula::Kind::exists:
      return Formula::exists(f->bound_variable(), guard_predicate(f->sub(), symbol, guard));
  }
  return f;
}

FormulaPtr RecursionRule::relativized(const Term& index) const {
  return guard_predicate(formula, kSolutionSymbol, [&](const Term& j) {
    return Formula::predicate(std::string(kPrecedesSymbol), {j, index});
  });
}

std::set<Code> Solution::slice(Code i) const {
  std::set<Code> out;
  for (auto it = pairs_.lower_bound({i, 0}); it != pairs_.end() && it->first == i; ++it) {
    out.insert(it->second);
  }
  return out;
}

Relation Solution::as_relation() const { return Relation::binary(pairs_); }

std::string serialize_solution(const Solution& s) {
  std::string out;
  for (const auto& [i, x] : s.pairs()) {
    out += "(" + std::to_string(i) + ", " + std::to_string(x) + ")\n";
  }
  return out;
}

Solution parse_solution(const std::string& text) {
  Solution s;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    unsigned long long i = 0, x = 0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "(%llu, %llu)%c", &i, &x, &tail) != 2) {
      throw ParseError("expected '(i, x)' on line " + std::to_string(line_no), line_no);
    }
    s.insert(i, x);
  }
  return s;
}

Structure recursion_structure(const Structure& m, const WellFoundedRelation& rel) {
  return m.with_domain(rel.carrier())
      .with_predicate(std::string(kPrecedesSymbol), Relation::binary(rel.edges()));
}

namespace {

std::set<Code> compute_slice(const Structure& base, const RecursionRule& rule, Code i,
                             const Relation& restricted) {
  Structure s = base.with_predicate(kSolutionSymbol, restricted);
  std::set<Code> out;
  for (Code x : s.domain()) {
    if (eval(s, *rule.formula, {{rule.x_var, x}, {rule.i_var, i}})) out.insert(x);
  }
  return out;
}

Relation restrict_to_predecessors(const std::map<Code, std::set<Code>>& slices,
                                  const std::vector<Code>& preds) {
  Relation r(2);
  for (Code j : preds) {
    auto it = slices.find(j);
    if (it == slices.end()) continue;
    for (Code y : it->second) r.insert(std::vector<Code>{j, y});
  }
  return r;
}

}  // namespace

Solution etr_solve(const Structure& m, const WellFoundedRelation& rel,
                   const RecursionRule& rule, WellFoundedRelation::TopoOrder order) {
  rule.validate();
  const std::vector<Code> topo = rel.topological_order(order);
  const Structure base = recursion_structure(m, rel);
  std::map<Code, std::set<Code>> slices;
  for (Code i : topo) {
    slices[i] = compute_slice(base, rule, i, restrict_to_predecessors(slices, rel.predecessors(i)));
  }
  Solution out;
  for (const auto& [i, xs] : slices) {
    for (Code x : xs) out.insert(i, x);
  }
  return out;
}

bool check_solution(const Structure& m, const WellFoundedRelation& rel,
                    const RecursionRule& rule, const Solution& f) {
  const Structure base = recursion_structure(m, rel);
  std::map<Code, std::set<Code>> slices;
  for (const auto& [i, x] : f.pairs()) {
    if (!rel.carrier().contains(i) || !base.in_domain(x)) return false;
    slices[i].insert(x);
  }
  for (Code i : rel.carrier()) {
    const auto expected =
        compute_slice(base, rule, i, restrict_to_predecessors(slices, rel.predecessors(i)));
    auto it = slices.find(i);
    const std::set<Code> actual = it == slices.end() ? std::set<Code>{} : it->second;
    if (expected != actual) return false;
  }
  return true;
}

WellFoundedRelation transitive_closure(const WellFoundedRelation& rel) {
  std::map<Code, std::vector<Code>> succs;
  for (const auto& [a, b] : rel.edges()) succs[a].push_back(b);
  std::set<Edge> closed;
  for (Code a : rel.carrier()) {
    std::set<Code> seen;
    std::deque<Code> todo(succs[a].begin(), succs[a].end());
    while (!todo.empty()) {
      Code b = todo.front();
      todo.pop_front();
      if (!seen.insert(b).second) continue;
      closed.emplace(a, b);
      for (Code c : succs[b]) todo.push_back(c);
    }
  }
  return WellFoundedRelation(rel.carrier(), std::move(closed));
}

std::optional<std::size_t> TreeOrder::find(const std::vector<Code>& seq) const {
  auto it = std::find(nodes.begin(), nodes.end(), seq);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

TreeOrder descending_tree(const WellFoundedRelation& po, std::size_t node_budget) {
  TreeOrder tree;
  std::map<std::vector<Code>, Code> index;
  std::deque<std::vector<Code>> todo{{}};
  while (!todo.empty()) {
    std::vector<Code> s = std::move(todo.front());
    todo.pop_front();
    if (tree.nodes.size() >= node_budget) {
      throw ResourceError("descending-sequence tree exceeds node budget of " +
                          std::to_string(node_budget));
    }
    index.emplace(s, tree.nodes.size());
    tree.nodes.push_back(s);
    const std::vector<Code> next =
        s.empty() ? std::vector<Code>(po.carrier().begin(), po.carrier().end())
                  : po.predecessors(s.back());
    for (Code a : next) {
      std::vector<Code> t = s;
      t.push_back(a);
      todo.push_back(std::move(t));
    }
  }
  std::set<Code> carrier;
  std::set<Edge> edges;
  for (const auto& [seq, k] : index) {
    carrier.insert(k);
    std::vector<Code> prefix = seq;
    while (!prefix.empty()) {
      prefix.pop_back();
      edges.emplace(k, index.at(prefix));
    }
  }
  tree.order = WellFoundedRelation(std::move(carrier), std::move(edges));
  return tree;
}

bool kleene_brouwer_less(const std::vector<Code>& s, const std::vector<Code>& t) {
  const std::size_t n = std::min(s.size(), t.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (s[k] != t[k]) return Universe::precedes(s[k], t[k]);
  }
  return s.size() > t.size();
}

WellOrder kleene_brouwer(const TreeOrder& tree) {
  std::vector<Code> idx(tree.nodes.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](Code a, Code b) {
    return kleene_brouwer_less(tree.nodes[a], tree.nodes[b]);
  });
  return WellOrder(std::move(idx));
}

WellOrder kleene_brouwer(const TreeOrder& tree, const Universe& u) {
  for (const auto& seq : tree.nodes) {
    for (Code c : seq) {
      if (!u.contains(c)) {
        throw InvariantError("tree node mentions #" + std::to_string(c) +
                             " outside the universe");
      }
    }
  }
  return kleene_brouwer(tree);
}

WellOrderAudit audit_well_order(const std::vector<Code>& carrier,
                                const std::function<bool(Code, Code)>& less,
                                std::size_t samples, std::uint64_t seed) {
  WellOrderAudit audit;
  for (Code a : carrier) {
    if (less(a, a)) audit.irreflexive = false;
    for (Code b : carrier) {
      if (a != b && less(a, b) == less(b, a)) audit.total = false;
      if (!less(a, b)) continue;
      for (Code c : carrier) {
        if (less(b, c) && !less(a, c)) audit.transitive = false;
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples && !carrier.empty(); ++s) {
    std::vector<Code> subset;
    for (Code a : carrier) {
      if (rng() % 2) subset.push_back(a);
    }
    if (subset.empty()) subset.push_back(carrier[rng() % carrier.size()]);
    bool found = std::any_of(subset.begin(), subset.end(), [&](Code a) {
      return std::none_of(subset.begin(), subset.end(), [&](Code b) { return less(b, a); });
    });
    if (!found) audit.least_elements = false;
  }
  return audit;
}

ClosureTransport transport_to_closure(const Structure& m, const WellFoundedRelation& rel,
                                      const RecursionRule& rule) {
  rule.validate();
  ClosureTransport ct;
  ct.order = transitive_closure(rel);
  ct.structure = recursion_structure(m, ct.order)
                     .with_predicate(kOriginalRelationSymbol, Relation::binary(rel.edges()));
  ct.rule = rule;
  FormulaPtr renamed =
      rename_predicate(rule.formula, std::string(kPrecedesSymbol), kOriginalRelationSymbol);
  const Term index = Term::variable(rule.i_var);
  ct.rule.formula = guard_predicate(renamed, kSolutionSymbol, [&](const Term& j) {
    return Formula::predicate(kOriginalRelationSymbol, {j, index});
  });
  return ct;
}

namespace {

// Slice of node c is computed at label(c) from the slices of its predecessor
// nodes, with F(j, .) drawn from predecessor nodes labeled j <| label(c).
Solution solve_labeled(const ClosureTransport& ct, const std::vector<Code>& processing,
                       const std::function<std::vector<Code>(Code)>& preds,
                       const std::function<std::optional<Code>(Code)>& label) {
  std::map<Code, std::set<Code>> slices;
  for (Code c : processing) {
    const auto i = label(c);
    if (!i) {
      slices[c];
      continue;
    }
    Relation f(2);
    for (Code p : preds(c)) {
      const auto j = label(p);
      if (!j || !ct.order.related(*j, *i)) continue;
      for (Code y : slices.at(p)) f.insert(std::vector<Code>{*j, y});
    }
    slices[c] = compute_slice(ct.structure, ct.rule, *i, f);
  }
  Solution out;
  for (const auto& [c, xs] : slices) {
    for (Code x : xs) out.insert(c, x);
  }
  return out;
}

std::optional<Code> last_entry(const TreeOrder& tree, Code node) {
  const auto& seq = tree.nodes.at(node);
  if (seq.empty()) return std::nullopt;
  return seq.back();
}

}  // namespace

Solution solve_on_tree(const ClosureTransport& ct, const TreeOrder& tree) {
  const auto processing = tree.order.topological_order();
  return solve_labeled(
      ct, processing, [&](Code c) { return tree.order.predecessors(c); },
      [&](Code c) { return last_entry(tree, c); });
}

Solution solve_on_well_order(const ClosureTransport& ct, const TreeOrder& tree,
                             const WellOrder& kb) {
  const auto& seq = kb.sequence();
  return solve_labeled(
      ct, seq,
      [&](Code c) {
        return std::vector<Code>(seq.begin(),
                                 seq.begin() + static_cast<std::ptrdiff_t>(kb.index_of(c)));
      },
      [&](Code c) { return last_entry(tree, c); });
}

bool tree_solution_matches(const TreeOrder& tree, const Solution& node_solution,
                           const Solution& original, const std::set<Code>& carrier) {
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const auto& seq = tree.nodes[k];
    if (seq.empty()) {
      if (!node_solution.slice(k).empty()) return false;
      continue;
    }
    if (!carrier.contains(seq.back())) return false;
    if (node_solution.slice(k) != original.slice(seq.back())) return false;
  }
  return true;
}

namespace {

void check_truth_indices(const Formula& f, const WellOrder& index) {
  switch (f.kind()) {
    case Formula::Kind::membership:
    case Formula::Kind::equality:
      return;
    case Formula::Kind::predicate:
      if (f.symbol() == kTruthSymbol) {
        if (f.terms().size() != 2) throw SignatureError("T takes two arguments");
        const Term& j = f.terms()[0];
        if (!j.is_variable() && !index.contains(j.value())) {
          throw SignatureError("T refers to slice #" + std::to_string(j.value()) +
                               " outside the index set");
        }
      }
      return;
    case Formula::Kind::negation:
      check_truth_indices(*f.sub(), index);
      return;
    case Formula::Kind::conjunction:
      check_truth_indices(*f.lhs(), index);
      check_truth_indices(*f.rhs(), index);
      return;
    case Formula::Kind::exists:
      check_truth_indices(*f.sub(), index);
      return;
  }
}

Relation truth_before(const IteratedTruthPredicate& t, Code i) {
  Relation r(2);
  for (Code j : t.index.sequence()) {
    if (j == i) break;
    auto it = t.slices.find(j);
    if (it == t.slices.end()) continue;
    for (std::size_t n = 0; n < t.closure.size(); ++n) {
      if (t.base.in_domain(n) && it->second.marked(t.closure[n])) {
        r.insert(std::vector<Code>{j, n});
      }
    }
  }
  return r;
}

}  // namespace

Structure IteratedTruthPredicate::structure_at(Code i) const {
  return base.with_predicate(kTruthSymbol, truth_before(*this, i));
}

IteratedTruthPredicate iterated_truth(const Structure& m, const WellOrder& index,
                                      const std::string& z_symbol, const Relation& z,
                                      const std::vector<FormulaInstance>& closure) {
  for (const FormulaInstance& inst : closure) check_truth_indices(*inst.closed(), index);

  IteratedTruthPredicate t;
  t.index = index;
  t.closure = closure;
  const std::set<Code> carrier(index.sequence().begin(), index.sequence().end());
  t.base = m.with_domain(carrier).with_predicate(z_symbol, z);

  // Inner omega: within a slice, settle smaller formulas first.
  std::vector<FormulaInstance> by_size = closure;
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const FormulaInstance& a, const FormulaInstance& b) {
                     return a.closed()->size() < b.closed()->size();
                   });
  for (Code i : index.sequence()) {
    t.slices[i] = build_truth_predicate(t.structure_at(i), by_size);
  }
  return t;
}

WellFoundedRelation random_dag(std::uint64_t seed, std::size_t nodes, unsigned edge_percent) {
  std::mt19937_64 rng(seed);
  std::set<Code> carrier;
  std::set<Edge> edges;
  for (Code b = 0; b < nodes; ++b) {
    carrier.insert(b);
    for (Code a = 0; a < b; ++a) {
      if (rng() % 100 < edge_percent) edges.emplace(a, b);
    }
  }
  return WellFoundedRelation(std::move(carrier), std::move(edges));
}

WellFoundedRelation chain(std::size_t length) {
  std::set<Code> carrier;
  std::set<Edge> edges;
  for (Code b = 0; b < length; ++b) {
    carrier.insert(b);
    if (b > 0) edges.emplace(b - 1, b);
  }
  return WellFoundedRelation(std::move(carrier), std::move(edges));
}

RecursionRule random_rule(std::uint64_t seed, Code constants) {
  std::mt19937_64 rng(seed);
  auto c = [&] { return "#" + std::to_string(rng() % constants); };
  const std::vector<std::function<std::string()>> plain = {
      [&] { return "x in " + c(); },
      [&] { return c() + " in x"; },
      [&] { return "x = " + c(); },
      [&] { return "x in i"; },
      [&] { return "Ey. (y in x & y in i)"; },
  };
  const std::vector<std::function<std::string()>> reads = {
      [&] { return std::string("Ej. (j <| i & F(j, x))"); },
      [&] { return std::string("Ej. (j <| i & !F(j, x))"); },
      [&] { return std::string("Ej. (j <| i & Ey. (F(j, y) & x in y))"); },
      [&] { return std::string("Ej. (j <| i & Ey. (F(j, y) & y in x))"); },
      [&] { return "Aj. (j <| i -> F(j, " + c() + "))"; },
      [&] { return std::string("Aj. (j <| i -> !F(j, x))"); },
  };
  const char* joins[] = {" & ", " | "};
  std::string text = "(" + reads[rng() % reads.size()]() + ")";
  const std::size_t extra = 1 + rng() % 2;
  for (std::size_t k = 0; k < extra; ++k) {
    const bool read = rng() % 3 == 0;
    std::string piece = read ? reads[rng() % reads.size()]() : plain[rng() % plain.size()]();
    if (rng() % 4 == 0) piece = "!(" + piece + ")";
    text += joins[rng() % 2] + std::string("(") + piece + ")";
  }
  return RecursionRule::parse(text);
}

}  // namespace clopen

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "clopen/errors.hpp"
#include "clopen/etr.hpp"

using namespace clopen;

namespace {

// Iterates F := Phi(F) from the empty set until nothing changes. Phi only
// reads predecessor slices, so the fixpoint is reached after height rounds.
Solution naive_fixpoint(const Structure& m, const WellFoundedRelation& rel,
                        const RecursionRule& rule) {
  const Structure base = recursion_structure(m, rel);
  const FormulaPtr phi = rule.relativized(Term::variable(rule.i_var));
  Solution f;
  for (;;) {
    const Structure s = base.with_predicate(kSolutionSymbol, f.as_relation());
    Solution next;
    for (Code i : rel.carrier()) {
      for (Code x : base.domain()) {
        if (eval(s, *phi, {{rule.x_var, x}, {rule.i_var, i}})) next.insert(i, x);
      }
    }
    if (next == f) return f;
    f = std::move(next);
  }
}

std::set<Edge> floyd_warshall(const WellFoundedRelation& rel) {
  const std::vector<Code> nodes(rel.carrier().begin(), rel.carrier().end());
  const std::size_t n = nodes.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) reach[a][b] = rel.related(nodes[a], nodes[b]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (reach[a][k] && reach[k][b]) reach[a][b] = true;
      }
    }
  }
  std::set<Edge> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (reach[a][b]) out.emplace(nodes[a], nodes[b]);
    }
  }
  return out;
}

void descending(const WellFoundedRelation& po, std::vector<Code>& s,
                std::set<std::vector<Code>>& out) {
  out.insert(s);
  for (Code c : po.carrier()) {
    if (!s.empty() && !po.related(c, s.back())) continue;
    s.push_back(c);
    descending(po, s, out);
    s.pop_back();
  }
}

bool proper_prefix(const std::vector<Code>& p, const std::vector<Code>& s) {
  return p.size() < s.size() && std::equal(p.begin(), p.end(), s.begin());
}

// Post-order walk with children in increasing code order.
void post_order(const WellFoundedRelation& po, std::vector<Code>& s,
                std::vector<std::vector<Code>>& out) {
  for (Code c : po.carrier()) {
    if (!s.empty() && !po.related(c, s.back())) continue;
    s.push_back(c);
    post_order(po, s, out);
    s.pop_back();
  }
  out.push_back(s);
}

}  // namespace

TEST_CASE("etr_solve matches the naive fixpoint") {
  const Structure m(build_universe(2));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rel = random_dag(seed, 12);
    const auto rule = random_rule(seed);
    CAPTURE(print(rule.formula));
    CHECK(etr_solve(m, rel, rule) == naive_fixpoint(m, rel, rule));
  }
  const auto big = random_dag(99, 100, 4);
  const auto rule = RecursionRule::parse("x = #1 | Ej. (j <| i & Ey. (F(j, y) & x in y))");
  const Solution sol = etr_solve(m, big, rule);
  CHECK(sol == naive_fixpoint(m, big, rule));
  CHECK(check_solution(m, big, rule, sol));
}

TEST_CASE("etr_solve examples") {
  const Structure m(build_universe(3));
  const auto constant = RecursionRule::parse("x = #0");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rel = random_dag(seed, 6);
    const Solution sol = etr_solve(m, rel, constant);
    for (Code i : rel.carrier()) CHECK(sol.slice(i) == std::set<Code>{0});
  }
  const auto accumulate = RecursionRule::parse("x = #0 | Ej. (j <| i & F(j, x))");
  const Solution sol = etr_solve(m, chain(3), accumulate);
  CHECK(sol == Solution({{0, 0}, {1, 0}, {2, 0}}));
  CHECK(etr_solve(m, chain(3), accumulate, WellFoundedRelation::TopoOrder::greatest_first) == sol);
}

TEST_CASE("check_solution rejects tampering") {
  const Structure m(build_universe(2));
  const auto rel = chain(4);
  const auto shift = RecursionRule::parse("Ej. (j <| i & x = j)");
  Solution sol = etr_solve(m, rel, shift);
  CHECK(sol.slice(2) == std::set<Code>{1});
  CHECK(check_solution(m, rel, shift, sol));
  CHECK_FALSE(check_solution(m, WellFoundedRelation(rel.carrier(), {}), shift, sol));
  sol.erase(2, 1);
  CHECK_FALSE(check_solution(m, rel, shift, sol));
  CHECK(parse_solution(serialize_solution(etr_solve(m, rel, shift))) == etr_solve(m, rel, shift));
  const WellFoundedRelation cycle({0, 1}, {{0, 1}, {1, 0}});
  CHECK_THROWS_AS(etr_solve(m, cycle, shift), WellFoundednessError);
}

TEST_CASE("rule validation") {
  CHECK_THROWS_AS(RecursionRule::parse("F(x)"), SignatureError);
  CHECK_THROWS_AS(RecursionRule::parse("Ex. (F(i, x))"), SignatureError);
  CHECK_THROWS_AS(RecursionRule::parse("x in y"), SignatureError);
  CHECK_NOTHROW(RecursionRule::parse("Z(x)", Signature{{"Z", 1}}));
  const auto r = RecursionRule::parse("F(#0, x)");
  CHECK(print(r.relativized(Term::constant(2))) == "(F(#0, x)) & (#0 <| #2)");
}

TEST_CASE("transitive closure examples") {
  CHECK(transitive_closure(chain(3)).edges() == std::set<Edge>{{0, 1}, {1, 2}, {0, 2}});
  const auto closed = transitive_closure(chain(5));
  CHECK(transitive_closure(closed) == closed);
}

TEST_CASE("transitive closure matches Floyd-Warshall") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto rel = random_dag(seed, 25, 8);
    CHECK(transitive_closure(rel).edges() == floyd_warshall(rel));
  }
}

TEST_CASE("descending tree") {
  using Seqs = std::set<std::vector<Code>>;
  auto seqs = [](const TreeOrder& t) { return Seqs(t.nodes.begin(), t.nodes.end()); };
  CHECK(seqs(descending_tree(WellFoundedRelation({4}, {}))) == Seqs{{}, {4}});
  CHECK(seqs(descending_tree(chain(2))) == Seqs{{}, {0}, {1}, {1, 0}});
  CHECK(seqs(descending_tree(WellFoundedRelation({0, 1}, {}))) == Seqs{{}, {0}, {1}});
  const TreeOrder t = descending_tree(chain(3));
  CHECK(t.nodes.size() == 7);
  CHECK(t.find({2, 1, 0}).has_value());
  CHECK_FALSE(t.find({2, 0}).has_value());
  CHECK(descending_tree(transitive_closure(chain(12))).nodes.size() == 4096);
  CHECK_THROWS_AS(descending_tree(chain(3), 5), ResourceError);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto po = transitive_closure(random_dag(seed, 6, 40));
    const TreeOrder tree = descending_tree(po);
    std::set<std::vector<Code>> expect;
    std::vector<Code> s;
    descending(po, s, expect);
    CHECK(std::set<std::vector<Code>>(tree.nodes.begin(), tree.nodes.end()) == expect);
    CHECK(tree.nodes.size() == expect.size());
    for (std::size_t a = 0; a < tree.nodes.size(); ++a) {
      for (std::size_t b = 0; b < tree.nodes.size(); ++b) {
        CHECK(tree.order.related(a, b) == proper_prefix(tree.nodes[b], tree.nodes[a]));
      }
    }
  }
}

TEST_CASE("Kleene-Brouwer order") {
  CHECK(kleene_brouwer_less({0, 1}, {0}));
  CHECK(kleene_brouwer_less({0}, {1}));
  CHECK(kleene_brouwer_less({1}, {}));
  CHECK_FALSE(kleene_brouwer_less({}, {1}));
  CHECK_FALSE(kleene_brouwer_less({1}, {1}));

  const WellFoundedRelation two({0, 1}, {{0, 1}});
  const TreeOrder t = descending_tree(two);
  std::vector<std::vector<Code>> seq;
  const WellOrder kb_two = kleene_brouwer(t);
  for (Code k : kb_two.sequence()) seq.push_back(t.nodes[k]);
  CHECK(seq == std::vector<std::vector<Code>>{{0}, {1, 0}, {1}, {}});

  std::size_t trees = 0;
  for (std::uint64_t seed = 0; trees < 1000; ++seed) {
    const auto po = transitive_closure(random_dag(seed, 2 + seed % 5, 50));
    const TreeOrder tree = descending_tree(po);
    const WellOrder kb = kleene_brouwer(tree);
    std::vector<std::vector<Code>> expect;
    std::vector<Code> s;
    post_order(po, s, expect);
    std::vector<std::vector<Code>> got;
    for (Code k : kb.sequence()) got.push_back(tree.nodes[k]);
    REQUIRE(got == expect);
    if (seed % 50 == 0) {
      const auto audit = audit_well_order(
          kb.sequence(), [&](Code a, Code b) { return kb.precedes(a, b); }, 8, seed);
      CHECK(audit.ok());
    }
    ++trees;
  }
  CHECK_THROWS_AS(kleene_brouwer(descending_tree(chain(20)), build_universe(2)), InvariantError);
}

TEST_CASE("audit catches a non-order") {
  const auto audit =
      audit_well_order({0, 1, 2}, [](Code a, Code b) { return a != b; }, 4, 1);
  const bool is_order = audit.irreflexive && audit.transitive;
  CHECK_FALSE(is_order);
  CHECK_FALSE(audit.ok());
}

TEST_CASE("transport along the reduction chain") {
  const Structure m(build_universe(2));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rel = random_dag(seed, 5);
    const auto rule = random_rule(seed);
    const Solution sol = etr_solve(m, rel, rule);
    const ClosureTransport ct = transport_to_closure(m, rel, rule);
    CHECK(ct.order.edges() == floyd_warshall(rel));
    CHECK(etr_solve(ct.structure, ct.order, ct.rule) == sol);
    const TreeOrder tree = descending_tree(ct.order);
    const Solution on_tree = solve_on_tree(ct, tree);
    CHECK(tree_solution_matches(tree, on_tree, sol, rel.carrier()));
    CHECK(solve_on_well_order(ct, tree, kleene_brouwer(tree)) == on_tree);
  }
}

TEST_CASE("iterated truth") {
  const Structure m(build_universe(3));
  const Signature sig{{"Z", 1}, {kTruthSymbol, 2}};
  const Relation z = Relation::unary({1});
  std::vector<FormulaInstance> closure;
  for (const char* text : {"#0 in #1", "Z(#1)", "#1 in #0", "T(#0, #0)", "Ex. (T(#0, x))",
                           "!(T(#0, #2))", "Ex. (Z(x) & T(#1, x))"}) {
    closure.push_back(closed_instance(parse_formula(text, sig)));
  }
  auto oracle = [&](const Relation& t) {
    const Structure s = m.with_predicate("Z", z).with_predicate(kTruthSymbol, t);
    std::set<std::string> out;
    for (const auto& c : closure) {
      if (eval(s, c)) out.insert(c.key());
    }
    return out;
  };
  auto marked = [&](const SatisfactionClass& s) {
    std::set<std::string> out;
    for (const auto& [k, _] : s.entries()) out.insert(k);
    return out;
  };

  SUBCASE("single point") {
    closure.pop_back();
    const auto it = iterated_truth(m, WellOrder({0}), "Z", z, closure);
    CHECK(marked(it.slices.at(0)) == oracle(Relation(2)));
  }
  SUBCASE("two points") {
    const auto it = iterated_truth(m, WellOrder({0, 1}), "Z", z, closure);
    const auto s0 = oracle(Relation(2));
    CHECK(marked(it.slices.at(0)) == s0);
    std::set<Edge> t0;
    for (std::size_t n = 0; n < closure.size() && n < 4; ++n) {
      if (s0.contains(closure[n].key())) t0.emplace(0, n);
    }
    const auto s1 = oracle(Relation::binary(t0));
    CHECK(marked(it.slices.at(1)) == s1);
    CHECK(s1.contains("T(#0, #0)"));
    CHECK(s1.contains("Ex. (T(#0, x))"));
    CHECK_FALSE(s0.contains("T(#0, #0)"));
    for (Code i : {0, 1}) CHECK(tarski_check(it.structure_at(i), it.slices.at(i), closure).empty());
    // Slice 1 consults exactly the stored slice 0.
    CHECK(*it.structure_at(1).predicate(kTruthSymbol) == Relation::binary(t0));
    CHECK(it.structure_at(0).predicate(kTruthSymbol)->size() == 0);
  }
  SUBCASE("slice index outside the order") {
    auto bad = closure;
    bad.push_back(closed_instance(parse_formula("T(#3, #0)", sig)));
    CHECK_THROWS_AS(iterated_truth(m, WellOrder({0, 1}), "Z", z, bad), SignatureError);
  }
}

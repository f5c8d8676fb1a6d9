#include <doctest.h>

#include <map>
#include <random>

#include "clopen/errors.hpp"
#include "clopen/etr.hpp"
#include "clopen/relation.hpp"

using namespace clopen;

namespace {

// Colour-marking depth-first search.
bool dfs_has_cycle(const WellFoundedRelation& r) {
  std::map<Code, std::vector<Code>> succ;
  for (const auto& [a, b] : r.edges()) succ[a].push_back(b);
  std::map<Code, int> colour;
  std::function<bool(Code)> visit = [&](Code a) {
    colour[a] = 1;
    for (Code b : succ[a]) {
      if (colour[b] == 1) return true;
      if (colour[b] == 0 && visit(b)) return true;
    }
    colour[a] = 2;
    return false;
  };
  for (Code a : r.carrier()) {
    if (colour[a] == 0 && visit(a)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("well-foundedness examples") {
  CHECK(check_wellfounded(WellFoundedRelation({0, 1, 2}, {})));
  const WellFoundedRelation loop({0}, {{0, 0}});
  CHECK_FALSE(check_wellfounded(loop));
  CHECK(loop.find_cycle() == std::vector<Code>{0});
  CHECK_THROWS_AS(loop.topological_order(), WellFoundednessError);
  CHECK_THROWS_AS(WellFoundedRelation({0}, {{0, 1}}), InvariantError);
}

TEST_CASE("cycle detection agrees with depth-first search") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    auto dag = random_dag(rng(), 50, 5);
    std::set<Edge> edges = dag.edges();
    const bool back = round % 2 == 0;
    if (back && !edges.empty()) {
      auto [a, b] = *std::next(edges.begin(), rng() % edges.size());
      edges.emplace(b, a);
    }
    const WellFoundedRelation r(dag.carrier(), edges);
    CHECK(check_wellfounded(r) == !dfs_has_cycle(r));
    if (auto cyc = r.find_cycle()) {
      for (std::size_t k = 0; k < cyc->size(); ++k) {
        CHECK(r.related((*cyc)[k], (*cyc)[(k + 1) % cyc->size()]));
      }
    } else {
      const auto order = r.topological_order();
      std::map<Code, std::size_t> pos;
      for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
      for (const auto& [a, b] : r.edges()) CHECK(pos[a] < pos[b]);
    }
  }
}

TEST_CASE("minimal elements and orders") {
  const WellFoundedRelation r({0, 1, 2, 3}, {{2, 1}, {3, 1}, {1, 0}});
  CHECK(r.minimal_element({0, 1}) == Code(1));
  CHECK(r.minimal_element({0, 1, 2, 3}) == Code(2));
  CHECK(r.topological_order() == std::vector<Code>{2, 3, 1, 0});
  CHECK(r.topological_order(WellFoundedRelation::TopoOrder::greatest_first) ==
        std::vector<Code>{3, 2, 1, 0});
  CHECK(parse_relation(serialize_relation(r)) == r);
}

TEST_CASE("well orders") {
  const WellOrder w({3, 0, 2});
  CHECK(w.precedes(3, 2));
  CHECK_FALSE(w.precedes(2, 0));
  CHECK(w.as_relation().edges().size() == 3);
  CHECK_THROWS_AS(WellOrder({1, 1}), InvariantError);
}

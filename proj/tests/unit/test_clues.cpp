#include <doctest.h>

#include <limits>
#include <set>

#include "layoutgame/clues.hpp"
#include "support.hpp"

using namespace layoutgame;
using namespace testing;

namespace {

/// Brute-force count of paths made only of edges in `allowed`.
std::uint64_t paths_within(const Network& net, const std::set<std::size_t>& allowed) {
  std::uint64_t count = 0;
  oracle::for_each_simple_path(net, [&](const auto&, const auto& edges) {
    for (auto e : edges) {
      if (!allowed.count(e)) return;
    }
    ++count;
  });
  return count;
}

std::set<std::size_t> downward_set(const Network& net, const Layout& l) {
  std::set<std::size_t> s;
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    if (net.directed(e) && oracle::downward(l.positions[net.tail(e)], l.positions[net.head(e)], 15)) s.insert(e);
  }
  return s;
}

}  // namespace

TEST_CASE("DP clue examples") {
  const ScoringParams params;
  auto chain = make_network({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK_FALSE(dp_clue(*chain, make_layout({{0, 0}, {0, 300}, {0, 600}}), params).has_value());

  auto single = make_network({"a", "b"}, {{"a", "b"}});
  auto up = dp_clue(*single, make_layout({{0, 300}, {0, 0}}), params);
  REQUIRE(up.has_value());
  CHECK(up->node_ids == std::vector<std::string>{"a", "b"});
  CHECK(up->edge_ids == std::vector<std::string>{"e0"});
  CHECK(up->expected_gain == 1.0);

  auto bent = dp_clue(*chain, make_layout({{0, 0}, {0, 300}, {0, 100}}), params);
  REQUIRE(bent.has_value());
  CHECK(*bent->expected_gain >= 2.0);
  CHECK(bent->node_ids.back() == "c");
  CHECK(bent->criterion == Criterion::dp);
}

TEST_CASE("DP clue skips reorientations that would close a cycle") {
  // a -> b -> a with a above b: forcing b -> a downward is not realisable.
  auto net = make_network({"a", "b"}, {{"a", "b"}, {"b", "a"}});
  CHECK_FALSE(dp_clue(*net, make_layout({{0, 0}, {0, 300}}), ScoringParams{}).has_value());
}

TEST_CASE("DP clues are sound and deterministic on random instances") {
  Rng rng(83);
  int served = 0;
  for (int i = 0; i < 200; ++i) {
    auto net = random_network(rng, 2 + rng.index(7), rng.uniform(0.15, 0.5), 0.1);
    const Layout l = random_real_layout(rng, net->node_count());
    const auto clue = dp_clue(*net, l, ScoringParams{});
    if (!clue) continue;
    ++served;
    auto allowed = downward_set(*net, l);
    const auto before = paths_within(*net, allowed);
    bool has_upward = false;
    for (const auto& id : clue->edge_ids) {
      const auto e = *net->find_edge(id);
      has_upward = has_upward || !allowed.count(e);
      allowed.insert(e);
    }
    CHECK(has_upward);
    const auto after = paths_within(*net, allowed);
    CHECK(after > before);
    CHECK(static_cast<double>(after - before) == *clue->expected_gain);
    // Path shape: consecutive edges join consecutive nodes.
    REQUIRE(clue->node_ids.size() == clue->edge_ids.size() + 1);
    for (std::size_t k = 0; k < clue->edge_ids.size(); ++k) {
      const auto& e = net->edges()[*net->find_edge(clue->edge_ids[k])];
      CHECK(e.tail == clue->node_ids[k]);
      CHECK(e.head == clue->node_ids[k + 1]);
    }
    CHECK(dp_clue(*net, l, ScoringParams{}) == clue);
  }
  CHECK(served > 50);
}

TEST_CASE("EC clue examples") {
  auto two = make_network({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  CHECK_FALSE(ec_clue(*two, make_layout({{0, 0}, {10, 0}, {0, 10}, {10, 10}})).has_value());
  auto one = ec_clue(*two, make_layout({{0, 0}, {10, 10}, {0, 10}, {10, 0}}));
  REQUIRE(one.has_value());
  CHECK(one->edge_ids == std::vector<std::string>{"e0", "e1"});
  CHECK(one->node_ids == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK_FALSE(one->expected_gain.has_value());

  // Two separate crossings; the second involves a hub with extra edges.
  auto net = make_network({"a", "b", "c", "d", "p", "q", "r", "s", "x", "y"},
                          {{"p", "q"}, {"r", "s"}, {"a", "b"}, {"c", "d"}, {"p", "x"}, {"p", "y"}});
  const Layout l = make_layout({{0, 0}, {100, 100}, {0, 100}, {100, 0},              // a b c d
                                {1000, 1000}, {1100, 1100}, {1000, 1100}, {1100, 1000},  // p q r s
                                {3000, 3000}, {3000, 4000}});
  auto best = ec_clue(*net, l);
  REQUIRE(best.has_value());
  CHECK(best->edge_ids == std::vector<std::string>{"e2", "e3"});
  CHECK(best->metric == 4.0);
}

TEST_CASE("EC, ND and NED clues match brute-force minima") {
  Rng rng(89);
  for (int i = 0; i < 200; ++i) {
    auto net = random_network(rng, 2 + rng.index(9), rng.uniform(0.1, 0.5), 0.3);
    const Layout l = random_grid_layout(rng, net->node_count());

    std::optional<std::size_t> min_degree;
    for (std::size_t e = 0; e < net->edge_count(); ++e) {
      for (std::size_t f = e + 1; f < net->edge_count(); ++f) {
        if (!oracle::crosses(*net, l, e, f)) continue;
        const std::size_t d = net->degree(net->tail(e)) + net->degree(net->head(e)) + net->degree(net->tail(f)) +
                              net->degree(net->head(f));
        min_degree = min_degree ? std::min(*min_degree, d) : d;
      }
    }
    const auto ec = ec_clue(*net, l);
    CHECK(ec.has_value() == min_degree.has_value());
    if (ec) CHECK(*ec->metric == static_cast<double>(*min_degree));

    double min_pair = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < net->node_count(); ++u) {
      for (std::size_t v = u + 1; v < net->node_count(); ++v) {
        if (!net->adjacent(u, v)) min_pair = std::min(min_pair, std::hypot(l.positions[u].x - l.positions[v].x,
                                                                           l.positions[u].y - l.positions[v].y));
      }
    }
    const auto nd = nd_clue(*net, l);
    CHECK(nd.has_value() == std::isfinite(min_pair));
    if (nd) CHECK(*nd->metric == min_pair);

    double min_node_edge = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < net->node_count(); ++u) {
      for (std::size_t e = 0; e < net->edge_count(); ++e) {
        if (net->incident(e, u)) continue;
        min_node_edge = std::min(min_node_edge, oracle::segment_distance(l.positions[u], l.positions[net->tail(e)],
                                                                         l.positions[net->head(e)]));
      }
    }
    const auto ned = ned_clue(*net, l);
    CHECK(ned.has_value() == std::isfinite(min_node_edge));
    if (ned) CHECK(*ned->metric == doctest::Approx(min_node_edge).epsilon(1e-12));
  }
}

TEST_CASE("EL clue examples") {
  const ScoringParams params;
  auto net = make_network({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  auto short_wins = el_clue(*net, make_layout({{0, 0}, {100, 0}, {0, 100}, {4200, 5700}}), params);
  REQUIRE(short_wins.has_value());
  CHECK(short_wins->edge_ids == std::vector<std::string>{"e0"});
  CHECK(short_wins->rationale == "el_too_short");
  auto long_wins = el_clue(*net, make_layout({{0, 0}, {400, 0}, {0, 100}, {0, 4100}}), params);
  REQUIRE(long_wins.has_value());
  CHECK(long_wins->edge_ids == std::vector<std::string>{"e1"});
  CHECK_FALSE(el_clue(*make_network({"a"}, {}), make_layout({{0, 0}}), params).has_value());
}

TEST_CASE("ND and NED clue examples") {
  auto k3 = make_network({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK_FALSE(nd_clue(*k3, make_layout({{0, 0}, {10, 0}, {20, 0}})).has_value());
  auto ab = make_network({"a", "b", "c"}, {{"a", "b"}});
  auto nd = nd_clue(*ab, make_layout({{0, 0}, {10, 0}, {5000, 0}}));
  REQUIRE(nd.has_value());
  CHECK(nd->node_ids == std::vector<std::string>{"b", "c"});
  CHECK(nd->metric == 4990.0);

  CHECK_FALSE(ned_clue(*make_network({"a", "b"}, {{"a", "b"}}), make_layout({{0, 0}, {1000, 0}})).has_value());
  auto four = make_network({"a", "b", "c", "d"}, {{"a", "b"}});
  auto ned = ned_clue(*four, make_layout({{0, 0}, {1000, 0}, {500, 900}, {500, 100}}));
  REQUIRE(ned.has_value());
  CHECK(ned->node_ids == std::vector<std::string>{"d"});
  CHECK(ned->edge_ids == std::vector<std::string>{"e0"});
  CHECK(ned->metric == 100.0);
  auto on = ned_clue(*four, make_layout({{0, 0}, {1000, 0}, {500, 0}, {500, 100}}));
  REQUIRE(on.has_value());
  CHECK(on->node_ids == std::vector<std::string>{"c"});
  CHECK(on->metric == 0.0);
}

TEST_CASE("clue_for dispatches on the mode") {
  auto net = make_network({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  const Layout l = make_layout({{0, 0}, {10, 10}, {0, 10}, {10, 0}});
  for (Criterion c : kCriteria) {
    auto clue = clue_for(c, *net, l, ScoringParams{});
    REQUIRE(clue.has_value());
    CHECK(clue->criterion == c);
  }
}

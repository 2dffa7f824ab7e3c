#include <doctest.h>

#include "layoutgame/score_state.hpp"
#include "support.hpp"

using namespace layoutgame;
using namespace testing;

namespace {

void check_matches_full(const ScoreState& state, const Scorer& scorer) {
  const auto full = scorer.score(state.layout());
  CHECK(state.criteria() == full.scores);
  CHECK(state.overall() == full.overall);
  CHECK(state.in_bounds() == full.in_bounds);
}

}  // namespace

TEST_CASE("incremental rescoring equals full recompute after every move") {
  Rng rng(43);
  for (int g = 0; g < 40; ++g) {
    auto net = random_network(rng, 2 + rng.index(10), rng.uniform(0.1, 0.5), 0.2);
    const Scorer scorer(net);
    const bool grid = g % 2 == 0;
    ScoreState state(scorer, grid ? random_grid_layout(rng, net->node_count())
                                  : random_real_layout(rng, net->node_count()));
    check_matches_full(state, scorer);
    for (int k = 0; k < 60; ++k) {
      const NodeIndex v = rng.index(net->node_count());
      Point p;
      if (k % 17 == 16) {
        p = {5000.0 + 1 + rng.uniform(0, 100), rng.uniform(0, 6000)};  // leave the box
      } else if (grid) {
        p = random_grid_layout(rng, 1).positions[0];
      } else {
        p = {rng.uniform(0, 5000), rng.uniform(0, 6000)};
      }
      state.move_node(v, p);
      check_matches_full(state, scorer);
    }
  }
}

TEST_CASE("incremental rescoring on a fixture") {
  auto net = load_fixture("g1_like");
  const Scorer scorer(net);
  Rng rng(47);
  ScoreState state(scorer, random_real_layout(rng, net->node_count()));
  for (int k = 0; k < 300; ++k) {
    state.move_node(rng.index(net->node_count()), {rng.uniform(0, 5000), rng.uniform(0, 6000)});
  }
  check_matches_full(state, scorer);
  std::uint64_t crossings = 0;
  for (EdgeIndex e = 0; e < net->edge_count(); ++e) {
    for (EdgeIndex f = e + 1; f < net->edge_count(); ++f) crossings += segments_cross(*net, state.layout(), e, f);
  }
  CHECK(state.crossing_pairs() == crossings);
  CHECK(state.downward_paths() == count_downward_paths(*net, state.layout(), ScoringParams{}));
}

TEST_CASE("reset and moving back restore the exact score") {
  auto net = load_fixture("cycle_rich_30");
  const Scorer scorer(net);
  Rng rng(53);
  const Layout start = random_real_layout(rng, net->node_count());
  ScoreState state(scorer, start);
  const auto before = state.breakdown();
  const Point old = state.position(4);
  state.move_node(4, {10, 10});
  state.move_node(4, old);
  CHECK(state.breakdown() == before);

  state.move_node(7, {20, 20});
  state.reset(start);
  CHECK(state.breakdown() == before);
  CHECK(state.layout() == start);
}

TEST_CASE("out-of-box moves zero everything and moving back restores it") {
  auto net = load_fixture("chain3");
  const Scorer scorer(net);
  const auto doc = load_layout(read_file(fixture_path("chain3_down.layout.json")), *net);
  ScoreState state(scorer, doc.layout);
  const auto inside = state.breakdown();
  state.move_node(2, {5001, 600});
  const auto outside = state.breakdown(&inside);
  CHECK(outside.scores == CriterionScores{0, 0, 0, 0, 0});
  for (std::size_t i = 0; i < kCriterionCount; ++i) CHECK(outside.deltas[i] == -inside.display[i]);
  state.move_node(2, doc.layout.positions[2]);
  CHECK(state.breakdown() == inside);
}

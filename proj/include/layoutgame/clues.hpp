#pragma once

#include <optional>
#include <string>
#include <vector>

#include "layoutgame/scoring.hpp"

namespace layoutgame {

/// A small set of highlighted elements whose repositioning should raise one
/// criterion. Ids refer to the clue's network.
struct Clue {
  Criterion criterion = Criterion::dp;
  std::vector<std::string> node_ids;
  std::vector<std::string> edge_ids;
  /// DP only: increase in the downward path count if the path's edges all
  /// pointed downward.
  std::optional<double> expected_gain;
  /// Value the clue was selected on (degree sum, distance, edge cost).
  std::optional<double> metric;
  std::string rationale;

  friend bool operator==(const Clue&, const Clue&) = default;
};

struct ClueParams {
  std::size_t dp_max_path_edges = 6;
  /// Bound on enumerated candidate paths; enumeration order is deterministic.
  std::size_t dp_max_candidates = 200'000;
};

/// Directed path with at least one non-downward edge whose counterfactual
/// reorientation (path edges forced downward, all other edges frozen)
/// strictly increases the downward path count. Paths whose forced
/// orientation would close a directed cycle of downward edges are not
/// realisable and are skipped. Best gain wins; ties go to fewer non-downward
/// edges, then to the lexicographically smaller node id sequence.
std::optional<Clue> dp_clue(const Network& net, const Layout& layout, const ScoringParams& params,
                            const ClueParams& clue_params = {});

/// Crossing pair with the smallest total endpoint degree.
std::optional<Clue> ec_clue(const Network& net, const Layout& layout);

/// Edge with the largest cost; penalised short edges outrank all others.
std::optional<Clue> el_clue(const Network& net, const Layout& layout, const ScoringParams& params);

/// Closest pair of unconnected nodes.
std::optional<Clue> nd_clue(const Network& net, const Layout& layout);

/// Closest node and edge not incident on it.
std::optional<Clue> ned_clue(const Network& net, const Layout& layout);

std::optional<Clue> clue_for(Criterion mode, const Network& net, const Layout& layout,
                             const ScoringParams& params, const ClueParams& clue_params = {});

/// Downward path count with the given edges forced downward and every other
/// edge keeping its current status; nullopt if that orientation is cyclic.
std::optional<std::uint64_t> counterfactual_downward_paths(const Network& net, const Layout& layout,
                                                           const ScoringParams& params,
                                                           const std::vector<EdgeIndex>& forced);

}  // namespace layoutgame

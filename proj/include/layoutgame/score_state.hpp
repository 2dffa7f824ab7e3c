#pragma once

#include <cstdint>
#include <vector>

#include "layoutgame/scoring.hpp"

namespace layoutgame {

/// A layout together with the per-element terms of every criterion, updated
/// incrementally when a single node moves.
///
/// After a move only the affected terms are recomputed: crossing flags of
/// pairs involving an incident edge, costs of incident edges, and nearest
/// neighbour / nearest edge minima whose witness changed. The aggregate
/// scores are always re-summed from the term arrays in index order, so the
/// result is bit-identical to Scorer::score on the same layout.
///
/// The Scorer must outlive the state.
class ScoreState {
 public:
  ScoreState(const Scorer& scorer, Layout layout);

  const Scorer& scorer() const { return *scorer_; }
  const Layout& layout() const { return layout_; }
  Point position(NodeIndex v) const { return layout_.positions[v]; }

  void move_node(NodeIndex v, Point p);
  void reset(Layout layout);

  bool in_bounds() const { return out_of_box_ == 0; }
  const CriterionScores& criteria() const { return scores_; }
  double overall() const { return overall_; }
  std::uint64_t downward_paths() const { return downward_paths_; }
  std::uint64_t crossing_pairs() const { return crossings_; }
  const std::vector<char>& downward_flags() const { return downward_; }

  ScoreBreakdown breakdown(const ScoreBreakdown* previous = nullptr) const {
    return scorer_->breakdown(scores_, in_bounds(), previous);
  }

 private:
  void rebuild();
  void refresh_node_minimum(NodeIndex u);
  void refresh_edge_minimum(NodeIndex u);
  void aggregate();
  bool crossing(EdgeIndex e, EdgeIndex f) const { return crossing_[e * edge_count_ + f] != 0; }
  void set_crossing(EdgeIndex e, EdgeIndex f, bool value);

  const Scorer* scorer_;
  Layout layout_;
  std::size_t edge_count_ = 0;
  std::size_t out_of_box_ = 0;

  std::vector<char> downward_;
  std::uint64_t downward_paths_ = 0;
  std::vector<char> crossing_;  // edge_count x edge_count, symmetric
  std::uint64_t crossings_ = 0;
  std::vector<double> edge_costs_;
  std::vector<double> node_min_;
  std::vector<NodeIndex> node_arg_;
  std::vector<double> edge_min_;
  std::vector<EdgeIndex> edge_arg_;

  CriterionScores scores_{};
  double overall_ = 0.0;
};

}  // namespace layoutgame

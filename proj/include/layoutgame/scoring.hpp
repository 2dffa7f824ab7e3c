#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "layoutgame/network.hpp"

namespace layoutgame {

enum class Criterion { dp, ec, el, nd, ned };

inline constexpr std::array<Criterion, 5> kCriteria{Criterion::dp, Criterion::ec, Criterion::el,
                                                    Criterion::nd, Criterion::ned};
inline constexpr std::size_t kCriterionCount = kCriteria.size();

inline constexpr std::size_t index_of(Criterion c) { return static_cast<std::size_t>(c); }
std::string_view to_string(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view text);

/// Requester weights for the overall score.
struct Priorities {
  std::array<double, kCriterionCount> weights{400.0, 3.0, 1.0, 1.0, 1.0};

  double operator[](Criterion c) const { return weights[index_of(c)]; }
  double& operator[](Criterion c) { return weights[index_of(c)]; }
  double total() const;
  /// Throws ContractViolation unless all weights are finite and >= 0 with at
  /// least one positive.
  void validate() const;

  friend bool operator==(const Priorities&, const Priorities&) = default;
};

enum class PathScope {
  all_paths,         // every simple directed path of length >= 1
  source_to_target,  // only paths from a source-role node to a target-role node
};

struct ScoringParams {
  double theta_min_degrees = 15.0;
  double min_edge_length = 300.0;
  double short_edge_penalty = 10000.0;
  std::uint64_t path_count_cap = 10'000'000;
  PathScope path_scope = PathScope::all_paths;

  /// Throws ContractViolation when the penalty does not exceed the box
  /// diagonal or a value is out of range.
  void validate(const BoundingBox& box) const;

  friend bool operator==(const ScoringParams&, const ScoringParams&) = default;
};

using CriterionScores = std::array<double, kCriterionCount>;
using DisplayScores = std::array<int, kCriterionCount>;

inline constexpr double kDisplayScale = 10000.0;

/// round(score * 10000).
int display_value(double score);

struct ScoreBreakdown {
  CriterionScores scores{};
  double overall = 0.0;
  DisplayScores display{};
  DisplayScores deltas{};  // display units since the previous breakdown
  double overall_delta = 0.0;
  bool in_bounds = true;

  double operator[](Criterion c) const { return scores[index_of(c)]; }
  int display_of(Criterion c) const { return display[index_of(c)]; }

  friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

/// Weighted sum, display values and deltas against `previous` when given.
ScoreBreakdown make_breakdown(const CriterionScores& scores, const Priorities& priorities, bool in_bounds,
                              const ScoreBreakdown* previous = nullptr);

// Individual criteria. Every function returns 0 for an out-of-bounds layout.

/// Number of all-downward directed paths of length >= 1 (restricted to
/// source-to-target paths under PathScope::source_to_target).
std::uint64_t count_downward_paths(const Network& net, const Layout& layout, const ScoringParams& params);

/// Number of simple directed paths of length >= 1, layout independent.
/// Throws PathCountCapExceeded once enumeration passes params.path_count_cap.
std::uint64_t count_simple_paths(const Network& net, const ScoringParams& params);

double dp_score(const Network& net, const Layout& layout, const ScoringParams& params, std::uint64_t simple_paths);
double dp_score(const Network& net, const Layout& layout, const ScoringParams& params);
double ec_score(const Network& net, const Layout& layout);
double el_score(const Network& net, const Layout& layout, const ScoringParams& params);
double nd_score(const Network& net, const Layout& layout);
double ned_score(const Network& net, const Layout& layout);

/// Binds a network to its scoring configuration and caches the simple-path
/// count, which never changes for a given network.
class Scorer {
 public:
  Scorer(std::shared_ptr<const Network> network, ScoringParams params = {}, Priorities priorities = {});

  const Network& network() const { return *network_; }
  const std::shared_ptr<const Network>& network_ptr() const { return network_; }
  const ScoringParams& params() const { return params_; }
  const Priorities& priorities() const { return priorities_; }
  std::uint64_t simple_path_count() const { return simple_paths_; }

  CriterionScores criteria(const Layout& layout) const;
  ScoreBreakdown score(const Layout& layout, const ScoreBreakdown* previous = nullptr) const;
  ScoreBreakdown breakdown(const CriterionScores& scores, bool in_bounds,
                           const ScoreBreakdown* previous = nullptr) const {
    return make_breakdown(scores, priorities_, in_bounds, previous);
  }

 private:
  std::shared_ptr<const Network> network_;
  ScoringParams params_;
  Priorities priorities_;
  std::uint64_t simple_paths_ = 0;
};

namespace detail {

// Shared per-element building blocks. The incremental scorer keeps the same
// per-element arrays and aggregates them through these functions so both
// routes produce bit-identical results.

inline constexpr double kExcluded = -1.0;  // marker in per-node minimum arrays

double edge_cost(double length, const ScoringParams& params);
double el_from_costs(std::span<const double> costs, double diagonal);
double ec_from_crossings(std::size_t edge_count, std::uint64_t crossing_pairs);
/// Average of the non-excluded minima, each normalised by the diagonal.
double average_minimum(std::span<const double> minima, double diagonal);
double dp_from_counts(std::uint64_t downward, std::uint64_t simple);

double nearest_unconnected(const Network& net, const Layout& layout, NodeIndex u);
double nearest_nonincident_edge(const Network& net, const Layout& layout, NodeIndex u);

/// Counts paths in the subgraph of edges flagged downward. Returns nullopt if
/// the flagged subgraph has a directed cycle.
std::optional<std::uint64_t> count_flagged_paths(const Network& net, const std::vector<char>& downward,
                                                 PathScope scope);

std::vector<char> downward_flags(const Network& net, const Layout& layout, double theta_min_degrees);

}  // namespace detail

}  // namespace layoutgame

#include "layoutgame/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layoutgame/errors.hpp"

namespace layoutgame {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

}  // namespace

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::dp: return "DP";
    case Criterion::ec: return "EC";
    case Criterion::el: return "EL";
    case Criterion::nd: return "ND";
    case Criterion::ned: return "NED";
  }
  return "DP";
}

std::optional<Criterion> parse_criterion(std::string_view text) {
  for (Criterion c : kCriteria) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

double Priorities::total() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

void Priorities::validate() const {
  bool any_positive = false;
  for (Criterion c : kCriteria) {
    const double w = (*this)[c];
    if (!std::isfinite(w) || w < 0.0) {
      throw ContractViolation("priority for " + std::string(to_string(c)) + " must be a finite value >= 0");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw ContractViolation("at least one priority must be positive");
  }
}

void ScoringParams::validate(const BoundingBox& box) const {
  if (!(theta_min_degrees >= 0.0 && theta_min_degrees <= 90.0)) {
    throw ContractViolation("theta_min must lie in [0, 90] degrees");
  }
  if (!(min_edge_length >= 0.0)) {
    throw ContractViolation("min_edge_length must be >= 0");
  }
  if (!(short_edge_penalty > box.diagonal())) {
    throw ContractViolation("short_edge_penalty must exceed the bounding box diagonal");
  }
  if (path_count_cap == 0) {
    throw ContractViolation("path_count_cap must be positive");
  }
}

int display_value(double score) { return static_cast<int>(std::lround(score * kDisplayScale)); }

ScoreBreakdown make_breakdown(const CriterionScores& scores, const Priorities& priorities, bool in_bounds,
                              const ScoreBreakdown* previous) {
  ScoreBreakdown b;
  b.in_bounds = in_bounds;
  b.scores = scores;
  for (Criterion c : kCriteria) {
    const std::size_t i = index_of(c);
    b.overall += priorities[c] * scores[i];
    b.display[i] = display_value(scores[i]);
  }
  if (previous != nullptr) {
    for (std::size_t i = 0; i < kCriterionCount; ++i) {
      b.deltas[i] = b.display[i] - previous->display[i];
    }
    b.overall_delta = b.overall - previous->overall;
  }
  return b;
}

namespace detail {

double edge_cost(double length, const ScoringParams& params) {
  return length >= params.min_edge_length ? length : params.short_edge_penalty;
}

double el_from_costs(std::span<const double> costs, double diagonal) {
  if (costs.empty()) return 1.0;
  double sum = 0.0;
  for (double c : costs) sum += c / diagonal;
  return std::max(0.0, 1.0 - sum / static_cast<double>(costs.size()));
}

double ec_from_crossings(std::size_t edge_count, std::uint64_t crossing_pairs) {
  if (edge_count < 2) return 1.0;
  const double pairs = static_cast<double>(edge_count) * static_cast<double>(edge_count - 1) / 2.0;
  const double non_crossing = pairs - static_cast<double>(crossing_pairs);
  return non_crossing / pairs;
}

double average_minimum(std::span<const double> minima, double diagonal) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (double m : minima) {
    if (m == kExcluded) continue;
    sum += m / diagonal;
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double dp_from_counts(std::uint64_t downward, std::uint64_t simple) {
  if (simple == 0) return 0.0;
  return std::min(1.0, static_cast<double>(downward) / static_cast<double>(simple));
}

double nearest_unconnected(const Network& net, const Layout& layout, NodeIndex u) {
  double best = kExcluded;
  const Point pu = layout.positions[u];
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    if (v == u || net.adjacent(u, v)) continue;
    const double d = distance(pu, layout.positions[v]);
    if (best == kExcluded || d < best) best = d;
  }
  return best;
}

double nearest_nonincident_edge(const Network& net, const Layout& layout, NodeIndex u) {
  double best = kExcluded;
  const Point pu = layout.positions[u];
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (net.incident(e, u)) continue;
    const double d = point_segment_distance(pu, layout.positions[net.tail(e)], layout.positions[net.head(e)]);
    if (best == kExcluded || d < best) best = d;
  }
  return best;
}

std::optional<std::uint64_t> count_flagged_paths(const Network& net, const std::vector<char>& downward,
                                                 PathScope scope) {
  const std::size_t n = net.node_count();
  std::vector<std::size_t> indegree(n, 0);
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (downward[e]) ++indegree[net.head(e)];
  }
  std::vector<NodeIndex> order;
  order.reserve(n);
  for (NodeIndex v = 0; v < n; ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (EdgeIndex e : net.out_edges(order[i])) {
      if (downward[e] && --indegree[net.head(e)] == 0) order.push_back(net.head(e));
    }
  }
  if (order.size() != n) {
    return std::nullopt;
  }

  // paths_from[v]: qualifying downward paths starting at v.
  std::vector<std::uint64_t> paths_from(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeIndex v = *it;
    std::uint64_t total = 0;
    for (EdgeIndex e : net.out_edges(v)) {
      if (!downward[e]) continue;
      const NodeIndex u = net.head(e);
      const bool ends_here =
          scope == PathScope::all_paths || net.nodes()[u].role == NodeRole::target;
      total = saturating_add(total, saturating_add(ends_here ? 1 : 0, paths_from[u]));
    }
    paths_from[v] = total;
  }
  std::uint64_t total = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    if (scope == PathScope::source_to_target && net.nodes()[v].role != NodeRole::source) continue;
    total = saturating_add(total, paths_from[v]);
  }
  return total;
}

std::vector<char> downward_flags(const Network& net, const Layout& layout, double theta_min_degrees) {
  std::vector<char> flags(net.edge_count(), 0);
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (net.directed(e)) {
      flags[e] = is_downward(layout.positions[net.tail(e)], layout.positions[net.head(e)], theta_min_degrees);
    }
  }
  return flags;
}

}  // namespace detail

std::uint64_t count_downward_paths(const Network& net, const Layout& layout, const ScoringParams& params) {
  if (!in_bounds(layout)) return 0;
  // Downward edges strictly increase y, so the flagged subgraph is acyclic.
  return *detail::count_flagged_paths(net, detail::downward_flags(net, layout, params.theta_min_degrees),
                                      params.path_scope);
}

std::uint64_t count_simple_paths(const Network& net, const ScoringParams& params) {
  const std::size_t n = net.node_count();
  std::vector<char> on_path(n, 0);
  struct Frame {
    NodeIndex node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::uint64_t explored = 0;
  std::uint64_t counted = 0;
  const bool all = params.path_scope == PathScope::all_paths;

  for (NodeIndex start = 0; start < n; ++start) {
    if (!all && net.nodes()[start].role != NodeRole::source) continue;
    stack.push_back({start, 0});
    on_path[start] = 1;
    while (!stack.empty()) {
      Frame& top = stack.back();
      const auto out = net.out_edges(top.node);
      if (top.next == out.size()) {
        on_path[top.node] = 0;
        stack.pop_back();
        continue;
      }
      const NodeIndex u = net.head(out[top.next++]);
      if (on_path[u]) continue;
      if (++explored > params.path_count_cap) {
        throw PathCountCapExceeded(params.path_count_cap);
      }
      if (all || net.nodes()[u].role == NodeRole::target) ++counted;
      on_path[u] = 1;
      stack.push_back({u, 0});
    }
  }
  return counted;
}

double dp_score(const Network& net, const Layout& layout, const ScoringParams& params, std::uint64_t simple_paths) {
  if (!in_bounds(layout)) return 0.0;
  return detail::dp_from_counts(count_downward_paths(net, layout, params), simple_paths);
}

double dp_score(const Network& net, const Layout& layout, const ScoringParams& params) {
  return dp_score(net, layout, params, count_simple_paths(net, params));
}

double ec_score(const Network& net, const Layout& layout) {
  if (!in_bounds(layout)) return 0.0;
  std::uint64_t crossings = 0;
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    for (EdgeIndex f = e + 1; f < net.edge_count(); ++f) {
      crossings += segments_cross(net, layout, e, f) ? 1 : 0;
    }
  }
  return detail::ec_from_crossings(net.edge_count(), crossings);
}

double el_score(const Network& net, const Layout& layout, const ScoringParams& params) {
  if (!in_bounds(layout)) return 0.0;
  std::vector<double> costs(net.edge_count());
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    costs[e] = detail::edge_cost(distance(layout.positions[net.tail(e)], layout.positions[net.head(e)]), params);
  }
  return detail::el_from_costs(costs, layout.box.diagonal());
}

double nd_score(const Network& net, const Layout& layout) {
  if (!in_bounds(layout)) return 0.0;
  std::vector<double> minima(net.node_count());
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    minima[u] = detail::nearest_unconnected(net, layout, u);
  }
  return detail::average_minimum(minima, layout.box.diagonal());
}

double ned_score(const Network& net, const Layout& layout) {
  if (!in_bounds(layout)) return 0.0;
  std::vector<double> minima(net.node_count());
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    minima[u] = detail::nearest_nonincident_edge(net, layout, u);
  }
  return detail::average_minimum(minima, layout.box.diagonal());
}

Scorer::Scorer(std::shared_ptr<const Network> network, ScoringParams params, Priorities priorities)
    : network_(std::move(network)), params_(params), priorities_(priorities) {
  if (!network_) {
    throw ContractViolation("Scorer requires a network");
  }
  priorities_.validate();
  simple_paths_ = count_simple_paths(*network_, params_);
}

CriterionScores Scorer::criteria(const Layout& layout) const {
  if (!in_bounds(layout)) return {};
  const Network& net = *network_;
  return {dp_score(net, layout, params_, simple_paths_), ec_score(net, layout), el_score(net, layout, params_),
          nd_score(net, layout), ned_score(net, layout)};
}

ScoreBreakdown Scorer::score(const Layout& layout, const ScoreBreakdown* previous) const {
  return breakdown(criteria(layout), in_bounds(layout), previous);
}

}  // namespace layoutgame

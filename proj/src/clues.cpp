#include "layoutgame/clues.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace layoutgame {

std::optional<std::uint64_t> counterfactual_downward_paths(const Network& net, const Layout& layout,
                                                           const ScoringParams& params,
                                                           const std::vector<EdgeIndex>& forced) {
  auto flags = detail::downward_flags(net, layout, params.theta_min_degrees);
  for (EdgeIndex e : forced) {
    if (net.directed(e)) flags[e] = 1;
  }
  return detail::count_flagged_paths(net, flags, params.path_scope);
}

namespace {

struct DpCandidate {
  std::uint64_t gain = 0;
  std::size_t non_downward = 0;
  std::vector<std::string> node_ids;
  std::vector<NodeIndex> nodes;
  std::vector<EdgeIndex> edges;

  bool better_than(const DpCandidate& other) const {
    if (gain != other.gain) return gain > other.gain;
    if (non_downward != other.non_downward) return non_downward < other.non_downward;
    return node_ids < other.node_ids;
  }
};

class DpClueSearch {
 public:
  DpClueSearch(const Network& net, const ScoringParams& params, const ClueParams& clue_params,
               std::vector<char> flags)
      : net_(net), params_(params), clue_params_(clue_params), flags_(std::move(flags)),
        on_path_(net.node_count(), 0) {
    base_ = *detail::count_flagged_paths(net_, flags_, params_.path_scope);
  }

  std::optional<DpCandidate> run() {
    for (NodeIndex start = 0; start < net_.node_count() && !exhausted(); ++start) {
      nodes_ = {start};
      on_path_[start] = 1;
      extend(start);
      on_path_[start] = 0;
    }
    return best_;
  }

 private:
  bool exhausted() const { return enumerated_ >= clue_params_.dp_max_candidates; }

  void extend(NodeIndex v) {
    if (edges_.size() == clue_params_.dp_max_path_edges) return;
    for (EdgeIndex e : net_.out_edges(v)) {
      if (exhausted()) return;
      const NodeIndex u = net_.head(e);
      if (on_path_[u]) continue;
      edges_.push_back(e);
      nodes_.push_back(u);
      on_path_[u] = 1;
      ++enumerated_;
      consider();
      extend(u);
      on_path_[u] = 0;
      nodes_.pop_back();
      edges_.pop_back();
    }
  }

  void consider() {
    std::vector<EdgeIndex> upward;
    for (EdgeIndex e : edges_) {
      if (!flags_[e]) upward.push_back(e);
    }
    if (upward.empty()) return;
    std::sort(upward.begin(), upward.end());

    auto [it, inserted] = gains_.try_emplace(upward);
    if (inserted) {
      auto flags = flags_;
      for (EdgeIndex e : upward) flags[e] = 1;
      const auto count = detail::count_flagged_paths(net_, flags, params_.path_scope);
      it->second = count && *count > base_ ? std::optional<std::uint64_t>(*count - base_) : std::nullopt;
    }
    if (!it->second) return;

    DpCandidate candidate;
    candidate.gain = *it->second;
    candidate.non_downward = upward.size();
    candidate.nodes = nodes_;
    candidate.edges = edges_;
    for (NodeIndex n : nodes_) candidate.node_ids.push_back(net_.nodes()[n].id);
    if (!best_ || candidate.better_than(*best_)) best_ = std::move(candidate);
  }

  const Network& net_;
  const ScoringParams& params_;
  const ClueParams& clue_params_;
  std::vector<char> flags_;
  std::uint64_t base_ = 0;
  std::vector<char> on_path_;
  std::vector<NodeIndex> nodes_;
  std::vector<EdgeIndex> edges_;
  std::size_t enumerated_ = 0;
  std::map<std::vector<EdgeIndex>, std::optional<std::uint64_t>> gains_;
  std::optional<DpCandidate> best_;
};

}  // namespace

std::optional<Clue> dp_clue(const Network& net, const Layout& layout, const ScoringParams& params,
                            const ClueParams& clue_params) {
  DpClueSearch search(net, params, clue_params, detail::downward_flags(net, layout, params.theta_min_degrees));
  auto best = search.run();
  if (!best) return std::nullopt;
  Clue clue;
  clue.criterion = Criterion::dp;
  clue.node_ids = std::move(best->node_ids);
  for (EdgeIndex e : best->edges) clue.edge_ids.push_back(net.edges()[e].id);
  clue.expected_gain = static_cast<double>(best->gain);
  clue.metric = static_cast<double>(best->non_downward);
  clue.rationale = "dp_counterfactual_gain";
  return clue;
}

std::optional<Clue> ec_clue(const Network& net, const Layout& layout) {
  std::optional<std::tuple<std::size_t, std::string, std::string, EdgeIndex, EdgeIndex>> best;
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    for (EdgeIndex f = e + 1; f < net.edge_count(); ++f) {
      if (!segments_cross(net, layout, e, f)) continue;
      const std::size_t degrees =
          net.degree(net.tail(e)) + net.degree(net.head(e)) + net.degree(net.tail(f)) + net.degree(net.head(f));
      const auto& ide = net.edges()[e].id;
      const auto& idf = net.edges()[f].id;
      auto key = ide < idf ? std::tuple(degrees, ide, idf, e, f) : std::tuple(degrees, idf, ide, f, e);
      if (!best || key < *best) best = std::move(key);
    }
  }
  if (!best) return std::nullopt;
  const auto& [degrees, id1, id2, e, f] = *best;
  Clue clue;
  clue.criterion = Criterion::ec;
  clue.edge_ids = {id1, id2};
  for (EdgeIndex x : {e, f}) {
    clue.node_ids.push_back(net.nodes()[net.tail(x)].id);
    clue.node_ids.push_back(net.nodes()[net.head(x)].id);
  }
  clue.metric = static_cast<double>(degrees);
  clue.rationale = "ec_min_degree_crossing";
  return clue;
}

std::optional<Clue> el_clue(const Network& net, const Layout& layout, const ScoringParams& params) {
  std::optional<EdgeIndex> best;
  double best_cost = 0.0;
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    const double cost =
        detail::edge_cost(distance(layout.positions[net.tail(e)], layout.positions[net.head(e)]), params);
    if (!best || cost > best_cost || (cost == best_cost && net.edges()[e].id < net.edges()[*best].id)) {
      best = e;
      best_cost = cost;
    }
  }
  if (!best) return std::nullopt;
  Clue clue;
  clue.criterion = Criterion::el;
  clue.edge_ids = {net.edges()[*best].id};
  clue.node_ids = {net.nodes()[net.tail(*best)].id, net.nodes()[net.head(*best)].id};
  clue.metric = best_cost / layout.box.diagonal();
  clue.rationale = best_cost == params.short_edge_penalty ? "el_too_short" : "el_longest";
  return clue;
}

std::optional<Clue> nd_clue(const Network& net, const Layout& layout) {
  std::optional<std::tuple<double, std::string, std::string>> best;
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    for (NodeIndex v = u + 1; v < net.node_count(); ++v) {
      if (net.adjacent(u, v)) continue;
      const double d = distance(layout.positions[u], layout.positions[v]);
      const auto& a = net.nodes()[u].id;
      const auto& b = net.nodes()[v].id;
      auto key = a < b ? std::tuple(d, a, b) : std::tuple(d, b, a);
      if (!best || key < *best) best = std::move(key);
    }
  }
  if (!best) return std::nullopt;
  Clue clue;
  clue.criterion = Criterion::nd;
  clue.node_ids = {std::get<1>(*best), std::get<2>(*best)};
  clue.metric = std::get<0>(*best);
  clue.rationale = "nd_closest_unconnected_pair";
  return clue;
}

std::optional<Clue> ned_clue(const Network& net, const Layout& layout) {
  std::optional<std::tuple<double, std::string, std::string>> best;
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
      if (net.incident(e, u)) continue;
      const double d =
          point_segment_distance(layout.positions[u], layout.positions[net.tail(e)], layout.positions[net.head(e)]);
      auto key = std::tuple(d, net.nodes()[u].id, net.edges()[e].id);
      if (!best || key < *best) best = std::move(key);
    }
  }
  if (!best) return std::nullopt;
  Clue clue;
  clue.criterion = Criterion::ned;
  clue.node_ids = {std::get<1>(*best)};
  clue.edge_ids = {std::get<2>(*best)};
  clue.metric = std::get<0>(*best);
  clue.rationale = "ned_closest_node_edge";
  return clue;
}

std::optional<Clue> clue_for(Criterion mode, const Network& net, const Layout& layout, const ScoringParams& params,
                             const ClueParams& clue_params) {
  switch (mode) {
    case Criterion::dp: return dp_clue(net, layout, params, clue_params);
    case Criterion::ec: return ec_clue(net, layout);
    case Criterion::el: return el_clue(net, layout, params);
    case Criterion::nd: return nd_clue(net, layout);
    case Criterion::ned: return ned_clue(net, layout);
  }
  return std::nullopt;
}

}  // namespace layoutgame

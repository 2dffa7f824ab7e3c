#include "layoutgame/score_state.hpp"

#include "layoutgame/errors.hpp"

namespace layoutgame {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

ScoreState::ScoreState(const Scorer& scorer, Layout layout) : scorer_(&scorer), layout_(std::move(layout)) {
  rebuild();
}

void ScoreState::reset(Layout layout) {
  layout_ = std::move(layout);
  rebuild();
}

void ScoreState::set_crossing(EdgeIndex e, EdgeIndex f, bool value) {
  char& slot = crossing_[e * edge_count_ + f];
  if ((slot != 0) == value) return;
  slot = value ? 1 : 0;
  crossing_[f * edge_count_ + e] = slot;
  if (value) {
    ++crossings_;
  } else {
    --crossings_;
  }
}

void ScoreState::refresh_node_minimum(NodeIndex u) {
  const Network& net = scorer_->network();
  double best = detail::kExcluded;
  NodeIndex arg = kNone;
  const Point pu = layout_.positions[u];
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    if (v == u || net.adjacent(u, v)) continue;
    const double d = distance(pu, layout_.positions[v]);
    if (best == detail::kExcluded || d < best) {
      best = d;
      arg = v;
    }
  }
  node_min_[u] = best;
  node_arg_[u] = arg;
}

void ScoreState::refresh_edge_minimum(NodeIndex u) {
  const Network& net = scorer_->network();
  double best = detail::kExcluded;
  EdgeIndex arg = kNone;
  const Point pu = layout_.positions[u];
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (net.incident(e, u)) continue;
    const double d = point_segment_distance(pu, layout_.positions[net.tail(e)], layout_.positions[net.head(e)]);
    if (best == detail::kExcluded || d < best) {
      best = d;
      arg = e;
    }
  }
  edge_min_[u] = best;
  edge_arg_[u] = arg;
}

void ScoreState::rebuild() {
  const Network& net = scorer_->network();
  if (layout_.positions.size() != net.node_count()) {
    throw ContractViolation("layout does not cover the network's nodes");
  }
  const auto& params = scorer_->params();
  edge_count_ = net.edge_count();

  out_of_box_ = 0;
  for (Point p : layout_.positions) {
    out_of_box_ += layout_.box.contains(p) ? 0 : 1;
  }

  downward_ = detail::downward_flags(net, layout_, params.theta_min_degrees);

  crossing_.assign(edge_count_ * edge_count_, 0);
  crossings_ = 0;
  for (EdgeIndex e = 0; e < edge_count_; ++e) {
    for (EdgeIndex f = e + 1; f < edge_count_; ++f) {
      set_crossing(e, f, segments_cross(net, layout_, e, f));
    }
  }

  edge_costs_.resize(edge_count_);
  for (EdgeIndex e = 0; e < edge_count_; ++e) {
    edge_costs_[e] =
        detail::edge_cost(distance(layout_.positions[net.tail(e)], layout_.positions[net.head(e)]), params);
  }

  node_min_.assign(net.node_count(), detail::kExcluded);
  node_arg_.assign(net.node_count(), kNone);
  edge_min_.assign(net.node_count(), detail::kExcluded);
  edge_arg_.assign(net.node_count(), kNone);
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    refresh_node_minimum(u);
    refresh_edge_minimum(u);
  }
  aggregate();
}

void ScoreState::move_node(NodeIndex v, Point p) {
  const Network& net = scorer_->network();
  const auto& params = scorer_->params();
  const Point old = layout_.positions.at(v);
  if (old == p) return;

  out_of_box_ -= layout_.box.contains(old) ? 0 : 1;
  out_of_box_ += layout_.box.contains(p) ? 0 : 1;
  layout_.positions[v] = p;

  const auto incident = net.incident_edges(v);
  for (EdgeIndex e : incident) {
    const Point tail = layout_.positions[net.tail(e)];
    const Point head = layout_.positions[net.head(e)];
    if (net.directed(e)) {
      downward_[e] = is_downward(tail, head, params.theta_min_degrees);
    }
    edge_costs_[e] = detail::edge_cost(distance(tail, head), params);
    // Pairs of edges both incident to v share an endpoint and never cross.
    for (EdgeIndex f = 0; f < edge_count_; ++f) {
      if (net.incident(f, v)) continue;
      set_crossing(e, f, segments_cross(net, layout_, e, f));
    }
  }

  refresh_node_minimum(v);
  refresh_edge_minimum(v);
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    if (u == v) continue;

    if (!net.adjacent(u, v)) {
      const double d = distance(layout_.positions[u], p);
      if (node_arg_[u] == v && d > node_min_[u]) {
        refresh_node_minimum(u);
      } else if (d < node_min_[u] || node_min_[u] == detail::kExcluded) {
        node_min_[u] = d;
        node_arg_[u] = v;
      }
    }

    if (edge_min_[u] == detail::kExcluded) continue;
    bool witness_moved = false;
    for (EdgeIndex e : incident) {
      if (e == edge_arg_[u]) {
        witness_moved = true;
        break;
      }
    }
    if (witness_moved) {
      refresh_edge_minimum(u);
      continue;
    }
    const Point pu = layout_.positions[u];
    for (EdgeIndex e : incident) {
      if (net.incident(e, u)) continue;
      const double d = point_segment_distance(pu, layout_.positions[net.tail(e)], layout_.positions[net.head(e)]);
      if (d < edge_min_[u]) {
        edge_min_[u] = d;
        edge_arg_[u] = e;
      }
    }
  }
  aggregate();
}

void ScoreState::aggregate() {
  const Network& net = scorer_->network();
  const auto& params = scorer_->params();
  const double diagonal = layout_.box.diagonal();

  // Downward edges strictly increase y, so the flagged subgraph is acyclic.
  downward_paths_ = *detail::count_flagged_paths(net, downward_, params.path_scope);

  if (out_of_box_ > 0) {
    scores_ = {};
  } else {
    scores_[index_of(Criterion::dp)] = detail::dp_from_counts(downward_paths_, scorer_->simple_path_count());
    scores_[index_of(Criterion::ec)] = detail::ec_from_crossings(edge_count_, crossings_);
    scores_[index_of(Criterion::el)] = detail::el_from_costs(edge_costs_, diagonal);
    scores_[index_of(Criterion::nd)] = detail::average_minimum(node_min_, diagonal);
    scores_[index_of(Criterion::ned)] = detail::average_minimum(edge_min_, diagonal);
  }
  overall_ = 0.0;
  for (Criterion c : kCriteria) {
    overall_ += scorer_->priorities()[c] * scores_[index_of(c)];
  }
}

}  // namespace layoutgame

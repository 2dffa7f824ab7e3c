#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "layoutgame/geometry.hpp"

namespace layoutgame {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

enum class NodeRole { source, target, internal };

std::string_view to_string(NodeRole role);
std::optional<NodeRole> parse_node_role(std::string_view text);

struct Node {
  std::string id;
  NodeRole role = NodeRole::internal;
  std::optional<std::string> label;  // never shown to players

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string id;
  std::string tail;
  std::string head;
  bool directed = true;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable validated graph. Nodes and edges keep the order they were given
/// in; undirected edges have their endpoints stored in ascending id order.
class Network {
 public:
  /// Throws NetworkError on duplicate ids, dangling endpoints, self-loops or
  /// parallel edges (same endpoints and same direction flag).
  static Network create(std::string id, std::vector<Node> nodes, std::vector<Edge> edges);

  const std::string& id() const { return id_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<EdgeIndex> find_edge(std::string_view id) const;

  NodeIndex tail(EdgeIndex e) const { return ends_[e].first; }
  NodeIndex head(EdgeIndex e) const { return ends_[e].second; }
  bool directed(EdgeIndex e) const { return edges_[e].directed; }
  bool incident(EdgeIndex e, NodeIndex v) const { return tail(e) == v || head(e) == v; }
  bool share_endpoint(EdgeIndex e, EdgeIndex f) const {
    return incident(f, tail(e)) || incident(f, head(e));
  }

  /// Every edge touching v, directed or not.
  std::span<const EdgeIndex> incident_edges(NodeIndex v) const { return incident_[v]; }
  /// Directed edges leaving v.
  std::span<const EdgeIndex> out_edges(NodeIndex v) const { return out_[v]; }
  std::size_t degree(NodeIndex v) const { return incident_[v].size(); }
  /// True iff some edge (either direction, any flag) joins u and v.
  bool adjacent(NodeIndex u, NodeIndex v) const;

 private:
  std::string id_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::pair<NodeIndex, NodeIndex>> ends_;
  std::vector<std::vector<EdgeIndex>> incident_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<NodeIndex>> neighbours_;  // sorted
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::unordered_map<std::string, EdgeIndex> edge_index_;
};

/// Node positions aligned with Network::nodes().
struct Layout {
  BoundingBox box;
  std::vector<Point> positions;

  friend bool operator==(const Layout&, const Layout&) = default;
};

/// Every node inside the closed box.
bool in_bounds(const Layout& layout);

/// Throws ContractViolation for undirected edges.
bool is_downward_edge(const Network& net, const Layout& layout, EdgeIndex e, double theta_min_degrees);

/// Edges sharing a network endpoint never cross.
bool segments_cross(const Network& net, const Layout& layout, EdgeIndex e, EdgeIndex f);

enum class ScaleStatus { ok, empty_selection };

struct ScaledLayout {
  Layout layout;
  ScaleStatus status = ScaleStatus::ok;
};

/// Expand (factor > 1) or squeeze (factor < 1) the selected nodes about
/// their centroid, clamping the result to the box. Throws ContractViolation
/// for factor <= 0.
ScaledLayout scale_selection(const Layout& layout, std::span<const NodeIndex> selection, double factor);

/// Uniformly random in-box layout.
template <typename Rng>
Layout random_layout(const Network& net, BoundingBox box, Rng& rng) {
  Layout layout{box, {}};
  layout.positions.reserve(net.node_count());
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    const double x = rng.uniform(0.0, box.width);
    const double y = rng.uniform(0.0, box.height);
    layout.positions.push_back({x, y});
  }
  return layout;
}

}  // namespace layoutgame

#include "layoutgame/network.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "layoutgame/errors.hpp"

namespace layoutgame {

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::source: return "source";
    case NodeRole::target: return "target";
    case NodeRole::internal: return "internal";
  }
  return "internal";
}

std::optional<NodeRole> parse_node_role(std::string_view text) {
  if (text == "source") return NodeRole::source;
  if (text == "target") return NodeRole::target;
  if (text == "internal") return NodeRole::internal;
  return std::nullopt;
}

Network Network::create(std::string id, std::vector<Node> nodes, std::vector<Edge> edges) {
  Network net;
  net.id_ = std::move(id);
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    if (!net.node_index_.emplace(nodes[i].id, i).second) {
      throw NetworkError("duplicate node id '" + nodes[i].id + "'");
    }
  }
  net.nodes_ = std::move(nodes);

  const std::size_t n = net.nodes_.size();
  net.incident_.resize(n);
  net.out_.resize(n);
  net.neighbours_.resize(n);

  std::set<std::tuple<NodeIndex, NodeIndex, bool>> seen;
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    Edge& edge = edges[e];
    if (!net.edge_index_.emplace(edge.id, e).second) {
      throw NetworkError("duplicate edge id '" + edge.id + "'");
    }
    auto tail = net.find_node(edge.tail);
    auto head = net.find_node(edge.head);
    if (!tail || !head) {
      throw NetworkError("edge '" + edge.id + "' references missing node '" +
                         (tail ? edge.head : edge.tail) + "'");
    }
    if (*tail == *head) {
      throw NetworkError("edge '" + edge.id + "' is a self-loop");
    }
    if (!edge.directed && edge.head < edge.tail) {
      std::swap(edge.tail, edge.head);
      std::swap(*tail, *head);
    }
    if (!seen.emplace(*tail, *head, edge.directed).second) {
      throw NetworkError("edge '" + edge.id + "' duplicates an existing edge between '" + edge.tail +
                         "' and '" + edge.head + "'");
    }
    net.ends_.emplace_back(*tail, *head);
    net.incident_[*tail].push_back(e);
    net.incident_[*head].push_back(e);
    if (edge.directed) {
      net.out_[*tail].push_back(e);
    }
    net.neighbours_[*tail].push_back(*head);
    net.neighbours_[*head].push_back(*tail);
  }
  net.edges_ = std::move(edges);
  for (auto& list : net.neighbours_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return net;
}

std::optional<NodeIndex> Network::find_node(std::string_view id) const {
  auto it = node_index_.find(std::string(id));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> Network::find_edge(std::string_view id) const {
  auto it = edge_index_.find(std::string(id));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

bool Network::adjacent(NodeIndex u, NodeIndex v) const {
  const auto& list = neighbours_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

bool in_bounds(const Layout& layout) {
  return std::all_of(layout.positions.begin(), layout.positions.end(),
                     [&](Point p) { return layout.box.contains(p); });
}

bool is_downward_edge(const Network& net, const Layout& layout, EdgeIndex e, double theta_min_degrees) {
  if (!net.directed(e)) {
    throw ContractViolation("is_downward_edge: edge '" + net.edges()[e].id + "' is undirected");
  }
  return is_downward(layout.positions[net.tail(e)], layout.positions[net.head(e)], theta_min_degrees);
}

bool segments_cross(const Network& net, const Layout& layout, EdgeIndex e, EdgeIndex f) {
  if (e == f || net.share_endpoint(e, f)) {
    return false;
  }
  const auto& p = layout.positions;
  return open_segments_intersect(p[net.tail(e)], p[net.head(e)], p[net.tail(f)], p[net.head(f)]);
}

ScaledLayout scale_selection(const Layout& layout, std::span<const NodeIndex> selection, double factor) {
  if (!(factor > 0.0)) {
    throw ContractViolation("scale_selection: factor must be positive");
  }
  ScaledLayout out{layout, ScaleStatus::ok};
  if (selection.empty()) {
    out.status = ScaleStatus::empty_selection;
    return out;
  }
  Point centroid;
  for (NodeIndex v : selection) {
    centroid.x += layout.positions.at(v).x;
    centroid.y += layout.positions.at(v).y;
  }
  centroid.x /= static_cast<double>(selection.size());
  centroid.y /= static_cast<double>(selection.size());
  for (NodeIndex v : selection) {
    const Point p = layout.positions[v];
    const Point scaled{centroid.x + (p.x - centroid.x) * factor, centroid.y + (p.y - centroid.y) * factor};
    out.layout.positions[v] = layout.box.clamp(scaled);
  }
  return out;
}

}  // namespace layoutgame

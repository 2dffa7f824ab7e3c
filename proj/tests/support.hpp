#pragma once

// Test helpers: fixture loading, small network builders and reference
// implementations that share no code with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "layoutgame/errors.hpp"
#include "layoutgame/io.hpp"
#include "layoutgame/sequence.hpp"
#include "layoutgame/session.hpp"

namespace testing {

using namespace layoutgame;

inline std::string fixture_path(const std::string& name) { return std::string(LAYOUTGAME_FIXTURE_DIR) + "/" + name; }

inline std::shared_ptr<const Network> load_fixture(const std::string& name) {
  return std::make_shared<const Network>(load_network(read_file(fixture_path(name + ".network.json"))));
}

struct EdgeSpec {
  std::string tail;
  std::string head;
  bool directed = true;
};

/// Network with nodes "a", "b", ... (or the given ids) and edges e0, e1, ...
inline std::shared_ptr<const Network> make_network(const std::vector<std::string>& ids,
                                                   const std::vector<EdgeSpec>& edges,
                                                   const std::string& id = "test") {
  std::vector<Node> nodes;
  for (const auto& n : ids) nodes.push_back({n, NodeRole::internal, std::nullopt});
  std::vector<Edge> es;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    es.push_back({"e" + std::to_string(i), edges[i].tail, edges[i].head, edges[i].directed});
  }
  return std::make_shared<const Network>(Network::create(id, std::move(nodes), std::move(es)));
}

inline Layout make_layout(std::vector<Point> positions, BoundingBox box = {}) { return Layout{box, std::move(positions)}; }

/// Random directed graph on n nodes; each ordered pair gets an edge with
/// probability p (no antiparallel pair is skipped, so 2-cycles occur).
inline std::shared_ptr<const Network> random_network(Rng& rng, std::size_t n, double p, double undirected_share = 0.0) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || rng.unit() >= p) continue;
      const bool directed = rng.unit() >= undirected_share;
      if (!directed && i > j) continue;  // one undirected edge per pair at most
      edges.push_back({ids[i], ids[j], directed});
    }
  }
  return make_network(ids, edges, "random");
}

/// Integer coordinates on a coarse grid, so ties and collinear cases occur.
inline Layout random_grid_layout(Rng& rng, std::size_t n, int cells = 8, BoundingBox box = {}) {
  Layout l{box, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.index(static_cast<std::size_t>(cells) + 1)) * box.width / cells;
    const double y = static_cast<double>(rng.index(static_cast<std::size_t>(cells) + 1)) * box.height / cells;
    l.positions.push_back({x, y});
  }
  return l;
}

inline Layout random_real_layout(Rng& rng, std::size_t n, BoundingBox box = {}) {
  Layout l{box, {}};
  for (std::size_t i = 0; i < n; ++i) l.positions.push_back({rng.uniform(0.0, box.width), rng.uniform(0.0, box.height)});
  return l;
}

// ---------------------------------------------------------------------------
// Reference implementations

namespace oracle {

inline const double kPi = std::acos(-1.0);

/// Downward test written from the definition: head lower on screen and the
/// angle to the horizontal, in degrees, at least theta.
inline bool downward(Point tail, Point head, double theta) {
  const double dy = head.y - tail.y;
  if (!(dy > 0)) return false;
  const double angle = std::atan2(dy, std::fabs(head.x - tail.x)) * 180.0 / kPi;
  return angle >= theta;
}

struct Graph {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;  // (edge, head) per node
};

inline Graph directed_graph(const Network& net) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < net.nodes().size(); ++i) index[net.nodes()[i].id] = i;
  Graph g;
  g.out.resize(net.nodes().size());
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const auto& edge = net.edges()[e];
    if (edge.directed) g.out[index[edge.tail]].push_back({e, index[edge.head]});
  }
  return g;
}

/// Visits every simple directed path of length >= 1 as (nodes, edges).
inline void for_each_simple_path(
    const Network& net,
    const std::function<void(const std::vector<std::size_t>&, const std::vector<std::size_t>&)>& visit) {
  const Graph g = directed_graph(net);
  std::vector<std::size_t> nodes, edges;
  std::vector<bool> used(g.out.size(), false);
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    for (auto [e, u] : g.out[v]) {
      if (used[u]) continue;
      used[u] = true;
      nodes.push_back(u);
      edges.push_back(e);
      visit(nodes, edges);
      walk(u);
      edges.pop_back();
      nodes.pop_back();
      used[u] = false;
    }
  };
  for (std::size_t s = 0; s < g.out.size(); ++s) {
    used[s] = true;
    nodes = {s};
    walk(s);
    used[s] = false;
  }
}

inline std::uint64_t simple_paths(const Network& net) {
  std::uint64_t count = 0;
  for_each_simple_path(net, [&](const auto&, const auto&) { ++count; });
  return count;
}

inline std::uint64_t downward_paths(const Network& net, const Layout& layout, double theta = 15.0) {
  std::uint64_t count = 0;
  for_each_simple_path(net, [&](const auto& nodes, const auto&) {
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (!downward(layout.positions[nodes[i]], layout.positions[nodes[i + 1]], theta)) return;
    }
    ++count;
  });
  return count;
}

/// Open-segment intersection by solving p + t r = q + u s exactly. Inputs
/// must be integers (or exactly representable) for the test to be exact.
inline bool open_segments_meet(Point p, Point p2, Point q, Point q2) {
  using I = long long;
  const I px = std::llround(p.x), py = std::llround(p.y), qx = std::llround(q.x), qy = std::llround(q.y);
  const I rx = std::llround(p2.x) - px, ry = std::llround(p2.y) - py;
  const I sx = std::llround(q2.x) - qx, sy = std::llround(q2.y) - qy;
  if ((rx == 0 && ry == 0) || (sx == 0 && sy == 0)) return false;
  const I wx = qx - px, wy = qy - py;
  const I denom = rx * sy - ry * sx;
  if (denom != 0) {
    I t = wx * sy - wy * sx;  // t = t_num / denom
    I u = wx * ry - wy * rx;  // u = u_num / denom
    I d = denom;
    if (d < 0) {
      d = -d;
      t = -t;
      u = -u;
    }
    return 0 < t && t < d && 0 < u && u < d;
  }
  if (wx * ry - wy * rx != 0) return false;  // parallel, not collinear
  // Collinear: positions of q and q2 along r, scaled by |r|^2.
  const I rr = rx * rx + ry * ry;
  const I a = wx * rx + wy * ry;
  const I b = a + sx * rx + sy * ry;
  const I lo = std::max<I>(0, std::min(a, b));
  const I hi = std::min<I>(rr, std::max(a, b));
  return lo < hi;
}

inline bool crosses(const Network& net, const Layout& layout, std::size_t e, std::size_t f) {
  const auto& a = net.edges()[e];
  const auto& b = net.edges()[f];
  if (a.tail == b.tail || a.tail == b.head || a.head == b.tail || a.head == b.head) return false;
  auto pos = [&](const std::string& id) { return layout.positions[*net.find_node(id)]; };
  return open_segments_meet(pos(a.tail), pos(a.head), pos(b.tail), pos(b.head));
}

inline std::uint64_t crossing_pairs(const Network& net, const Layout& layout) {
  std::uint64_t count = 0;
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    for (std::size_t f = e + 1; f < net.edges().size(); ++f) count += crosses(net, layout, e, f);
  }
  return count;
}

inline double segment_distance(Point p, Point a, Point b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0) return std::hypot(p.x - a.x, p.y - a.y);
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::max(0.0, std::min(1.0, t));
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

/// Squared point-segment distance as an exact fraction num/den. Inputs must
/// be integers.
struct Fraction {
  __int128 num;
  __int128 den;
  friend bool operator<(const Fraction& a, const Fraction& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num * b.den == b.num * a.den; }
};

inline Fraction exact_segment_distance2(Point p, Point a, Point b) {
  using I = __int128;
  const I px = std::llround(p.x), py = std::llround(p.y);
  const I ax = std::llround(a.x), ay = std::llround(a.y);
  const I bx = std::llround(b.x), by = std::llround(b.y);
  const I vx = bx - ax, vy = by - ay;
  const I wx = px - ax, wy = py - ay;
  const I len2 = vx * vx + vy * vy;
  const I dot = wx * vx + wy * vy;
  if (len2 == 0 || dot <= 0) return {wx * wx + wy * wy, 1};
  if (dot >= len2) return {(px - bx) * (px - bx) + (py - by) * (py - by), 1};
  const I cross = vx * wy - vy * wx;
  return {cross * cross, len2};
}

/// (b+1)^(min(s,T)/T) evaluated in long double.
inline long double bonus_level(long double s, long double b, long double target) {
  return std::pow(b + 1.0L, std::min(s, target) / target);
}

}  // namespace oracle

}  // namespace testing

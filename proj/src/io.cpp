#include "layoutgame/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "layoutgame/errors.hpp"

namespace layoutgame {

namespace {

std::string field(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

const Json& require(const Json& doc, std::string_view key, const std::string& where) {
  if (!doc.is_object()) throw DocumentError(where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw DocumentError(field(where, key), "missing field");
  return *it;
}

const Json* optional_field(const Json& doc, std::string_view key) {
  auto it = doc.find(key);
  return it == doc.end() || it->is_null() ? nullptr : &*it;
}

std::string get_string(const Json& doc, std::string_view key, const std::string& where) {
  const Json& v = require(doc, key, where);
  if (!v.is_string()) throw DocumentError(field(where, key), "expected a string");
  return v.get<std::string>();
}

bool get_bool(const Json& doc, std::string_view key, const std::string& where) {
  const Json& v = require(doc, key, where);
  if (!v.is_boolean()) throw DocumentError(field(where, key), "expected true or false");
  return v.get<bool>();
}

std::int64_t get_int(const Json& doc, std::string_view key, const std::string& where) {
  const Json& v = require(doc, key, where);
  if (!v.is_number_integer()) throw DocumentError(field(where, key), "expected an integer");
  return v.get<std::int64_t>();
}

/// JSON number or decimal string; used for human-edited config values.
double get_real(const Json& v, const std::string& where) {
  if (v.is_string()) return parse_number(v.get<std::string>(), where);
  if (v.is_number()) return v.get<double>();
  throw DocumentError(where, "expected a number");
}

std::uint64_t get_count(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw DocumentError(where, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double get_decimal(const Json& doc, std::string_view key, const std::string& where) {
  return parse_number(get_string(doc, key, where), field(where, key));
}

void check_schema(const Json& doc, std::string_view expected) {
  const std::string schema = get_string(doc, "schema", "");
  if (schema != expected) {
    throw DocumentError("schema", "expected '" + std::string(expected) + "', found '" + schema + "'");
  }
}

Json point_to_json(Point p) { return Json{{"x", format_number(p.x)}, {"y", format_number(p.y)}}; }

Point point_from_json(const Json& doc, const std::string& where) {
  return {get_decimal(doc, "x", where), get_decimal(doc, "y", where)};
}

template <typename T>
Json criterion_map(const std::array<T, kCriterionCount>& values) {
  Json out = Json::object();
  for (Criterion c : kCriteria) out[std::string(to_string(c))] = values[index_of(c)];
  return out;
}

Json criterion_decimals(const CriterionScores& values) {
  Json out = Json::object();
  for (Criterion c : kCriteria) out[std::string(to_string(c))] = format_number(values[index_of(c)]);
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) throw ContractViolation("cannot serialise a non-finite number");
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw ContractViolation("number formatting failed");
  return std::string(buf, end);
}

double parse_number(std::string_view text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw DocumentError(where, "'" + std::string(text) + "' is not a finite decimal number");
  }
  return value;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw DocumentError("line " + std::to_string(line), "malformed JSON");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DocumentError(path, "cannot write file");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DocumentError(path, "write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw DocumentError(path, "cannot replace file");
  }
}

// ---------------------------------------------------------------------------

Json network_to_json(const Network& net) {
  Json nodes = Json::array();
  for (const auto& n : net.nodes()) {
    Json node{{"id", n.id}, {"role", to_string(n.role)}};
    if (n.label) node["label"] = *n.label;
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const auto& e : net.edges()) {
    edges.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"directed", e.directed}});
  }
  return Json{{"schema", kNetworkSchema}, {"id", net.id()}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

Network network_from_json(const Json& doc) {
  check_schema(doc, kNetworkSchema);
  std::string id = get_string(doc, "id", "");
  const Json& nodes_doc = require(doc, "nodes", "");
  const Json& edges_doc = require(doc, "edges", "");
  if (!nodes_doc.is_array()) throw DocumentError("nodes", "expected an array");
  if (!edges_doc.is_array()) throw DocumentError("edges", "expected an array");

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < nodes_doc.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    Node node;
    node.id = get_string(nodes_doc[i], "id", where);
    const std::string role = get_string(nodes_doc[i], "role", where);
    auto parsed = parse_node_role(role);
    if (!parsed) throw DocumentError(where + ".role", "unknown role '" + role + "'");
    node.role = *parsed;
    if (optional_field(nodes_doc[i], "label")) node.label = get_string(nodes_doc[i], "label", where);
    nodes.push_back(std::move(node));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_doc.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    Edge edge;
    edge.id = get_string(edges_doc[i], "id", where);
    edge.tail = get_string(edges_doc[i], "tail", where);
    edge.head = get_string(edges_doc[i], "head", where);
    edge.directed = get_bool(edges_doc[i], "directed", where);
    edges.push_back(std::move(edge));
  }
  return Network::create(std::move(id), std::move(nodes), std::move(edges));
}

Network load_network(std::string_view text) { return network_from_json(parse_json(text)); }

std::string save_network(const Network& net) { return network_to_json(net).dump(1) + "\n"; }

Json layout_to_json(const Network& net, const LayoutDocument& doc) {
  if (doc.layout.positions.size() != net.node_count()) {
    throw ContractViolation("layout does not match the network's node count");
  }
  Json positions = Json::object();
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    positions[net.nodes()[i].id] = point_to_json(doc.layout.positions[i]);
  }
  Json out{{"schema", kLayoutSchema},
           {"network", doc.network_id},
           {"box", {{"w", format_number(doc.layout.box.width)}, {"h", format_number(doc.layout.box.height)}}},
           {"positions", std::move(positions)}};
  if (doc.provenance) {
    Json prov{{"actor", to_string(doc.provenance->actor)}, {"session", doc.provenance->session_id}};
    if (doc.provenance->breakdown) prov["breakdown"] = breakdown_to_json(*doc.provenance->breakdown);
    out["provenance"] = std::move(prov);
  }
  return out;
}

LayoutDocument layout_from_json(const Json& doc, const Network& net) {
  check_schema(doc, kLayoutSchema);
  LayoutDocument out;
  out.network_id = get_string(doc, "network", "");
  if (out.network_id != net.id()) {
    throw DocumentError("network", "layout belongs to network '" + out.network_id + "', expected '" + net.id() + "'");
  }
  const Json& box = require(doc, "box", "");
  out.layout.box.width = get_decimal(box, "w", "box");
  out.layout.box.height = get_decimal(box, "h", "box");
  if (!(out.layout.box.width > 0.0) || !(out.layout.box.height > 0.0)) {
    throw DocumentError("box", "width and height must be positive");
  }

  const Json& positions = require(doc, "positions", "");
  if (!positions.is_object()) throw DocumentError("positions", "expected an object");
  std::vector<std::optional<Point>> found(net.node_count());
  for (const auto& [id, value] : positions.items()) {
    auto node = net.find_node(id);
    if (!node) throw DocumentError("positions." + id, "no such node in network '" + net.id() + "'");
    found[*node] = point_from_json(value, "positions." + id);
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (!found[i]) throw DocumentError("positions", "missing position for node '" + net.nodes()[i].id + "'");
    out.layout.positions.push_back(*found[i]);
  }

  if (const Json* prov = optional_field(doc, "provenance")) {
    Provenance p;
    const std::string actor = get_string(*prov, "actor", "provenance");
    auto parsed = parse_actor_kind(actor);
    if (!parsed) throw DocumentError("provenance.actor", "unknown actor '" + actor + "'");
    p.actor = *parsed;
    p.session_id = get_string(*prov, "session", "provenance");
    if (const Json* b = optional_field(*prov, "breakdown")) p.breakdown = breakdown_from_json(*b, "provenance.breakdown");
    out.provenance = std::move(p);
  }
  return out;
}

LayoutDocument load_layout(std::string_view text, const Network& net) { return layout_from_json(parse_json(text), net); }

std::string save_layout(const Network& net, const LayoutDocument& doc) {
  return layout_to_json(net, doc).dump(1) + "\n";
}

// ---------------------------------------------------------------------------

Json breakdown_to_json(const ScoreBreakdown& b) {
  return Json{{"scores", criterion_decimals(b.scores)},
              {"overall", format_number(b.overall)},
              {"display", criterion_map(b.display)},
              {"deltas", criterion_map(b.deltas)},
              {"overall_delta", format_number(b.overall_delta)},
              {"in_bounds", b.in_bounds}};
}

ScoreBreakdown breakdown_from_json(const Json& doc, const std::string& where) {
  ScoreBreakdown b;
  const Json& scores = require(doc, "scores", where);
  const Json& display = require(doc, "display", where);
  const Json& deltas = require(doc, "deltas", where);
  for (Criterion c : kCriteria) {
    const std::string key(to_string(c));
    b.scores[index_of(c)] = get_decimal(scores, key, field(where, "scores"));
    b.display[index_of(c)] = static_cast<int>(get_int(display, key, field(where, "display")));
    b.deltas[index_of(c)] = static_cast<int>(get_int(deltas, key, field(where, "deltas")));
  }
  b.overall = get_decimal(doc, "overall", where);
  b.overall_delta = get_decimal(doc, "overall_delta", where);
  b.in_bounds = get_bool(doc, "in_bounds", where);
  return b;
}

Json clue_to_json(const Clue& clue) {
  Json out{{"criterion", to_string(clue.criterion)},
           {"nodes", clue.node_ids},
           {"edges", clue.edge_ids},
           {"rationale", clue.rationale}};
  if (clue.expected_gain) out["expected_gain"] = format_number(*clue.expected_gain);
  if (clue.metric) out["metric"] = format_number(*clue.metric);
  return out;
}

Clue clue_from_json(const Json& doc, const std::string& where) {
  Clue clue;
  const std::string criterion = get_string(doc, "criterion", where);
  auto parsed = parse_criterion(criterion);
  if (!parsed) throw DocumentError(field(where, "criterion"), "unknown criterion '" + criterion + "'");
  clue.criterion = *parsed;
  for (const char* key : {"nodes", "edges"}) {
    const Json& ids = require(doc, key, where);
    if (!ids.is_array()) throw DocumentError(field(where, key), "expected an array");
    auto& target = std::string_view(key) == "nodes" ? clue.node_ids : clue.edge_ids;
    for (const auto& id : ids) {
      if (!id.is_string()) throw DocumentError(field(where, key), "expected string ids");
      target.push_back(id.get<std::string>());
    }
  }
  clue.rationale = get_string(doc, "rationale", where);
  if (optional_field(doc, "expected_gain")) clue.expected_gain = get_decimal(doc, "expected_gain", where);
  if (optional_field(doc, "metric")) clue.metric = get_decimal(doc, "metric", where);
  return clue;
}

Json priorities_to_json(const Priorities& priorities) {
  Json out = Json::object();
  for (Criterion c : kCriteria) out[std::string(to_string(c))] = priorities[c];
  return out;
}

Priorities priorities_from_json(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw DocumentError(where, "expected an object");
  Priorities p;
  for (const auto& [key, value] : doc.items()) {
    auto c = parse_criterion(key);
    if (!c) throw DocumentError(field(where, key), "unknown criterion");
    p[*c] = get_real(value, field(where, key));
  }
  return p;
}

Json scoring_params_to_json(const ScoringParams& params) {
  return Json{{"theta_min_degrees", params.theta_min_degrees},
              {"min_edge_length", params.min_edge_length},
              {"short_edge_penalty", params.short_edge_penalty},
              {"path_count_cap", params.path_count_cap},
              {"path_scope", params.path_scope == PathScope::all_paths ? "all_paths" : "source_to_target"}};
}

ScoringParams scoring_params_from_json(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw DocumentError(where, "expected an object");
  ScoringParams p;
  for (const auto& [key, value] : doc.items()) {
    const std::string at = field(where, key);
    if (key == "theta_min_degrees") {
      p.theta_min_degrees = get_real(value, at);
    } else if (key == "min_edge_length") {
      p.min_edge_length = get_real(value, at);
    } else if (key == "short_edge_penalty") {
      p.short_edge_penalty = get_real(value, at);
    } else if (key == "path_count_cap") {
      p.path_count_cap = get_count(value, at);
    } else if (key == "path_scope") {
      if (!value.is_string()) throw DocumentError(at, "expected a string");
      const auto scope = value.get<std::string>();
      if (scope == "all_paths") {
        p.path_scope = PathScope::all_paths;
      } else if (scope == "source_to_target") {
        p.path_scope = PathScope::source_to_target;
      } else {
        throw DocumentError(at, "unknown path scope '" + scope + "'");
      }
    } else {
      throw DocumentError(at, "unknown field");
    }
  }
  return p;
}

Json config_to_json(const GameConfig& config) {
  Json bonus{{"budgets", criterion_map(config.bonus.budgets)}, {"targets", criterion_map(config.bonus.targets)}};
  Json out{{"schema", kConfigSchema},
           {"network", config.network_id},
           {"priorities", priorities_to_json(config.priorities)},
           {"approach", to_string(config.approach)},
           {"sessions_per_criterion", config.sessions_per_criterion},
           {"session_minutes", config.session_minutes},
           {"sequence_budget_minutes", config.sequence_budget_minutes},
           {"bonus", std::move(bonus)},
           {"scoring", scoring_params_to_json(config.scoring)},
           {"seed", config.seed},
           {"sa_only_kind", to_string(config.sa_only_kind)},
           {"final_fine_tune", config.final_fine_tune}};
  if (config.sa_only_max_segments) out["sa_only_max_segments"] = *config.sa_only_max_segments;
  return out;
}

GameConfig config_from_json(const Json& doc) {
  check_schema(doc, kConfigSchema);
  GameConfig config;
  config.network_id = get_string(doc, "network", "");
  if (const Json* p = optional_field(doc, "priorities")) config.priorities = priorities_from_json(*p);
  if (const Json* a = optional_field(doc, "approach")) {
    auto approach = a->is_string() ? parse_approach(a->get<std::string>()) : std::nullopt;
    if (!approach) throw DocumentError("approach", "unknown approach");
    config.approach = *approach;
  }
  if (const Json* n = optional_field(doc, "sessions_per_criterion")) {
    config.sessions_per_criterion = get_count(*n, "sessions_per_criterion");
  }
  if (const Json* v = optional_field(doc, "session_minutes")) config.session_minutes = get_real(*v, "session_minutes");
  if (const Json* v = optional_field(doc, "sequence_budget_minutes")) {
    config.sequence_budget_minutes = get_real(*v, "sequence_budget_minutes");
  }

  double total_bonus = 100.0;
  if (const Json* v = optional_field(doc, "total_bonus_budget")) total_bonus = get_real(*v, "total_bonus_budget");
  config.bonus = BonusPolicy::proportional(config.priorities, total_bonus);
  if (const Json* bonus = optional_field(doc, "bonus")) {
    for (const char* key : {"budgets", "targets"}) {
      const Json* values = optional_field(*bonus, key);
      if (!values) continue;
      auto& target = std::string_view(key) == "budgets" ? config.bonus.budgets : config.bonus.targets;
      for (const auto& [name, value] : values->items()) {
        auto c = parse_criterion(name);
        const std::string at = std::string("bonus.") + key + "." + name;
        if (!c) throw DocumentError(at, "unknown criterion");
        target[index_of(*c)] = get_real(value, at);
      }
    }
  }
  if (const Json* s = optional_field(doc, "scoring")) config.scoring = scoring_params_from_json(*s);
  if (const Json* s = optional_field(doc, "seed")) config.seed = get_count(*s, "seed");
  if (const Json* k = optional_field(doc, "sa_only_kind")) {
    auto kind = k->is_string() ? parse_segment_kind(k->get<std::string>()) : std::nullopt;
    if (!kind) throw DocumentError("sa_only_kind", "unknown segment kind");
    config.sa_only_kind = *kind;
  }
  if (const Json* m = optional_field(doc, "sa_only_max_segments")) {
    config.sa_only_max_segments = get_count(*m, "sa_only_max_segments");
  }
  if (optional_field(doc, "final_fine_tune")) config.final_fine_tune = get_bool(doc, "final_fine_tune", "");
  try {
    config.validate();
  } catch (const ContractViolation& e) {
    throw DocumentError("config", e.what());
  }
  return config;
}

// ---------------------------------------------------------------------------

namespace {

Json optional_clue(const std::optional<Clue>& clue) { return clue ? clue_to_json(*clue) : Json(nullptr); }

std::optional<Clue> optional_clue_from(const Json& doc, std::string_view key, const std::string& where) {
  const Json* c = optional_field(doc, key);
  if (!c) return std::nullopt;
  return clue_from_json(*c, field(where, key));
}

}  // namespace

Json event_to_json(const Network& net, const SessionEvent& event) {
  return std::visit(
      [&](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, OpenEvent>) {
          return Json{{"type", "open"},
                      {"t", e.timestamp_ms},
                      {"session", e.session_id},
                      {"network", e.network_id},
                      {"actor", to_string(e.actor)},
                      {"mode", to_string(e.mode)},
                      {"start", layout_to_json(net, {e.network_id, e.start, std::nullopt})},
                      {"breakdown", breakdown_to_json(e.breakdown)}};
        } else if constexpr (std::is_same_v<T, MoveEvent>) {
          return Json{{"type", "move"},
                      {"t", e.timestamp_ms},
                      {"node", e.node_id},
                      {"from", point_to_json(e.from)},
                      {"to", point_to_json(e.to)},
                      {"breakdown", breakdown_to_json(e.breakdown)},
                      {"clue", optional_clue(e.active_clue)},
                      {"moved_clue_element", e.moved_clue_element}};
        } else if constexpr (std::is_same_v<T, ClueEvent>) {
          return Json{{"type", "clue"}, {"t", e.timestamp_ms}, {"clue", optional_clue(e.clue)}};
        } else if constexpr (std::is_same_v<T, ControlEvent>) {
          return Json{{"type", to_string(e.kind)},
                      {"t", e.timestamp_ms},
                      {"applied", e.applied},
                      {"breakdown", breakdown_to_json(e.breakdown)}};
        } else if constexpr (std::is_same_v<T, ScaleEvent>) {
          return Json{{"type", "scale"},
                      {"t", e.timestamp_ms},
                      {"nodes", e.node_ids},
                      {"factor", format_number(e.factor)},
                      {"applied", e.applied},
                      {"breakdown", breakdown_to_json(e.breakdown)}};
        } else {
          return Json{{"type", "finalize"},
                      {"t", e.timestamp_ms},
                      {"registry_updated", e.registry_updated},
                      {"bonus", format_number(e.bonus)},
                      {"session_best", breakdown_to_json(e.session_best)}};
        }
      },
      event);
}

SessionEvent event_from_json(const Json& doc, const Network& net, const std::string& where) {
  const std::string type = get_string(doc, "type", where);
  const std::int64_t t = get_int(doc, "t", where);
  if (type == "open") {
    OpenEvent e;
    e.timestamp_ms = t;
    e.session_id = get_string(doc, "session", where);
    e.network_id = get_string(doc, "network", where);
    const auto actor = parse_actor_kind(get_string(doc, "actor", where));
    if (!actor) throw DocumentError(field(where, "actor"), "unknown actor");
    e.actor = *actor;
    const auto mode = parse_criterion(get_string(doc, "mode", where));
    if (!mode) throw DocumentError(field(where, "mode"), "unknown criterion");
    e.mode = *mode;
    e.start = layout_from_json(require(doc, "start", where), net).layout;
    e.breakdown = breakdown_from_json(require(doc, "breakdown", where), field(where, "breakdown"));
    return e;
  }
  if (type == "move") {
    MoveEvent e;
    e.timestamp_ms = t;
    e.node_id = get_string(doc, "node", where);
    e.from = point_from_json(require(doc, "from", where), field(where, "from"));
    e.to = point_from_json(require(doc, "to", where), field(where, "to"));
    e.breakdown = breakdown_from_json(require(doc, "breakdown", where), field(where, "breakdown"));
    e.active_clue = optional_clue_from(doc, "clue", where);
    e.moved_clue_element = get_bool(doc, "moved_clue_element", where);
    return e;
  }
  if (type == "clue") {
    return ClueEvent{t, optional_clue_from(doc, "clue", where)};
  }
  if (type == "undo" || type == "redo" || type == "revert") {
    ControlEvent e;
    e.timestamp_ms = t;
    e.kind = type == "undo" ? ControlKind::undo : type == "redo" ? ControlKind::redo : ControlKind::revert_to_best;
    e.applied = get_bool(doc, "applied", where);
    e.breakdown = breakdown_from_json(require(doc, "breakdown", where), field(where, "breakdown"));
    return e;
  }
  if (type == "scale") {
    ScaleEvent e;
    e.timestamp_ms = t;
    const Json& nodes = require(doc, "nodes", where);
    if (!nodes.is_array()) throw DocumentError(field(where, "nodes"), "expected an array");
    for (const auto& id : nodes) {
      if (!id.is_string()) throw DocumentError(field(where, "nodes"), "expected string ids");
      e.node_ids.push_back(id.get<std::string>());
    }
    e.factor = get_decimal(doc, "factor", where);
    e.applied = get_bool(doc, "applied", where);
    e.breakdown = breakdown_from_json(require(doc, "breakdown", where), field(where, "breakdown"));
    return e;
  }
  if (type == "finalize") {
    FinalizeEvent e;
    e.timestamp_ms = t;
    e.registry_updated = get_bool(doc, "registry_updated", where);
    e.bonus = get_decimal(doc, "bonus", where);
    e.session_best = breakdown_from_json(require(doc, "session_best", where), field(where, "session_best"));
    return e;
  }
  throw DocumentError(field(where, "type"), "unknown event type '" + type + "'");
}

namespace {

Json log_header(const Network& net) { return Json{{"schema", kSessionLogSchema}, {"network", net.id()}}; }

}  // namespace

void write_session_log(std::ostream& out, const Network& net, const std::vector<SessionEvent>& events) {
  out << log_header(net).dump() << '\n';
  for (const auto& e : events) out << event_to_json(net, e).dump() << '\n';
}

std::vector<SessionEvent> read_session_log(std::istream& in, const Network& net) {
  std::vector<SessionEvent> events;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(number);
    Json doc;
    try {
      doc = Json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw DocumentError(where, "malformed JSON");
    }
    if (!header) {
      if (get_string(doc, "schema", where) != kSessionLogSchema) {
        throw DocumentError(where, "not a session log");
      }
      if (get_string(doc, "network", where) != net.id()) {
        throw DocumentError(where, "log belongs to another network");
      }
      header = true;
      continue;
    }
    events.push_back(event_from_json(doc, net, where));
  }
  if (!header) throw DocumentError("line 1", "empty session log");
  return events;
}

struct SessionLogWriter::Impl {
  std::ofstream out;
  const Network* net;
};

SessionLogWriter::SessionLogWriter(const std::string& path, const Network& net) : impl_(std::make_unique<Impl>()) {
  impl_->net = &net;
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) throw DocumentError(path, "cannot open log for writing");
  impl_->out << log_header(net).dump() << '\n' << std::flush;
}

SessionLogWriter::~SessionLogWriter() = default;

void SessionLogWriter::append(const SessionEvent& event) {
  impl_->out << event_to_json(*impl_->net, event).dump() << '\n' << std::flush;
}

void SessionLogWriter::append(const std::vector<SessionEvent>& events) {
  for (const auto& e : events) append(e);
}

// ---------------------------------------------------------------------------

Json report_to_json(const SequenceReport& report) {
  Json modes = Json::array();
  for (Criterion c : report.modes) modes.push_back(to_string(c));
  Json turns = Json::array();
  double summed = 0.0;
  for (const auto& t : report.turns) {
    Json turn{{"position", t.position},
              {"session", t.session_id},
              {"actor", to_string(t.actor)},
              {"mode", t.mode ? Json(to_string(*t.mode)) : Json(nullptr)},
              {"segment", t.segment ? Json(to_string(*t.segment)) : Json(nullptr)},
              {"seed", t.seed},
              {"moves", t.moves},
              {"session_best", breakdown_to_json(t.session_best)},
              {"registry_before", format_number(t.registry_before.overall)},
              {"registry_after", format_number(t.registry_after.overall)},
              {"registry_updated", t.registry_updated},
              {"contribution", format_number(t.contribution)},
              {"bonus", format_number(t.bonus)},
              {"elapsed_minutes", t.elapsed_minutes}};
    summed += t.contribution;
    turns.push_back(std::move(turn));
  }
  return Json{{"schema", kReportSchema},
              {"network", report.network_id},
              {"approach", to_string(report.approach)},
              {"modes", std::move(modes)},
              {"initial", breakdown_to_json(report.initial)},
              {"pre_fine_tune", breakdown_to_json(report.pre_fine_tune)},
              {"final", breakdown_to_json(report.final_score)},
              {"summed_contributions", format_number(summed)},
              {"player_minutes", report.player_minutes},
              {"annealer_minutes", report.annealer_minutes},
              {"annealer_iterations", report.annealer_iterations},
              {"total_bonus", format_number(report.total_bonus)},
              {"turns", std::move(turns)}};
}

std::string export_scores_csv(const SequenceReport& report) {
  std::string out = "elapsed_minutes,actor,session,overall,dp,ec,el,nd,ned\n";
  for (const auto& t : report.turns) {
    if (!t.registry_updated) continue;
    out += format_number(t.elapsed_minutes) + "," + std::string(to_string(t.actor)) + "," + t.session_id + "," +
           format_number(t.registry_after.overall);
    for (int d : t.registry_after.display) out += "," + std::to_string(d);
    out += "\n";
  }
  return out;
}

std::string export_turns_csv(const SequenceReport& report) {
  std::string out =
      "position,actor,session,mode,segment,moves,registry_before,registry_after,registry_updated,contribution,bonus,"
      "elapsed_minutes\n";
  for (const auto& t : report.turns) {
    out += std::to_string(t.position) + "," + std::string(to_string(t.actor)) + "," + t.session_id + "," +
           (t.mode ? std::string(to_string(*t.mode)) : "") + "," +
           (t.segment ? std::string(to_string(*t.segment)) : "") + "," + std::to_string(t.moves) + "," +
           format_number(t.registry_before.overall) + "," + format_number(t.registry_after.overall) + "," +
           (t.registry_updated ? "1" : "0") + "," + format_number(t.contribution) + "," + format_number(t.bonus) +
           "," + format_number(t.elapsed_minutes) + "\n";
  }
  return out;
}

std::string export_trajectory_csv(const std::vector<TrajectorySample>& trajectory) {
  std::string out = "iteration,temperature,current_overall,best_overall\n";
  for (const auto& s : trajectory) {
    out += std::to_string(s.iteration) + "," + format_number(s.temperature) + "," +
           format_number(s.current_overall) + "," + format_number(s.best_overall) + "\n";
  }
  return out;
}

}  // namespace layoutgame

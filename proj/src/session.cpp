#include "layoutgame/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "layoutgame/errors.hpp"

namespace layoutgame {

std::string_view to_string(ActorKind actor) {
  switch (actor) {
    case ActorKind::player: return "player";
    case ActorKind::scripted_agent: return "scripted_agent";
    case ActorKind::annealer_segment: return "annealer_segment";
    case ActorKind::fine_tune: return "fine_tune";
    case ActorKind::initial: return "initial";
  }
  return "player";
}

std::optional<ActorKind> parse_actor_kind(std::string_view text) {
  for (ActorKind a : {ActorKind::player, ActorKind::scripted_agent, ActorKind::annealer_segment,
                      ActorKind::fine_tune, ActorKind::initial}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::undo: return "undo";
    case ControlKind::redo: return "redo";
    case ControlKind::revert_to_best: return "revert";
  }
  return "undo";
}

SessionClock logical_clock() {
  auto tick = std::make_shared<std::int64_t>(0);
  return [tick] { return (*tick)++; };
}

SessionClock steady_clock_ms() {
  return [] {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
  };
}

// ---------------------------------------------------------------------------

Session::Session(std::string id, ActorKind actor, Criterion mode, std::shared_ptr<const Scorer> scorer, Layout start,
                 SessionClock clock)
    : id_(std::move(id)),
      actor_(actor),
      mode_(mode),
      scorer_(std::move(scorer)),
      clock_(clock ? std::move(clock) : logical_clock()),
      start_(start),
      state_(*scorer_, std::move(start)) {
  current_ = state_.breakdown();
  start_score_ = current_;
  best_ = current_;
  best_layout_ = state_.layout();
  events_.emplace_back(OpenEvent{clock_(), id_, network().id(), actor_, mode_, start_, current_});
}

void Session::require_open() const {
  if (!open_) {
    throw SessionClosedError("session '" + id_ + "' is closed");
  }
}

void Session::note_best() {
  if (current_.overall > best_.overall) {
    best_ = current_;
    best_layout_ = state_.layout();
  }
}

ScoreBreakdown Session::apply_layout(Layout layout) {
  const ScoreBreakdown previous = current_;
  state_.reset(std::move(layout));
  current_ = state_.breakdown(&previous);
  note_best();
  return current_;
}

ScoreBreakdown Session::record_move(std::string_view node_id, Point to) {
  require_open();
  auto node = network().find_node(node_id);
  if (!node) {
    throw UnknownNodeError("unknown node '" + std::string(node_id) + "'");
  }
  return record_move(*node, to);
}

ScoreBreakdown Session::record_move(NodeIndex node, Point to) {
  require_open();
  if (node >= network().node_count()) {
    throw UnknownNodeError("node index " + std::to_string(node) + " out of range");
  }
  if (!std::isfinite(to.x) || !std::isfinite(to.y)) {
    throw ContractViolation("move coordinates must be finite");
  }
  const Point from = state_.position(node);
  undo_.push_back(state_.layout());
  redo_.clear();

  const ScoreBreakdown previous = current_;
  state_.move_node(node, to);
  current_ = state_.breakdown(&previous);
  note_best();

  const std::string& node_id = network().nodes()[node].id;
  const bool on_clue =
      active_clue_ && std::find(active_clue_->node_ids.begin(), active_clue_->node_ids.end(), node_id) !=
                          active_clue_->node_ids.end();
  events_.emplace_back(MoveEvent{clock_(), node_id, from, to, current_, active_clue_, on_clue});
  return current_;
}

double Session::preview_move(NodeIndex node, Point to) {
  const Point from = state_.position(node);
  state_.move_node(node, to);
  const double overall = state_.overall();
  state_.move_node(node, from);
  return overall;
}

std::optional<Clue> Session::request_clue(const ClueParams& params) {
  require_open();
  active_clue_ = clue_for(mode_, network(), state_.layout(), scorer_->params(), params);
  events_.emplace_back(ClueEvent{clock_(), active_clue_});
  return active_clue_;
}

ControlResult Session::undo() {
  require_open();
  ControlResult result{false, current_};
  if (!undo_.empty()) {
    Layout target = std::move(undo_.back());
    undo_.pop_back();
    redo_.push_back(state_.layout());
    result = {true, apply_layout(std::move(target))};
  }
  events_.emplace_back(ControlEvent{clock_(), ControlKind::undo, result.applied, result.breakdown});
  return result;
}

ControlResult Session::redo() {
  require_open();
  ControlResult result{false, current_};
  if (!redo_.empty()) {
    Layout target = std::move(redo_.back());
    redo_.pop_back();
    undo_.push_back(state_.layout());
    result = {true, apply_layout(std::move(target))};
  }
  events_.emplace_back(ControlEvent{clock_(), ControlKind::redo, result.applied, result.breakdown});
  return result;
}

ControlResult Session::revert_to_best() {
  require_open();
  undo_.push_back(state_.layout());
  redo_.clear();
  ControlResult result{true, apply_layout(best_layout_)};
  events_.emplace_back(ControlEvent{clock_(), ControlKind::revert_to_best, true, result.breakdown});
  return result;
}

ControlResult Session::scale_selection(const std::vector<std::string>& node_ids, double factor) {
  require_open();
  std::vector<NodeIndex> selection;
  for (const auto& id : node_ids) {
    auto node = network().find_node(id);
    if (!node) throw UnknownNodeError("unknown node '" + id + "'");
    selection.push_back(*node);
  }
  auto scaled = layoutgame::scale_selection(state_.layout(), selection, factor);
  ControlResult result{false, current_};
  if (scaled.status == ScaleStatus::ok) {
    undo_.push_back(state_.layout());
    redo_.clear();
    result = {true, apply_layout(std::move(scaled.layout))};
  }
  events_.emplace_back(ScaleEvent{clock_(), node_ids, factor, result.applied, result.breakdown});
  return result;
}

void Session::close(bool registry_updated, double bonus) {
  require_open();
  open_ = false;
  events_.emplace_back(FinalizeEvent{clock_(), registry_updated, bonus, best_});
}

std::vector<SessionEvent> Session::take_new_events() {
  std::vector<SessionEvent> out(events_.begin() + static_cast<std::ptrdiff_t>(streamed_), events_.end());
  streamed_ = events_.size();
  return out;
}

ReplayResult replay_session(std::shared_ptr<const Scorer> scorer, const std::vector<SessionEvent>& events) {
  ReplayResult result;
  if (events.empty() || !std::holds_alternative<OpenEvent>(events.front())) {
    throw DocumentError("events[0]", "session log must start with an open event");
  }
  const auto& open = std::get<OpenEvent>(events.front());
  Session session(open.session_id, open.actor, open.mode, std::move(scorer), open.start);
  result.recorded.push_back(open.breakdown);
  result.replayed.push_back(session.current());

  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto& event = events[i];
    if (const auto* move = std::get_if<MoveEvent>(&event)) {
      result.recorded.push_back(move->breakdown);
      result.replayed.push_back(session.record_move(move->node_id, move->to));
    } else if (const auto* control = std::get_if<ControlEvent>(&event)) {
      ControlResult r;
      switch (control->kind) {
        case ControlKind::undo: r = session.undo(); break;
        case ControlKind::redo: r = session.redo(); break;
        case ControlKind::revert_to_best: r = session.revert_to_best(); break;
      }
      result.recorded.push_back(control->breakdown);
      result.replayed.push_back(r.breakdown);
    } else if (const auto* scale = std::get_if<ScaleEvent>(&event)) {
      result.recorded.push_back(scale->breakdown);
      result.replayed.push_back(session.scale_selection(scale->node_ids, scale->factor).breakdown);
    } else if (const auto* fin = std::get_if<FinalizeEvent>(&event)) {
      result.recorded.push_back(fin->session_best);
      result.replayed.push_back(session.best());
    } else if (std::holds_alternative<OpenEvent>(event)) {
      throw DocumentError("events[" + std::to_string(i) + "]", "unexpected second open event");
    }
    // Clue events do not change the layout.
  }
  result.final_layout = session.layout();
  result.matches = result.recorded == result.replayed;
  return result;
}

// ---------------------------------------------------------------------------

void BestLayoutRegistry::initialize(const std::string& network_id, Layout layout, ScoreBreakdown breakdown,
                                    const std::string& session_id) {
  std::lock_guard lock(mutex_);
  if (records_.count(network_id)) return;
  RegistrySnapshot record;
  record.layout = std::move(layout);
  record.breakdown = breakdown;
  record.session_id = session_id;
  record.initial = {session_id, ActorKind::initial, breakdown, 0.0};
  records_.emplace(network_id, std::move(record));
}

bool BestLayoutRegistry::contains(const std::string& network_id) const {
  std::lock_guard lock(mutex_);
  return records_.count(network_id) > 0;
}

std::optional<RegistrySnapshot> BestLayoutRegistry::snapshot(const std::string& network_id) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find(network_id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

BestLayoutRegistry::Offer BestLayoutRegistry::offer(const std::string& network_id, const Layout& layout,
                                                    const ScoreBreakdown& breakdown, const std::string& session_id,
                                                    ActorKind actor, double elapsed_minutes) {
  std::lock_guard lock(mutex_);
  auto it = records_.find(network_id);
  if (it == records_.end()) {
    throw ContractViolation("registry has no entry for network '" + network_id + "'");
  }
  RegistrySnapshot& record = it->second;
  Offer result{false, record.breakdown, record.breakdown};
  if (breakdown.overall > record.breakdown.overall) {
    record.layout = layout;
    record.breakdown = breakdown;
    record.session_id = session_id;
    record.improvements.push_back({session_id, actor, breakdown, elapsed_minutes});
    result.accepted = true;
    result.current = breakdown;
  }
  return result;
}

// ---------------------------------------------------------------------------

double compute_bonus(double from_score, double to_score, double budget, double target) {
  if (!(to_score > from_score)) {
    throw ContractViolation("bonus is only paid for an improvement (s_j > s_i)");
  }
  if (!(from_score >= 0.0) || !(budget >= 0.0) || !(target > 0.0)) {
    throw ContractViolation("bonus requires s_i >= 0, b >= 0 and s_target > 0");
  }
  const double base = budget + 1.0;
  return std::pow(base, std::min(to_score, target) / target) - std::pow(base, std::min(from_score, target) / target);
}

BonusPolicy BonusPolicy::proportional(const Priorities& priorities, double total_budget) {
  BonusPolicy policy;
  const double total = priorities.total();
  for (Criterion c : kCriteria) {
    policy.budgets[index_of(c)] = total > 0.0 ? total_budget * priorities[c] / total : 0.0;
  }
  return policy;
}

FinalizeReport finalize_session(Session& session, BestLayoutRegistry& registry, const BonusPolicy& bonus,
                                double elapsed_minutes) {
  if (!session.is_open()) {
    throw SessionClosedError("session '" + session.id() + "' is already finalized");
  }
  auto offer = registry.offer(session.network().id(), session.best_layout(), session.best(), session.id(),
                              session.actor(), elapsed_minutes);
  FinalizeReport report;
  report.registry_updated = offer.accepted;
  report.registry_before = offer.previous;
  report.registry_after = offer.current;
  report.contribution = offer.current.overall - offer.previous.overall;
  if (offer.accepted) {
    const std::size_t m = index_of(session.mode());
    const double from = offer.previous.display[m];
    const double to = offer.current.display[m];
    if (to > from) {
      report.bonus = compute_bonus(from, to, bonus.budgets[m], bonus.targets[m]);
    }
  }
  session.close(report.registry_updated, report.bonus);
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Criterion> assign_modes(ModeStrategy strategy, const Priorities& priorities, std::size_t per_criterion,
                                    Rng& rng) {
  if (per_criterion < 1) {
    throw ContractViolation("assign_modes needs at least one session per criterion");
  }
  std::vector<Criterion> order(kCriteria.begin(), kCriteria.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](Criterion a, Criterion b) { return priorities[a] > priorities[b]; });
  std::vector<Criterion> modes;
  modes.reserve(order.size() * per_criterion);
  for (Criterion c : order) {
    modes.insert(modes.end(), per_criterion, c);
  }
  if (strategy == ModeStrategy::random) {
    rng.shuffle(modes);
  }
  return modes;
}

std::string_view to_string(Approach approach) {
  switch (approach) {
    case Approach::crowd: return "Crowd";
    case Approach::crowd_random: return "CrowdRandom";
    case Approach::hybrid_sa100: return "HybridSA100";
    case Approach::hybrid_sa50: return "HybridSA50";
    case Approach::hybrid_sa20: return "HybridSA20";
    case Approach::sa_only: return "SAOnly";
  }
  return "Crowd";
}

std::optional<Approach> parse_approach(std::string_view text) {
  for (Approach a : {Approach::crowd, Approach::crowd_random, Approach::hybrid_sa100, Approach::hybrid_sa50,
                     Approach::hybrid_sa20, Approach::sa_only}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

bool is_hybrid(Approach approach) {
  return approach == Approach::hybrid_sa100 || approach == Approach::hybrid_sa50 ||
         approach == Approach::hybrid_sa20;
}

TurnActor next_actor(Approach approach, std::size_t position) {
  if (approach == Approach::sa_only) return TurnActor::annealer;
  if (is_hybrid(approach)) return position % 2 == 0 ? TurnActor::player : TurnActor::annealer;
  return TurnActor::player;
}

// ---------------------------------------------------------------------------

AgentResult run_scripted_agent(Session& session, const AgentPolicy& policy) {
  AgentResult result;
  const Network& net = session.network();
  const BoundingBox box = session.layout().box;
  const std::size_t n = net.node_count();
  if (n == 0 || policy.grid_resolution == 0) return result;

  Rng rng(policy.seed);
  const auto started = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (!policy.time_budget_ms) return false;
    const auto spent = std::chrono::steady_clock::now() - started;
    return std::chrono::duration_cast<std::chrono::milliseconds>(spent).count() >= *policy.time_budget_ms;
  };

  std::vector<Point> grid;
  for (std::size_t i = 0; i < policy.grid_resolution; ++i) {
    for (std::size_t j = 0; j < policy.grid_resolution; ++j) {
      grid.push_back({(static_cast<double>(i) + 0.5) * box.width / static_cast<double>(policy.grid_resolution),
                      (static_cast<double>(j) + 0.5) * box.height / static_cast<double>(policy.grid_resolution)});
    }
  }

  while (result.attempts < policy.move_budget && !out_of_time()) {
    ++result.attempts;
    const double current = session.current().overall;

    if (auto clue = session.request_clue(policy.clue_params)) {
      std::optional<std::pair<NodeIndex, Point>> best_move;
      double best_overall = current;
      for (const auto& id : clue->node_ids) {
        const NodeIndex v = *net.find_node(id);
        for (Point p : grid) {
          const double overall = session.preview_move(v, p);
          if (overall > best_overall) {
            best_overall = overall;
            best_move = {v, p};
          }
        }
      }
      if (best_move) {
        session.record_move(best_move->first, best_move->second);
        ++result.moves;
        ++result.clue_moves;
        continue;
      }
    }

    const NodeIndex v = rng.index(n);
    const Point from = session.layout().positions[v];
    const Point to = box.clamp({from.x + rng.uniform(-1.0, 1.0) * policy.nudge_fraction * box.width,
                                from.y + rng.uniform(-1.0, 1.0) * policy.nudge_fraction * box.height});
    if (session.preview_move(v, to) > current) {
      session.record_move(v, to);
      ++result.moves;
    }
  }
  return result;
}

}  // namespace layoutgame

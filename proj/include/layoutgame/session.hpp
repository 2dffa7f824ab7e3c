#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "layoutgame/clues.hpp"
#include "layoutgame/random.hpp"
#include "layoutgame/score_state.hpp"

namespace layoutgame {

enum class ActorKind { player, scripted_agent, annealer_segment, fine_tune, initial };

std::string_view to_string(ActorKind actor);
std::optional<ActorKind> parse_actor_kind(std::string_view text);

// ---------------------------------------------------------------------------
// Session event log

struct OpenEvent {
  std::int64_t timestamp_ms = 0;
  std::string session_id;
  std::string network_id;
  ActorKind actor = ActorKind::player;
  Criterion mode = Criterion::dp;
  Layout start;
  ScoreBreakdown breakdown;
};

struct MoveEvent {
  std::int64_t timestamp_ms = 0;
  std::string node_id;
  Point from;
  Point to;
  ScoreBreakdown breakdown;  // after the move
  std::optional<Clue> active_clue;
  bool moved_clue_element = false;
};

struct ClueEvent {
  std::int64_t timestamp_ms = 0;
  std::optional<Clue> clue;  // empty when none exists
};

enum class ControlKind { undo, redo, revert_to_best };

struct ControlEvent {
  std::int64_t timestamp_ms = 0;
  ControlKind kind = ControlKind::undo;
  bool applied = false;
  ScoreBreakdown breakdown;
};

struct ScaleEvent {
  std::int64_t timestamp_ms = 0;
  std::vector<std::string> node_ids;
  double factor = 1.0;
  bool applied = false;
  ScoreBreakdown breakdown;
};

struct FinalizeEvent {
  std::int64_t timestamp_ms = 0;
  bool registry_updated = false;
  double bonus = 0.0;
  ScoreBreakdown session_best;
};

using SessionEvent = std::variant<OpenEvent, MoveEvent, ClueEvent, ControlEvent, ScaleEvent, FinalizeEvent>;

std::string_view to_string(ControlKind kind);

/// Milliseconds since an arbitrary origin.
using SessionClock = std::function<std::int64_t()>;

/// Clock that advances by one on every read; keeps scripted runs
/// reproducible.
SessionClock logical_clock();
SessionClock steady_clock_ms();

struct ControlResult {
  bool applied = false;
  ScoreBreakdown breakdown;
};

// ---------------------------------------------------------------------------

/// One actor's turn at improving a layout. Not thread-safe; callers
/// serialise access per session.
class Session {
 public:
  Session(std::string id, ActorKind actor, Criterion mode, std::shared_ptr<const Scorer> scorer, Layout start,
          SessionClock clock = logical_clock());

  const std::string& id() const { return id_; }
  ActorKind actor() const { return actor_; }
  Criterion mode() const { return mode_; }
  bool is_open() const { return open_; }
  const Scorer& scorer() const { return *scorer_; }
  const Network& network() const { return scorer_->network(); }

  const Layout& start_layout() const { return start_; }
  const ScoreBreakdown& start_score() const { return start_score_; }
  const Layout& layout() const { return state_.layout(); }
  const ScoreBreakdown& current() const { return current_; }
  const Layout& best_layout() const { return best_layout_; }
  const ScoreBreakdown& best() const { return best_; }
  const std::optional<Clue>& active_clue() const { return active_clue_; }
  bool can_undo() const { return !undo_.empty(); }
  bool can_redo() const { return !redo_.empty(); }
  const std::vector<SessionEvent>& events() const { return events_; }

  /// Throws UnknownNodeError / SessionClosedError.
  ScoreBreakdown record_move(std::string_view node_id, Point to);
  ScoreBreakdown record_move(NodeIndex node, Point to);
  /// Overall score the layout would have after the move; nothing recorded.
  double preview_move(NodeIndex node, Point to);

  /// Computes the clue for the session's mode on the current layout and logs it.
  std::optional<Clue> request_clue(const ClueParams& params = {});

  ControlResult undo();
  ControlResult redo();
  ControlResult revert_to_best();
  ControlResult scale_selection(const std::vector<std::string>& node_ids, double factor);

  /// Marks the session closed and logs the outcome. Used by finalize_session.
  void close(bool registry_updated, double bonus);

  /// Events appended since the last call; lets a log writer stream records.
  std::vector<SessionEvent> take_new_events();

 private:
  void require_open() const;
  ScoreBreakdown apply_layout(Layout layout);
  void note_best();

  std::string id_;
  ActorKind actor_;
  Criterion mode_;
  std::shared_ptr<const Scorer> scorer_;
  SessionClock clock_;
  bool open_ = true;

  Layout start_;
  ScoreBreakdown start_score_;
  ScoreState state_;
  ScoreBreakdown current_;
  Layout best_layout_;
  ScoreBreakdown best_;
  std::optional<Clue> active_clue_;
  std::vector<Layout> undo_;
  std::vector<Layout> redo_;
  std::vector<SessionEvent> events_;
  std::size_t streamed_ = 0;
};

struct ReplayResult {
  Layout final_layout;
  std::vector<ScoreBreakdown> recorded;
  std::vector<ScoreBreakdown> replayed;
  bool matches = false;
};

/// Re-executes a logged session from its open event and compares every
/// recorded breakdown with the recomputed one (exact equality).
ReplayResult replay_session(std::shared_ptr<const Scorer> scorer, const std::vector<SessionEvent>& events);

// ---------------------------------------------------------------------------
// Best layout registry

struct RegistryEntry {
  std::string session_id;
  ActorKind actor = ActorKind::initial;
  ScoreBreakdown breakdown;
  double elapsed_minutes = 0.0;
};

struct RegistrySnapshot {
  Layout layout;
  ScoreBreakdown breakdown;
  std::string session_id;
  RegistryEntry initial;
  std::vector<RegistryEntry> improvements;
};

/// Highest-scoring layout per network. Offers replace the incumbent only on
/// strict improvement of the overall score; each offer is atomic.
class BestLayoutRegistry {
 public:
  /// No-op if the network already has an entry.
  void initialize(const std::string& network_id, Layout layout, ScoreBreakdown breakdown,
                  const std::string& session_id = "initial");
  bool contains(const std::string& network_id) const;
  std::optional<RegistrySnapshot> snapshot(const std::string& network_id) const;

  struct Offer {
    bool accepted = false;
    ScoreBreakdown previous;
    ScoreBreakdown current;
  };
  Offer offer(const std::string& network_id, const Layout& layout, const ScoreBreakdown& breakdown,
              const std::string& session_id, ActorKind actor, double elapsed_minutes = 0.0);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, RegistrySnapshot> records_;
};

// ---------------------------------------------------------------------------
// Bonus

/// (b+1)^(min(s_j,T)/T) - (b+1)^(min(s_i,T)/T) for display scores s_i < s_j.
/// Throws ContractViolation when s_j <= s_i, s_i < 0, b < 0 or T <= 0.
double compute_bonus(double from_score, double to_score, double budget, double target);

struct BonusPolicy {
  std::array<double, kCriterionCount> budgets{};
  std::array<double, kCriterionCount> targets{2000.0, 2000.0, 2000.0, 2000.0, 2000.0};

  /// Budgets split in proportion to the priorities.
  static BonusPolicy proportional(const Priorities& priorities, double total_budget);
};

struct FinalizeReport {
  bool registry_updated = false;
  ScoreBreakdown registry_before;
  ScoreBreakdown registry_after;
  double contribution = 0.0;  // registry overall after - before
  double bonus = 0.0;
};

/// Closes the session and offers its best layout to the registry. The bonus
/// follows the registry's display score for the session's mode.
FinalizeReport finalize_session(Session& session, BestLayoutRegistry& registry, const BonusPolicy& bonus,
                                double elapsed_minutes = 0.0);

// ---------------------------------------------------------------------------
// Mode assignment and actor turns

enum class ModeStrategy { priority_order, random };

/// Each criterion exactly `per_criterion` times: in blocks ordered by
/// descending priority (ties in DP, EC, EL, ND, NED order), or a seeded
/// uniform shuffle of the same multiset.
std::vector<Criterion> assign_modes(ModeStrategy strategy, const Priorities& priorities,
                                    std::size_t per_criterion, Rng& rng);

enum class Approach { crowd, crowd_random, hybrid_sa100, hybrid_sa50, hybrid_sa20, sa_only };

std::string_view to_string(Approach approach);
std::optional<Approach> parse_approach(std::string_view text);
bool is_hybrid(Approach approach);

enum class TurnActor { player, annealer };

/// Actor for the turn at zero-based `position` in the sequence.
TurnActor next_actor(Approach approach, std::size_t position);

// ---------------------------------------------------------------------------
// Scripted agent

struct AgentPolicy {
  std::size_t move_budget = 40;      // attempts, each recording at most one move
  std::size_t grid_resolution = 7;   // candidate grid is resolution x resolution cell centres
  double nudge_fraction = 0.05;      // random nudge half-extent relative to the box
  std::uint64_t seed = 1;
  std::optional<std::int64_t> time_budget_ms;
  ClueParams clue_params;
};

struct AgentResult {
  std::size_t attempts = 0;
  std::size_t moves = 0;
  std::size_t clue_moves = 0;
};

/// Greedy stand-in for a human player: tries a grid of positions for each
/// node of the mode's clue and records the best improving move; without a
/// clue or an improvement it nudges a random node and keeps it only if the
/// overall score rises.
AgentResult run_scripted_agent(Session& session, const AgentPolicy& policy);

}  // namespace layoutgame

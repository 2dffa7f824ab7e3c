#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "layoutgame/annealer.hpp"
#include "layoutgame/session.hpp"

namespace layoutgame {

struct GameConfig {
  std::string network_id;
  Priorities priorities;
  Approach approach = Approach::crowd;
  std::size_t sessions_per_criterion = 4;
  double session_minutes = 60.0;
  /// Cumulative player time after which no new player session starts. For
  /// SAOnly the annealer's nominal time counts instead.
  double sequence_budget_minutes = 24.0 * 60.0;
  BonusPolicy bonus;
  ScoringParams scoring;
  std::uint64_t seed = 1;
  SegmentKind sa_only_kind = SegmentKind::full;
  std::optional<std::size_t> sa_only_max_segments;
  bool final_fine_tune = true;

  /// Throws ContractViolation for N < 1, negative budgets or durations.
  void validate() const;
  /// Config with budgets split in proportion to the priorities.
  static GameConfig with_default_bonus(std::string network_id, Priorities priorities, double total_budget = 100.0);
};

/// Segment kind an annealer turn runs for a hybrid approach.
SegmentKind segment_kind_for(Approach approach);

/// Anything that can play a player session: a scripted agent in tests, a
/// live connection behind the HTTP service.
class PlayerAgent {
 public:
  virtual ~PlayerAgent() = default;
  virtual void play(Session& session, std::size_t position) = 0;
};

/// Runs run_scripted_agent with a per-session seed derived from the policy
/// seed and the sequence position.
class ScriptedPlayer : public PlayerAgent {
 public:
  explicit ScriptedPlayer(AgentPolicy policy) : policy_(std::move(policy)) {}
  void play(Session& session, std::size_t position) override;

 private:
  AgentPolicy policy_;
};

struct TurnReport {
  std::size_t position = 0;
  std::string session_id;
  ActorKind actor = ActorKind::player;
  std::optional<Criterion> mode;        // player sessions
  std::optional<SegmentKind> segment;   // annealer turns
  std::uint64_t seed = 0;
  std::size_t moves = 0;                // recorded moves, or accepted annealer steps
  ScoreBreakdown session_best;
  ScoreBreakdown registry_before;
  ScoreBreakdown registry_after;
  bool registry_updated = false;
  double contribution = 0.0;  // registry overall after - before
  double bonus = 0.0;
  double elapsed_minutes = 0.0;  // nominal time at the end of the turn
};

struct SequenceReport {
  std::string network_id;
  Approach approach = Approach::crowd;
  std::vector<Criterion> modes;
  ScoreBreakdown initial;
  std::vector<TurnReport> turns;  // includes the closing fine-tune turn
  ScoreBreakdown pre_fine_tune;
  ScoreBreakdown final_score;
  Layout final_layout;
  double player_minutes = 0.0;
  double annealer_minutes = 0.0;
  std::size_t annealer_iterations = 0;
  double total_bonus = 0.0;
  std::vector<std::vector<SessionEvent>> session_logs;  // one per player session, in order
};

/// Plays a whole game sequence against `registry`, which is initialised with
/// `initial` when it has no entry for the network. Player turns stop when the
/// mode list is exhausted or the player budget is spent; in a hybrid sequence
/// every player turn is followed by one annealer segment started from the
/// registry best. Finally FineTune runs on the registry best.
SequenceReport run_sequence(const GameConfig& config, std::shared_ptr<const Scorer> scorer, const Layout& initial,
                            BestLayoutRegistry& registry, PlayerAgent& player);

/// Mode list a sequence with this config plays; SAOnly has none.
std::vector<Criterion> sequence_modes(const GameConfig& config);

/// Random in-box start layout derived from `seed`.
Layout initial_layout(const Network& net, std::uint64_t seed, BoundingBox box = {});

/// Seed used by the annealer turn with zero-based index `k` (the same
/// derivation as run_repeated).
std::uint64_t segment_seed(std::uint64_t base, std::size_t k);
std::uint64_t fine_tune_seed(std::uint64_t base);

}  // namespace layoutgame

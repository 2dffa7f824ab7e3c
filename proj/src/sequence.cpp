#include "layoutgame/sequence.hpp"

#include <algorithm>

#include "layoutgame/errors.hpp"

namespace layoutgame {

namespace {

constexpr std::uint64_t kModeStream = 0x6d6f6465;      // "mode"
constexpr std::uint64_t kFineTuneStream = 0x66696e65;  // "fine"
constexpr std::uint64_t kLayoutStream = 0x6c61796f;    // "layo"

}  // namespace

void GameConfig::validate() const {
  priorities.validate();
  if (sessions_per_criterion < 1) {
    throw ContractViolation("sessions_per_criterion must be at least 1");
  }
  if (!(session_minutes >= 0.0) || !(sequence_budget_minutes >= 0.0)) {
    throw ContractViolation("session and sequence durations must be non-negative");
  }
  for (std::size_t i = 0; i < kCriterionCount; ++i) {
    if (!(bonus.budgets[i] >= 0.0)) throw ContractViolation("bonus budgets must be non-negative");
    if (!(bonus.targets[i] > 0.0)) throw ContractViolation("bonus targets must be positive");
  }
}

GameConfig GameConfig::with_default_bonus(std::string network_id, Priorities priorities, double total_budget) {
  GameConfig config;
  config.network_id = std::move(network_id);
  config.priorities = priorities;
  config.bonus = BonusPolicy::proportional(priorities, total_budget);
  return config;
}

SegmentKind segment_kind_for(Approach approach) {
  switch (approach) {
    case Approach::hybrid_sa50: return SegmentKind::sa50;
    case Approach::hybrid_sa20: return SegmentKind::sa20;
    default: return SegmentKind::sa100;
  }
}

std::vector<Criterion> sequence_modes(const GameConfig& config) {
  if (config.approach == Approach::sa_only) return {};
  Rng rng(mix_seed(config.seed, kModeStream));
  const auto strategy = config.approach == Approach::crowd_random ? ModeStrategy::random : ModeStrategy::priority_order;
  return assign_modes(strategy, config.priorities, config.sessions_per_criterion, rng);
}

Layout initial_layout(const Network& net, std::uint64_t seed, BoundingBox box) {
  Rng rng(mix_seed(seed, kLayoutStream));
  return random_layout(net, box, rng);
}

std::uint64_t segment_seed(std::uint64_t base, std::size_t k) { return k == 0 ? base : mix_seed(base, k); }

std::uint64_t fine_tune_seed(std::uint64_t base) { return mix_seed(base, kFineTuneStream); }

void ScriptedPlayer::play(Session& session, std::size_t position) {
  AgentPolicy policy = policy_;
  policy.seed = mix_seed(policy_.seed, position);
  run_scripted_agent(session, policy);
}

namespace {

class SequenceRun {
 public:
  SequenceRun(const GameConfig& config, std::shared_ptr<const Scorer> scorer, BestLayoutRegistry& registry,
              PlayerAgent& player, SequenceReport& report)
      : config_(config), scorer_(std::move(scorer)), registry_(registry), player_(player), report_(report) {}

  void player_turn(std::size_t position, Criterion mode) {
    const auto before = *registry_.snapshot(config_.network_id);
    const std::string id = "s" + std::to_string(position);
    Session session(id, ActorKind::scripted_agent, mode, scorer_, before.layout);
    player_.play(session, position);
    report_.player_minutes += config_.session_minutes;
    elapsed_ += config_.session_minutes;

    const std::size_t moves = std::count_if(session.events().begin(), session.events().end(), [](const auto& e) {
      return std::holds_alternative<MoveEvent>(e);
    });
    const auto fin = finalize_session(session, registry_, config_.bonus, elapsed_);

    TurnReport turn;
    turn.position = position;
    turn.session_id = id;
    turn.actor = ActorKind::scripted_agent;
    turn.mode = mode;
    turn.moves = moves;
    turn.session_best = session.best();
    turn.registry_before = fin.registry_before;
    turn.registry_after = fin.registry_after;
    turn.registry_updated = fin.registry_updated;
    turn.contribution = fin.contribution;
    turn.bonus = fin.bonus;
    turn.elapsed_minutes = elapsed_;
    report_.total_bonus += fin.bonus;
    report_.session_logs.push_back(session.events());
    report_.turns.push_back(std::move(turn));
  }

  void annealer_turn(std::size_t position, SegmentKind kind, std::uint64_t seed, ActorKind actor) {
    const auto before = *registry_.snapshot(config_.network_id);
    const AnnealSchedule schedule = schedule_for(kind, seed);
    const AnnealResult run = run_schedule(*scorer_, before.layout, schedule);
    const double minutes = nominal_minutes(kind);
    if (actor != ActorKind::fine_tune) report_.annealer_minutes += minutes;
    report_.annealer_iterations += run.iterations_run;
    elapsed_ += minutes;

    const std::string id = (actor == ActorKind::fine_tune ? "finetune" : "sa") + std::to_string(position);
    const auto offer =
        registry_.offer(config_.network_id, run.best_layout, run.best_score, id, actor, elapsed_);

    TurnReport turn;
    turn.position = position;
    turn.session_id = id;
    turn.actor = actor;
    turn.segment = kind;
    turn.seed = seed;
    turn.moves = run.accepted;
    turn.session_best = run.best_score;
    turn.registry_before = offer.previous;
    turn.registry_after = offer.current;
    turn.registry_updated = offer.accepted;
    turn.contribution = offer.current.overall - offer.previous.overall;
    turn.elapsed_minutes = elapsed_;
    report_.turns.push_back(std::move(turn));
  }

 private:
  const GameConfig& config_;
  std::shared_ptr<const Scorer> scorer_;
  BestLayoutRegistry& registry_;
  PlayerAgent& player_;
  SequenceReport& report_;
  double elapsed_ = 0.0;
};

}  // namespace

SequenceReport run_sequence(const GameConfig& config, std::shared_ptr<const Scorer> scorer, const Layout& initial,
                            BestLayoutRegistry& registry, PlayerAgent& player) {
  config.validate();
  if (scorer->network().id() != config.network_id) {
    throw ContractViolation("config names network '" + config.network_id + "' but the scorer holds '" +
                            scorer->network().id() + "'");
  }
  if (!in_bounds(initial)) {
    throw ContractViolation("sequence start layout must lie inside the bounding box");
  }
  if (!registry.contains(config.network_id)) {
    registry.initialize(config.network_id, initial, scorer->score(initial));
  }

  SequenceReport report;
  report.network_id = config.network_id;
  report.approach = config.approach;
  report.initial = registry.snapshot(config.network_id)->breakdown;

  report.modes = sequence_modes(config);

  SequenceRun run(config, scorer, registry, player, report);
  std::size_t next_mode = 0;
  std::size_t segments = 0;
  for (std::size_t position = 0;; ++position) {
    if (next_actor(config.approach, position) == TurnActor::player) {
      if (next_mode >= report.modes.size() || report.player_minutes >= config.sequence_budget_minutes) break;
      run.player_turn(position, report.modes[next_mode++]);
    } else if (config.approach == Approach::sa_only) {
      if (report.annealer_minutes >= config.sequence_budget_minutes) break;
      if (config.sa_only_max_segments && segments >= *config.sa_only_max_segments) break;
      run.annealer_turn(position, config.sa_only_kind, segment_seed(config.seed, segments), ActorKind::annealer_segment);
      ++segments;
    } else {
      run.annealer_turn(position, segment_kind_for(config.approach), segment_seed(config.seed, segments),
                        ActorKind::annealer_segment);
      ++segments;
    }
  }

  report.pre_fine_tune = registry.snapshot(config.network_id)->breakdown;
  if (config.final_fine_tune) {
    run.annealer_turn(report.turns.size(), SegmentKind::fine_tune, fine_tune_seed(config.seed), ActorKind::fine_tune);
  }
  const auto final_snapshot = *registry.snapshot(config.network_id);
  report.final_score = final_snapshot.breakdown;
  report.final_layout = final_snapshot.layout;
  return report;
}

}  // namespace layoutgame

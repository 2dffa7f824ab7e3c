#include "layoutgame/annealer.hpp"

#include <cmath>

#include "layoutgame/errors.hpp"
#include "layoutgame/score_state.hpp"

namespace layoutgame {

void AnnealSchedule::validate() const {
  if (!(cooling > 0.0 && cooling < 1.0)) {
    throw ContractViolation("cooling factor must lie in (0, 1)");
  }
  if (!(t_start > 0.0 && t_start <= t_max)) {
    throw ContractViolation("start temperature must satisfy 0 < t_start <= t_max");
  }
  if (iterations < 1) {
    throw ContractViolation("a schedule needs at least one iteration");
  }
  if (steps_per_node < 1) {
    throw ContractViolation("steps_per_node must be at least 1");
  }
  if (!(score_scale > 0.0)) {
    throw ContractViolation("score_scale must be positive");
  }
}

double AnnealSchedule::temperature_after(std::size_t n) const {
  double t = t_start;
  for (std::size_t i = 0; i < n; ++i) t *= cooling;
  return t;
}

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::full: return "Full";
    case SegmentKind::sa100: return "SA100";
    case SegmentKind::sa50: return "SA50";
    case SegmentKind::sa20: return "SA20";
    case SegmentKind::fine_tune: return "FineTune";
  }
  return "Full";
}

std::optional<SegmentKind> parse_segment_kind(std::string_view text) {
  for (SegmentKind k : {SegmentKind::full, SegmentKind::sa100, SegmentKind::sa50, SegmentKind::sa20,
                        SegmentKind::fine_tune}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

AnnealSchedule schedule_for(SegmentKind kind, std::uint64_t seed) {
  AnnealSchedule s;
  s.seed = seed;
  switch (kind) {
    case SegmentKind::full:
      break;
    case SegmentKind::sa100:
      s.iterations = 125;
      break;
    case SegmentKind::sa50:
      s.t_start = 50.0;
      s.iterations = 125;
      break;
    case SegmentKind::sa20:
      s.t_start = 20.0;
      s.iterations = 125;
      break;
    case SegmentKind::fine_tune:
      s.t_start = 10.0;
      s.iterations = 125;
      s.accept_worse = false;
      break;
  }
  return s;
}

double nominal_minutes(SegmentKind kind) { return kind == SegmentKind::full ? 60.0 : 15.0; }

Point propose_move(Point pos, double temperature, double t_max, const BoundingBox& box, Rng& rng) {
  const double ratio = temperature / t_max;
  const double reach = 0.25 * ratio * ratio;
  const double dx = rng.uniform(-1.0, 1.0) * reach * box.width;
  const double dy = rng.uniform(-1.0, 1.0) * reach * box.height;
  return box.clamp({pos.x + dx, pos.y + dy});
}

double acceptance_probability(double score_decrease, double temperature) {
  if (!(temperature > 0.0)) {
    throw ContractViolation("acceptance_probability: temperature must be positive");
  }
  if (score_decrease <= 0.0) return 1.0;
  return std::exp(-score_decrease / temperature);
}

AnnealResult run_schedule(const Scorer& scorer, const Layout& initial, const AnnealSchedule& schedule,
                          const StepObserver& observer) {
  schedule.validate();
  if (!in_bounds(initial)) {
    throw ContractViolation("annealing must start from an in-bounds layout");
  }

  ScoreState state(scorer, initial);
  Rng rng(schedule.seed);
  const std::size_t n = scorer.network().node_count();
  const std::size_t steps = schedule.steps_per_node * n;

  AnnealResult result;
  result.schedules_run = 1;
  result.initial_score = state.breakdown();
  result.best_layout = initial;
  result.trajectory.reserve(schedule.iterations);
  double best = state.overall();
  double temperature = schedule.t_start;

  for (std::size_t it = 0; it < schedule.iterations; ++it) {
    for (std::size_t step = 0; step < steps; ++step) {
      const NodeIndex v = rng.index(n);
      const Point old = state.position(v);
      const Point candidate = propose_move(old, temperature, schedule.t_max, initial.box, rng);
      const double before = state.overall();
      state.move_node(v, candidate);
      const double after = state.overall();
      const double decrease = (before - after) * schedule.score_scale;

      bool accepted = decrease <= 0.0;
      if (!accepted && schedule.accept_worse) {
        accepted = rng.unit() < acceptance_probability(decrease, temperature);
      }
      if (accepted) {
        ++result.accepted;
        if (after > best) {
          best = after;
          result.best_layout = state.layout();
        }
      } else {
        ++result.rejected;
        state.move_node(v, old);
      }
      ++result.steps_run;
      if (observer) {
        observer({it, step, temperature, state.overall(), best, accepted});
      }
    }
    result.trajectory.push_back({it, temperature, state.overall(), best});
    ++result.iterations_run;
    temperature *= schedule.cooling;
  }
  result.final_temperature = temperature;
  result.best_score = scorer.score(result.best_layout);
  return result;
}

AnnealResult run_schedule(std::shared_ptr<const Network> network, const Layout& initial,
                          const AnnealSchedule& schedule, const ScoringParams& params,
                          const Priorities& priorities) {
  try {
    const Scorer scorer(std::move(network), params, priorities);
    return run_schedule(scorer, initial, schedule);
  } catch (const PathCountCapExceeded& e) {
    AnnealResult partial;
    partial.best_layout = initial;
    partial.final_temperature = schedule.t_start;
    partial.error = e.what();
    return partial;
  }
}

AnnealResult run_repeated(const Scorer& scorer, const Layout& initial, const AnnealSchedule& schedule,
                          const RepeatBudget& budget, const StepObserver& observer) {
  if (budget.schedules == 0) {
    throw ContractViolation("run_repeated needs a positive schedule budget");
  }
  const auto started = std::chrono::steady_clock::now();
  AnnealResult total;
  Layout current = initial;
  for (std::size_t k = 0; k < budget.schedules; ++k) {
    if (k > 0 && budget.wall_clock && std::chrono::steady_clock::now() - started >= *budget.wall_clock) {
      break;
    }
    AnnealSchedule next = schedule;
    next.seed = k == 0 ? schedule.seed : mix_seed(schedule.seed, k);
    AnnealResult run = run_schedule(scorer, current, next, observer);

    if (k == 0) {
      total.initial_score = run.initial_score;
      total.best_layout = run.best_layout;
      total.best_score = run.best_score;
    } else if (run.best_score.overall > total.best_score.overall) {
      total.best_layout = run.best_layout;
      total.best_score = run.best_score;
    }
    for (TrajectorySample sample : run.trajectory) {
      sample.iteration += total.iterations_run;
      total.trajectory.push_back(sample);
    }
    total.iterations_run += run.iterations_run;
    total.steps_run += run.steps_run;
    total.accepted += run.accepted;
    total.rejected += run.rejected;
    total.final_temperature = run.final_temperature;
    ++total.schedules_run;
    current = total.best_layout;
  }
  return total;
}

}  // namespace layoutgame

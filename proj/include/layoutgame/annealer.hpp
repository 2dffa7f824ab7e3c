#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutgame/random.hpp"
#include "layoutgame/scoring.hpp"

namespace layoutgame {

struct AnnealSchedule {
  double t_start = 100.0;
  double t_max = 100.0;
  double cooling = 0.995;
  std::size_t iterations = 500;
  std::size_t steps_per_node = 10;  // steps per iteration = steps_per_node * n
  std::uint64_t seed = 1;
  bool accept_worse = true;
  /// Multiplier turning the weighted overall score into the units the
  /// acceptance rule compares against temperature.
  double score_scale = kDisplayScale;

  /// Throws ContractViolation unless 0 < cooling < 1, 0 < t_start <= t_max,
  /// iterations >= 1 and steps_per_node >= 1.
  void validate() const;
  /// Temperature in effect after `iterations` cooling steps.
  double temperature_after(std::size_t iterations) const;
};

enum class SegmentKind { full, sa100, sa50, sa20, fine_tune };

std::string_view to_string(SegmentKind kind);
std::optional<SegmentKind> parse_segment_kind(std::string_view text);

/// Concrete schedule for a named kind: Full starts at 100 for 500
/// iterations; SA100/SA50/SA20 run 125 iterations from 100/50/20; FineTune
/// starts at 10 for 125 iterations and accepts only improving moves.
AnnealSchedule schedule_for(SegmentKind kind, std::uint64_t seed);

/// Nominal wall-clock length of a kind in minutes (60 for Full, 15 for the
/// hybrid segments and fine-tuning).
double nominal_minutes(SegmentKind kind);

struct TrajectorySample {
  std::size_t iteration = 0;
  double temperature = 0.0;
  double current_overall = 0.0;
  double best_overall = 0.0;
};

struct StepRecord {
  std::size_t iteration = 0;
  std::size_t step = 0;
  double temperature = 0.0;
  double current_overall = 0.0;
  double best_overall = 0.0;
  bool accepted = false;
};

using StepObserver = std::function<void(const StepRecord&)>;

struct AnnealResult {
  Layout best_layout;
  ScoreBreakdown initial_score;
  ScoreBreakdown best_score;
  std::vector<TrajectorySample> trajectory;  // one sample per iteration
  std::size_t iterations_run = 0;
  std::uint64_t steps_run = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  double final_temperature = 0.0;
  std::size_t schedules_run = 0;
  std::optional<std::string> error;  // set when scoring aborted the run
};

/// New position drawn uniformly from the rectangle centred on `pos` with
/// half-extents (1/4)(T/t_max)^2 * box size, clamped to the box.
Point propose_move(Point pos, double temperature, double t_max, const BoundingBox& box, Rng& rng);

/// 1 for non-worsening moves, exp(-delta/T) otherwise. Throws
/// ContractViolation for T <= 0.
double acceptance_probability(double score_decrease, double temperature);

/// One annealing schedule from `initial`. Deterministic in the schedule's
/// seed. Throws ContractViolation for an out-of-bounds start layout or an
/// invalid schedule.
AnnealResult run_schedule(const Scorer& scorer, const Layout& initial, const AnnealSchedule& schedule,
                          const StepObserver& observer = {});

/// Same, but builds the scorer itself; a path-count cap failure is reported
/// through AnnealResult::error with the initial layout as the result.
AnnealResult run_schedule(std::shared_ptr<const Network> network, const Layout& initial,
                          const AnnealSchedule& schedule, const ScoringParams& params,
                          const Priorities& priorities);

struct RepeatBudget {
  std::size_t schedules = 1;
  std::optional<std::chrono::steady_clock::duration> wall_clock;  // stops early when exceeded
};

/// Chains schedules, each starting from the best layout so far. Schedule k
/// uses seed mix_seed(schedule.seed, k) for k >= 1 and the schedule's own
/// seed for k = 0.
AnnealResult run_repeated(const Scorer& scorer, const Layout& initial, const AnnealSchedule& schedule,
                          const RepeatBudget& budget, const StepObserver& observer = {});

}  // namespace layoutgame

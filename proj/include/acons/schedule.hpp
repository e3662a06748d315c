#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "acons/types.hpp"

namespace acons {

/// One constant-weight interval of the mode schedule, starting at `start`.
struct Epoch {
  double start = 0.0;
  Vector weights;
};

/// Piecewise-constant, right-continuous agent weights eta(t) on
/// [0, horizon_end]. Epoch i covers [start_i, start_{i+1}).
class ModeSchedule {
 public:
  ModeSchedule(std::vector<Epoch> epochs, double horizon_end);

  /// Single epoch with fixed weights.
  static ModeSchedule constant(Vector weights, double horizon_end);

  [[nodiscard]] std::size_t agent_count() const {
    return static_cast<std::size_t>(epochs_.front().weights.size());
  }
  [[nodiscard]] const std::vector<Epoch>& epochs() const { return epochs_; }
  [[nodiscard]] double horizon_end() const { return horizon_end_; }

  /// Index of the epoch containing t (right-continuous).
  [[nodiscard]] std::size_t epoch_index(double t) const;
  [[nodiscard]] const Vector& weights_at(double t) const;
  /// Left limit eta(t-): the previous epoch's weights when t is a switch
  /// instant, weights_at(t) otherwise.
  [[nodiscard]] const Vector& weights_before(double t) const;
  [[nodiscard]] std::vector<std::size_t> active_set(double t) const;

  /// Switch instants t_1 < t_2 < ... (epoch starts after t_0 = 0).
  [[nodiscard]] std::vector<double> switch_times() const;
  /// N_sigma(0, t): number of switch instants in (0, t).
  [[nodiscard]] std::size_t switch_count(double t) const;

  /// Distinct weight vectors in first-appearance order, and for each epoch the
  /// index of its vector in that list.
  [[nodiscard]] std::vector<Vector> weight_set() const;
  [[nodiscard]] std::vector<std::size_t> mode_indices() const;

  /// Copy with agent `index` dropped from every weight vector. Throws when an
  /// epoch would be left without an active agent.
  [[nodiscard]] ModeSchedule without_agent(std::size_t index) const;
  /// Copy ending at a different horizon (epochs beyond it are dropped).
  [[nodiscard]] ModeSchedule with_horizon(double horizon_end) const;

 private:
  std::vector<Epoch> epochs_;
  double horizon_end_;
};

/// Average dwell time declaration N_sigma(0,t) <= chatter_bound + t / average_dwell.
struct DwellStats {
  double chatter_bound = 0.0;
  double average_dwell = 1.0;
};

struct DwellCheck {
  bool ok = true;
  std::optional<double> first_violation;
};

/// The switch count is a step function and the right-hand side is increasing,
/// so checking just after every switch instant covers all of [0, horizon].
DwellCheck verify_dwell(const ModeSchedule& schedule, const DwellStats& stats);

/// An agent leaving the network at time t.
struct Departure {
  double t = 0.0;
  std::size_t agent = 0;
};

/// Random schedules over a fixed set of weight patterns with epoch lengths
/// drawn uniformly from [min_dwell, max_dwell]. Consecutive epochs use
/// different patterns whenever more than one pattern exists.
struct ScheduleFamily {
  std::vector<Vector> patterns;
  double min_dwell = 1.0;
  double max_dwell = 1.0;
  double horizon_end = 1.0;

  [[nodiscard]] ModeSchedule sample(std::uint64_t seed) const;
};

/// Tolerance used when comparing a computed time (k * delta) against a
/// schedule or sample instant.
inline double time_snap(double t) { return 1e-12 * (t < 0 ? -t : t) + 1e-14; }

}  // namespace acons

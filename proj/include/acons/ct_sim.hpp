#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acons/scenario.hpp"
#include "acons/types.hpp"

namespace acons {

struct CtState {
  double t = 0.0;
  Vector x;
  Vector v;
};

struct CtRates {
  Vector dx;
  Vector dv;
};

/// Right-hand side of the continuous-time algorithm for frozen weights,
/// reference values and reference rates:
///   x' = -E (x - r) - L x - L v + E r',  v' = L x.
CtRates vector_field(const Matrix& laplacian, const Vector& weights, const Vector& references,
                     const Vector& reference_rates, const Vector& x, const Vector& v);

/// Same, with weights and signals read from the scenario at state.t.
CtRates vector_field(const CtScenario& scenario, const CtState& state, Side side = Side::kRight);

/// Sampled trajectory. Every breakpoint t_k (switch or signal jump) appears
/// twice: once as a left-limit sample stamped nextafter(t_k, -inf) and once
/// at t_k itself, so `times` is strictly increasing.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> x;
  std::vector<Vector> v;
  std::vector<double> average;
  std::vector<Vector> error;  ///< |x_i - avg| per agent
  std::vector<bool> left_limit;
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] double max_error(std::size_t sample) const;
};

/// Fixed-step classical RK4 from t = 0 to t_end. Steps are shortened so every
/// breakpoint is a step boundary; within a step the epoch weights are frozen
/// and the last stage reads one-sided signal values from the left.
Trajectory integrate(const CtScenario& scenario, const Vector& x0, const Vector& v0, double t_end,
                     double h);

struct ErrorSeries {
  std::vector<Vector> per_agent;
  std::vector<double> max;
};

/// |x_i(t) - avg(t)| recomputed from the schedule and signals, plus the
/// max-over-agents series.
ErrorSeries tracking_error(const Trajectory& trajectory, const ReferenceEnsemble& ensemble,
                           const ModeSchedule& schedule);

/// A stretch of a run between departures. `agents` maps local to original
/// agent ids.
struct CtSegment {
  std::vector<std::size_t> agents;
  double t_start = 0.0;
  CtScenario scenario;
  Trajectory trajectory;
};

/// Integrates through a list of departures. At each departure the agent's
/// row is dropped from the graph, schedule, signals and state, and the run
/// continues from the remaining agents' states. The last sample of every
/// segment but the final one is a left-limit sample.
std::vector<CtSegment> integrate_with_departures(const CtScenario& scenario, const Vector& x0,
                                                 const Vector& v0, double t_end, double h,
                                                 std::vector<Departure> departures);

}  // namespace acons

#pragma once

#include <cstddef>

#include "acons/graph.hpp"
#include "acons/schedule.hpp"
#include "acons/signals.hpp"

namespace acons {

/// Inputs shared by the continuous-time simulator and its error bound.
struct CtScenario {
  Topology topology;
  ModeSchedule schedule;
  ReferenceEnsemble ensemble;

  /// Throws InvalidInput when agent counts disagree.
  void validate() const;
};

/// Discrete-time scenario: communication every delta_c seconds, references
/// zero-order-hold sampled every delta_s seconds, `steps` updates.
struct DtScenario {
  Topology topology;
  ModeSchedule schedule;
  ReferenceEnsemble ensemble;
  double delta_c = 0.1;
  double delta_s = 0.1;
  std::size_t steps = 0;

  void validate() const;

  [[nodiscard]] double time_at(std::size_t k) const { return static_cast<double>(k) * delta_c; }
  /// eta(k), frozen at t^c_k for the whole step.
  [[nodiscard]] const Vector& weights(std::size_t k) const { return schedule.weights_at(time_at(k)); }
  /// r(k): references sampled at the latest t^s_l <= t^c_k.
  [[nodiscard]] Vector references(std::size_t k) const {
    return ensemble.sampled(delta_s, time_at(k));
  }
};

}  // namespace acons

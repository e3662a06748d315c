#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "acons/dt_sim.hpp"
#include "acons/geometry.hpp"
#include "acons/graph.hpp"
#include "acons/scenario.hpp"
#include "acons/schedule.hpp"
#include "acons/types.hpp"

namespace acons::testing {

using Rng = std::mt19937_64;

/// Random spanning tree plus extra edges with probability `extra_edge_p`;
/// edge weights uniform in (0, max_weight].
Topology random_connected_graph(Rng& rng, std::size_t n, double extra_edge_p = 0.3,
                                double max_weight = 2.0);

/// Nonnegative weights with a random nonempty active set.
Vector random_weights(Rng& rng, std::size_t n, double max_weight = 2.0);

std::vector<Vector> random_weight_patterns(Rng& rng, std::size_t n, std::size_t count);

/// Epoch boundaries at integer multiples of `unit`, spaced uniformly in
/// [min_units, max_units], cycling through `patterns` with no immediate
/// repeats.
ModeSchedule random_schedule(Rng& rng, const std::vector<Vector>& patterns, double horizon,
                             std::size_t min_units, std::size_t max_units, double unit);

/// Per-agent sinusoids with random offset, amplitude <= max_amplitude and
/// angular rate <= max_omega.
ReferenceEnsemble random_sinusoids(Rng& rng, std::size_t n, double max_amplitude = 1.0,
                                   double max_omega = 0.5);
ReferenceEnsemble random_constants(Rng& rng, std::size_t n, double spread = 2.0);

Vector random_vector(Rng& rng, std::size_t n, double spread = 1.0);

/// Discrete-time scenario with n agents, switching every min..max steps,
/// delta_c = step_fraction * d_bar of its weight patterns.
DtScenario random_dt_scenario(Rng& rng, std::size_t n, std::size_t steps, std::size_t min_steps,
                              std::size_t max_steps, double step_fraction = 0.5);

/// Exact state (x, v) at time t of a single-epoch, constant-reference
/// continuous-time scenario, from the matrix exponential of the augmented
/// affine system.
struct ExactState {
  Vector x;
  Vector v;
};
ExactState exact_static_state(const CtScenario& scenario, const Vector& x0, const Vector& v0,
                              double t);

/// Compact coordinates (e_bar, q_{2:n}) of sample k of a discrete-time run.
Vector compact_sample(const DtScenario& scenario, const SpectralDecomposition& decomposition,
                      const DtTrajectory& trajectory, std::size_t k);

/// |1^T v(end) - 1^T v(0)| / (1 + ||v(0)||).
double conservation_drift(const Vector& v_start, const Vector& v_end);

std::vector<Point2> random_points(Rng& rng, std::size_t count, double spread = 10.0);

}  // namespace acons::testing

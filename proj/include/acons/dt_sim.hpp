#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acons/graph.hpp"
#include "acons/scenario.hpp"
#include "acons/types.hpp"

namespace acons {

/// x(k) = z(k) + eta(k) .* r(k) holds for every state produced here.
struct DtState {
  std::size_t k = 0;
  Vector x;
  Vector z;
  Vector v;
};

/// State at k = 0 with z(0) = x0 - eta(0) .* r(0).
DtState initial_state(const DtScenario& scenario, const Vector& x0, const Vector& v0);

/// One communication round:
///   z+ = z - dc eta .* (x - r) - dc L x - dc L v,  v+ = v + dc L x,
///   x+ = z+ + eta(k+1) .* r(k+1).
DtState step(const DtScenario& scenario, const Matrix& laplacian, const DtState& state);
DtState step(const DtScenario& scenario, const DtState& state);

struct DtTrajectory {
  std::vector<std::size_t> steps;
  std::vector<double> times;
  std::vector<Vector> x;
  std::vector<Vector> z;
  std::vector<Vector> v;
  std::vector<double> average;  ///< weighted average of the sampled references
  std::vector<Vector> error;
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t size() const { return steps.size(); }
  [[nodiscard]] double max_error(std::size_t sample) const { return error.at(sample).maxCoeff(); }
};

DtTrajectory simulate(const DtScenario& scenario, const Vector& x0, const Vector& v0);

/// Transformed state (e_bar, q_{2:n}) advanced one step through
/// (I + dc A_sigma(k)) and the input matrix applied to dt_input(k).
Vector compact_step(const DtScenario& scenario, const SpectralDecomposition& decomposition,
                    const Vector& compact_state, std::size_t k);

}  // namespace acons

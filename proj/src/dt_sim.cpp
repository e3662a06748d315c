#include "acons/dt_sim.hpp"

#include <sstream>

#include "acons/analysis.hpp"

namespace acons {

DtState initial_state(const DtScenario& scenario, const Vector& x0, const Vector& v0) {
  scenario.validate();
  const auto n = static_cast<Eigen::Index>(scenario.topology.size());
  if (x0.size() != n || v0.size() != n) throw InvalidInput("initial state length differs from agent count");
  if (!x0.allFinite() || !v0.allFinite()) throw InvalidInput("initial state has non-finite entries");
  DtState s;
  s.k = 0;
  s.x = x0;
  s.z = x0 - scenario.weights(0).cwiseProduct(scenario.references(0));
  s.v = v0;
  return s;
}

DtState step(const DtScenario& scenario, const Matrix& laplacian, const DtState& state) {
  if (state.k >= scenario.steps) {
    std::ostringstream msg;
    msg << "step index " << state.k << " is not below the scenario length " << scenario.steps;
    throw InvalidInput(msg.str());
  }
  const double dc = scenario.delta_c;
  const Vector& eta = scenario.weights(state.k);
  const Vector r = scenario.references(state.k);
  const Vector lx = laplacian * state.x;
  DtState next;
  next.k = state.k + 1;
  next.z = state.z - dc * eta.cwiseProduct(state.x - r) - dc * lx - dc * (laplacian * state.v);
  next.v = state.v + dc * lx;
  next.x = next.z + scenario.weights(next.k).cwiseProduct(scenario.references(next.k));
  if (!next.x.allFinite() || !next.v.allFinite()) {
    std::ostringstream msg;
    msg << "state became non-finite at step " << next.k << " (t = " << scenario.time_at(next.k)
        << ")";
    throw NumericalError(msg.str());
  }
  return next;
}

DtState step(const DtScenario& scenario, const DtState& state) {
  return step(scenario, laplacian(scenario.topology), state);
}

DtTrajectory simulate(const DtScenario& scenario, const Vector& x0, const Vector& v0) {
  const Matrix l = laplacian(scenario.topology);
  DtTrajectory out;
  auto record = [&](const DtState& s) {
    const double avg = weighted_average(scenario.weights(s.k), scenario.references(s.k));
    out.steps.push_back(s.k);
    out.times.push_back(scenario.time_at(s.k));
    out.x.push_back(s.x);
    out.z.push_back(s.z);
    out.v.push_back(s.v);
    out.average.push_back(avg);
    out.error.push_back((s.x.array() - avg).abs().matrix());
  };
  DtState s = initial_state(scenario, x0, v0);
  record(s);
  while (s.k < scenario.steps) {
    s = step(scenario, l, s);
    record(s);
  }
  return out;
}

Vector compact_step(const DtScenario& scenario, const SpectralDecomposition& decomposition,
                    const Vector& compact_state, std::size_t k) {
  const auto n = static_cast<Eigen::Index>(decomposition.size());
  if (compact_state.size() != 2 * n - 1) throw InvalidInput("compact state must have length 2n - 1");
  const Matrix a = compact_generator(decomposition, scenario.weights(k));
  const Vector u = dt_input(scenario, k);
  Vector next = compact_state + scenario.delta_c * (a * compact_state);
  next.head(n) += decomposition.transform.transpose() * u.head(n);
  next.tail(n - 1) += decomposition.complement().transpose() * u.tail(n);
  return next;
}

}  // namespace acons

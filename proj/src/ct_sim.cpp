#include "acons/ct_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "acons/graph.hpp"

namespace acons {

namespace {

Trajectory integrate_range(const CtScenario& scenario, const Vector& x0, const Vector& v0,
                           double t0, double t1, double h, bool end_as_left_limit) {
  scenario.validate();
  const auto n = static_cast<Eigen::Index>(scenario.topology.size());
  if (x0.size() != n || v0.size() != n) throw InvalidInput("initial state length differs from agent count");
  if (!x0.allFinite() || !v0.allFinite()) throw InvalidInput("initial state has non-finite entries");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("integration step h must be > 0");
  const double horizon = scenario.schedule.horizon_end();
  if (!(t1 >= t0) || t1 > horizon + time_snap(horizon)) {
    std::ostringstream msg;
    msg << "integration end " << t1 << " outside the schedule horizon [0, " << horizon << "]";
    throw InvalidInput(msg.str());
  }

  const Matrix l = laplacian(scenario.topology);
  const ModeSchedule& schedule = scenario.schedule;
  const ReferenceEnsemble& ensemble = scenario.ensemble;

  Trajectory out;
  double min_epoch = std::numeric_limits<double>::infinity();
  const auto& epochs = schedule.epochs();
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const double end = e + 1 < epochs.size() ? epochs[e + 1].start : horizon;
    if (end > epochs[e].start) min_epoch = std::min(min_epoch, end - epochs[e].start);
  }
  if (h > min_epoch / 4.0) {
    std::ostringstream msg;
    msg << "step h = " << h << " exceeds a quarter of the shortest epoch (" << min_epoch << ")";
    out.warnings.push_back(msg.str());
  }

  auto record = [&](double t, const Vector& x, const Vector& v, bool left) {
    const Side side = left ? Side::kLeft : Side::kRight;
    const Vector& w = left ? schedule.weights_before(t) : schedule.weights_at(t);
    const double avg = weighted_average(w, ensemble.values(t, side));
    out.times.push_back(left ? std::nextafter(t, -std::numeric_limits<double>::infinity()) : t);
    out.x.push_back(x);
    out.v.push_back(v);
    out.average.push_back(avg);
    out.error.push_back((x.array() - avg).abs().matrix());
    out.left_limit.push_back(left);
  };

  std::vector<double> cuts{t0};
  for (double s : schedule.switch_times()) {
    if (s > t0 + time_snap(t0) && s < t1 - time_snap(t1)) cuts.push_back(s);
  }
  for (double s : ensemble.discontinuities(t0, t1)) {
    if (s > t0 + time_snap(t0) && s < t1 - time_snap(t1)) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) <= time_snap(b); }),
             cuts.end());
  cuts.push_back(t1);

  Vector x = x0;
  Vector v = v0;
  if (t1 == t0) {
    record(t0, x, v, end_as_left_limit && t0 > 0.0);
    return out;
  }
  record(t0, x, v, false);

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = cuts[c + 1];
    const Vector weights = schedule.weights_at(a);
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / h - 1e-9)));
    const double hs = (b - a) / static_cast<double>(steps);
    auto rates = [&](double t, Side side, const Vector& xs, const Vector& vs) {
      return vector_field(l, weights, ensemble.values(t, side), ensemble.derivatives(t, side), xs, vs);
    };
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = a + static_cast<double>(s) * hs;
      const bool last = s + 1 == steps;
      const double t_next = last ? b : a + static_cast<double>(s + 1) * hs;
      const double half = 0.5 * (t_next - t);
      const double dt = t_next - t;
      const CtRates k1 = rates(t, Side::kRight, x, v);
      const CtRates k2 = rates(t + half, Side::kRight, x + half * k1.dx, v + half * k1.dv);
      const CtRates k3 = rates(t + half, Side::kRight, x + half * k2.dx, v + half * k2.dv);
      const CtRates k4 = rates(t_next, Side::kLeft, x + dt * k3.dx, v + dt * k3.dv);
      x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
      v += dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
      if (!x.allFinite() || !v.allFinite()) {
        std::ostringstream msg;
        msg << "state became non-finite at t = " << t_next << " (h = " << dt << ")";
        throw NumericalError(msg.str());
      }
      if (!last) record(t_next, x, v, false);
    }
    const bool final_cut = c + 2 == cuts.size();
    if (!final_cut) {
      record(b, x, v, true);
      record(b, x, v, false);
    } else {
      record(b, x, v, end_as_left_limit);
    }
  }
  return out;
}

// Schedule equivalent to `schedule` on [t, horizon], restarted at 0 so it
// stays valid when agents inactive only before t are dropped later.
ModeSchedule schedule_from(const ModeSchedule& schedule, double t) {
  const auto& epochs = schedule.epochs();
  const std::size_t first = schedule.epoch_index(t);
  std::vector<Epoch> kept;
  for (std::size_t e = first; e < epochs.size(); ++e) kept.push_back(epochs[e]);
  kept.front().start = 0.0;
  return ModeSchedule(std::move(kept), schedule.horizon_end());
}

}  // namespace

double Trajectory::max_error(std::size_t sample) const { return error.at(sample).maxCoeff(); }

CtRates vector_field(const Matrix& laplacian, const Vector& weights, const Vector& references,
                     const Vector& reference_rates, const Vector& x, const Vector& v) {
  CtRates out;
  const Vector lx = laplacian * x;
  out.dx = -weights.cwiseProduct(x - references) - lx - laplacian * v +
           weights.cwiseProduct(reference_rates);
  out.dv = lx;
  return out;
}

CtRates vector_field(const CtScenario& scenario, const CtState& state, Side side) {
  scenario.validate();
  const double horizon = scenario.schedule.horizon_end();
  if (state.t < 0.0 || state.t > horizon + time_snap(horizon)) {
    throw InvalidInput("vector field evaluated outside the schedule horizon");
  }
  const Vector& w = side == Side::kLeft ? scenario.schedule.weights_before(state.t)
                                        : scenario.schedule.weights_at(state.t);
  return vector_field(laplacian(scenario.topology), w, scenario.ensemble.values(state.t, side),
                      scenario.ensemble.derivatives(state.t, side), state.x, state.v);
}

Trajectory integrate(const CtScenario& scenario, const Vector& x0, const Vector& v0, double t_end,
                     double h) {
  if (t_end < 0.0) throw InvalidInput("integration end time must be >= 0");
  return integrate_range(scenario, x0, v0, 0.0, t_end, h, false);
}

ErrorSeries tracking_error(const Trajectory& trajectory, const ReferenceEnsemble& ensemble,
                           const ModeSchedule& schedule) {
  ErrorSeries out;
  out.per_agent.reserve(trajectory.size());
  out.max.reserve(trajectory.size());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const bool left = i < trajectory.left_limit.size() && trajectory.left_limit[i];
    // Left-limit samples are stamped one ulp before their instant.
    const double t = left ? std::nextafter(trajectory.times[i], std::numeric_limits<double>::infinity())
                          : trajectory.times[i];
    const double avg =
        left ? weighted_average(schedule.weights_before(t), ensemble.values(t, Side::kLeft))
             : weighted_average(schedule.weights_at(t), ensemble.values(t));
    Vector e = (trajectory.x[i].array() - avg).abs().matrix();
    out.max.push_back(e.maxCoeff());
    out.per_agent.push_back(std::move(e));
  }
  return out;
}

std::vector<CtSegment> integrate_with_departures(const CtScenario& scenario, const Vector& x0,
                                                 const Vector& v0, double t_end, double h,
                                                 std::vector<Departure> departures) {
  std::sort(departures.begin(), departures.end(),
            [](const Departure& a, const Departure& b) { return a.t < b.t; });
  std::vector<std::size_t> agents(scenario.topology.size());
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i] = i;

  std::vector<CtSegment> out;
  CtScenario current = scenario;
  Vector x = x0;
  Vector v = v0;
  double t0 = 0.0;
  for (const Departure& d : departures) {
    if (!(d.t > t0) || d.t >= t_end) {
      std::ostringstream msg;
      msg << "departure at t = " << d.t << " must lie strictly inside (" << t0 << ", " << t_end
          << ") and after earlier departures";
      throw InvalidInput(msg.str());
    }
    const auto local = std::find(agents.begin(), agents.end(), d.agent);
    if (local == agents.end()) {
      std::ostringstream msg;
      msg << "agent " << d.agent << " departs but is not present at t = " << d.t;
      throw InvalidInput(msg.str());
    }
    const auto idx = static_cast<std::size_t>(local - agents.begin());
    Trajectory tr = integrate_range(current, x, v, t0, d.t, h, true);
    x = tr.x.back();
    v = tr.v.back();
    out.push_back(CtSegment{agents, t0, current, std::move(tr)});

    CtScenario next{current.topology.without_agent(idx),
                    schedule_from(current.schedule, d.t).without_agent(idx),
                    current.ensemble.without_agent(idx)};
    const auto n = x.size();
    Vector xr(n - 1);
    Vector vr(n - 1);
    for (Eigen::Index i = 0, j = 0; i < n; ++i) {
      if (i == static_cast<Eigen::Index>(idx)) continue;
      xr(j) = x(i);
      vr(j) = v(i);
      ++j;
    }
    x = std::move(xr);
    v = std::move(vr);
    agents.erase(local);
    current = std::move(next);
    t0 = d.t;
  }
  Trajectory tr = integrate_range(current, x, v, t0, t_end, h, false);
  out.push_back(CtSegment{agents, t0, current, std::move(tr)});
  return out;
}

}  // namespace acons

#include <cmath>
#include <numbers>

#include "acons/commands.hpp"

namespace acons {

namespace {

// Six agents on a ring. Active sets {1,2,4,6}, {2,3,5,6}, {3,6} (1-based) on
// [0,50), [50,70), [70,120]; sinusoidal references until t = 50, constant
// afterwards; agent 1 leaves at t = 90.
ScenarioConfig fig2() {
  constexpr double kActive = 3.0;
  const double phi[6] = {1.0, -2.0, 3.0, 0.5, -1.0, 2.0};
  const double omega[6] = {0.3, 0.5, 0.2, 0.4, 0.6, 0.25};
  auto pattern = [&](std::initializer_list<int> active) {
    Vector w = Vector::Zero(6);
    for (int i : active) w(i - 1) = kActive;
    return w;
  };
  ScenarioConfig c;
  c.topology.generator = "ring";
  c.topology.n = 6;
  c.topology.weight = 4.0;
  ScheduleSpec s;
  s.horizon = 120.0;
  s.epochs = {{0.0, pattern({1, 2, 4, 6})}, {50.0, pattern({2, 3, 5, 6})}, {70.0, pattern({3, 6})}};
  s.dwell = DwellStats{1.0, 20.0};
  c.schedule = s;
  for (int i = 0; i < 6; ++i) {
    c.signals.push_back(ReferenceSignal::piecewise(
        {0.0, 50.0},
        {ReferenceSignal::sinusoid(phi[i], 1.0, omega[i]), ReferenceSignal::constant(phi[i])}));
  }
  Vector x0(6);
  x0 << 0.0, 1.0, -1.0, 2.0, -2.0, 0.5;
  c.x0 = x0;
  c.v0 = Vector::Zero(6);
  c.departures = {Departure{90.0, 0}};
  c.rates.h = 1e-2;
  c.rates.delta_c = 0.02;
  c.rates.delta_s = 0.02;
  c.certificate.min_dwell = 20.0;
  c.certificate.max_dwell = 50.0;
  c.seed = 2;
  c.output_dir = "out/fig2";
  return c;
}

// Six followers on a ring watching ten leaders; observation sets change at
// t = 5 and t = 10. Leaders drift until t = 20 and hold still afterwards.
ScenarioConfig fig4() {
  const std::vector<std::vector<std::vector<std::size_t>>> sets = {
      {{1, 4, 6, 8}, {2, 4, 7, 8, 10}, {3, 4, 5, 9}, {}, {1, 3, 9}, {}},
      {{3, 5, 6, 8}, {1, 2, 7, 9, 10}, {3, 4, 5, 9}, {}, {1, 3, 9}, {2, 5, 7, 9}},
      {{1, 2, 5, 8}, {2, 3, 6, 7, 10}, {3, 4, 5, 9}, {3, 10}, {1, 3, 9}, {2, 5, 7, 9}},
  };
  const double starts[3] = {0.0, 5.0, 10.0};
  ContainmentSpec spec;
  for (std::size_t e = 0; e < sets.size(); ++e) {
    ObservationEpoch epoch;
    epoch.start = starts[e];
    for (const auto& s : sets[e]) {
      std::vector<std::size_t> zero_based;
      for (std::size_t j : s) zero_based.push_back(j - 1);
      epoch.observed.push_back(std::move(zero_based));
    }
    spec.observations.push_back(std::move(epoch));
  }
  for (int j = 0; j < 10; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / 10.0;
    const double radius = 8.0 * (1.0 + 0.15 * (j % 3));
    const Point2 p0(radius * std::cos(theta), radius * std::sin(theta));
    const Point2 tangent(-std::sin(theta), std::cos(theta));
    LeaderPath path;
    path.times = {0.0, 10.0, 20.0};
    path.waypoints = {p0, p0 + Point2(2.0, 1.0) + 1.0 * tangent, p0 + Point2(4.0, -1.0)};
    spec.paths.push_back(std::move(path));
  }
  spec.displacement_bound = 0.5;
  for (int i = 0; i < 6; ++i) spec.initial_positions.emplace_back(-3.0 + 1.2 * i, 2.0 - 0.8 * i);
  spec.delta_s = 1.0;
  spec.delta_c = 0.2;
  spec.steps = 150;

  ScenarioConfig c;
  c.topology.generator = "ring";
  c.topology.n = 6;
  c.topology.weight = 1.0;
  c.containment = std::move(spec);
  c.output_dir = "out/fig4";
  return c;
}

}  // namespace

ScenarioConfig demo_config(const std::string& name) {
  ScenarioConfig c;
  if (name == "fig2") c = fig2();
  else if (name == "fig4") c = fig4();
  else throw InvalidInput("unknown demo '" + name + "' (fig2, fig4)");
  c.validate();
  return c;
}

}  // namespace acons

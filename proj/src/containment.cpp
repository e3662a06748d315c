#include "acons/containment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acons/analysis.hpp"

namespace acons {

Point2 LeaderPath::position(double t) const {
  if (t <= times.front()) return waypoints.front();
  if (t >= times.back()) return waypoints.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto i = static_cast<std::size_t>(it - times.begin());
  const double s = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return waypoints[i - 1] + s * (waypoints[i] - waypoints[i - 1]);
}

LeaderEnsemble::LeaderEnsemble(std::vector<LeaderPath> paths, double displacement_bound)
    : paths_(std::move(paths)), displacement_bound_(displacement_bound) {
  if (paths_.empty()) throw InvalidInput("at least one leader is required");
  if (!(displacement_bound_ >= 0.0)) throw InvalidInput("leader displacement bound must be >= 0");
  for (std::size_t j = 0; j < paths_.size(); ++j) {
    const LeaderPath& p = paths_[j];
    std::ostringstream where;
    where << "leader " << j << ": ";
    if (p.times.empty() || p.times.size() != p.waypoints.size()) {
      throw InvalidInput(where.str() + "needs matching, nonempty times and waypoints");
    }
    for (std::size_t w = 0; w < p.times.size(); ++w) {
      if (!std::isfinite(p.times[w]) || !p.waypoints[w].allFinite()) {
        throw InvalidInput(where.str() + "non-finite waypoint");
      }
      if (w > 0 && !(p.times[w] > p.times[w - 1])) {
        throw InvalidInput(where.str() + "waypoint times must be strictly increasing");
      }
    }
  }
}

std::vector<Point2> LeaderEnsemble::positions(double t) const {
  std::vector<Point2> out;
  out.reserve(paths_.size());
  for (const LeaderPath& p : paths_) out.push_back(p.position(t));
  return out;
}

void LeaderEnsemble::check_displacement(double period, double horizon) const {
  const std::size_t last = sample_index(period, horizon);
  for (std::size_t j = 0; j < paths_.size(); ++j) {
    for (std::size_t l = 0; l < last; ++l) {
      const double step = (position(j, static_cast<double>(l + 1) * period) -
                           position(j, static_cast<double>(l) * period))
                              .norm();
      if (step > displacement_bound_ * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "leader " << j << " moves " << step << " between samples " << l << " and " << l + 1
            << ", above the declared bound " << displacement_bound_;
        throw InvalidInput(msg.str());
      }
    }
  }
}

ObservationMap::ObservationMap(std::vector<ObservationEpoch> epochs, std::size_t leader_count)
    : epochs_(std::move(epochs)) {
  if (epochs_.empty()) throw InvalidInput("observation map needs at least one epoch");
  if (epochs_.front().start != 0.0) throw InvalidInput("first observation epoch must start at 0");
  const std::size_t n = epochs_.front().observed.size();
  if (n == 0) throw InvalidInput("observation map has no followers");
  for (std::size_t e = 0; e < epochs_.size(); ++e) {
    const ObservationEpoch& ep = epochs_[e];
    std::ostringstream where;
    where << "observation epoch " << e << ": ";
    if (e > 0 && !(ep.start > epochs_[e - 1].start)) {
      throw InvalidInput(where.str() + "starts must be strictly increasing");
    }
    if (ep.observed.size() != n) throw InvalidInput(where.str() + "follower count differs");
    bool any = false;
    for (const auto& set : ep.observed) {
      for (std::size_t j : set) {
        if (j >= leader_count) {
          std::ostringstream msg;
          msg << where.str() << "leader index " << j << " out of range (" << leader_count
              << " leaders)";
          throw InvalidInput(msg.str());
        }
      }
      any = any || !set.empty();
    }
    if (!any) throw InvalidInput(where.str() + "no follower observes any leader");
  }
}

const std::vector<std::vector<std::size_t>>& ObservationMap::observed_at(double t) const {
  const double probe = t + time_snap(t);
  const auto it = std::upper_bound(epochs_.begin(), epochs_.end(), probe,
                                   [](double v, const ObservationEpoch& e) { return v < e.start; });
  return std::prev(it)->observed;
}

std::optional<Point2> local_centroid(const LeaderEnsemble& leaders, const ObservationMap& map,
                                     double delta_s, std::size_t l, std::size_t i) {
  const double t = static_cast<double>(l) * delta_s;
  const auto& sets = map.observed_at(t);
  if (i >= sets.size()) throw InvalidInput("follower index out of range");
  if (sets[i].empty()) return std::nullopt;
  return centroid(leaders.positions(t), sets[i]);
}

std::array<DtScenario, 2> coordinate_scenarios(const ContainmentSetup& setup) {
  const std::size_t n = setup.topology.size();
  if (setup.observations.follower_count() != n) {
    std::ostringstream msg;
    msg << "observation map has " << setup.observations.follower_count()
        << " followers, topology has " << n;
    throw InvalidInput(msg.str());
  }
  if (!(setup.delta_s > 0.0) || !(setup.delta_c > 0.0)) throw InvalidInput("rates must be > 0");
  const double horizon = static_cast<double>(setup.steps) * setup.delta_c;
  const std::size_t last = sample_index(setup.delta_s, horizon);

  std::array<std::vector<std::vector<double>>, 2> samples;
  for (auto& s : samples) s.assign(n, std::vector<double>(last + 1, 0.0));
  std::vector<Epoch> epochs;
  for (std::size_t l = 0; l <= last; ++l) {
    Vector eta = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = local_centroid(setup.leaders, setup.observations, setup.delta_s, l, i);
      if (!c) continue;
      eta(static_cast<Eigen::Index>(i)) = 1.0;
      samples[0][i][l] = c->x();
      samples[1][i][l] = c->y();
    }
    if (epochs.empty() || epochs.back().weights != eta) {
      epochs.push_back(Epoch{static_cast<double>(l) * setup.delta_s, std::move(eta)});
    }
  }
  const ModeSchedule schedule(std::move(epochs), horizon);

  auto build = [&](std::size_t d) {
    std::vector<ReferenceSignal> signals;
    signals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      signals.push_back(ReferenceSignal::zoh(samples[d][i], setup.delta_s));
    }
    return DtScenario{setup.topology, schedule, ReferenceEnsemble(std::move(signals)),
                      setup.delta_c, setup.delta_s, setup.steps};
  };
  return {build(0), build(1)};
}

ContainmentReport run_containment(const ContainmentSetup& setup,
                                  const std::vector<Point2>& initial_positions,
                                  bool allow_unstable, double hull_tol) {
  const std::size_t n = setup.topology.size();
  if (initial_positions.size() != n) throw InvalidInput("initial positions differ from follower count");
  const double horizon = static_cast<double>(setup.steps) * setup.delta_c;
  setup.leaders.check_displacement(setup.delta_s, horizon);
  const std::array<DtScenario, 2> scenarios = coordinate_scenarios(setup);

  ContainmentReport report;
  const SpectralDecomposition decomposition = spectral_decomposition(setup.topology);
  report.d_bar = max_stable_step(decomposition, scenarios[0].schedule.weight_set());
  if (!(setup.delta_c < report.d_bar)) {
    std::ostringstream msg;
    msg << "delta_c = " << setup.delta_c << " is not below the stable step bound " << report.d_bar;
    if (!allow_unstable) throw InvalidInput(msg.str());
    report.warnings.push_back(msg.str());
  }

  for (std::size_t d = 0; d < 2; ++d) {
    Vector x0(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) x0(static_cast<Eigen::Index>(i)) = initial_positions[i](static_cast<Eigen::Index>(d));
    report.coordinates[d] = simulate(scenarios[d], x0, Vector::Zero(static_cast<Eigen::Index>(n)));
  }

  const DtTrajectory& cx = report.coordinates[0];
  const DtTrajectory& cy = report.coordinates[1];
  for (std::size_t k = 0; k < cx.size(); ++k) {
    const double t = cx.times[k];
    const double ts = static_cast<double>(sample_index(setup.delta_s, t)) * setup.delta_s;
    const auto& sets = setup.observations.observed_at(ts);
    std::vector<std::size_t> union_set;
    for (const auto& s : sets) union_set.insert(union_set.end(), s.begin(), s.end());
    std::sort(union_set.begin(), union_set.end());
    union_set.erase(std::unique(union_set.begin(), union_set.end()), union_set.end());
    const std::vector<Point2> positions = setup.leaders.positions(ts);
    std::vector<Point2> observed;
    for (std::size_t j : union_set) observed.push_back(positions[j]);
    Hull2D hull = hull_2d(observed);

    const Point2 target(cx.average[k], cy.average[k]);
    const bool inside = contains(hull, target, hull_tol);
    std::vector<Point2> followers(n);
    std::vector<double> dist(n);
    std::vector<bool> in_hull(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      followers[i] = Point2(cx.x[k](ii), cy.x[k](ii));
      dist[i] = (followers[i] - target).norm();
      in_hull[i] = contains(hull, followers[i], hull_tol);
      worst = std::max(worst, dist[i]);
      if (!in_hull[i]) ++report.follower_outside;
    }
    if (!inside) ++report.target_violations;
    report.peak_error = std::max(report.peak_error, worst);
    report.times.push_back(t);
    report.followers.push_back(std::move(followers));
    report.target.push_back(target);
    report.hulls.push_back(std::move(hull));
    report.distances.push_back(std::move(dist));
    report.max_error.push_back(worst);
    report.target_in_hull.push_back(inside);
    report.follower_in_hull.push_back(std::move(in_hull));
  }
  return report;
}

}  // namespace acons

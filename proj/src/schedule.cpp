#include "acons/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace acons {

ModeSchedule::ModeSchedule(std::vector<Epoch> epochs, double horizon_end)
    : epochs_(std::move(epochs)), horizon_end_(horizon_end) {
  if (epochs_.empty()) {
    throw InvalidInput("schedule needs at least one epoch");
  }
  if (epochs_.front().start != 0.0) {
    throw InvalidInput("first schedule epoch must start at t = 0");
  }
  if (!std::isfinite(horizon_end_) || horizon_end_ < 0.0) {
    throw InvalidInput("schedule horizon must be finite and >= 0");
  }
  const Eigen::Index n = epochs_.front().weights.size();
  if (n == 0) {
    throw InvalidInput("schedule weight vectors must be nonempty");
  }
  for (std::size_t k = 0; k < epochs_.size(); ++k) {
    const Epoch& e = epochs_[k];
    std::ostringstream where;
    where << "epoch " << k << " (t = " << e.start << ")";
    if (k > 0 && !(e.start > epochs_[k - 1].start)) {
      throw InvalidInput(where.str() + ": epoch start times must be strictly increasing");
    }
    if (e.weights.size() != n) {
      throw InvalidInput(where.str() + ": weight vector length differs from epoch 0");
    }
    bool any_active = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(e.weights(i)) || e.weights(i) < 0.0) {
        throw InvalidInput(where.str() + ": weights must be finite and >= 0");
      }
      any_active = any_active || e.weights(i) > 0.0;
    }
    if (!any_active) {
      throw InvalidInput(where.str() + ": at least one agent must be active");
    }
  }
}

ModeSchedule ModeSchedule::constant(Vector weights, double horizon_end) {
  return ModeSchedule({Epoch{0.0, std::move(weights)}}, horizon_end);
}

std::size_t ModeSchedule::epoch_index(double t) const {
  if (!(t >= -time_snap(t)) || t > horizon_end_ + time_snap(horizon_end_)) {
    std::ostringstream msg;
    msg << "time " << t << " outside schedule horizon [0, " << horizon_end_ << "]";
    throw InvalidInput(msg.str());
  }
  const double probe = t + time_snap(t);
  const auto it = std::upper_bound(epochs_.begin(), epochs_.end(), probe,
                                   [](double value, const Epoch& e) { return value < e.start; });
  return static_cast<std::size_t>(std::distance(epochs_.begin(), it)) - 1;
}

const Vector& ModeSchedule::weights_at(double t) const { return epochs_[epoch_index(t)].weights; }

const Vector& ModeSchedule::weights_before(double t) const {
  const std::size_t e = epoch_index(t);
  if (e > 0 && std::abs(t - epochs_[e].start) <= time_snap(t)) return epochs_[e - 1].weights;
  return epochs_[e].weights;
}

std::vector<std::size_t> ModeSchedule::active_set(double t) const {
  const Vector& w = weights_at(t);
  std::vector<std::size_t> active;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) active.push_back(static_cast<std::size_t>(i));
  }
  return active;
}

std::vector<double> ModeSchedule::switch_times() const {
  std::vector<double> out;
  out.reserve(epochs_.size() - 1);
  for (std::size_t k = 1; k < epochs_.size(); ++k) out.push_back(epochs_[k].start);
  return out;
}

std::size_t ModeSchedule::switch_count(double t) const {
  std::size_t count = 0;
  for (std::size_t k = 1; k < epochs_.size(); ++k) {
    if (epochs_[k].start < t) ++count;
  }
  return count;
}

std::vector<Vector> ModeSchedule::weight_set() const {
  std::vector<Vector> set;
  for (const Epoch& e : epochs_) {
    const bool seen = std::any_of(set.begin(), set.end(),
                                  [&](const Vector& w) { return w == e.weights; });
    if (!seen) set.push_back(e.weights);
  }
  return set;
}

std::vector<std::size_t> ModeSchedule::mode_indices() const {
  const std::vector<Vector> set = weight_set();
  std::vector<std::size_t> out;
  out.reserve(epochs_.size());
  for (const Epoch& e : epochs_) {
    const auto it = std::find(set.begin(), set.end(), e.weights);
    out.push_back(static_cast<std::size_t>(std::distance(set.begin(), it)));
  }
  return out;
}

ModeSchedule ModeSchedule::without_agent(std::size_t index) const {
  const auto n = static_cast<Eigen::Index>(agent_count());
  const auto drop = static_cast<Eigen::Index>(index);
  if (drop >= n) throw InvalidInput("departing agent index out of range");
  std::vector<Epoch> reduced;
  reduced.reserve(epochs_.size());
  for (const Epoch& e : epochs_) {
    Vector w(n - 1);
    for (Eigen::Index i = 0, j = 0; i < n; ++i) {
      if (i != drop) w(j++) = e.weights(i);
    }
    reduced.push_back(Epoch{e.start, std::move(w)});
  }
  return ModeSchedule(std::move(reduced), horizon_end_);
}

ModeSchedule ModeSchedule::with_horizon(double horizon_end) const {
  std::vector<Epoch> kept;
  for (const Epoch& e : epochs_) {
    if (e.start == 0.0 || e.start < horizon_end) kept.push_back(e);
  }
  return ModeSchedule(std::move(kept), horizon_end);
}

DwellCheck verify_dwell(const ModeSchedule& schedule, const DwellStats& stats) {
  if (!(stats.average_dwell > 0.0) || stats.chatter_bound < 0.0) {
    throw InvalidInput("dwell declaration needs chatter bound >= 0 and average dwell > 0");
  }
  const std::vector<double> switches = schedule.switch_times();
  for (std::size_t k = 0; k < switches.size(); ++k) {
    const double t = switches[k];
    if (t > schedule.horizon_end()) break;
    // Just after t_k exactly k + 1 switches have occurred.
    const double count = static_cast<double>(k + 1);
    if (count > stats.chatter_bound + t / stats.average_dwell) {
      return DwellCheck{false, t};
    }
  }
  return DwellCheck{};
}

ModeSchedule ScheduleFamily::sample(std::uint64_t seed) const {
  if (patterns.empty()) throw InvalidInput("schedule family needs at least one pattern");
  if (!(min_dwell > 0.0) || max_dwell < min_dwell) {
    throw InvalidInput("schedule family needs 0 < min_dwell <= max_dwell");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dwell(min_dwell, max_dwell);
  std::uniform_int_distribution<std::size_t> pick(0, patterns.size() - 1);

  std::vector<Epoch> epochs;
  std::size_t current = pick(rng);
  double t = 0.0;
  while (true) {
    epochs.push_back(Epoch{t, patterns[current]});
    t += dwell(rng);
    if (t >= horizon_end) break;
    if (patterns.size() > 1) {
      std::size_t next = current;
      while (next == current) next = pick(rng);
      current = next;
    }
  }
  return ModeSchedule(std::move(epochs), horizon_end);
}

}  // namespace acons

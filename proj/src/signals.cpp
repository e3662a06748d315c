#include "acons/signals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acons {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool on_grid(double t, double instant) { return std::abs(t - instant) <= time_snap(instant); }

std::size_t zoh_index(const signal_kind::ZohTrack& z, double t, Side side) {
  std::size_t idx = sample_index(z.period, t);
  if (side == Side::kLeft && idx > 0 && on_grid(t, static_cast<double>(idx) * z.period)) {
    --idx;
  }
  return std::min(idx, z.samples.size() - 1);
}

std::size_t piece_index(const signal_kind::Piecewise& p, double t, Side side) {
  const double probe = t + time_snap(t);
  auto it = std::upper_bound(p.starts.begin(), p.starts.end(), probe);
  std::size_t idx = static_cast<std::size_t>(std::distance(p.starts.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  if (side == Side::kLeft && idx > 0 && on_grid(t, p.starts[idx])) --idx;
  return idx;
}

void validate(const ReferenceSignal::Kind& kind) {
  std::visit(overloaded{
                 [](const signal_kind::Constant& c) {
                   if (!std::isfinite(c.value)) throw InvalidInput("constant signal must be finite");
                 },
                 [](const signal_kind::Sinusoid& s) {
                   if (!std::isfinite(s.offset) || !std::isfinite(s.amplitude) ||
                       !std::isfinite(s.omega) || !std::isfinite(s.phase)) {
                     throw InvalidInput("sinusoid parameters must be finite");
                   }
                 },
                 [](const signal_kind::ZohTrack& z) {
                   if (z.samples.empty()) throw InvalidInput("zoh signal needs at least one sample");
                   if (!(z.period > 0.0) || !std::isfinite(z.period)) {
                     throw InvalidInput("zoh sampling period must be > 0");
                   }
                   for (double s : z.samples) {
                     if (!std::isfinite(s)) throw InvalidInput("zoh samples must be finite");
                   }
                 },
                 [](const signal_kind::Polynomial& p) {
                   for (double c : p.coeffs) {
                     if (!std::isfinite(c)) throw InvalidInput("polynomial coefficients must be finite");
                   }
                 },
                 [](const signal_kind::Piecewise& p) {
                   if (p.starts.empty() || p.starts.size() != p.pieces.size()) {
                     throw InvalidInput("piecewise signal needs one start time per piece");
                   }
                   if (p.starts.front() != 0.0) {
                     throw InvalidInput("piecewise signal must start at t = 0");
                   }
                   for (std::size_t i = 1; i < p.starts.size(); ++i) {
                     if (!(p.starts[i] > p.starts[i - 1])) {
                       throw InvalidInput("piecewise start times must be strictly increasing");
                     }
                   }
                 },
             },
             kind);
}

}  // namespace

ReferenceSignal::ReferenceSignal(Kind kind) : kind_(std::move(kind)) { validate(kind_); }

double ReferenceSignal::value(double t, Side side) const {
  return std::visit(overloaded{
                        [](const signal_kind::Constant& c) { return c.value; },
                        [t](const signal_kind::Sinusoid& s) {
                          return s.offset + s.amplitude * std::sin(s.omega * t + s.phase);
                        },
                        [t, side](const signal_kind::ZohTrack& z) {
                          return z.samples[zoh_index(z, t, side)];
                        },
                        [t](const signal_kind::Polynomial& p) {
                          double acc = 0.0;
                          for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
                            acc = acc * t + *it;
                          }
                          return acc;
                        },
                        [t, side](const signal_kind::Piecewise& p) {
                          return p.pieces[piece_index(p, t, side)].value(t, side);
                        },
                    },
                    kind_);
}

double ReferenceSignal::derivative(double t, Side side) const {
  return std::visit(overloaded{
                        [](const signal_kind::Constant&) { return 0.0; },
                        [t](const signal_kind::Sinusoid& s) {
                          return s.amplitude * s.omega * std::cos(s.omega * t + s.phase);
                        },
                        [](const signal_kind::ZohTrack&) { return 0.0; },
                        [t](const signal_kind::Polynomial& p) {
                          double acc = 0.0;
                          for (std::size_t k = p.coeffs.size(); k-- > 1;) {
                            acc = acc * t + static_cast<double>(k) * p.coeffs[k];
                          }
                          return acc;
                        },
                        [t, side](const signal_kind::Piecewise& p) {
                          return p.pieces[piece_index(p, t, side)].derivative(t, side);
                        },
                    },
                    kind_);
}

std::vector<double> ReferenceSignal::discontinuities(double t0, double t1) const {
  std::vector<double> out;
  std::visit(overloaded{
                 [](const signal_kind::Constant&) {},
                 [](const signal_kind::Sinusoid&) {},
                 [](const signal_kind::Polynomial&) {},
                 [&](const signal_kind::ZohTrack& z) {
                   for (std::size_t l = 1; l < z.samples.size(); ++l) {
                     const double s = static_cast<double>(l) * z.period;
                     if (s > t1) break;
                     if (s > t0 && z.samples[l] != z.samples[l - 1]) out.push_back(s);
                   }
                 },
                 [&](const signal_kind::Piecewise& p) {
                   for (std::size_t i = 0; i < p.pieces.size(); ++i) {
                     const double lo = std::max(t0, p.starts[i]);
                     const double hi = i + 1 < p.starts.size() ? std::min(t1, p.starts[i + 1]) : t1;
                     if (i > 0 && p.starts[i] > t0 && p.starts[i] <= t1) out.push_back(p.starts[i]);
                     if (hi <= lo) continue;
                     for (double d : p.pieces[i].discontinuities(lo, hi)) {
                       if (i + 1 < p.starts.size() && d >= p.starts[i + 1]) continue;
                       out.push_back(d);
                     }
                   }
                 },
             },
             kind_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Vector ReferenceEnsemble::values(double t, Side side) const {
  Vector r(static_cast<Eigen::Index>(signals_.size()));
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) = signals_[i].value(t, side);
  }
  return r;
}

Vector ReferenceEnsemble::derivatives(double t, Side side) const {
  Vector r(static_cast<Eigen::Index>(signals_.size()));
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) = signals_[i].derivative(t, side);
  }
  return r;
}

Vector ReferenceEnsemble::sampled(double period, double t) const {
  Vector r(static_cast<Eigen::Index>(signals_.size()));
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) = zoh_sample(signals_[i], period, t);
  }
  return r;
}

std::vector<double> ReferenceEnsemble::discontinuities(double t0, double t1) const {
  std::vector<double> out;
  for (const ReferenceSignal& s : signals_) {
    const std::vector<double> d = s.discontinuities(t0, t1);
    out.insert(out.end(), d.begin(), d.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ReferenceEnsemble ReferenceEnsemble::without_agent(std::size_t index) const {
  if (index >= signals_.size()) throw InvalidInput("departing agent index out of range");
  std::vector<ReferenceSignal> kept = signals_;
  kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(index));
  return ReferenceEnsemble(std::move(kept));
}

double weighted_average(const Vector& weights, const Vector& references) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw InvalidInput("weighted average needs a positive weight");
  return weights.dot(references) / total;
}

Vector weighted_disagreement(const Vector& weights, const Vector& references) {
  const double avg = weighted_average(weights, references);
  return weights.cwiseProduct((references.array() - avg).matrix());
}

double active_average(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, double t) {
  return weighted_average(schedule.weights_at(t), ensemble.values(t));
}

Vector disagreement(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, double t) {
  return weighted_disagreement(schedule.weights_at(t), ensemble.values(t));
}

SmoothDerivatives smooth_derivatives(const Vector& weights, const Vector& references_rate) {
  SmoothDerivatives out;
  out.average_rate = weighted_average(weights, references_rate);
  const Vector weighted_rate = weights.cwiseProduct(references_rate);
  out.reference_rate = (weighted_rate.array() - out.average_rate).matrix();
  out.negated_disagreement_rate =
      -weights.cwiseProduct((references_rate.array() - out.average_rate).matrix());
  return out;
}

SmoothDerivatives smooth_derivatives(const ReferenceEnsemble& ensemble,
                                     const ModeSchedule& schedule, double t) {
  return smooth_derivatives(schedule.weights_at(t), ensemble.derivatives(t));
}

Jump jump_at_time(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, double t) {
  const std::size_t right_epoch = schedule.epoch_index(t);
  std::size_t left_epoch = right_epoch;
  if (right_epoch > 0 && on_grid(t, schedule.epochs()[right_epoch].start)) left_epoch = right_epoch - 1;
  const Vector& w_left = schedule.epochs()[left_epoch].weights;
  const Vector& w_right = schedule.epochs()[right_epoch].weights;
  const Vector r_left = ensemble.values(t, Side::kLeft);
  const Vector r_right = ensemble.values(t, Side::kRight);
  Jump j;
  j.average = weighted_average(w_right, r_right) - weighted_average(w_left, r_left);
  j.disagreement = weighted_disagreement(w_right, r_right) - weighted_disagreement(w_left, r_left);
  return j;
}

Jump jumps_at(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, std::size_t k) {
  const std::vector<double> switches = schedule.switch_times();
  if (k < 1 || k > switches.size()) {
    std::ostringstream msg;
    msg << "switch index " << k << " outside [1, " << switches.size() << "]";
    throw InvalidInput(msg.str());
  }
  return jump_at_time(ensemble, schedule, switches[k - 1]);
}

std::size_t sample_index(double period, double t) {
  if (!(period > 0.0)) throw InvalidInput("sampling period must be > 0");
  if (t < 0.0) throw InvalidInput("sampling time must be >= 0");
  const double q = t / period;
  return static_cast<std::size_t>(std::floor(q + 1e-9 * std::max(1.0, q)));
}

double zoh_sample(const ReferenceSignal& signal, double period, double t) {
  const double instant = static_cast<double>(sample_index(period, t)) * period;
  return signal.value(instant, Side::kRight);
}

}  // namespace acons

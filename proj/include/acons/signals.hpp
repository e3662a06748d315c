#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "acons/schedule.hpp"
#include "acons/types.hpp"

namespace acons {

/// Which one-sided limit to take at a discontinuity. Right is the default
/// everywhere (signals are right-continuous).
enum class Side { kRight, kLeft };

class ReferenceSignal;

namespace signal_kind {

struct Constant {
  double value = 0.0;
};

/// offset + amplitude * sin(omega * t + phase)
struct Sinusoid {
  double offset = 0.0;
  double amplitude = 1.0;
  double omega = 1.0;
  double phase = 0.0;
};

/// Sample l holds on [l * period, (l + 1) * period); the last sample holds
/// forever.
struct ZohTrack {
  std::vector<double> samples;
  double period = 1.0;
};

/// sum_k coeffs[k] * t^k
struct Polynomial {
  std::vector<double> coeffs;
};

/// Piece p is active on [starts[p], starts[p + 1]) and evaluated at absolute
/// time. starts[0] must be 0.
struct Piecewise {
  std::vector<double> starts;
  std::vector<ReferenceSignal> pieces;
};

}  // namespace signal_kind

/// A scalar reference r(t) whose value and time-derivative can be evaluated
/// at any t >= 0, with one-sided limits at its own discontinuities.
class ReferenceSignal {
 public:
  using Kind = std::variant<signal_kind::Constant, signal_kind::Sinusoid, signal_kind::ZohTrack,
                            signal_kind::Polynomial, signal_kind::Piecewise>;

  ReferenceSignal() : kind_(signal_kind::Constant{}) {}
  ReferenceSignal(Kind kind);  // NOLINT(google-explicit-constructor)

  static ReferenceSignal constant(double value) { return {signal_kind::Constant{value}}; }
  static ReferenceSignal sinusoid(double offset, double amplitude, double omega,
                                  double phase = 0.0) {
    return {signal_kind::Sinusoid{offset, amplitude, omega, phase}};
  }
  static ReferenceSignal zoh(std::vector<double> samples, double period) {
    return {signal_kind::ZohTrack{std::move(samples), period}};
  }
  static ReferenceSignal polynomial(std::vector<double> coeffs) {
    return {signal_kind::Polynomial{std::move(coeffs)}};
  }
  static ReferenceSignal piecewise(std::vector<double> starts,
                                   std::vector<ReferenceSignal> pieces) {
    return {signal_kind::Piecewise{std::move(starts), std::move(pieces)}};
  }

  [[nodiscard]] const Kind& kind() const { return kind_; }

  [[nodiscard]] double value(double t, Side side = Side::kRight) const;
  [[nodiscard]] double derivative(double t, Side side = Side::kRight) const;

  /// Instants in (t0, t1] at which the value may jump.
  [[nodiscard]] std::vector<double> discontinuities(double t0, double t1) const;

 private:
  Kind kind_;
};

/// One reference per agent.
class ReferenceEnsemble {
 public:
  ReferenceEnsemble() = default;
  explicit ReferenceEnsemble(std::vector<ReferenceSignal> signals)
      : signals_(std::move(signals)) {}

  [[nodiscard]] std::size_t size() const { return signals_.size(); }
  [[nodiscard]] const std::vector<ReferenceSignal>& signals() const { return signals_; }
  [[nodiscard]] const ReferenceSignal& operator[](std::size_t i) const { return signals_[i]; }

  [[nodiscard]] Vector values(double t, Side side = Side::kRight) const;
  [[nodiscard]] Vector derivatives(double t, Side side = Side::kRight) const;
  /// Zero-order-hold sampled values with sampling period `period`.
  [[nodiscard]] Vector sampled(double period, double t) const;

  /// Sorted, de-duplicated union of the signals' discontinuities in (t0, t1].
  [[nodiscard]] std::vector<double> discontinuities(double t0, double t1) const;

  [[nodiscard]] ReferenceEnsemble without_agent(std::size_t index) const;

 private:
  std::vector<ReferenceSignal> signals_;
};

/// sum(eta .* r) / sum(eta). Requires at least one positive weight.
double weighted_average(const Vector& weights, const Vector& references);
/// eta .* (r - avg)
Vector weighted_disagreement(const Vector& weights, const Vector& references);

double active_average(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, double t);
Vector disagreement(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, double t);

/// Absolutely continuous parts of the input derivatives within an epoch.
struct SmoothDerivatives {
  double average_rate = 0.0;       ///< d(avg)/dt
  Vector reference_rate;           ///< E r' - d(avg)/dt * 1
  Vector negated_disagreement_rate;  ///< -w~'
};

SmoothDerivatives smooth_derivatives(const Vector& weights, const Vector& references_rate);
SmoothDerivatives smooth_derivatives(const ReferenceEnsemble& ensemble,
                                     const ModeSchedule& schedule, double t);

/// Jumps of avg and w across an instant: right limit minus left limit.
struct Jump {
  double average = 0.0;
  Vector disagreement;
};

/// Jump at switch instant t_k, k in [1, number of switches].
Jump jumps_at(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, std::size_t k);
/// Jump at an arbitrary instant: weights change if t is a switch instant,
/// signal values change if t is one of their discontinuities.
Jump jump_at_time(const ReferenceEnsemble& ensemble, const ModeSchedule& schedule, double t);

/// Value of `signal` at the latest sampling instant period * floor(t / period).
double zoh_sample(const ReferenceSignal& signal, double period, double t);

/// floor(t / period) with tolerance for k * delta rounding.
std::size_t sample_index(double period, double t);

}  // namespace acons

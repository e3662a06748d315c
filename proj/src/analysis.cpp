#include "acons/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "acons/signals.hpp"

namespace acons {

namespace {

constexpr double kStabilityMargin = 1e-10;

double norm2(const Vector& a, const Vector& b) { return std::sqrt(a.squaredNorm() + b.squaredNorm()); }

}  // namespace

Matrix compact_generator(const SpectralDecomposition& decomposition, const Vector& weights) {
  const auto n = static_cast<Eigen::Index>(decomposition.size());
  if (weights.size() != n) throw InvalidInput("subsystem weights length differs from agent count");
  if (!weights.allFinite() || weights.minCoeff() < 0.0 || !(weights.maxCoeff() > 0.0)) {
    throw InvalidInput("subsystem weights must be >= 0 with at least one positive entry");
  }
  const Matrix& t = decomposition.transform;
  const Matrix& lp = decomposition.reduced_laplacian;
  // L = N L+ N^T on a connected graph.
  const Matrix complement = decomposition.complement();
  Matrix el = complement * lp * complement.transpose();
  el.diagonal() += weights;

  const Eigen::Index m = 2 * n - 1;
  Matrix a = Matrix::Zero(m, m);
  a.topLeftCorner(n, n) = -(t.transpose() * el * t);
  a.block(1, n, n - 1, n - 1) = -Matrix::Identity(n - 1, n - 1);
  a.block(n, 1, n - 1, n - 1) = lp * lp;
  return a;
}

Subsystem subsystem_matrix(const SpectralDecomposition& decomposition, const Vector& weights) {
  Subsystem s;
  s.matrix = compact_generator(decomposition, weights);
  s.spectrum = eigenvalues(s.matrix);
  s.weights = weights;
  return s;
}

Matrix input_matrix(const SpectralDecomposition& decomposition) {
  const auto n = static_cast<Eigen::Index>(decomposition.size());
  Matrix b = Matrix::Zero(2 * n - 1, 2 * n);
  b.topLeftCorner(n, n) = decomposition.transform.transpose();
  b.bottomRightCorner(n - 1, n) = decomposition.complement().transpose();
  return b;
}

Vector to_compact(const SpectralDecomposition& decomposition, const Matrix& laplacian,
                  const Vector& x, const Vector& v, double average, const Vector& disagreement) {
  const auto n = static_cast<Eigen::Index>(decomposition.size());
  const Matrix& t = decomposition.transform;
  Vector out(2 * n - 1);
  out.head(n) = t.transpose() * (x.array() - average).matrix();
  const Vector q = t.transpose() * (laplacian * v - disagreement);
  out.tail(n - 1) = q.tail(n - 1);
  return out;
}

double initial_error_norm(const Matrix& laplacian, const Vector& weights, const Vector& references,
                          const Vector& x0, const Vector& v0) {
  const double avg = weighted_average(weights, references);
  const Vector w = weighted_disagreement(weights, references);
  return norm2((x0.array() - avg).matrix(), laplacian * v0 - w);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kStable: return "stable";
    case Verdict::kMarginal: return "marginal";
    case Verdict::kUnstable: return "unstable";
  }
  return "unknown";
}

const char* to_string(TimeMode m) {
  return m == TimeMode::kContinuous ? "continuous" : "discrete";
}

Verdict hurwitz_verdict(const Matrix& m) {
  const double abscissa = spectral_abscissa(eigenvalues(m));
  if (abscissa < -kStabilityMargin) return Verdict::kStable;
  if (abscissa <= kStabilityMargin) return Verdict::kMarginal;
  return Verdict::kUnstable;
}

bool is_hurwitz(const Matrix& m) { return hurwitz_verdict(m) == Verdict::kStable; }

Verdict schur_verdict(const Matrix& m) {
  const double radius = spectral_radius(eigenvalues(m));
  if (radius < 1.0 - kStabilityMargin) return Verdict::kStable;
  if (radius <= 1.0 + kStabilityMargin) return Verdict::kMarginal;
  return Verdict::kUnstable;
}

bool is_schur(const Matrix& m) { return schur_verdict(m) == Verdict::kStable; }

double stable_step(const std::vector<Complex>& spectrum) {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& mu : spectrum) {
    d = std::min(d, -2.0 * mu.real() / std::norm(mu));
  }
  return d;
}

StepBounds step_bounds(const SpectralDecomposition& decomposition,
                       const std::vector<Vector>& weight_set) {
  if (weight_set.empty()) throw InvalidInput("step bound needs at least one weight pattern");
  StepBounds out;
  out.d_bar = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < weight_set.size(); ++p) {
    const Subsystem s = subsystem_matrix(decomposition, weight_set[p]);
    const double abscissa = spectral_abscissa(s.spectrum);
    if (!(abscissa < -kStabilityMargin)) {
      std::ostringstream msg;
      msg << "subsystem " << p << " is not Hurwitz (max Re = " << abscissa << ")";
      throw NumericalError(msg.str());
    }
    const double d = stable_step(s.spectrum);
    out.per_subsystem.push_back(d);
    if (d < out.d_bar) {
      out.d_bar = d;
      out.binding = p;
    }
  }
  return out;
}

double max_stable_step(const SpectralDecomposition& decomposition,
                       const std::vector<Vector>& weight_set) {
  return step_bounds(decomposition, weight_set).d_bar;
}

double StabilityCertificate::envelope(double lag) const {
  if (mode == TimeMode::kContinuous) return kappa * std::exp(-rate * lag);
  return kappa * std::pow(rate, lag);
}

std::vector<EnvelopeSample> transition_norm_samples(const SpectralDecomposition& decomposition,
                                                    const ModeSchedule& schedule, TimeMode mode,
                                                    const CertificateOptions& options) {
  const double step = mode == TimeMode::kContinuous ? options.grid_step : options.delta_c;
  if (!(step > 0.0)) throw InvalidInput("certificate grid step must be > 0");
  const std::vector<Vector> patterns = schedule.weight_set();
  std::vector<Matrix> generators;
  generators.reserve(patterns.size());
  for (const Vector& p : patterns) generators.push_back(compact_generator(decomposition, p));
  const std::vector<std::size_t> epoch_modes = schedule.mode_indices();
  const Eigen::Index m = generators.front().rows();
  const Matrix id = Matrix::Identity(m, m);

  const auto grid = static_cast<std::size_t>(std::floor(schedule.horizon_end() / step + 1e-9));
  if (grid == 0) return {EnvelopeSample{0.0, 1.0}};

  // Propagator over [i * step, (i + 1) * step].
  std::vector<Matrix> propagators;
  propagators.reserve(grid);
  if (mode == TimeMode::kContinuous) {
    std::map<std::size_t, Matrix> full_step;
    const std::vector<double> switches = schedule.switch_times();
    for (std::size_t i = 0; i < grid; ++i) {
      const double a = static_cast<double>(i) * step;
      const double b = static_cast<double>(i + 1) * step;
      std::vector<double> cuts{a};
      for (double s : switches) {
        if (s > a + time_snap(a) && s < b - time_snap(b)) cuts.push_back(s);
      }
      cuts.push_back(b);
      Matrix phi = id;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const std::size_t mode_index = epoch_modes[schedule.epoch_index(cuts[c])];
        if (cuts.size() == 2) {
          auto it = full_step.find(mode_index);
          if (it == full_step.end()) {
            it = full_step.emplace(mode_index, expm_oracle(generators[mode_index], step)).first;
          }
          phi = it->second * phi;
        } else {
          phi = expm_oracle(generators[mode_index], cuts[c + 1] - cuts[c]) * phi;
        }
      }
      propagators.push_back(std::move(phi));
    }
  } else {
    for (std::size_t k = 0; k < grid; ++k) {
      const std::size_t mode_index =
          epoch_modes[schedule.epoch_index(static_cast<double>(k) * step)];
      propagators.push_back(id + step * generators[mode_index]);
    }
  }

  const std::size_t origins = std::max<std::size_t>(1, options.max_origins);
  const std::size_t stride = std::max<std::size_t>(1, (grid + origins - 1) / origins);
  const double lag_unit = mode == TimeMode::kContinuous ? step : 1.0;
  std::vector<EnvelopeSample> samples;
  samples.push_back(EnvelopeSample{0.0, 1.0});
  for (std::size_t j = 0; j < grid; j += stride) {
    Matrix phi = id;
    for (std::size_t i = j; i < grid; ++i) {
      phi = propagators[i] * phi;
      const double norm = spectral_norm(phi);
      if (!std::isfinite(norm)) {
        throw NumericalError("transition matrix norm overflowed; switched dynamics diverge");
      }
      if (norm < options.norm_floor) break;
      samples.push_back(EnvelopeSample{static_cast<double>(i + 1 - j) * lag_unit, norm});
    }
  }
  return samples;
}

StabilityCertificate fit_envelope(const std::vector<EnvelopeSample>& samples, TimeMode mode,
                                  const CertificateOptions& options) {
  if (!(options.safety_factor >= 1.0)) throw InvalidInput("safety factor must be >= 1");
  const double unit = mode == TimeMode::kContinuous ? options.grid_step : 1.0;
  std::map<long long, double> upper;
  double max_lag = 0.0;
  for (const EnvelopeSample& s : samples) {
    if (!std::isfinite(s.norm)) throw NumericalError("non-finite transition norm sample");
    const auto key = static_cast<long long>(std::llround(s.lag / unit));
    auto [it, inserted] = upper.emplace(key, s.norm);
    if (!inserted) it->second = std::max(it->second, s.norm);
    max_lag = std::max(max_lag, s.lag);
  }
  // Least squares of log(upper envelope) against lag.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (const auto& [key, value] : upper) {
    if (key < 1 || !(value > 0.0)) continue;
    const double x = static_cast<double>(key) * unit;
    const double y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw NumericalError("too few transition samples to fit an envelope");
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  const double slope = (static_cast<double>(count) * sxy - sx * sy) / denom;

  StabilityCertificate cert;
  cert.mode = mode;
  cert.safety_factor = options.safety_factor;
  cert.grid_step = mode == TimeMode::kContinuous ? options.grid_step : options.delta_c;
  cert.samples = samples.size();
  cert.max_lag = max_lag;
  if (mode == TimeMode::kContinuous) {
    cert.rate = -slope;
    if (!(cert.rate > 0.0)) {
      std::ostringstream msg;
      msg << "no decaying envelope: fitted growth rate " << slope
          << " per second (dwell time too small for this subsystem set)";
      throw NumericalError(msg.str());
    }
  } else {
    cert.rate = std::exp(slope);
    if (!(cert.rate < 1.0)) {
      std::ostringstream msg;
      msg << "no decaying envelope: fitted per-step factor " << cert.rate
          << " >= 1 (step above the Schur bound or dwell time too small)";
      throw NumericalError(msg.str());
    }
  }
  double kappa = 1.0;
  cert.kappa = 1.0;
  for (const EnvelopeSample& s : samples) {
    kappa = std::max(kappa, s.norm / cert.envelope(s.lag));
  }
  cert.kappa = kappa * options.safety_factor;
  if (worst_envelope_ratio(cert, samples) > 1.0) {
    throw NumericalError("fitted envelope fails to dominate its own fit samples");
  }
  return cert;
}

StabilityCertificate fit_certificate(const SpectralDecomposition& decomposition,
                                     const std::vector<ModeSchedule>& schedules, TimeMode mode,
                                     const CertificateOptions& options) {
  if (schedules.empty()) throw InvalidInput("certificate fit needs at least one schedule");
  std::vector<EnvelopeSample> all;
  for (std::size_t s = 0; s < schedules.size(); ++s) {
    if (options.dwell) {
      const DwellCheck check = verify_dwell(schedules[s], *options.dwell);
      if (!check.ok) {
        std::ostringstream msg;
        msg << "fit schedule " << s << " violates the declared dwell time at t = "
            << *check.first_violation;
        throw InvalidInput(msg.str());
      }
    }
    const std::vector<EnvelopeSample> part =
        transition_norm_samples(decomposition, schedules[s], mode, options);
    all.insert(all.end(), part.begin(), part.end());
  }
  StabilityCertificate cert = fit_envelope(all, mode, options);
  cert.schedules = schedules.size();
  return cert;
}

double worst_envelope_ratio(const StabilityCertificate& certificate,
                            const std::vector<EnvelopeSample>& samples) {
  double worst = 0.0;
  for (const EnvelopeSample& s : samples) {
    worst = std::max(worst, s.norm / certificate.envelope(s.lag));
  }
  return worst;
}

std::vector<double> jump_instants(const CtScenario& scenario) {
  const double horizon = scenario.schedule.horizon_end();
  std::vector<double> out = scenario.ensemble.discontinuities(0.0, horizon);
  for (double s : scenario.schedule.switch_times()) {
    if (s <= horizon) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BoundCurve ct_bound_curve(const StabilityCertificate& certificate, const CtScenario& scenario,
                          const Vector& x0, const Vector& v0, const std::vector<double>& times,
                          const std::vector<bool>& left_limit) {
  if (certificate.mode != TimeMode::kContinuous) {
    throw InvalidInput("ct bound needs a continuous-time certificate");
  }
  const Matrix l = laplacian(scenario.topology);
  const double n = static_cast<double>(scenario.topology.size());
  const double init = initial_error_norm(l, scenario.schedule.weights_at(0.0),
                                         scenario.ensemble.values(0.0), x0, v0);
  const std::vector<double> instants = jump_instants(scenario);
  std::vector<double> jump_norms;
  jump_norms.reserve(instants.size());
  for (double t : instants) {
    const Jump j = jump_at_time(scenario.ensemble, scenario.schedule, t);
    jump_norms.push_back(std::sqrt(n * j.average * j.average + j.disagreement.squaredNorm()));
  }

  const double kappa = certificate.kappa;
  const double lambda = certificate.rate;
  BoundCurve out;
  out.times = times;
  double sup = 0.0;
  double switching = 0.0;  // sum_k exp(-lambda (t - t_k)) J_k at t_prev
  double t_prev = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const bool is_left = i < left_limit.size() && left_limit[i];
    switching *= std::exp(-lambda * (t - t_prev));
    while (next_jump < instants.size() && instants[next_jump] <= t) {
      switching += std::exp(-lambda * (t - instants[next_jump])) * jump_norms[next_jump];
      ++next_jump;
    }
    t_prev = t;
    const bool at_jump = std::any_of(instants.begin(), instants.end(), [t](double s) {
      return std::abs(s - t) <= time_snap(s);
    });
    if (!is_left && !at_jump) {
      const SmoothDerivatives d = smooth_derivatives(scenario.ensemble, scenario.schedule, t);
      sup = std::max(sup, norm2(d.reference_rate, d.negated_disagreement_rate));
    }
    out.transient.push_back(kappa * std::exp(-lambda * t) * init);
    out.switching.push_back(kappa * switching);
    out.input.push_back(kappa / lambda * sup);
    out.total.push_back(out.transient.back() + out.switching.back() + out.input.back());
  }
  return out;
}

double ct_bound(const StabilityCertificate& certificate, const CtScenario& scenario,
                const Vector& x0, const Vector& v0, double t, double grid_step) {
  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::ceil(t / grid_step - 1e-9));
  for (std::size_t i = 0; i < steps; ++i) times.push_back(static_cast<double>(i) * grid_step);
  times.push_back(t);
  return ct_bound_curve(certificate, scenario, x0, v0, times).total.back();
}

Vector dt_input(const DtScenario& scenario, std::size_t l) {
  const Vector& e0 = scenario.weights(l);
  const Vector& e1 = scenario.weights(l + 1);
  const Vector r0 = scenario.references(l);
  const Vector r1 = scenario.references(l + 1);
  const auto n = e0.size();
  const double d_avg = weighted_average(e1, r1) - weighted_average(e0, r0);
  Vector out(2 * n);
  out.head(n) = (e1.cwiseProduct(r1) - e0.cwiseProduct(r0)).array() - d_avg;
  out.tail(n) = -(weighted_disagreement(e1, r1) - weighted_disagreement(e0, r0));
  return out;
}

BoundCurve dt_bound_curve(const StabilityCertificate& certificate, const DtScenario& scenario,
                          const Vector& x0, const Vector& v0) {
  if (certificate.mode != TimeMode::kDiscrete) {
    throw InvalidInput("dt bound needs a discrete-time certificate");
  }
  const Matrix l = laplacian(scenario.topology);
  const double init =
      initial_error_norm(l, scenario.weights(0), scenario.references(0), x0, v0);
  const double kappa = certificate.kappa;
  const double omega = certificate.rate;
  BoundCurve out;
  double sup = 0.0;
  for (std::size_t k = 0; k <= scenario.steps; ++k) {
    if (k > 0) sup = std::max(sup, dt_input(scenario, k - 1).norm());
    const double wk = std::pow(omega, static_cast<double>(k));
    out.times.push_back(scenario.time_at(k));
    out.transient.push_back(kappa * wk * init);
    out.switching.push_back(0.0);
    out.input.push_back(kappa * (1.0 - wk) / (1.0 - omega) * sup);
    out.total.push_back(out.transient.back() + out.input.back());
  }
  return out;
}

double dt_bound(const StabilityCertificate& certificate, const DtScenario& scenario,
                const Vector& x0, const Vector& v0, std::size_t k) {
  if (k > scenario.steps) throw InvalidInput("dt bound step index beyond scenario length");
  DtScenario truncated = scenario;
  truncated.steps = k;
  return dt_bound_curve(certificate, truncated, x0, v0).total.back();
}

}  // namespace acons

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acons/eigen_solver.hpp"
#include "acons/graph.hpp"
#include "acons/scenario.hpp"
#include "acons/schedule.hpp"
#include "acons/types.hpp"

namespace acons {

/// Compact-form error dynamics for one weight pattern eta_p:
///
///   A_p = [ -T^T (E_p + L) T    -[0; I_{n-1}] ]
///         [ [0  L+ L+]            0           ]
///
/// acting on (e_bar, q_{2:n}) with e_bar = T^T (x - avg 1) and
/// q = T^T (L v - w).
struct Subsystem {
  Vector weights;
  Matrix matrix;
  std::vector<Complex> spectrum;
};

Subsystem subsystem_matrix(const SpectralDecomposition& decomposition, const Vector& weights);

/// The matrix of subsystem_matrix without the eigenvalue computation.
Matrix compact_generator(const SpectralDecomposition& decomposition, const Vector& weights);

/// B = [[T^T, 0], [0, N^T]], (2n-1) x 2n. ||B|| <= 1.
Matrix input_matrix(const SpectralDecomposition& decomposition);

/// (e_bar, q_{2:n}) for an agentwise state.
Vector to_compact(const SpectralDecomposition& decomposition, const Matrix& laplacian,
                  const Vector& x, const Vector& v, double average, const Vector& disagreement);

/// ||[x - avg 1; L v - w]||, the initial-condition factor of both bounds.
double initial_error_norm(const Matrix& laplacian, const Vector& weights, const Vector& references,
                          const Vector& x0, const Vector& v0);

enum class Verdict { kStable, kMarginal, kUnstable };

const char* to_string(Verdict v);

/// Hurwitz when max Re(mu) < -1e-10; marginal within 1e-10 of zero.
Verdict hurwitz_verdict(const Matrix& m);
bool is_hurwitz(const Matrix& m);
/// Schur when spectral radius < 1 - 1e-10; marginal within 1e-10 of one.
Verdict schur_verdict(const Matrix& m);
bool is_schur(const Matrix& m);

/// Largest Euler step keeping I + d * A Schur, for one spectrum:
/// min_i -2 Re(mu_i) / |mu_i|^2.
double stable_step(const std::vector<Complex>& spectrum);

struct StepBounds {
  double d_bar = 0.0;
  std::size_t binding = 0;  ///< index of the subsystem attaining d_bar
  std::vector<double> per_subsystem;
};

/// Throws NumericalError when a subsystem is not Hurwitz.
StepBounds step_bounds(const SpectralDecomposition& decomposition,
                       const std::vector<Vector>& weight_set);
double max_stable_step(const SpectralDecomposition& decomposition,
                       const std::vector<Vector>& weight_set);

enum class TimeMode { kContinuous, kDiscrete };

const char* to_string(TimeMode m);

/// Empirical exponential envelope of the transition matrix:
///   CT: ||Phi(t, tau)|| <= kappa * exp(-rate * (t - tau))
///   DT: ||Phi(k, j)||   <= kappa * rate^(k - j)
struct StabilityCertificate {
  TimeMode mode = TimeMode::kContinuous;
  double kappa = 1.0;
  double rate = 0.0;
  double safety_factor = 1.25;
  double grid_step = 0.0;  ///< seconds between grid points (delta_c for DT)
  std::size_t schedules = 0;
  std::size_t samples = 0;
  double max_lag = 0.0;
  std::vector<std::uint64_t> fit_seeds;

  [[nodiscard]] double envelope(double lag) const;
};

struct CertificateOptions {
  double safety_factor = 1.25;
  double grid_step = 0.1;  ///< CT sampling grid (seconds)
  double delta_c = 0.1;    ///< DT step
  std::size_t max_origins = 160;
  /// Propagation from an origin stops once ||Phi|| drops below this; the
  /// deep tail carries no information at double precision and would skew
  /// the fitted rate.
  double norm_floor = 1e-12;
  std::optional<DwellStats> dwell;
};

/// One sampled ||Phi(t, tau)||; lag is in seconds (CT) or steps (DT).
struct EnvelopeSample {
  double lag = 0.0;
  double norm = 0.0;
};

/// Spectral norms of the homogeneous compact-form transition matrix over a
/// schedule, for every grid origin (strided to at most max_origins) and every
/// later grid point. CT propagators are exact matrix exponentials split at
/// switch instants; DT propagators are products of I + delta_c A_sigma(k).
/// Samples below options.norm_floor are dropped.
std::vector<EnvelopeSample> transition_norm_samples(const SpectralDecomposition& decomposition,
                                                    const ModeSchedule& schedule, TimeMode mode,
                                                    const CertificateOptions& options);

/// Log-linear regression on the per-lag upper envelope gives the rate; kappa
/// is the smallest constant dominating every sample at that rate, then
/// inflated by the safety factor. Throws NumericalError when the envelope
/// does not decay.
StabilityCertificate fit_envelope(const std::vector<EnvelopeSample>& samples, TimeMode mode,
                                  const CertificateOptions& options);

/// Fits one certificate over all `schedules` (the fit family). When a dwell
/// declaration is given, every schedule must satisfy it.
StabilityCertificate fit_certificate(const SpectralDecomposition& decomposition,
                                     const std::vector<ModeSchedule>& schedules, TimeMode mode,
                                     const CertificateOptions& options);

/// Largest sample-to-envelope ratio; <= 1 means the envelope dominates.
double worst_envelope_ratio(const StabilityCertificate& certificate,
                            const std::vector<EnvelopeSample>& samples);

/// Tracking-error bound curve with its three summands.
struct BoundCurve {
  std::vector<double> times;
  std::vector<double> transient;
  std::vector<double> switching;
  std::vector<double> input;
  std::vector<double> total;
};

/// Continuous-time bound at each of `times` (nondecreasing). Samples flagged
/// in `left_limit` are treated as the instant just before their time. The
/// input supremum is taken over the given times, excluding jump instants.
BoundCurve ct_bound_curve(const StabilityCertificate& certificate, const CtScenario& scenario,
                          const Vector& x0, const Vector& v0, const std::vector<double>& times,
                          const std::vector<bool>& left_limit = {});

/// Single-time evaluation on a uniform grid of spacing grid_step over [0, t].
double ct_bound(const StabilityCertificate& certificate, const CtScenario& scenario,
                const Vector& x0, const Vector& v0, double t, double grid_step = 1e-2);

/// Instants where avg or w can jump: switch instants plus signal
/// discontinuities in (0, horizon].
std::vector<double> jump_instants(const CtScenario& scenario);

/// Discrete-time input [Delta(E r)(l) - Delta avg(l) 1; -Delta w(l)] (length 2n).
Vector dt_input(const DtScenario& scenario, std::size_t l);

/// Discrete-time bound for k = 0..steps.
BoundCurve dt_bound_curve(const StabilityCertificate& certificate, const DtScenario& scenario,
                          const Vector& x0, const Vector& v0);
double dt_bound(const StabilityCertificate& certificate, const DtScenario& scenario,
                const Vector& x0, const Vector& v0, std::size_t k);

}  // namespace acons

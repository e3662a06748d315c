#include <doctest.h>

#include <cmath>

#include "acons/analysis.hpp"
#include "acons/ct_sim.hpp"
#include "acons/dt_sim.hpp"
#include "support/scenarios.hpp"

using namespace acons;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Matrix euler(const Matrix& a, double step) {
  return Matrix::Identity(a.rows(), a.cols()) + step * a;
}

// v with L v = w, via the reduced Laplacian on the disagreement subspace.
Vector balanced_v(const SpectralDecomposition& d, const Vector& w) {
  const Matrix n = d.complement();
  return n * d.reduced_laplacian.ldlt().solve(n.transpose() * w);
}

}  // namespace

TEST_CASE("compact matrix of the two-node path with one active agent") {
  const Subsystem s = subsystem_matrix(spectral_decomposition(Topology::path(2)), vec({1, 0}));
  Matrix expected(3, 3);
  expected << -0.5, -0.5, 0, -0.5, -2.5, -1, 0, 4, 0;
  CHECK((s.matrix - expected).cwiseAbs().maxCoeff() < 1e-14);

  // Characteristic polynomial from traces: l^3 - tr l^2 + (tr^2 - tr(A^2))/2 l - det.
  const Matrix& a = s.matrix;
  const double c1 = -a.trace();
  const double c2 = 0.5 * (a.trace() * a.trace() - (a * a).trace());
  const double c3 = -a.determinant();
  CHECK(c1 == doctest::Approx(3.0));
  CHECK(c2 == doctest::Approx(5.0));
  CHECK(c3 == doctest::Approx(2.0));
  CHECK(s.spectrum.size() == 3);
  CHECK(spectral_abscissa(s.spectrum) < 0.0);
}

TEST_CASE("compact matrix shape") {
  testing::Rng rng(3);
  for (std::size_t n = 2; n <= 9; ++n) {
    const SpectralDecomposition d = spectral_decomposition(testing::random_connected_graph(rng, n));
    const Matrix a = compact_generator(d, testing::random_weights(rng, n));
    CHECK(a.rows() == static_cast<Eigen::Index>(2 * n - 1));
    CHECK(a.cols() == static_cast<Eigen::Index>(2 * n - 1));
    const Matrix b = input_matrix(d);
    CHECK(b.rows() == static_cast<Eigen::Index>(2 * n - 1));
    CHECK(b.cols() == static_cast<Eigen::Index>(2 * n));
    CHECK(spectral_norm(b) <= 1.0 + 1e-12);
  }
}

TEST_CASE("Hurwitz verdicts") {
  CHECK(is_hurwitz(-Matrix::Identity(3, 3)));
  Matrix nilpotent(2, 2);
  nilpotent << 0, 1, 0, 0;
  CHECK_FALSE(is_hurwitz(nilpotent));
  CHECK(hurwitz_verdict(nilpotent) == Verdict::kMarginal);
  CHECK(hurwitz_verdict(Matrix::Identity(2, 2)) == Verdict::kUnstable);
  Matrix m(2, 2);
  m << -2, 1, 1, -1;
  CHECK(is_hurwitz(m));
}

TEST_CASE("Schur verdicts") {
  CHECK(is_schur(0.5 * Matrix::Identity(3, 3)));
  CHECK_FALSE(is_schur(Matrix::Identity(3, 3)));
  CHECK(schur_verdict(Matrix::Identity(3, 3)) == Verdict::kMarginal);
  CHECK(schur_verdict(2.0 * Matrix::Identity(2, 2)) == Verdict::kUnstable);
}

TEST_CASE("stable Euler step for a scalar") {
  CHECK(stable_step({Complex(-4.0, 0.0)}) == doctest::Approx(0.5));
  CHECK(stable_step({Complex(-1.0, 1.0)}) == doctest::Approx(1.0));
}

TEST_CASE("Schur boundary on the two-node example") {
  const SpectralDecomposition d = spectral_decomposition(Topology::path(2));
  const std::vector<Vector> patterns{vec({1, 0}), vec({0, 1})};
  const StepBounds b = step_bounds(d, patterns);
  REQUIRE(b.per_subsystem.size() == 2);
  CHECK(b.per_subsystem[0] == doctest::Approx(b.per_subsystem[1]).epsilon(1e-10));
  const std::vector<Complex> e0 = subsystem_matrix(d, patterns[0]).spectrum;
  const std::vector<Complex> e1 = subsystem_matrix(d, patterns[1]).spectrum;
  for (std::size_t i = 0; i < e0.size(); ++i) CHECK(std::abs(e0[i] - e1[i]) < 1e-10);

  for (const Vector& p : patterns) CHECK(is_schur(euler(compact_generator(d, p), 0.9 * b.d_bar)));
  CHECK_FALSE(is_schur(euler(compact_generator(d, patterns[b.binding]), 1.1 * b.d_bar)));
}

TEST_CASE("adding a subsystem never raises the step bound") {
  testing::Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 5);
    const SpectralDecomposition d = spectral_decomposition(testing::random_connected_graph(rng, n));
    std::vector<Vector> patterns{testing::random_weights(rng, n)};
    double previous = max_stable_step(d, patterns);
    for (int k = 0; k < 3; ++k) {
      patterns.push_back(testing::random_weights(rng, n));
      const double next = max_stable_step(d, patterns);
      CHECK(next <= previous);
      previous = next;
    }
  }
}

TEST_CASE("compact subsystems are Hurwitz on random instances") {
  testing::Rng rng(77);
  std::uniform_int_distribution<std::size_t> size(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    const Topology g = testing::random_connected_graph(rng, n);
    const Vector eta = testing::random_weights(rng, n);
    const Matrix e_plus_l = Matrix(eta.asDiagonal()) + laplacian(g);
    CHECK(is_hurwitz(-e_plus_l));
    CHECK(is_hurwitz(subsystem_matrix(spectral_decomposition(g), eta).matrix));
  }
}

TEST_CASE("initial error norm vanishes at equilibrium") {
  const Topology g = Topology::ring(5);
  const SpectralDecomposition d = spectral_decomposition(g);
  const Vector eta = vec({1, 0, 2, 0, 1});
  const Vector r = vec({1, 2, 3, 4, 5});
  const Vector w = weighted_disagreement(eta, r);
  const Vector x0 = Vector::Constant(5, weighted_average(eta, r));
  CHECK(initial_error_norm(laplacian(g), eta, r, x0, balanced_v(d, w)) < 1e-12);
  CHECK(initial_error_norm(laplacian(g), eta, r, x0 + Vector::Unit(5, 0), balanced_v(d, w)) ==
        doctest::Approx(1.0));
}

TEST_CASE("certificate for a fixed subsystem recovers the spectral abscissa") {
  testing::Rng rng(23);
  const Topology g = testing::random_connected_graph(rng, 4);
  const SpectralDecomposition d = spectral_decomposition(g);
  const Vector eta = testing::random_weights(rng, 4);
  const Subsystem s = subsystem_matrix(d, eta);
  const double decay = -spectral_abscissa(s.spectrum);
  const double horizon = 40.0 / decay;
  CertificateOptions options;
  options.grid_step = horizon / 400.0;
  const StabilityCertificate c =
      fit_certificate(d, {ModeSchedule::constant(eta, horizon)}, TimeMode::kContinuous, options);
  CHECK(c.kappa >= 1.0);
  CHECK(std::abs(c.rate - decay) <= 0.1 * decay);

  const std::vector<EnvelopeSample> samples =
      transition_norm_samples(d, ModeSchedule::constant(eta, horizon), TimeMode::kContinuous, options);
  CHECK(worst_envelope_ratio(c, samples) <= 1.0);
}

TEST_CASE("discrete certificate for a fixed subsystem recovers the spectral radius") {
  testing::Rng rng(29);
  const Topology g = testing::random_connected_graph(rng, 5);
  const SpectralDecomposition d = spectral_decomposition(g);
  const Vector eta = testing::random_weights(rng, 5);
  const Subsystem s = subsystem_matrix(d, eta);
  CertificateOptions options;
  options.delta_c = 0.5 * stable_step(s.spectrum);
  const double radius = spectral_radius(eigenvalues(euler(s.matrix, options.delta_c)));
  const double horizon = options.delta_c * std::ceil(60.0 / (1.0 - radius));
  const StabilityCertificate c =
      fit_certificate(d, {ModeSchedule::constant(eta, horizon)}, TimeMode::kDiscrete, options);
  CHECK(c.kappa >= 1.0);
  CHECK(std::abs(c.rate - radius) <= 0.1 * radius);
  CHECK(c.rate < 1.0);
}

TEST_CASE("discrete certificate fails above the stable step") {
  const SpectralDecomposition d = spectral_decomposition(Topology::ring(4));
  const Vector eta = vec({1, 0, 1, 0});
  CertificateOptions options;
  options.delta_c = 1.2 * max_stable_step(d, {eta});
  const ModeSchedule s = ModeSchedule::constant(eta, 400 * options.delta_c);
  CHECK_THROWS_AS(fit_certificate(d, {s}, TimeMode::kDiscrete, options), NumericalError);
}

TEST_CASE("fit requires the declared dwell") {
  const SpectralDecomposition d = spectral_decomposition(Topology::path(2));
  const ModeSchedule s({{0, vec({1, 0})}, {1, vec({0, 1})}, {1.1, vec({1, 0})}}, 10);
  CertificateOptions options;
  options.dwell = DwellStats{0.0, 1.0};
  CHECK_THROWS_AS(fit_certificate(d, {s}, TimeMode::kContinuous, options), InvalidInput);
}

TEST_CASE("bounds vanish for a perfectly initialized static scenario") {
  const Topology g = Topology::ring(4);
  const SpectralDecomposition d = spectral_decomposition(g);
  const Vector eta = vec({1, 1, 0, 2});
  const Vector r = vec({1, -1, 5, 2});
  std::vector<ReferenceSignal> signals;
  for (Eigen::Index i = 0; i < 4; ++i) signals.push_back(ReferenceSignal::constant(r(i)));
  const ModeSchedule schedule = ModeSchedule::constant(eta, 10.0);
  const CtScenario ct{g, schedule, ReferenceEnsemble(signals)};
  const Vector x0 = Vector::Constant(4, weighted_average(eta, r));
  const Vector v0 = balanced_v(d, weighted_disagreement(eta, r));

  StabilityCertificate cert;
  cert.kappa = 3.0;
  cert.rate = 0.5;
  for (double t : {0.0, 1.0, 5.0, 10.0}) CHECK(ct_bound(cert, ct, x0, v0, t) < 1e-12);

  const DtScenario dt{g, schedule, ReferenceEnsemble(signals), 0.1, 0.1, 50};
  StabilityCertificate dcert;
  dcert.mode = TimeMode::kDiscrete;
  dcert.kappa = 3.0;
  dcert.rate = 0.9;
  for (std::size_t k : {0u, 1u, 20u, 50u}) CHECK(dt_bound(dcert, dt, x0, v0, k) < 1e-12);
}

TEST_CASE("continuous bound is nonincreasing without switches or signal motion") {
  const Topology g = Topology::ring(4);
  const Vector eta = vec({1, 0, 1, 0});
  std::vector<ReferenceSignal> signals;
  for (double v : {1.0, 2.0, 3.0, 4.0}) signals.push_back(ReferenceSignal::constant(v));
  const CtScenario ct{g, ModeSchedule::constant(eta, 10.0), ReferenceEnsemble(signals)};
  StabilityCertificate cert;
  cert.kappa = 2.0;
  cert.rate = 0.3;
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.1 * i);
  const BoundCurve curve = ct_bound_curve(cert, ct, Vector::Zero(4), Vector::Ones(4), times);
  CHECK(curve.total.front() > 0.0);
  for (std::size_t i = 1; i < curve.total.size(); ++i) CHECK(curve.total[i] <= curve.total[i - 1]);
  CHECK(curve.total.back() == doctest::Approx(curve.total.front() * std::exp(-0.3 * 10.0)));
}

TEST_CASE("discrete bound at k = 0 is the transient term") {
  testing::Rng rng(5);
  const DtScenario sc = testing::random_dt_scenario(rng, 4, 100, 10, 20);
  StabilityCertificate cert;
  cert.mode = TimeMode::kDiscrete;
  cert.kappa = 2.0;
  cert.rate = 0.95;
  const Vector x0 = testing::random_vector(rng, 4);
  const Vector v0 = testing::random_vector(rng, 4);
  const double transient = 2.0 * initial_error_norm(laplacian(sc.topology), sc.weights(0),
                                                    sc.references(0), x0, v0);
  CHECK(dt_bound(cert, sc, x0, v0, 0) == doctest::Approx(transient));
  const BoundCurve curve = dt_bound_curve(cert, sc, x0, v0);
  CHECK(curve.input.front() == 0.0);
  CHECK(curve.total.size() == 101);
}

TEST_CASE("jump instants collect switches and signal discontinuities") {
  const ModeSchedule s({{0, vec({1, 0})}, {3, vec({0, 1})}}, 10);
  const ReferenceEnsemble e({ReferenceSignal::zoh({0, 1, 2}, 2.0), ReferenceSignal::constant(1.0)});
  const CtScenario sc{Topology::path(2), s, e};
  CHECK(jump_instants(sc) == std::vector<double>{2.0, 3.0, 4.0});
}

#include <doctest.h>

#include <cmath>

#include "acons/signals.hpp"
#include "support/scenarios.hpp"

using namespace acons;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

ReferenceEnsemble constants(std::initializer_list<double> values) {
  std::vector<ReferenceSignal> s;
  for (double v : values) s.push_back(ReferenceSignal::constant(v));
  return ReferenceEnsemble(std::move(s));
}

}  // namespace

TEST_CASE("signal values and derivatives") {
  const ReferenceSignal c = ReferenceSignal::constant(2.5);
  CHECK(c.value(7.0) == 2.5);
  CHECK(c.derivative(7.0) == 0.0);

  const ReferenceSignal s = ReferenceSignal::sinusoid(1.0, 2.0, 0.5, 0.25);
  CHECK(s.value(3.0) == doctest::Approx(1.0 + 2.0 * std::sin(1.5 + 0.25)));
  CHECK(s.derivative(3.0) == doctest::Approx(1.0 * std::cos(1.5 + 0.25)));

  const ReferenceSignal p = ReferenceSignal::polynomial({1.0, -2.0, 3.0});
  CHECK(p.value(2.0) == doctest::Approx(1.0 - 4.0 + 12.0));
  CHECK(p.derivative(2.0) == doctest::Approx(-2.0 + 12.0));

  const ReferenceSignal z = ReferenceSignal::zoh({1.0, 4.0, 9.0}, 0.5);
  CHECK(z.value(0.49) == 1.0);
  CHECK(z.value(0.5) == 4.0);
  CHECK(z.value(0.5, Side::kLeft) == 1.0);
  CHECK(z.value(10.0) == 9.0);
  CHECK(z.derivative(0.7) == 0.0);
  CHECK(z.discontinuities(0.0, 5.0) == std::vector<double>{0.5, 1.0});
}

TEST_CASE("piecewise signal switches at its breakpoints") {
  const ReferenceSignal p = ReferenceSignal::piecewise(
      {0.0, 5.0}, {ReferenceSignal::sinusoid(0.0, 1.0, 1.0), ReferenceSignal::constant(3.0)});
  CHECK(p.value(1.0) == doctest::Approx(std::sin(1.0)));
  CHECK(p.value(5.0) == 3.0);
  CHECK(p.value(5.0, Side::kLeft) == doctest::Approx(std::sin(5.0)));
  CHECK(p.derivative(6.0) == 0.0);
  CHECK(p.discontinuities(0.0, 10.0) == std::vector<double>{5.0});
  CHECK_THROWS_AS(ReferenceSignal::piecewise({1.0}, {ReferenceSignal::constant(0)}), InvalidInput);
}

TEST_CASE("active weighted average") {
  CHECK(weighted_average(vec({1, 0, 1}), vec({2, 100, 4})) == doctest::Approx(3.0));
  CHECK(weighted_average(vec({2, 1, 0}), vec({3, 0, 9})) == doctest::Approx(2.0));
  CHECK(weighted_average(vec({0, 5}), vec({1, 7})) == doctest::Approx(7.0));
  CHECK_THROWS_AS(weighted_average(vec({0, 0}), vec({1, 1})), InvalidInput);
}

TEST_CASE("disagreement") {
  CHECK((weighted_disagreement(vec({1, 0, 1}), vec({2, 100, 4})) - vec({-1, 0, 1})).norm() < 1e-15);
  CHECK(weighted_disagreement(vec({1, 1}), vec({5, 5})).norm() == 0.0);
  const Vector w = weighted_disagreement(vec({2, 1, 0}), vec({3, 0, 9}));
  CHECK((w - vec({2, -2, 0})).norm() < 1e-15);
  CHECK(std::abs(w.sum()) < 1e-15);
}

TEST_CASE("disagreement sums to zero and average is scale invariant") {
  testing::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector eta = testing::random_weights(rng, 6);
    const Vector r = testing::random_vector(rng, 6, 5.0);
    CHECK(std::abs(weighted_disagreement(eta, r).sum()) < 1e-12);
    CHECK(weighted_average(3.7 * eta, r) == doctest::Approx(weighted_average(eta, r)).epsilon(1e-13));
  }
}

TEST_CASE("smooth derivatives") {
  const ModeSchedule s = ModeSchedule::constant(vec({1, 1}), 10.0);
  const SmoothDerivatives still = smooth_derivatives(constants({1, 2}), s, 3.0);
  CHECK(still.average_rate == 0.0);
  CHECK(still.reference_rate.norm() == 0.0);
  CHECK(still.negated_disagreement_rate.norm() == 0.0);

  const ReferenceEnsemble e({ReferenceSignal::sinusoid(0.0, 1.0, 1.0), ReferenceSignal::constant(0.0)});
  const double t = 0.8;
  const SmoothDerivatives d = smooth_derivatives(e, s, t);
  CHECK(d.average_rate == doctest::Approx(std::cos(t) / 2.0));
  CHECK(-d.negated_disagreement_rate(0) == doctest::Approx(std::cos(t) - std::cos(t) / 2.0));
  CHECK(-d.negated_disagreement_rate(1) == doctest::Approx(-std::cos(t) / 2.0));
  CHECK(std::abs(d.negated_disagreement_rate.sum()) < 1e-15);
}

TEST_CASE("jumps across switch instants") {
  const ModeSchedule same({{0, vec({1, 1})}, {5, vec({1, 1})}}, 10);
  const Jump none = jumps_at(constants({1, 2}), same, 1);
  CHECK(none.average == 0.0);
  CHECK(none.disagreement.norm() == 0.0);

  const Jump swap = jumps_at(constants({2, 4}), ModeSchedule({{0, vec({1, 0})}, {5, vec({0, 1})}}, 10), 1);
  CHECK(swap.average == doctest::Approx(2.0));
  CHECK(swap.disagreement.norm() < 1e-15);

  const Jump drop = jumps_at(constants({0, 6}), ModeSchedule({{0, vec({1, 1})}, {5, vec({1, 0})}}, 10), 1);
  CHECK(drop.average == doctest::Approx(-3.0));
  CHECK((drop.disagreement - vec({3, -3})).norm() < 1e-14);
}

TEST_CASE("signal jumps show up at their own discontinuities") {
  const ReferenceEnsemble e({ReferenceSignal::zoh({0.0, 2.0}, 1.0), ReferenceSignal::constant(0.0)});
  const ModeSchedule s = ModeSchedule::constant(vec({1, 1}), 5.0);
  const Jump j = jump_at_time(e, s, 1.0);
  CHECK(j.average == doctest::Approx(1.0));
  CHECK((j.disagreement - vec({1, -1})).norm() < 1e-15);
  CHECK(e.discontinuities(0.0, 5.0) == std::vector<double>{1.0});
}

TEST_CASE("zero-order hold sampling") {
  const ReferenceSignal s = ReferenceSignal::polynomial({0.0, 1.0});
  CHECK(zoh_sample(s, 1.0, 1.7) == doctest::Approx(1.0));
  CHECK(zoh_sample(s, 1.0, 2.0) == doctest::Approx(2.0));
  CHECK(zoh_sample(s, 0.1, 0.3) == doctest::Approx(0.3));
  CHECK(sample_index(0.1, 0.3) == 3);
  const ReferenceSignal c = ReferenceSignal::constant(4.0);
  for (double t : {0.0, 0.3, 1.25, 7.9}) CHECK(zoh_sample(c, 0.5, t) == 4.0);
}

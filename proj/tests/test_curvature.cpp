#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "adamo/curvature.hpp"

using adamo::CurvatureState;
using adamo::Vector;

TEST_CASE("curvature_update: identical gradients give zero kappa") {
  CurvatureState st = CurvatureState::init(2, 1.0);
  Vector g(2);
  g << 1.0, 0.0;
  adamo::curvature_update(st, g, 0.9);
  const double tau_before = st.tau;
  const double kappa = adamo::curvature_update(st, g, 0.9);
  CHECK(kappa == 0.0);
  CHECK(st.tau == doctest::Approx(0.9 * tau_before).epsilon(1e-15));
}

TEST_CASE("curvature_update: first step uses g_prev = 0") {
  CurvatureState st = CurvatureState::init(2, 1.0);
  Vector g(2);
  g << 3.0, 4.0;
  const double kappa = adamo::curvature_update(st, g, 0.9);
  CHECK(kappa == 25.0);
  CHECK(st.tau == doctest::Approx(3.4).epsilon(1e-15));
  CHECK(st.g_prev == g);
}

TEST_CASE("curvature_update: EMA converges to a constant kappa") {
  CurvatureState st = CurvatureState::init(2, 1.0);
  Vector zero = Vector::Zero(2);
  // alternate g=0 with g_prev=0 so kappa stays at a fixed constant
  Vector g(2);
  g << 2.0, 0.0;
  const double c = 4.0;  // ||g - 0||^2 alternating with ||0 - g||^2
  double prev_gap = std::abs(st.tau - c);
  for (int i = 0; i < 200; ++i) {
    adamo::curvature_update(st, (i % 2 == 0) ? g : zero, 0.9);
    const double gap = std::abs(st.tau - c);
    CHECK(gap <= 0.9 * prev_gap + 1e-15);
    prev_gap = gap;
  }
  CHECK(st.tau == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("curvature_update: non-finite gradient throws") {
  CurvatureState st = CurvatureState::init(1, 1.0);
  Vector g(1);
  g << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adamo::curvature_update(st, g, 0.9), adamo::NumericError);
}

TEST_CASE("radial_lr: worked examples") {
  // tau at the target scale reproduces eta_rho up to eps
  const double at_target = adamo::radial_lr(1.0, 0.5, 1.0, 1e-8);
  CHECK(std::abs(at_target - 0.5) / 0.5 < 1e-8);

  // tau four times the target halves the step
  CHECK(adamo::radial_lr(4.0, 0.5, 1.0, 0.0, 1e9) ==
        doctest::Approx(0.25).epsilon(1e-15));

  // tau -> 0 with eps=1e-8 would amplify 1e4x; the cap binds at 10x
  bool capped = false;
  const double capped_lr = adamo::radial_lr(0.0, 0.5, 1.0, 1e-8, 10.0, &capped);
  CHECK(capped_lr == 5.0);
  CHECK(capped);
  // with the cap effectively off, the raw formula gives eta/sqrt(eps)
  const double raw = adamo::radial_lr(0.0, 0.5, 1.0, 1e-8, 1e9);
  CHECK(raw == doctest::Approx(0.5 * 1e4).epsilon(1e-12));
}

TEST_CASE("radial_lr: strictly decreasing in tau (uncapped)") {
  double prev = std::numeric_limits<double>::infinity();
  for (double tau = 0.0; tau <= 16.0; tau += 0.25) {
    const double lr = adamo::radial_lr(tau, 0.3, 2.0, 1e-8, 1e12);
    CHECK(lr < prev);
    CHECK(lr <= 0.3 / std::sqrt(1e-8) * (1 + 1e-12));
    prev = lr;
  }
  // capped variant is monotone non-increasing and bounded by cap*eta
  prev = std::numeric_limits<double>::infinity();
  for (double tau = 0.0; tau <= 16.0; tau += 0.25) {
    const double lr = adamo::radial_lr(tau, 0.3, 2.0, 1e-8, 10.0);
    CHECK(lr <= prev);
    CHECK(lr <= 10.0 * 0.3);
    prev = lr;
  }
}

TEST_CASE("radial_lr: domain errors") {
  CHECK_THROWS_AS(adamo::radial_lr(1.0, 0.5, 0.0, 1e-8), adamo::ConfigError);
  CHECK_THROWS_AS(adamo::radial_lr(1.0, 0.5, -2.0, 1e-8), adamo::ConfigError);
  CHECK_THROWS_AS(adamo::radial_lr(-1.0, 0.5, 1.0, 1e-8), adamo::NumericError);
}

TEST_CASE("CurvatureState: initialization") {
  const CurvatureState st = CurvatureState::init(3, 2.5);
  CHECK(st.tau == 2.5);
  CHECK(st.g_prev == Vector::Zero(3));
}

#include <cmath>

#include "doctest.h"
#include "onoff/detector.hpp"
#include "onoff/states.hpp"

using namespace onoff;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// |<n|D(g)|m>|^2
double displacement_overlap(int n, int m, double g2) {
  const int lo = std::min(n, m), k = std::abs(n - m);
  const double l = assoc_laguerre(lo, k, g2);
  return std::exp(-g2) * std::pow(g2, k) * factorial(lo) / factorial(lo + k) * l * l;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DetectorParams(0.0), DomainError);
  CHECK_THROWS_AS(DetectorParams(1.2), DomainError);
  CHECK_THROWS_AS(DetectorParams(0.5, -0.1), DomainError);
  CHECK_THROWS_AS(DetectorParams(1.0, 0.1, Background::Poissonian), DomainError);
  CHECK_NOTHROW(DetectorParams(1.0, 0.0, Background::Poissonian));
  CHECK(DetectorParams(0.5, 0.1).with_eta(0.8).dark_mean() == 0.1);
}

TEST_CASE("Laguerre polynomials") {
  for (double x : {0.0, 0.3, 1.7, -2.5}) {
    CHECK(laguerre(2, x) == doctest::Approx(1 - 2 * x + x * x / 2));
    CHECK(assoc_laguerre(2, 1, x) == doctest::Approx((x * x - 6 * x + 6) / 2));
    CHECK(assoc_laguerre(1, 3, x) == doctest::Approx(4 - x));
  }
}

TEST_CASE("thermal weights") {
  const auto w = povm_fock_weights(DetectorParams(0.6, 0.1), 10);
  REQUIRE(w.size() == 11);
  CHECK(w.no_click[0] == doctest::Approx(1 / 1.1));
  for (int n = 0; n <= 10; ++n)
    CHECK(w.no_click[n] == doctest::Approx(std::pow(1 - 0.6 / 1.1, n) / 1.1));
  CHECK(w.click(3) == doctest::Approx(1 - w.no_click[3]));
  const auto ideal = povm_fock_weights(DetectorParams(0.6), 5);
  for (int n = 0; n <= 5; ++n) CHECK(ideal.no_click[n] == doctest::Approx(std::pow(0.4, n)));
}

TEST_CASE("Poissonian weights equal a phase-averaged displaced ideal detector") {
  const double eta = 0.7, d = 0.05, g2 = d / eta;
  const auto w = povm_fock_weights(DetectorParams(eta, d, Background::Poissonian), 8);
  for (int n = 0; n <= 8; ++n) {
    double want = 0.0;
    for (int m = 0; m < 80; ++m) want += std::pow(1 - eta, m) * displacement_overlap(n, m, g2);
    CHECK(w.no_click[n] == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(w.no_click[0] == doctest::Approx(std::exp(-d)));
}

TEST_CASE("Wigner kernel reproduces Fock weights") {
  for (double d : {0.0, 0.03, 0.4}) {
    const DetectorParams det(0.65, d);
    const auto w = povm_fock_weights(det, 4);
    const auto kernel = povm_wigner_kernel(det);
    for (int n = 0; n <= 4; ++n) {
      const PolyGaussian fock{GaussianKernel::one_mode(2.0 / kPi, 2.0), fock_wigner_polynomial(n, n)};
      CHECK(gaussian_pair_trace(fock, kernel) == doctest::Approx(w.no_click[n]));
    }
  }
  const auto k = povm_wigner_kernel(DetectorParams(0.5));
  CHECK(k.coeff_f == doctest::Approx(delta_eta(0.5)));
  CHECK(k.prefactor == doctest::Approx(delta_eta(0.5) / (kPi * 0.5)));
  CHECK_THROWS_AS((void)povm_wigner_kernel(DetectorParams(0.5, 0.1, Background::Poissonian)),
                  UnsupportedError);
}

TEST_CASE("dark-count scaling map") {
  const auto s = dark_scaling_map(DetectorParams(0.8, 0.25));
  CHECK(s.eta_eff == doctest::Approx(0.64));
  CHECK(s.i_scale == doctest::Approx(0.64));
  CHECK(s.gy_scale == doctest::Approx(0.8));
  CHECK_THROWS_AS((void)dark_scaling_map(DetectorParams(0.8, 0.25, Background::Poissonian)),
                  UnsupportedError);
  // Thermal weights factor as gy_scale * ideal weights at eta_eff.
  const auto w = povm_fock_weights(DetectorParams(0.8, 0.25), 6);
  const auto w0 = povm_fock_weights(DetectorParams(s.eta_eff), 6);
  for (int n = 0; n <= 6; ++n) CHECK(w.no_click[n] == doctest::Approx(s.gy_scale * w0.no_click[n]));
}

TEST_CASE("squared no-click element") {
  for (double eta : {0.1, 0.5, 0.93, 1.0}) {
    const auto w = povm_fock_weights(DetectorParams(eta), 6);
    const auto w2 = povm_fock_weights(DetectorParams(squared_no_click_efficiency(eta)), 6);
    for (int n = 0; n <= 6; ++n)
      CHECK(w.no_click[n] * w.no_click[n] == doctest::Approx(w2.no_click[n]));
  }
  CHECK_THROWS_AS((void)squared_no_click_efficiency(0.0), DomainError);
}

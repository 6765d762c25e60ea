#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "doctest.h"
#include "onoff/oracle.hpp"

using namespace onoff;

namespace {

std::vector<StateSpec> analytic_states() {
  return {BellPsi{Sign::Plus}, BellPsi{Sign::Minus}, BellPhi{Sign::Plus}, BellPhi{Sign::Minus},
          UnbalancedPsi{0.5},  UnbalancedPhi{1.0},   TwoPhoton{},         Twb{0.74}};
}

}  // namespace

TEST_CASE("displacement matrix") {
  const auto id = displacement_matrix({}, 10);
  CHECK((id - Eigen::MatrixXcd::Identity(11, 11)).cwiseAbs().maxCoeff() < 1e-15);
  const Complex a(0.4, -0.3);
  const auto d = displacement_matrix(a, 30);
  CHECK(std::abs(d(0, 0) - std::exp(-0.5 * std::norm(a))) < 1e-14);
  CHECK(std::abs(d(1, 0) - a * std::exp(-0.5 * std::norm(a))) < 1e-14);
  // Against the matrix exponential of a big truncated generator.
  const int big = 70;
  Eigen::MatrixXcd ann = Eigen::MatrixXcd::Zero(big, big);
  for (int n = 1; n < big; ++n) ann(n - 1, n) = std::sqrt(double(n));
  const Eigen::MatrixXcd gen = a * ann.adjoint() - std::conj(a) * ann;
  const Eigen::MatrixXcd ref = gen.exp();
  CHECK((d.topLeftCorner(20, 20) - ref.topLeftCorner(20, 20)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS((void)displacement_matrix({3.0, 0.0}, 10), CutoffError);
}

TEST_CASE("oracle special values") {
  const auto p = oracle_primitives(BellPsi{}, DetectorParams(1.0), {}, {});
  CHECK(p.joint == doctest::Approx(0.0));
  CHECK(p.first == doctest::Approx(0.5));
  CHECK(p.second == doctest::Approx(0.5));
  const auto t = oracle_primitives(Twb{0.5}, DetectorParams(1.0), {}, {});
  CHECK(t.joint == doctest::Approx(1.0 / (std::cosh(0.5) * std::cosh(0.5))).epsilon(1e-12));
  CHECK(t.joint == doctest::Approx(0.78645).epsilon(1e-5));
}

TEST_CASE("closed forms agree with the oracle on random points") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (const auto& s : analytic_states())
    for (double eta : {0.6, 0.85, 1.0})
      for (int i = 0; i < 20; ++i) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        const auto c = corr_primitives(s, eta, a, b);
        const auto o = oracle_primitives(s, DetectorParams(eta), a, b);
        CHECK(std::abs(c.joint - o.joint) < 1e-9);
        CHECK(std::abs(c.first - o.first) < 1e-9);
        CHECK(std::abs(c.second - o.second) < 1e-9);
      }
}

TEST_CASE("IPS closed form agrees with the oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_real_distribution<double> r(0.1, 0.6), t(0.8, 0.99), e(0.3, 1.0), et(0.5, 1.0);
  for (int i = 0; i < 10; ++i) {
    const IpsParams p{r(rng), t(rng), e(rng)};
    const double eta = et(rng);
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    const auto c = ips_corr_primitives(p, eta, a, b).total;
    const auto o = oracle_primitives(p, DetectorParams(eta), a, b);
    CHECK(std::abs(c.joint - o.joint) < 1e-5);
    CHECK(std::abs(c.first - o.first) < 1e-5);
    CHECK(std::abs(c.second - o.second) < 1e-5);
  }
}

TEST_CASE("thermal scaling law against direct weights") {
  const Complex a(0.2, 0.1), b(-0.3, 0.05);
  for (const auto& s : analytic_states()) {
    const DetectorParams det(0.8, 0.1);
    const auto direct = oracle_primitives(s, det, a, b);
    const auto scaled = primitives(s, det, a, b);
    CHECK(std::abs(direct.joint - scaled.joint) < 1e-9);
    CHECK(std::abs(direct.first - scaled.first) < 1e-9);
    CHECK(std::abs(direct.second - scaled.second) < 1e-9);
  }
}

TEST_CASE("Poissonian dark counts through the oracle") {
  const Complex a(0.2, 0.0), b(-0.2, 0.0);
  const auto th = oracle_primitives(BellPhi{}, DetectorParams(0.8, 1e-3), a, b);
  const auto po = oracle_primitives(BellPhi{}, DetectorParams(0.8, 1e-3, Background::Poissonian), a, b);
  CHECK(std::abs(th.joint - po.joint) < 1e-5);
  CHECK(th.joint != po.joint);
}

TEST_CASE("IPS oracle state") {
  const auto res = ips_oracle_state({0.3, 0.9, 1.0});
  CHECK(res.p11 == doctest::Approx(ips_click_probability({0.3, 0.9, 1.0})).epsilon(1e-6));
  CHECK(res.density.trace() == doctest::Approx(1.0));
  CHECK_NOTHROW(res.density.validate(0.0));
  double prev = 0.0;
  for (double eps : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double p11 = ips_oracle_state({0.3, 0.9, eps}).p11;
    CHECK(p11 > prev);
    prev = p11;
  }
  CHECK(ips_oracle_state({0.01, 0.9, 1.0}).p11 < 2e-6);
  CHECK_THROWS_AS((void)ips_oracle_state({1e-6, 0.9, 1.0}), DegenerateError);
  double last = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.6, 0.7}) {
    const double p11 = ips_oracle_state({r, 0.9, 1.0}).p11;
    CHECK(p11 == doctest::Approx(ips_click_probability({r, 0.9, 1.0})).epsilon(1e-6));
    CHECK(p11 > last);
    last = p11;
  }
}

TEST_CASE("truncation") {
  const auto t = FockTruncation::for_state(Twb{0.74});
  CHECK(t.n_max >= 32);
  CHECK(t.tail_bound <= kMaxTailBound);
  CHECK(FockTruncation::for_state(Twb{1.5}).n_max > 100);
  CHECK(FockTruncation::for_state(IpsParams{0.3, 0.9, 1.0}).n_max == 20);
  CHECK_THROWS_AS((void)oracle_state(Twb{0.74}, {10, 0.0}), CutoffError);

  const auto e = oracle_state(Twb{0.74}, t);
  const TwoModeDensity rho = e.density();
  CHECK_NOTHROW(rho.validate(t.tail_bound));

  const Complex a(0.16, 0.0), b(-0.16, 0.0);
  const auto p1 = oracle_primitives(Twb{0.74}, DetectorParams(0.9), a, b, t);
  const auto p2 = oracle_primitives(Twb{0.74}, DetectorParams(0.9), a, b, FockTruncation{2 * t.n_max, 0.0});
  CHECK(std::abs(p1.joint - p2.joint) < 1e-10);
  CHECK(std::abs(p1.first - p2.first) < 1e-10);
}

TEST_CASE("observable spectrum") {
  for (double eta : {0.3, 0.9, 1.0}) {
    const DetectorParams det(eta);
    const auto spec = observable_spectrum(det, 20);
    const Eigen::MatrixXcd o = Eigen::MatrixXcd::Identity(21, 21) - 2.0 * displaced_no_click(det, {}, 20);
    for (int n = 0; n <= 20; ++n) {
      CHECK(spec[n] >= -1.0);
      CHECK(spec[n] <= 1.0);
      CHECK(spec[n] == doctest::Approx(1.0 - 2.0 * std::pow(1.0 - eta, n)));
      CHECK(o(n, n).real() == doctest::Approx(spec[n]));
    }
  }
  const auto ideal = observable_spectrum(DetectorParams(1.0), 5);
  CHECK(ideal[0] == -1.0);
  for (int n = 1; n <= 5; ++n) CHECK(ideal[n] == 1.0);
}

TEST_CASE("squared Bell operator") {
  const FockTruncation t{8, 0.0};
  for (double eta : {1.0, 0.9}) {
    for (const StateSpec& s : {StateSpec{BellPhi{}}, StateSpec{BellPsi{Sign::Minus}}}) {
      const auto q = to_quad(natural_scheme(s, 0.17));
      const auto r = operator_bound_check(s, DetectorParams(eta), q, t);
      CHECK(r.expansion_residual < 1e-12);
      CHECK(r.norm_sq <= 8.0 + 1e-9);
      if (eta < 1.0) CHECK(r.norm_sq < 8.0);
      CHECK(r.expectation == doctest::Approx(bell_parameter(s, DetectorParams(eta), q)).epsilon(1e-9));
      CHECK(r.expectation * r.expectation <= r.norm_sq + 1e-12);
    }
  }
}

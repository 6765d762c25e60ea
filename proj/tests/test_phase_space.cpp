#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "onoff/phase_space.hpp"

using namespace onoff;

namespace {

// Probabilists' Gauss-Hermite rule via the Jacobi matrix.
void hermite_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    weights[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

// Exact expectation of a polynomial of degree <= 11 under the normalized
// weight exp{-F|z-mu|^2 - G|w-nu|^2 + 2H Re[(z-mu)(w-nu)]}.
Complex quadrature_moment(double f, double g, double h, Complex mu, Complex nu, const Monomial& m) {
  // x = (Re z, Re w) has precision 2[[F,-H],[-H,G]]; y = (Im z, Im w) has 2[[F,H],[H,G]].
  Eigen::Matrix2d px, py;
  px << 2 * f, -2 * h, -2 * h, 2 * g;
  py << 2 * f, 2 * h, 2 * h, 2 * g;
  const Eigen::Matrix2d lx = Eigen::LLT<Eigen::Matrix2d>(px.inverse()).matrixL();
  const Eigen::Matrix2d ly = Eigen::LLT<Eigen::Matrix2d>(py.inverse()).matrixL();
  std::vector<double> nd, wt;
  hermite_rule(7, nd, wt);
  Complex sum{};
  for (std::size_t a = 0; a < nd.size(); ++a)
    for (std::size_t b = 0; b < nd.size(); ++b)
      for (std::size_t c = 0; c < nd.size(); ++c)
        for (std::size_t d = 0; d < nd.size(); ++d) {
          const Eigen::Vector2d x = lx * Eigen::Vector2d(nd[a], nd[b]);
          const Eigen::Vector2d y = ly * Eigen::Vector2d(nd[c], nd[d]);
          const Complex z = mu + Complex(x(0), y(0));
          const Complex w = nu + Complex(x(1), y(1));
          sum += wt[a] * wt[b] * wt[c] * wt[d] * std::pow(z, m[0]) * std::pow(std::conj(z), m[1]) *
                 std::pow(w, m[2]) * std::pow(std::conj(w), m[3]);
        }
  return sum;
}

}  // namespace

TEST_CASE("low-order two-mode moments") {
  const double f = 2.0, g = 1.5, h = 0.7, d = f * g - h * h;
  const auto k = GaussianKernel::two_mode(1.0, f, g, h);
  CHECK(poly_gaussian_moments(k, {1, 1, 0, 0}).real() == doctest::Approx(g / d));
  CHECK(poly_gaussian_moments(k, {0, 0, 1, 1}).real() == doctest::Approx(f / d));
  CHECK(poly_gaussian_moments(k, {1, 0, 1, 0}).real() == doctest::Approx(h / d));
  CHECK(poly_gaussian_moments(k, {2, 2, 0, 0}).real() == doctest::Approx(2 * g * g / (d * d)));
  CHECK(poly_gaussian_moments(k, {1, 1, 1, 1}).real() ==
        doctest::Approx((g * f + h * h) / (d * d)));
  CHECK(poly_gaussian_moments(k, {2, 0, 2, 0}).real() == doctest::Approx(2 * h * h / (d * d)));
  CHECK(std::abs(poly_gaussian_moments(k, {1, 0, 0, 1})) == doctest::Approx(0.0));
  CHECK(std::abs(poly_gaussian_moments(k, {2, 0, 0, 0})) == doctest::Approx(0.0));
}

TEST_CASE("moments agree with Gauss-Hermite quadrature") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(0, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const double f = 1.0 + std::abs(u(rng)) * 2.0;
    const double g = 1.0 + std::abs(u(rng)) * 2.0;
    const double h = 0.9 * u(rng) * std::sqrt(f * g);
    const Complex mu(0.5 * u(rng), 0.5 * u(rng));
    const Complex nu(0.5 * u(rng), 0.5 * u(rng));
    const Monomial m{e(rng), e(rng), e(rng), e(rng)};
    const auto k = GaussianKernel::two_mode(1.0, f, g, h, mu, nu);
    const Complex got = poly_gaussian_moments(k, m);
    const Complex want = quadrature_moment(f, g, h, mu, nu, m);
    CHECK(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("one-mode shifted moments") {
  const Complex mu(0.3, -0.4);
  const auto k = GaussianKernel::one_mode(1.0, 2.0, mu);
  CHECK(std::abs(poly_gaussian_moments(k, {1, 0, 0, 0}) - mu) < 1e-14);
  CHECK(poly_gaussian_moments(k, {1, 1, 0, 0}).real() == doctest::Approx(0.5 + std::norm(mu)));
  CHECK_THROWS_AS((void)poly_gaussian_moments(k, {0, 0, 1, 0}), DomainError);
}

TEST_CASE("moment degree limit and invalid forms") {
  const auto k = GaussianKernel::two_mode(1.0, 2.0, 2.0, 0.5);
  CHECK_NOTHROW((void)poly_gaussian_moments(k, {2, 2, 2, 2}));
  CHECK_THROWS_AS((void)poly_gaussian_moments(k, {3, 2, 2, 2}), DomainError);
  CHECK_THROWS_AS((void)poly_gaussian_moments(GaussianKernel::two_mode(1.0, 1.0, 1.0, 1.0),
                                              {1, 1, 0, 0}),
                  DomainError);
  CHECK_THROWS_AS(GaussianKernel::two_mode(1.0, 1.0, 1.0, 1.5).validate(), DomainError);
  CHECK_THROWS_AS(GaussianKernel::one_mode(1.0, -1.0).validate(), DomainError);
}

TEST_CASE("trace rule on vacuum and coherent states") {
  const PolyGaussian vac{GaussianKernel::one_mode(2.0 / kPi, 2.0), Polynomial{Complex{1.0}}};
  CHECK(gaussian_pair_trace(vac, GaussianKernel::identity()) == doctest::Approx(1.0));
  CHECK(gaussian_pair_trace(vac, vac.base) == doctest::Approx(1.0));
  // |<0|gamma>|^2 = exp(-|gamma|^2)
  const Complex gamma(0.6, 0.2);
  CHECK(gaussian_pair_trace(vac, vac.base.displaced(gamma)) ==
        doctest::Approx(std::exp(-std::norm(gamma))));
}

TEST_CASE("two-mode trace against a one-mode kernel integrates out the second mode") {
  const PolyGaussian vac2{GaussianKernel::two_mode(4.0 / (kPi * kPi), 2.0, 2.0, 0.0),
                          Polynomial{Complex{1.0}}};
  CHECK(gaussian_pair_trace(vac2, GaussianKernel::identity()) == doctest::Approx(1.0));
  const Complex gamma(0.4, -0.3);
  const auto proj = GaussianKernel::one_mode(2.0 / kPi, 2.0, gamma);
  CHECK(gaussian_pair_trace(vac2, proj) == doctest::Approx(std::exp(-std::norm(gamma))));
  const GaussianKernel proj_w{2.0 / kPi, 0.0, 2.0, 0.0, {}, gamma};
  CHECK(gaussian_pair_trace(vac2, proj_w) == doctest::Approx(std::exp(-std::norm(gamma))));
}

TEST_CASE("displacement shifts only non-flat modes") {
  const auto k = GaussianKernel::one_mode(1.0, 1.0).displaced({1.0, 0.0}, {2.0, 0.0});
  CHECK(k.center_z == Complex(1.0, 0.0));
  CHECK(k.center_w == Complex(0.0, 0.0));
}

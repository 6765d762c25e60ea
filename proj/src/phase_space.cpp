#include "onoff/phase_space.hpp"

#include <cmath>
#include <sstream>

namespace onoff {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

double falling(int n, int k) { return binomial(n, k) * factorial(k); }

std::string describe(double f, double g, double h) {
  std::ostringstream os;
  os << "F=" << f << ", G=" << g << ", H=" << h << ", FG-H^2=" << f * g - h * h;
  return os.str();
}

// Centered moment of z^a z*^b w^c w*^d under exp{-F|z|^2 - G|w|^2 + H(zw + c.c.)}
// normalized. Pair covariances: <z z*> = G/d, <w w*> = F/d, <z w> = <z* w*> = H/d,
// d = FG - H^2; all other pairs vanish. Sum over Wick pairings, counted in
// closed form by the number k of (z, w) pairs.
double centered_two_mode(int a, int b, int c, int d, double f, double g, double h) {
  if (a + d != b + c) return 0.0;
  const double det = f * g - h * h;
  const double szz = g / det, sww = f / det, szw = h / det;
  double sum = 0.0;
  for (int k = std::max(0, a - b); k <= std::min(a, c); ++k) {
    const int m = b - a + k;  // (z*, w*) pairs
    if (m < 0 || m > d) continue;
    const double count = binomial(a, k) * falling(c, k) * falling(b, a - k) * falling(d, m) *
                         factorial(c - k);
    sum += count * std::pow(szw, k + m) * std::pow(szz, a - k) * std::pow(sww, c - k);
  }
  return sum;
}

// Moment of the shifted variables (z' + mu)^a (z'* + mu*)^b (w' + nu)^c (w'* + nu*)^d.
Complex shifted_moment(const Monomial& m, double f, double g, double h, Complex mu, Complex nu,
                       bool one_mode) {
  Complex total{};
  for (int i = 0; i <= m[0]; ++i)
    for (int j = 0; j <= m[1]; ++j)
      for (int k = 0; k <= m[2]; ++k)
        for (int l = 0; l <= m[3]; ++l) {
          double central;
          if (one_mode) {
            central = (i == j) ? factorial(i) / std::pow(f, i) : 0.0;
          } else {
            central = centered_two_mode(i, j, k, l, f, g, h);
          }
          if (central == 0.0) continue;
          const Complex shift = std::pow(mu, m[0] - i) * std::pow(std::conj(mu), m[1] - j) *
                                std::pow(nu, m[2] - k) * std::pow(std::conj(nu), m[3] - l);
          total += binomial(m[0], i) * binomial(m[1], j) * binomial(m[2], k) *
                   binomial(m[3], l) * central * shift;
        }
  return total;
}

double flat_factor(const GaussianKernel& k) {
  double s = 1.0;
  if (k.flat_first()) s /= kPi;
  if (k.flat_second()) s /= kPi;
  return s;
}

}  // namespace

void GaussianKernel::validate() const {
  if (!(coeff_f >= 0.0) || !(coeff_g >= 0.0) || !std::isfinite(coeff_h)) {
    throw DomainError("Gaussian kernel: negative quadratic coefficient (" +
                      describe(coeff_f, coeff_g, coeff_h) + ")");
  }
  if (coeff_h != 0.0 && !(coeff_f * coeff_g - coeff_h * coeff_h > 0.0)) {
    throw DomainError("Gaussian kernel: coupled form not positive definite (" +
                      describe(coeff_f, coeff_g, coeff_h) + ")");
  }
}

double GaussianKernel::exponent(Complex z, Complex w) const {
  const Complex dz = z - center_z;
  const Complex dw = w - center_w;
  return -coeff_f * std::norm(dz) - coeff_g * std::norm(dw) + 2.0 * coeff_h * (dz * dw).real();
}

double GaussianKernel::operator()(Complex z, Complex w) const {
  return prefactor * flat_factor(*this) * std::exp(exponent(z, w));
}

GaussianKernel GaussianKernel::displaced(Complex dz, Complex dw) const {
  GaussianKernel k = *this;
  if (!flat_first()) k.center_z += dz;
  if (!flat_second()) k.center_w += dw;
  return k;
}

Complex poly_gaussian_moments(const GaussianKernel& base, const Monomial& monomial) {
  for (int e : monomial)
    if (e < 0) throw DomainError("poly_gaussian_moments: negative exponent");
  const int degree = monomial[0] + monomial[1] + monomial[2] + monomial[3];
  if (degree > kMaxMomentDegree) {
    throw DomainError("poly_gaussian_moments: degree " + std::to_string(degree) +
                      " exceeds supported maximum " + std::to_string(kMaxMomentDegree));
  }
  const bool one_mode = base.flat_second();
  if (one_mode) {
    if (monomial[2] != 0 || monomial[3] != 0)
      throw DomainError("poly_gaussian_moments: w-moment of a one-mode kernel");
    if (!(base.coeff_f > 0.0))
      throw DomainError("poly_gaussian_moments: non-normalizable weight (" +
                        describe(base.coeff_f, base.coeff_g, base.coeff_h) + ")");
  } else if (!(base.coeff_f > 0.0 && base.coeff_g > 0.0 &&
               base.coeff_f * base.coeff_g - base.coeff_h * base.coeff_h > 0.0)) {
    throw DomainError("poly_gaussian_moments: non-normalizable weight (" +
                      describe(base.coeff_f, base.coeff_g, base.coeff_h) + ")");
  }
  return shifted_moment(monomial, base.coeff_f, base.coeff_g, base.coeff_h, base.center_z,
                        base.center_w, one_mode);
}

double gaussian_pair_trace(const PolyGaussian& k1, const GaussianKernel& k2) {
  const GaussianKernel& a = k1.base;
  const GaussianKernel& b = k2;
  a.validate();
  b.validate();

  const double f = a.coeff_f + b.coeff_f;
  const double g = a.coeff_g + b.coeff_g;
  const double h = a.coeff_h + b.coeff_h;
  const bool single_mode = a.flat_second() && b.flat_second();

  // Stationary point of the summed exponent, in the variables (z, conj(w)).
  const Complex p = a.coeff_f * a.center_z + b.coeff_f * b.center_z -
                    (a.coeff_h * std::conj(a.center_w) + b.coeff_h * std::conj(b.center_w));
  const Complex q = a.coeff_g * std::conj(a.center_w) + b.coeff_g * std::conj(b.center_w) -
                    (a.coeff_h * a.center_z + b.coeff_h * b.center_z);

  GaussianKernel joint;
  joint.coeff_f = f;
  joint.coeff_g = single_mode ? 0.0 : g;
  joint.coeff_h = single_mode ? 0.0 : h;

  double measure;
  if (single_mode) {
    if (!(f > 0.0)) {
      throw DomainError("gaussian_pair_trace: integral diverges (" + describe(f, g, h) + ")");
    }
    if (!k1.poly.first_mode_only())
      throw DomainError("gaussian_pair_trace: one-mode kernel with w-dependent polynomial");
    joint.center_z = p / f;
    // pi * integral d^2z, flat second-mode factors dropped.
    const double pref = a.prefactor * (a.flat_first() ? 1.0 / kPi : 1.0) * b.prefactor *
                        (b.flat_first() ? 1.0 / kPi : 1.0);
    measure = kPi * pref * (kPi / f);
  } else {
    const double det = f * g - h * h;
    if (!(f > 0.0 && g > 0.0 && det > 0.0)) {
      throw DomainError("gaussian_pair_trace: integral diverges (" + describe(f, g, h) + ")");
    }
    joint.center_z = (g * p + h * q) / det;
    joint.center_w = std::conj((h * p + f * q) / det);
    const double pref = a.prefactor * flat_factor(a) * b.prefactor * flat_factor(b);
    measure = kPi * kPi * pref * (kPi * kPi / det);
  }

  const double peak = std::exp(a.exponent(joint.center_z, joint.center_w) +
                               b.exponent(joint.center_z, joint.center_w));

  Complex poly_mean{};
  for (const auto& [m, c] : k1.poly.terms()) poly_mean += c * poly_gaussian_moments(joint, m);
  return measure * peak * poly_mean.real();
}

}  // namespace onoff

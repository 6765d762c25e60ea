#include "onoff/ips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace onoff {
namespace {

using Real = long double;

constexpr Real kMinClickProbability = 1e-15L;
// Relative precision of the conditioned quantities below which the state is
// treated as degenerate.
constexpr Real kMaxRelativeError = 1e-6L;

struct Terms {
  std::array<Real, 4> cc;  // 4 C_k / den_k
  std::array<Real, 4> f, g, h;
  Real p11;
  Real condition;  // sum of |term| over p11: amplification of rounding
};

Terms ips_terms(const IpsParams& p) {
  p.validate();
  const Real big_a = std::cosh(2.0L * p.r);
  const Real big_b = std::sinh(2.0L * p.r);
  const Real t = p.transmissivity;
  const Real eps = p.ips_eff;
  const Real a = 2.0L * (big_a * (1.0L - t) + t);
  const Real b = 2.0L * (big_a * t + (1.0L - t));
  const Real e2 = 2.0L * eps / (2.0L - eps);
  const std::array<Real, 4> x{a, a + e2, a, a + e2};
  const std::array<Real, 4> y{a, a, a + e2, a + e2};
  const Real c2 = -2.0L / (2.0L - eps);
  const std::array<Real, 4> c{1.0L, c2, c2, c2 * c2};
  const Real one_a = 1.0L - big_a;
  const Real b2 = big_b * big_b;

  Terms out{};
  Real sum = 0.0L, abs_sum = 0.0L;
  for (int k = 0; k < 4; ++k) {
    const Real den = x[k] * y[k] - 4.0L * b2 * (1.0L - t) * (1.0L - t);
    const Real nk = 4.0L * t * (1.0L - t) / den;
    const Real fk = nk * (x[k] * b2 + 4.0L * b2 * one_a * (1.0L - t) + y[k] * one_a * one_a);
    const Real gk = nk * (x[k] * one_a * one_a + 4.0L * b2 * one_a * (1.0L - t) + y[k] * b2);
    const Real hk = nk * ((x[k] + y[k]) * big_b * one_a +
                          2.0L * big_b * (b2 + one_a * one_a) * (1.0L - t));
    out.f[k] = b - fk;
    out.g[k] = b - gk;
    out.h[k] = 2.0L * big_b * t + hk;
    out.cc[k] = 4.0L * c[k] / den;
    const Real det = out.f[k] * out.g[k] - out.h[k] * out.h[k];
    if (!(det > 0.0L))
      throw std::logic_error("IPS term " + std::to_string(k + 1) +
                             " has non-positive F G - H^2; coefficient set is inconsistent");
    sum += out.cc[k] / det;
    abs_sum += std::abs(out.cc[k] / det);
  }
  out.p11 = 4.0L * sum;
  out.condition = 4.0L * abs_sum / std::abs(out.p11);
  return out;
}

}  // namespace

void IpsParams::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("IPS squeezing must be >= 0");
  if (!(transmissivity > 0.0 && transmissivity < 1.0))
    throw DomainError("IPS transmissivity must lie strictly in (0, 1)");
  if (!(ips_eff > 0.0 && ips_eff <= 1.0))
    throw DomainError("IPS detector efficiency must lie in (0, 1]");
}

IpsCoefficients ips_coefficients(const IpsParams& p) {
  p.validate();
  const double big_a = std::cosh(2.0 * p.r);
  const double big_b = std::sinh(2.0 * p.r);
  const double t = p.transmissivity;
  const double eps = p.ips_eff;
  IpsCoefficients out{};
  out.a = 2.0 * (big_a * (1.0 - t) + t);
  out.b = 2.0 * (big_a * t + (1.0 - t));
  const double e2 = 2.0 * eps / (2.0 - eps);
  out.x = {out.a, out.a + e2, out.a, out.a + e2};
  out.y = {out.a, out.a, out.a + e2, out.a + e2};
  const double c2 = -2.0 / (2.0 - eps);
  out.c = {1.0, c2, c2, c2 * c2};
  const double one_a = 1.0 - big_a;
  const double b2 = big_b * big_b;
  for (int k = 0; k < 4; ++k) {
    const double x = out.x[k], y = out.y[k];
    out.den[k] = x * y - 4.0 * b2 * (1.0 - t) * (1.0 - t);
    out.n[k] = 4.0 * t * (1.0 - t) / out.den[k];
    out.f[k] = out.n[k] * (x * b2 + 4.0 * b2 * one_a * (1.0 - t) + y * one_a * one_a);
    out.g[k] = out.n[k] * (x * one_a * one_a + 4.0 * b2 * one_a * (1.0 - t) + y * b2);
    out.h[k] = out.n[k] * ((x + y) * big_b * one_a + 2.0 * big_b * (b2 + one_a * one_a) * (1.0 - t));
    out.f_cap[k] = out.b - out.f[k];
    out.g_cap[k] = out.b - out.g[k];
    out.h_cap[k] = 2.0 * big_b * t + out.h[k];
  }
  return out;
}

double ips_click_probability(const IpsParams& p) {
  const Real p11 = ips_terms(p).p11;
  // Exact zero at r = 0 cancels to rounding level.
  if (p11 < 0.0L && p11 > -1e-12L) return 0.0;
  if (p11 < 0.0L) throw std::logic_error("IPS click probability is negative");
  return static_cast<double>(p11);
}

IpsPrimitives ips_corr_primitives(const IpsParams& p, double eta, Complex alpha, Complex beta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("efficiency must lie in (0, 1], got " + std::to_string(eta));
  const Terms t = ips_terms(p);
  if (!(t.p11 >= kMinClickProbability))
    throw DegenerateError("IPS click probability " + std::to_string(static_cast<double>(t.p11)) +
                          " is below 1e-15; cannot condition on it");
  const Real rel_error = t.condition * std::numeric_limits<Real>::epsilon();
  if (rel_error > kMaxRelativeError)
    throw DegenerateError("IPS conditioning loses all but " +
                          std::to_string(static_cast<int>(-std::log10(rel_error))) +
                          " digits to cancellation");

  const Real delta = 2.0L * eta / (2.0L - eta);
  const Real e = eta;
  const Real na = std::norm(alpha), nb = std::norm(beta);
  const Real cross = 2.0L * (alpha * beta).real();

  IpsPrimitives out{};
  out.p11 = static_cast<double>(t.p11);
  Real weight_sum = 0.0L, joint = 0.0L, first = 0.0L, second = 0.0L;
  for (int k = 0; k < 4; ++k) {
    const Real f = t.f[k], g = t.g[k], h = t.h[k];
    const Real scale = t.cc[k] / t.p11;
    const Real m = delta * delta / ((f + delta) * (g + delta) - h * h);
    const Real f_t = delta - (f + delta) * m;
    const Real g_t = delta - (g + delta) * m;
    const Real h_t = h * m;
    const Real det = f * g - h * h;
    const Real ik = scale * 4.0L * m / (e * e) * std::exp(-g_t * na - f_t * nb + h_t * cross);
    const Real den_g = g * (f + delta) - h * h;
    const Real den_y = f * (g + delta) - h * h;
    const Real gk = scale * 4.0L * delta / (den_g * e) * std::exp(-det * delta / den_g * na);
    const Real yk = scale * 4.0L * delta / (den_y * e) * std::exp(-det * delta / den_y * nb);
    const Real wk = 4.0L * scale / det;
    out.terms[k] = {static_cast<double>(wk),
                    {static_cast<double>(ik), static_cast<double>(gk), static_cast<double>(yk)}};
    weight_sum += wk;
    joint += ik;
    first += gk;
    second += yk;
  }
  if (std::abs(weight_sum - 1.0L) > std::max(1e-12L, 100.0L * rel_error))
    throw std::logic_error("IPS normalization identity violated: weights sum to " +
                           std::to_string(static_cast<double>(weight_sum)));
  out.weight_sum = static_cast<double>(weight_sum);
  out.total = {static_cast<double>(joint), static_cast<double>(first),
               static_cast<double>(second)};
  return out;
}

std::vector<GaussianKernel> ips_wigner_terms(const IpsParams& p) {
  const Terms t = ips_terms(p);
  if (!(t.p11 >= kMinClickProbability))
    throw DegenerateError("IPS click probability is below 1e-15; cannot condition on it");
  std::vector<GaussianKernel> out;
  for (int k = 0; k < 4; ++k) {
    const Real pref = 4.0L * t.cc[k] / (t.p11 * static_cast<Real>(kPi * kPi));
    out.push_back(GaussianKernel::two_mode(static_cast<double>(pref), static_cast<double>(t.f[k]),
                                           static_cast<double>(t.g[k]),
                                           static_cast<double>(t.h[k])));
  }
  return out;
}

Primitives ips_trace_rule_primitives(const IpsParams& p, const DetectorParams& det, Complex alpha,
                                     Complex beta) {
  const GaussianKernel pa = povm_wigner_kernel(det, alpha);
  const GaussianKernel pb = povm_wigner_kernel(det, beta);
  const GaussianKernel joint = GaussianKernel::two_mode(pa.prefactor * pb.prefactor, pa.coeff_f,
                                                        pb.coeff_f, 0.0, alpha, beta);
  const GaussianKernel second{pb.prefactor, 0.0, pb.coeff_f, 0.0, {}, beta};
  Primitives out;
  for (const auto& k : ips_wigner_terms(p)) {
    const PolyGaussian w{k, Polynomial{Complex{1.0}}};
    out.joint += gaussian_pair_trace(w, joint);
    out.first += gaussian_pair_trace(w, pa);
    out.second += gaussian_pair_trace(w, second);
  }
  return out;
}

}  // namespace onoff

#include "onoff/states.hpp"

#include <cmath>

namespace onoff {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("efficiency must lie in (0, 1], got " + std::to_string(eta));
}

// <1|Pi_0(alpha)|1> / e^{-eta|alpha|^2}
double single_photon_weight(double eta, Complex a) { return 1.0 - eta + eta * eta * std::norm(a); }

// |1>|0> amplitude s, |0>|1> amplitude c.
Primitives psi_family(double s, double c, double eta, Complex a, Complex b) {
  const double ea = std::exp(-eta * std::norm(a));
  const double eb = std::exp(-eta * std::norm(b));
  const double ma = single_photon_weight(eta, a);
  const double mb = single_photon_weight(eta, b);
  const double cross = 2.0 * s * c * eta * eta * (std::conj(a) * b).real();
  return {ea * eb * (s * s * ma + c * c * mb + cross), ea * (s * s * ma + c * c),
          eb * (c * c * mb + s * s)};
}

// |0>|0> amplitude s, |1>|1> amplitude c.
Primitives phi_family(double s, double c, double eta, Complex a, Complex b) {
  const double ea = std::exp(-eta * std::norm(a));
  const double eb = std::exp(-eta * std::norm(b));
  const double ma = single_photon_weight(eta, a);
  const double mb = single_photon_weight(eta, b);
  const double cross = 2.0 * s * c * eta * eta * (a * b).real();
  return {ea * eb * (s * s + c * c * ma * mb + cross), ea * (s * s + c * c * ma),
          eb * (s * s + c * c * mb)};
}

Primitives two_photon(double eta, Complex a, Complex b) {
  const double ea = std::exp(-eta * std::norm(a));
  const double eb = std::exp(-eta * std::norm(b));
  const double na = std::norm(a), nb = std::norm(b);
  const double eta2 = eta * eta, eta4 = eta2 * eta2;
  const double joint =
      (1.0 - eta) * (1.0 - eta + eta2 * (na + nb)) + 0.25 * eta4 * std::norm(a * a + b * b);
  auto marginal = [&](double n) {
    return 1.0 - eta + 0.5 * eta2 + eta2 * (1.0 - eta) * n + 0.25 * eta4 * n * n;
  };
  return {ea * eb * joint, ea * marginal(na), eb * marginal(nb)};
}

Primitives twin_beam(double r, double eta, Complex a, Complex b) {
  const auto [big_a, big_b] = twb_coefficients(r);
  const double delta = delta_eta(eta);
  const double unit = big_a * big_a - big_b * big_b;
  const double m = delta * delta / (4.0 * unit + 4.0 * big_a * delta + delta * delta);
  const double f_t = delta - (2.0 * big_a + delta) * m;
  const double h_t = 2.0 * big_b * m;
  const double joint = 4.0 * m / (eta * eta) *
                       std::exp(-f_t * (std::norm(a) + std::norm(b)) + 2.0 * h_t * (a * b).real());
  const double den = 2.0 * unit + big_a * delta;
  auto marginal = [&](Complex x) {
    return 2.0 * delta / (eta * den) * std::exp(-2.0 * delta / den * std::norm(x));
  };
  return {joint, marginal(a), marginal(b)};
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// L_n^(k)(4 x x*) as a polynomial in (x, x*).
Polynomial laguerre_polynomial(int n, int k, const Polynomial& x, const Polynomial& xc) {
  Polynomial out;
  Polynomial power{Complex{1.0}};
  const Polynomial four_norm = 4.0 * (x * xc);
  for (int j = 0; j <= n; ++j) {
    const double c = (j % 2 ? -1.0 : 1.0) * factorial(n + k) /
                     (factorial(n - j) * factorial(k + j) * factorial(j));
    out += c * power;
    power = power * four_norm;
  }
  return out;
}

}  // namespace

void validate(const StateSpec& state) {
  std::visit(Overloaded{
                 [](const UnbalancedPsi& s) {
                   if (!(s.phi >= 0.0 && s.phi <= kPi / 2))
                     throw DomainError("unbalanced superposition angle must lie in [0, pi/2]");
                 },
                 [](const UnbalancedPhi& s) {
                   if (!(s.phi >= 0.0 && s.phi <= kPi / 2))
                     throw DomainError("unbalanced superposition angle must lie in [0, pi/2]");
                 },
                 [](const Twb& s) {
                   if (!(s.r >= 0.0) || !std::isfinite(s.r))
                     throw DomainError("twin-beam squeezing must be >= 0");
                 },
                 [](const IpsParams& s) { s.validate(); },
                 [](const auto&) {},
             },
             state);
}

std::string state_name(const StateSpec& state) {
  return std::visit(
      Overloaded{
          [](const BellPsi& s) -> std::string {
            return s.sign == Sign::Plus ? "bell-psi-plus" : "bell-psi-minus";
          },
          [](const BellPhi& s) -> std::string {
            return s.sign == Sign::Plus ? "bell-phi-plus" : "bell-phi-minus";
          },
          [](const UnbalancedPsi&) -> std::string { return "unbal-psi"; },
          [](const UnbalancedPhi&) -> std::string { return "unbal-phi"; },
          [](const TwoPhoton&) -> std::string { return "two-photon"; },
          [](const Twb&) -> std::string { return "twb"; },
          [](const IpsParams&) -> std::string { return "ips"; },
      },
      state);
}

TwbCoefficients twb_coefficients(double r) {
  if (!(r >= 0.0)) throw DomainError("twin-beam squeezing must be >= 0");
  return {std::cosh(2.0 * r), std::sinh(2.0 * r)};
}

std::vector<FockAmplitude> fock_amplitudes(const StateSpec& state) {
  return std::visit(
      Overloaded{
          [](const BellPsi& s) -> std::vector<FockAmplitude> {
            return {{kInvSqrt2, 1, 0}, {sign_value(s.sign) * kInvSqrt2, 0, 1}};
          },
          [](const BellPhi& s) -> std::vector<FockAmplitude> {
            return {{kInvSqrt2, 0, 0}, {sign_value(s.sign) * kInvSqrt2, 1, 1}};
          },
          [](const UnbalancedPsi& s) -> std::vector<FockAmplitude> {
            return {{std::sin(s.phi), 1, 0}, {std::cos(s.phi), 0, 1}};
          },
          [](const UnbalancedPhi& s) -> std::vector<FockAmplitude> {
            return {{std::sin(s.phi), 0, 0}, {std::cos(s.phi), 1, 1}};
          },
          [](const TwoPhoton&) -> std::vector<FockAmplitude> {
            return {{kInvSqrt2, 2, 0}, {kInvSqrt2, 0, 2}};
          },
          [](const Twb&) -> std::vector<FockAmplitude> { return {}; },
          [](const IpsParams&) -> std::vector<FockAmplitude> { return {}; },
      },
      state);
}

Polynomial fock_wigner_polynomial(int m, int n, bool second_mode) {
  const Polynomial x = second_mode ? Polynomial::w() : Polynomial::z();
  const Polynomial xc = second_mode ? Polynomial::wc() : Polynomial::zc();
  if (m < n) {
    // P_mn = conj(P_nm): swap the roles of x and x*.
    const int k = n - m;
    Polynomial p = laguerre_polynomial(m, k, x, xc);
    for (int i = 0; i < k; ++i) p = p * (2.0 * x);
    return p * Complex{(m % 2 ? -1.0 : 1.0) * std::sqrt(factorial(m) / factorial(n))};
  }
  const int k = m - n;
  Polynomial p = laguerre_polynomial(n, k, x, xc);
  for (int i = 0; i < k; ++i) p = p * (2.0 * xc);
  return p * Complex{(n % 2 ? -1.0 : 1.0) * std::sqrt(factorial(n) / factorial(m))};
}

PolyGaussian wigner_of(const StateSpec& state) {
  validate(state);
  if (const auto* twb = std::get_if<Twb>(&state)) {
    const auto [big_a, big_b] = twb_coefficients(twb->r);
    return {GaussianKernel::two_mode(4.0 / (kPi * kPi), 2.0 * big_a, 2.0 * big_a, 2.0 * big_b),
            Polynomial{Complex{1.0}}};
  }
  if (std::holds_alternative<IpsParams>(state))
    throw UnsupportedError("IPS Wigner function is a sum of Gaussians; use ips_wigner_terms");
  const auto amps = fock_amplitudes(state);
  Polynomial poly;
  for (const auto& u : amps)
    for (const auto& v : amps) {
      if (u.coeff * v.coeff == 0.0) continue;
      poly += (u.coeff * v.coeff) * (fock_wigner_polynomial(u.n_a, v.n_a, false) *
                                     fock_wigner_polynomial(u.n_b, v.n_b, true));
    }
  return {GaussianKernel::two_mode(4.0 / (kPi * kPi), 2.0, 2.0, 0.0), poly};
}

Primitives unbalanced_primitives(const StateSpec& state, double eta, Complex alpha, Complex beta) {
  check_eta(eta);
  validate(state);
  if (const auto* s = std::get_if<UnbalancedPsi>(&state))
    return psi_family(std::sin(s->phi), std::cos(s->phi), eta, alpha, beta);
  if (const auto* s = std::get_if<UnbalancedPhi>(&state))
    return phi_family(std::sin(s->phi), std::cos(s->phi), eta, alpha, beta);
  throw DomainError("unbalanced_primitives: state is not an unbalanced superposition");
}

Primitives corr_primitives(const StateSpec& state, double eta, Complex alpha, Complex beta) {
  check_eta(eta);
  validate(state);
  return std::visit(
      Overloaded{
          [&](const BellPsi& s) {
            return psi_family(kInvSqrt2, sign_value(s.sign) * kInvSqrt2, eta, alpha, beta);
          },
          [&](const BellPhi& s) {
            return phi_family(kInvSqrt2, sign_value(s.sign) * kInvSqrt2, eta, alpha, beta);
          },
          [&](const UnbalancedPsi&) { return unbalanced_primitives(state, eta, alpha, beta); },
          [&](const UnbalancedPhi&) { return unbalanced_primitives(state, eta, alpha, beta); },
          [&](const TwoPhoton&) { return two_photon(eta, alpha, beta); },
          [&](const Twb& s) { return twin_beam(s.r, eta, alpha, beta); },
          [&](const IpsParams& s) { return ips_corr_primitives(s, eta, alpha, beta).total; },
      },
      state);
}

Primitives trace_rule_primitives(const StateSpec& state, const DetectorParams& det, Complex alpha,
                                 Complex beta) {
  if (const auto* ips = std::get_if<IpsParams>(&state))
    return ips_trace_rule_primitives(*ips, det, alpha, beta);
  const PolyGaussian w = wigner_of(state);
  const GaussianKernel pa = povm_wigner_kernel(det, alpha);
  const GaussianKernel pb = povm_wigner_kernel(det, beta);

  // Joint kernel W[Pi_0(alpha)](z) W[Pi_0(beta)](w).
  GaussianKernel joint = GaussianKernel::two_mode(pa.prefactor * pb.prefactor, pa.coeff_f,
                                                  pb.coeff_f, 0.0, alpha, beta);
  // Second-mode marginal: kernel flat in the first mode.
  GaussianKernel second{pb.prefactor, 0.0, pb.coeff_f, 0.0, {}, beta};

  return {gaussian_pair_trace(w, joint), gaussian_pair_trace(w, pa), gaussian_pair_trace(w, second)};
}

}  // namespace onoff

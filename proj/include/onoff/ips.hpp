#pragma once

#include <array>
#include <vector>

#include "onoff/common.hpp"
#include "onoff/detector.hpp"
#include "onoff/phase_space.hpp"

namespace onoff {

/// Twin beam with inconclusive photon subtraction on both modes:
/// squeezing r, beam-splitter transmissivity T in (0, 1), subtraction detector efficiency eps in (0, 1].
struct IpsParams {
  double r = 0.0;
  double transmissivity = 0.9999;
  double ips_eff = 1.0;

  /// Throws DomainError outside the ranges above.
  void validate() const;
};

struct IpsCoefficients {
  std::array<double, 4> c;      // C_k
  std::array<double, 4> f_cap;  // F_k
  std::array<double, 4> g_cap;  // G_k
  std::array<double, 4> h_cap;  // H_k
  std::array<double, 4> x;
  std::array<double, 4> y;
  std::array<double, 4> f;
  std::array<double, 4> g;
  std::array<double, 4> h;
  std::array<double, 4> n;  // N_k
  std::array<double, 4> den;  // x_k y_k - 4 B^2 (1-T)^2
  double a;
  double b;
};

[[nodiscard]] IpsCoefficients ips_coefficients(const IpsParams& p);

/// Probability that both subtraction detectors click.
[[nodiscard]] double ips_click_probability(const IpsParams& p);

/// One Gaussian term of the conditional state. `weight` is its share of the
/// normalization (the weights sum to 1); the primitives are this term's
/// contribution to I, G, Y.
struct IpsTerm {
  double weight;
  Primitives primitives;
};

struct IpsPrimitives {
  std::array<IpsTerm, 4> terms;
  Primitives total;
  double weight_sum;  // 1 up to rounding
  double p11;

  /// Sum over k of weight + 4 I_k - 2 (G_k + Y_k), accumulated from the totals.
  [[nodiscard]] double correlation() const {
    return weight_sum + 4.0 * total.joint - 2.0 * (total.first + total.second);
  }
};

/// No-click probabilities at D = 0. Throws DegenerateError when p11 < 1e-15.
[[nodiscard]] IpsPrimitives ips_corr_primitives(const IpsParams& p, double eta, Complex alpha,
                                                Complex beta);

/// The conditional Wigner function as four Gaussian kernels.
[[nodiscard]] std::vector<GaussianKernel> ips_wigner_terms(const IpsParams& p);

/// No-click probabilities through the trace rule on ips_wigner_terms; accepts thermal dark counts.
[[nodiscard]] Primitives ips_trace_rule_primitives(const IpsParams& p, const DetectorParams& det,
                                                   Complex alpha, Complex beta);

}  // namespace onoff

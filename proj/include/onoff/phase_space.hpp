#pragma once

#include "onoff/common.hpp"
#include "onoff/polynomial.hpp"

namespace onoff {

/// prefactor * exp{-F|z-mu|^2 - G|w-nu|^2 + H[(z-mu)(w-nu) + c.c.]}
///
/// A mode whose quadratic coefficients vanish (F = H = 0, or G = H = 0) is
/// "flat": the kernel is constant in that mode and carries an implicit
/// factor 1/pi there, the Wigner function of the identity. One-mode kernels
/// are therefore represented with G = H = 0.
struct GaussianKernel {
  double prefactor = 1.0;
  double coeff_f = 0.0;
  double coeff_g = 0.0;
  double coeff_h = 0.0;
  Complex center_z{};
  Complex center_w{};

  static GaussianKernel one_mode(double prefactor, double coeff, Complex center = {}) {
    return GaussianKernel{prefactor, coeff, 0.0, 0.0, center, {}};
  }
  static GaussianKernel two_mode(double prefactor, double f, double g, double h,
                                 Complex mu = {}, Complex nu = {}) {
    return GaussianKernel{prefactor, f, g, h, mu, nu};
  }
  /// W[identity] on both modes, 1/pi^2.
  static GaussianKernel identity() { return GaussianKernel{}; }

  [[nodiscard]] bool flat_first() const { return coeff_f == 0.0 && coeff_h == 0.0; }
  [[nodiscard]] bool flat_second() const { return coeff_g == 0.0 && coeff_h == 0.0; }

  /// Throws DomainError unless F, G >= 0 and the coupled block is positive definite.
  void validate() const;

  [[nodiscard]] double exponent(Complex z, Complex w) const;

  /// Function value as a two-mode phase-space function (flat factors included).
  [[nodiscard]] double operator()(Complex z, Complex w) const;

  /// Kernel of D(dz) (x) D(dw) O D^dag: a pure center shift.
  [[nodiscard]] GaussianKernel displaced(Complex dz, Complex dw = {}) const;
};

/// Polynomial times Gaussian, the form of every Wigner function in scope.
struct PolyGaussian {
  GaussianKernel base;
  Polynomial poly{Complex{1.0}};

  [[nodiscard]] double operator()(Complex z, Complex w) const {
    return base(z, w) * poly(z, w).real();
  }
};

inline constexpr int kMaxMomentDegree = 8;

/// Moment <z^a z*^b w^c w*^d> under the normalized Gaussian weight with the
/// quadratic form and centers of `base` (the prefactor is ignored). For a
/// one-mode base only z-moments are defined.
[[nodiscard]] Complex poly_gaussian_moments(const GaussianKernel& base, const Monomial& monomial);

/// Tr[O1 O2] from the Wigner functions of O1 and O2 via the trace rule:
/// pi^2 * integral over C^2 of W1 W2, or pi * integral over C when both
/// kernels are flat in the second mode (single-mode trace).
[[nodiscard]] double gaussian_pair_trace(const PolyGaussian& k1, const GaussianKernel& k2);

}  // namespace onoff

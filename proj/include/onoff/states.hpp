#pragma once

#include <string>
#include <variant>
#include <vector>

#include "onoff/common.hpp"
#include "onoff/detector.hpp"
#include "onoff/ips.hpp"
#include "onoff/phase_space.hpp"

namespace onoff {

enum class Sign { Plus, Minus };

/// (|1>|0> +- |0>|1>)/sqrt2
struct BellPsi {
  Sign sign = Sign::Plus;
};
/// (|0>|0> +- |1>|1>)/sqrt2
struct BellPhi {
  Sign sign = Sign::Plus;
};
/// sin(phi)|1>|0> + cos(phi)|0>|1>, phi in [0, pi/2]
struct UnbalancedPsi {
  double phi = kPi / 4;
};
/// sin(phi)|0>|0> + cos(phi)|1>|1>, phi in [0, pi/2]
struct UnbalancedPhi {
  double phi = kPi / 4;
};
/// (|2>|0> + |0>|2>)/sqrt2
struct TwoPhoton {};
/// Twin beam sum_n tanh^n(r)/cosh(r) |n>|n>
struct Twb {
  double r = 0.0;
};

using StateSpec =
    std::variant<BellPsi, BellPhi, UnbalancedPsi, UnbalancedPhi, TwoPhoton, Twb, IpsParams>;

/// Throws DomainError for phi outside [0, pi/2] or r < 0.
void validate(const StateSpec& state);

/// CLI/JSON name: "bell-psi-plus", ..., "unbal-phi", "two-photon", "twb", "ips".
[[nodiscard]] std::string state_name(const StateSpec& state);

/// Twin-beam Wigner coefficients A = cosh 2r, B = sinh 2r.
struct TwbCoefficients {
  double big_a;
  double big_b;
};
[[nodiscard]] TwbCoefficients twb_coefficients(double r);

/// One Fock component c |n_a>|n_b> of a finite pure state.
struct FockAmplitude {
  double coeff;
  int n_a;
  int n_b;
};

/// Fock expansion of the finite-photon families (empty for Twb and IPS).
[[nodiscard]] std::vector<FockAmplitude> fock_amplitudes(const StateSpec& state);

/// Exact Wigner function as polynomial x Gaussian. IPS states are a sum of
/// Gaussians instead; see ips_wigner_terms (UnsupportedError here).
[[nodiscard]] PolyGaussian wigner_of(const StateSpec& state);

/// Closed-form no-click probabilities at D = 0.
[[nodiscard]] Primitives corr_primitives(const StateSpec& state, double eta, Complex alpha,
                                         Complex beta);

/// Closed forms for UnbalancedPsi / UnbalancedPhi; DomainError for other families.
[[nodiscard]] Primitives unbalanced_primitives(const StateSpec& state, double eta, Complex alpha,
                                               Complex beta);

/// Same probabilities by the phase-space trace rule: wigner_of(state) against
/// the displaced POVM kernels. Handles thermal dark counts directly.
[[nodiscard]] Primitives trace_rule_primitives(const StateSpec& state, const DetectorParams& det,
                                               Complex alpha, Complex beta);

/// Wigner polynomial P_mn of |m><n| with W = (2/pi) e^{-2|x|^2} P_mn(x), in
/// the first (second_mode = false) or second mode variables.
[[nodiscard]] Polynomial fock_wigner_polynomial(int m, int n, bool second_mode = false);

}  // namespace onoff

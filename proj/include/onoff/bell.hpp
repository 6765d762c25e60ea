#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "onoff/common.hpp"
#include "onoff/detector.hpp"
#include "onoff/states.hpp"

namespace onoff {

/// Displacements (alpha, beta) and (alpha', beta') of the two measurement settings.
struct DisplacementQuad {
  Complex alpha;
  Complex beta;
  Complex alpha_p;
  Complex beta_p;
};

inline const double kDefaultKappa = std::sqrt(11.0);

/// alpha = j, beta = -j, alpha' = -kappa j, beta' = kappa j
struct Opposite {
  double j = 0.0;
  double kappa = kDefaultKappa;
};
/// alpha = beta = j, alpha' = beta' = -kappa j
struct Aligned {
  double j = 0.0;
  double kappa = kDefaultKappa;
};
/// alpha = beta = 0, alpha' = beta' = sqrt2 e^{i pi/4} j
struct TwoPhotonScheme {
  double j = 0.0;
};
struct Full {
  DisplacementQuad quad;
};

using QuadScheme = std::variant<Opposite, Aligned, TwoPhotonScheme, Full>;

/// Throws DomainError for kappa <= 0 or non-finite entries.
[[nodiscard]] DisplacementQuad to_quad(const QuadScheme& scheme);

/// "opposite", "aligned", "two-photon", "full".
[[nodiscard]] std::string scheme_name(const QuadScheme& scheme);

/// The one-parameter scheme under which the state violates most strongly.
[[nodiscard]] QuadScheme natural_scheme(const StateSpec& state, double j = 0.0,
                                        double kappa = kDefaultKappa);

/// I, G, Y including thermal dark counts through the scaling map.
/// Poissonian dark counts are only available from the Fock-space oracle.
[[nodiscard]] Primitives primitives(const StateSpec& state, const DetectorParams& det,
                                    Complex alpha, Complex beta);

[[nodiscard]] double correlation(const StateSpec& state, const DetectorParams& det, Complex alpha,
                                 Complex beta);

/// B = E(a,b) + E(a',b) + E(a,b') - E(a',b').
[[nodiscard]] double bell_parameter(const StateSpec& state, const DetectorParams& det,
                                    const DisplacementQuad& quad);

/// CH = I(a,b) + I(a',b) + I(a,b') - I(a',b') - G(a) - Y(b) = (B - 2) / 4.
[[nodiscard]] double ch_value(const StateSpec& state, const DetectorParams& det,
                              const DisplacementQuad& quad);

inline constexpr double kSmallDarkLimit = 0.05;

struct SmallDarkResult {
  double value;
  std::optional<std::string> warning;
};

/// First-order expansion in thermal dark counts:
/// B ~ (1 - 2D - eta D d/d eta) B_0 + 4D [1 - G_0(alpha) - Y_0(beta)].
[[nodiscard]] SmallDarkResult bell_small_d(const StateSpec& state, double eta, double dark,
                                           const DisplacementQuad& quad);

/// 2 sqrt2 {1 - [E_A(a) + E_B(b) + E_A(a') + E_B(b')]}, E_A = G_eta - G_{eta(2-eta)}.
/// Requires D = 0.
[[nodiscard]] double bell_max_bound(const StateSpec& state, const DetectorParams& det,
                                    const DisplacementQuad& quad);

}  // namespace onoff

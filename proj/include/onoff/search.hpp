#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "onoff/bell.hpp"
#include "onoff/detector.hpp"
#include "onoff/states.hpp"

namespace onoff {

/// Inclusive grid lo..hi with `steps` points (steps >= 3).
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 3;

  [[nodiscard]] double at(int i) const { return lo + (hi - lo) * i / (steps - 1); }
  [[nodiscard]] double spacing() const { return (hi - lo) / (steps - 1); }
  void validate(const char* name) const;

  bool operator==(const Axis&) const = default;
};

enum class SchemeFamily { Opposite, Aligned, TwoPhoton, Full };

[[nodiscard]] SchemeFamily scheme_family(const QuadScheme& scheme);

/// Scheme of the given family at (j, kappa). Full is not a one-parameter family.
[[nodiscard]] QuadScheme make_scheme(SchemeFamily family, double j, double kappa);

/// Squeezing r (Twb, IPS) or angle phi (unbalanced states); nullopt otherwise.
[[nodiscard]] std::optional<double> state_parameter(const StateSpec& state);
[[nodiscard]] StateSpec with_state_parameter(const StateSpec& state, double value);

struct SearchConfig {
  SchemeFamily scheme = SchemeFamily::Opposite;
  Axis j{0.0, 0.5, 51};
  double kappa = kDefaultKappa;
  std::optional<Axis> kappa_axis;  // searched instead of the fixed kappa
  std::optional<Axis> state_axis;  // r or phi of the state
  double refine_tol = 1e-10;
  int max_iters = 2000;

  void validate() const;
};

inline constexpr double kViolationMargin = 1e-9;

struct SearchResult {
  StateSpec state;
  DisplacementQuad quad;
  double j = 0.0;
  double kappa = 0.0;
  double bell = 0.0;       // signed B at the optimum
  double grid_best = 0.0;  // best |B| among grid samples
  bool violation = false;  // |B| > 2
  std::string diagnostic;
};

/// Grid scan over j (and kappa, state parameter when configured), then
/// Nelder-Mead refinement of -|B| inside the grid box. Deterministic; ties go
/// to smaller |j|. Full scheme: see maximize_bell_complex.
[[nodiscard]] SearchResult maximize_bell(const StateSpec& state, const DetectorParams& det,
                                         const SearchConfig& config);

struct ComplexSearchResult {
  DisplacementQuad quad;
  double bell = 0.0;
  double seed_bell = 0.0;
};

/// Eight-real-dimensional refinement from `seed` plus `perturbations` random restarts.
[[nodiscard]] ComplexSearchResult maximize_bell_complex(const StateSpec& state,
                                                        const DetectorParams& det,
                                                        const DisplacementQuad& seed,
                                                        std::uint64_t rng_seed = 1,
                                                        int perturbations = 8,
                                                        int max_iters = 4000);

enum class ThresholdProtocol {
  FixedQuad,    // quad and state from eta = 1 held fixed
  FixedScheme,  // kappa and state from eta = 1 held fixed, j re-maximized at each eta
  Reoptimize,   // full configured search at each eta
};

struct ThresholdConfig {
  SearchConfig search;
  ThresholdProtocol protocol = ThresholdProtocol::FixedScheme;
  double eta_lo = 0.3;
  double tol = 5e-4;
  double dark = 0.0;
  Background background = Background::Thermal;
};

struct ThresholdResult {
  std::optional<double> eta_star;
  SearchResult at_unit;  // optimum at eta = 1
  std::string diagnostic;
};

/// Efficiency below which max |B| <= 2 under the protocol, by bisection.
[[nodiscard]] ThresholdResult threshold_eta(const StateSpec& state, const ThresholdConfig& config);

}  // namespace onoff

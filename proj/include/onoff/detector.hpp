#pragma once

#include <vector>

#include "onoff/common.hpp"
#include "onoff/phase_space.hpp"

namespace onoff {

enum class Background { Thermal, Poissonian };

/// Noisy on/off photodetector: efficiency eta in (0, 1], mean dark counts D >= 0.
class DetectorParams {
 public:
  DetectorParams(double eta, double dark_mean = 0.0, Background background = Background::Thermal);

  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] double dark_mean() const { return dark_mean_; }
  [[nodiscard]] Background background() const { return background_; }

  /// Ideal-efficiency detector with the same noise model, eta replaced.
  [[nodiscard]] DetectorParams with_eta(double eta) const { return {eta, dark_mean_, background_}; }

 private:
  double eta_;
  double dark_mean_;
  Background background_;
};

/// Diagonal Fock weights w_n of the no-click element Pi_0.
struct PovmWeights {
  std::vector<double> no_click;

  [[nodiscard]] double click(std::size_t n) const { return 1.0 - no_click.at(n); }
  [[nodiscard]] std::size_t size() const { return no_click.size(); }
};

inline constexpr int kDefaultPovmCutoff = 64;

/// w_n for n = 0..n_max. Thermal: (1+D)^-1 (1 - eta/(1+D))^n.
/// Poissonian: e^-D (1-eta)^n L_n(-D eta/(1-eta)).
[[nodiscard]] PovmWeights povm_fock_weights(const DetectorParams& det, int n_max = kDefaultPovmCutoff);

/// Wigner function of D(center) Pi_0 D^dag(center) as a one-mode kernel.
/// Poissonian noise with D > 0 is not Gaussian and is rejected.
[[nodiscard]] GaussianKernel povm_wigner_kernel(const DetectorParams& det, Complex center = {});

/// Delta_eta = 2 eta / (2 - eta).
[[nodiscard]] inline double delta_eta(double eta) { return 2.0 * eta / (2.0 - eta); }

struct DarkScaling {
  double eta_eff;   // eta / (1 + D)
  double i_scale;   // (1 + D)^-2
  double gy_scale;  // (1 + D)^-1
};

/// Thermal dark counts reduce to a rescaled noiseless detector:
/// I_{eta,D} = i_scale I_{eta_eff}, G_{eta,D} = gy_scale G_{eta_eff}, Y likewise.
[[nodiscard]] DarkScaling dark_scaling_map(const DetectorParams& det);

/// Pi_{0,eta}^2 = Pi_{0,eta(2-eta)}: returns eta (2 - eta).
[[nodiscard]] double squared_no_click_efficiency(double eta);

/// Laguerre polynomial L_n(x) by the three-term recurrence.
[[nodiscard]] double laguerre(int n, double x);

/// Generalized Laguerre L_n^(k)(x) by the three-term recurrence.
[[nodiscard]] double assoc_laguerre(int n, int k, double x);

}  // namespace onoff

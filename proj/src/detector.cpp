#include "onoff/detector.hpp"

#include <cmath>
#include <string>

namespace onoff {

DetectorParams::DetectorParams(double eta, double dark_mean, Background background)
    : eta_(eta), dark_mean_(dark_mean), background_(background) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("detector efficiency must lie in (0, 1], got " + std::to_string(eta));
  if (!(dark_mean >= 0.0) || !std::isfinite(dark_mean))
    throw DomainError("mean dark counts must be >= 0, got " + std::to_string(dark_mean));
  // The Poissonian model needs an auxiliary state with M = D/(1-eta) photons.
  if (background == Background::Poissonian && dark_mean > 0.0 && eta >= 1.0)
    throw DomainError("Poissonian dark counts require eta < 1 (M = D/(1-eta) diverges)");
}

double laguerre(int n, double x) { return assoc_laguerre(n, 0, x); }

double assoc_laguerre(int n, int k, double x) {
  if (n < 0) throw DomainError("laguerre: negative order");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - x;
  for (int m = 1; m < n; ++m) {
    const double next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

PovmWeights povm_fock_weights(const DetectorParams& det, int n_max) {
  if (n_max < 0) throw DomainError("povm_fock_weights: n_max must be >= 0");
  PovmWeights out;
  out.no_click.resize(static_cast<std::size_t>(n_max) + 1);
  const double eta = det.eta();
  const double d = det.dark_mean();

  if (det.background() == Background::Thermal || d == 0.0) {
    const double base = 1.0 - eta / (1.0 + d);
    double w = 1.0 / (1.0 + d);
    for (auto& x : out.no_click) {
      x = w;
      w *= base;
    }
    return out;
  }

  const double arg = -d * eta / (1.0 - eta);
  const double scale = std::exp(-d);
  double power = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    out.no_click[static_cast<std::size_t>(n)] = scale * power * laguerre(n, arg);
    power *= 1.0 - eta;
  }
  return out;
}

GaussianKernel povm_wigner_kernel(const DetectorParams& det, Complex center) {
  const double eta = det.eta();
  const double d = det.dark_mean();
  if (d > 0.0 && det.background() == Background::Poissonian) {
    throw UnsupportedError(
        "Poissonian no-click Wigner function is not Gaussian; use povm_fock_weights");
  }
  // Thermal: (1/pi) 2/(2(1+D)-eta) exp{-2 eta |z|^2 / (2(1+D)-eta)}; reduces to
  // Delta/(pi eta) exp{-Delta |z|^2} at D = 0.
  const double denom = 2.0 * (1.0 + d) - eta;
  return GaussianKernel::one_mode(2.0 / (kPi * denom), 2.0 * eta / denom, center);
}

DarkScaling dark_scaling_map(const DetectorParams& det) {
  const double d = det.dark_mean();
  if (det.background() == Background::Poissonian && d > 0.0) {
    throw UnsupportedError("dark-count scaling law holds for thermal background only");
  }
  const double s = 1.0 / (1.0 + d);
  return {det.eta() * s, s * s, s};
}

double squared_no_click_efficiency(double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("efficiency must lie in (0, 1], got " + std::to_string(eta));
  return eta * (2.0 - eta);
}

}  // namespace onoff

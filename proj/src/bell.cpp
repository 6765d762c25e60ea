#include "onoff/bell.hpp"

namespace onoff {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("displacement must be finite");
}

void check_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be > 0");
}

double derivative_in_eta(const StateSpec& state, double eta, const DisplacementQuad& quad) {
  const double h = 1e-4 * eta;
  auto b = [&](double e) { return bell_parameter(state, DetectorParams(e), quad); };
  if (eta + h <= 1.0) return (b(eta + h) - b(eta - h)) / (2.0 * h);
  return (3.0 * b(eta) - 4.0 * b(eta - h) + b(eta - 2.0 * h)) / (2.0 * h);
}

}  // namespace

DisplacementQuad to_quad(const QuadScheme& scheme) {
  const DisplacementQuad q = std::visit(
      Overloaded{
          [](const Opposite& s) {
            check_kappa(s.kappa);
            return DisplacementQuad{s.j, -s.j, -s.kappa * s.j, s.kappa * s.j};
          },
          [](const Aligned& s) {
            check_kappa(s.kappa);
            return DisplacementQuad{s.j, s.j, -s.kappa * s.j, -s.kappa * s.j};
          },
          [](const TwoPhotonScheme& s) {
            const Complex d = std::sqrt(2.0) * std::polar(1.0, kPi / 4) * s.j;
            return DisplacementQuad{{}, {}, d, d};
          },
          [](const Full& s) { return s.quad; },
      },
      scheme);
  for (Complex z : {q.alpha, q.beta, q.alpha_p, q.beta_p}) check_finite(z);
  return q;
}

std::string scheme_name(const QuadScheme& scheme) {
  return std::visit(Overloaded{
                        [](const Opposite&) -> std::string { return "opposite"; },
                        [](const Aligned&) -> std::string { return "aligned"; },
                        [](const TwoPhotonScheme&) -> std::string { return "two-photon"; },
                        [](const Full&) -> std::string { return "full"; },
                    },
                    scheme);
}

QuadScheme natural_scheme(const StateSpec& state, double j, double kappa) {
  return std::visit(
      Overloaded{
          [&](const BellPsi& s) -> QuadScheme {
            if (s.sign == Sign::Plus) return Aligned{j, kappa};
            return Opposite{j, kappa};
          },
          [&](const BellPhi& s) -> QuadScheme {
            if (s.sign == Sign::Plus) return Opposite{j, kappa};
            return Aligned{j, kappa};
          },
          [&](const UnbalancedPsi&) -> QuadScheme { return Aligned{j, kappa}; },
          [&](const TwoPhoton&) -> QuadScheme { return TwoPhotonScheme{j}; },
          [&](const auto&) -> QuadScheme { return Opposite{j, kappa}; },
      },
      state);
}

Primitives primitives(const StateSpec& state, const DetectorParams& det, Complex alpha,
                      Complex beta) {
  if (det.dark_mean() == 0.0) return corr_primitives(state, det.eta(), alpha, beta);
  if (det.background() == Background::Poissonian)
    throw UnsupportedError(
        "Poissonian dark counts have no closed form; use the Fock-space oracle");
  const DarkScaling s = dark_scaling_map(det);
  const Primitives p = corr_primitives(state, s.eta_eff, alpha, beta);
  return {s.i_scale * p.joint, s.gy_scale * p.first, s.gy_scale * p.second};
}

double correlation(const StateSpec& state, const DetectorParams& det, Complex alpha, Complex beta) {
  return primitives(state, det, alpha, beta).correlation();
}

double bell_parameter(const StateSpec& state, const DetectorParams& det,
                      const DisplacementQuad& quad) {
  return correlation(state, det, quad.alpha, quad.beta) +
         correlation(state, det, quad.alpha_p, quad.beta) +
         correlation(state, det, quad.alpha, quad.beta_p) -
         correlation(state, det, quad.alpha_p, quad.beta_p);
}

double ch_value(const StateSpec& state, const DetectorParams& det, const DisplacementQuad& quad) {
  const Primitives ab = primitives(state, det, quad.alpha, quad.beta);
  const Primitives pb = primitives(state, det, quad.alpha_p, quad.beta);
  const Primitives ap = primitives(state, det, quad.alpha, quad.beta_p);
  const Primitives pp = primitives(state, det, quad.alpha_p, quad.beta_p);
  return ab.joint + pb.joint + ap.joint - pp.joint - ab.first - ab.second;
}

SmallDarkResult bell_small_d(const StateSpec& state, double eta, double dark,
                             const DisplacementQuad& quad) {
  const DetectorParams ideal(eta);
  if (!(dark >= 0.0)) throw DomainError("mean dark counts must be >= 0");
  const double b0 = bell_parameter(state, ideal, quad);
  if (dark == 0.0) return {b0, std::nullopt};

  const double db = derivative_in_eta(state, eta, quad);
  const Primitives p0 = corr_primitives(state, eta, quad.alpha, quad.beta);
  SmallDarkResult out{
      (1.0 - 2.0 * dark) * b0 - eta * dark * db + 4.0 * dark * (1.0 - p0.first - p0.second),
      std::nullopt};
  if (dark > kSmallDarkLimit)
    out.warning = "D = " + std::to_string(dark) +
                  " exceeds 0.05; first-order expansion error may be significant";
  return out;
}

double bell_max_bound(const StateSpec& state, const DetectorParams& det,
                      const DisplacementQuad& quad) {
  if (det.dark_mean() > 0.0)
    throw UnsupportedError("Bell bound is derived for dark-count-free detectors only");
  const double eta = det.eta();
  const double eta2 = squared_no_click_efficiency(eta);
  auto excess_a = [&](Complex z) {
    return corr_primitives(state, eta, z, {}).first - corr_primitives(state, eta2, z, {}).first;
  };
  auto excess_b = [&](Complex z) {
    return corr_primitives(state, eta, {}, z).second - corr_primitives(state, eta2, {}, z).second;
  };
  const double sum =
      excess_a(quad.alpha) + excess_b(quad.beta) + excess_a(quad.alpha_p) + excess_b(quad.beta_p);
  return kTsirelson * (1.0 - sum);
}

}  // namespace onoff

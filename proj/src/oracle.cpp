#include "onoff/oracle.hpp"

#include <cmath>
#include <string>

namespace onoff {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Eigen::MatrixXcd;

constexpr int kInnerMargin = 40;
constexpr int kIpsMinCutoff = 20;
constexpr int kIpsMaxCutoff = 80;
constexpr int kTwbMaxCutoff = 400;
constexpr double kMinOracleClickProbability = 1e-12;

int twin_beam_cutoff(double r, int minimum) {
  const double t2 = std::tanh(r) * std::tanh(r);
  int n = minimum;
  while (std::pow(t2, n + 1) > kMaxTailBound) ++n;
  if (n > kTwbMaxCutoff) throw CutoffError("squeezing too large for the Fock-space oracle");
  return n;
}

double tail_of(double r, int n_max) { return std::pow(std::tanh(r), 2.0 * (n_max + 1)); }

MatrixXcd finite_ket(int n_max, std::initializer_list<std::tuple<double, int, int>> terms) {
  if (n_max < 2) throw CutoffError("Fock cutoff must be at least 2 photons per mode");
  MatrixXcd c = MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (const auto& [amp, a, b] : terms) c(a, b) += amp;
  return c;
}

PureEnsemble single(int n_max, MatrixXcd ket) {
  return {n_max, {1.0}, {std::move(ket)}};
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Normalized conditional ensemble and the click probability.
std::pair<PureEnsemble, double> ips_ensemble(const IpsParams& p, const FockTruncation& t) {
  p.validate();
  const int n = t.n_max;
  if (n > kIpsMaxCutoff) throw CutoffError("IPS oracle cutoff above 80 photons per mode");
  if (tail_of(p.r, n) > kMaxTailBound)
    throw CutoffError("twin-beam tail exceeds 1e-10 at n_max = " + std::to_string(n));

  const double tr = p.transmissivity;
  const double th = std::tanh(p.r), norm = 1.0 / std::cosh(p.r);
  // Amplitude for n photons to leave k on the ancilla arm.
  auto split = [&](int total, int k) {
    return std::sqrt(binomial(total, k) * std::pow(tr, total - k) * std::pow(1.0 - tr, k));
  };
  auto click = [&](int k) { return 1.0 - std::pow(1.0 - p.ips_eff, k); };

  const int dim = n + 1;
  PureEnsemble e{n, {}, {}};
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      const double w = click(k) * click(l);
      if (w == 0.0) continue;
      MatrixXcd c = MatrixXcd::Zero(dim, dim);
      for (int total = std::max(k, l); total <= n; ++total)
        c(total - k, total - l) = norm * std::pow(th, total) * split(total, k) * split(total, l);
      e.weights.push_back(w);
      e.kets.push_back(std::move(c));
    }
  const double p11 = e.trace();
  if (!(p11 >= kMinOracleClickProbability))
    throw DegenerateError("IPS oracle click probability " + std::to_string(p11) +
                          " is below 1e-12");
  for (auto& w : e.weights) w /= p11;
  return {std::move(e), p11};
}

}  // namespace

FockTruncation FockTruncation::for_state(const StateSpec& state) {
  if (const auto* t = std::get_if<Twb>(&state)) {
    const int n = twin_beam_cutoff(t->r, 32);
    return {n, tail_of(t->r, n)};
  }
  if (const auto* p = std::get_if<IpsParams>(&state)) {
    const int n = twin_beam_cutoff(p->r, kIpsMinCutoff);
    return {n, tail_of(p->r, n)};
  }
  return {32, 0.0};
}

TwoModeDensity::TwoModeDensity(int n_max, MatrixXcd matrix)
    : n_max_(n_max), matrix_(std::move(matrix)) {
  const Eigen::Index dim = static_cast<Eigen::Index>(n_max + 1) * (n_max + 1);
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw DomainError("density matrix size does not match the cutoff");
}

void TwoModeDensity::validate(double tail_bound) const {
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("density matrix is not Hermitian");
  const double tr = trace();
  if (tr > 1.0 + 1e-12 || tr < 1.0 - tail_bound - 1e-12)
    throw DomainError("density matrix trace " + std::to_string(tr) + " outside [1 - tail, 1]");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw DomainError("density matrix has a negative eigenvalue");
}

double PureEnsemble::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < kets.size(); ++i) t += weights[i] * kets[i].squaredNorm();
  return t;
}

TwoModeDensity PureEnsemble::density() const {
  const Eigen::Index n = n_max + 1;
  MatrixXcd cols(n * n, static_cast<Eigen::Index>(kets.size()));
  for (std::size_t i = 0; i < kets.size(); ++i) {
    const double s = std::sqrt(weights[i]);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        cols(a * n + b, static_cast<Eigen::Index>(i)) = s * kets[i](a, b);
  }
  return {n_max, cols * cols.adjoint()};
}

PureEnsemble oracle_state(const StateSpec& state, const FockTruncation& trunc) {
  validate(state);
  const int n = trunc.n_max;
  const double h = 1.0 / std::sqrt(2.0);
  return std::visit(
      Overloaded{
          [&](const BellPsi& s) {
            const double sg = s.sign == Sign::Plus ? 1.0 : -1.0;
            return single(n, finite_ket(n, {{h, 1, 0}, {sg * h, 0, 1}}));
          },
          [&](const BellPhi& s) {
            const double sg = s.sign == Sign::Plus ? 1.0 : -1.0;
            return single(n, finite_ket(n, {{h, 0, 0}, {sg * h, 1, 1}}));
          },
          [&](const UnbalancedPsi& s) {
            return single(n, finite_ket(n, {{std::sin(s.phi), 1, 0}, {std::cos(s.phi), 0, 1}}));
          },
          [&](const UnbalancedPhi& s) {
            return single(n, finite_ket(n, {{std::sin(s.phi), 0, 0}, {std::cos(s.phi), 1, 1}}));
          },
          [&](const TwoPhoton&) { return single(n, finite_ket(n, {{h, 2, 0}, {h, 0, 2}})); },
          [&](const Twb& s) {
            if (tail_of(s.r, n) > kMaxTailBound)
              throw CutoffError("twin-beam tail " + std::to_string(tail_of(s.r, n)) +
                                " exceeds 1e-10 at n_max = " + std::to_string(n));
            MatrixXcd c = MatrixXcd::Zero(n + 1, n + 1);
            const double t = std::tanh(s.r), norm = 1.0 / std::cosh(s.r);
            for (int k = 0; k <= n; ++k) c(k, k) = norm * std::pow(t, k);
            return single(n, c);
          },
          [&](const IpsParams& p) { return ips_ensemble(p, trunc).first; },
      },
      state);
}

MatrixXcd displacement_matrix(Complex alpha, int n_max) {
  if (n_max < 1) throw CutoffError("displacement cutoff must be >= 1");
  const double x = std::norm(alpha);
  if (!(x * std::exp(1.0) / n_max < 1.0))
    throw CutoffError("|alpha|^2 e / n_max = " + std::to_string(x * std::exp(1.0) / n_max) +
                      " >= 1; raise the cutoff");
  MatrixXcd d(n_max + 1, n_max + 1);
  const double g = std::exp(-0.5 * x);
  for (int m = 0; m <= n_max; ++m)
    for (int n = 0; n <= n_max; ++n) {
      const int lo = std::min(m, n), k = std::abs(m - n);
      const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)));
      const Complex base = m >= n ? alpha : -std::conj(alpha);
      d(m, n) = ratio * std::pow(base, k) * g * assoc_laguerre(lo, k, x);
    }
  return d;
}

MatrixXcd displaced_no_click(const DetectorParams& det, Complex alpha, int n_max) {
  const int inner = n_max + kInnerMargin;
  const MatrixXcd d = displacement_matrix(alpha, inner);
  for (int n = 0; n <= n_max; ++n)
    if (std::abs(d.col(n).squaredNorm() - 1.0) > 1e-8)
      throw CutoffError("displacement matrix is not unitary on the retained columns");
  const PovmWeights w = povm_fock_weights(det, inner);
  for (std::size_t n = 0; n < w.size(); ++n)
    if (w.no_click[n] < 0.0 || w.no_click[n] > 1.0)
      throw DomainError("no-click weight outside [0, 1]");
  Eigen::VectorXd wv(inner + 1);
  for (int n = 0; n <= inner; ++n) wv(n) = w.no_click[static_cast<std::size_t>(n)];
  const MatrixXcd top = d.topRows(n_max + 1);
  return top * wv.asDiagonal() * top.adjoint();
}

Primitives oracle_primitives(const StateSpec& state, const DetectorParams& det, Complex alpha,
                             Complex beta, std::optional<FockTruncation> trunc) {
  const FockTruncation t = trunc.value_or(FockTruncation::for_state(state));
  const PureEnsemble e = oracle_state(state, t);
  const MatrixXcd a = displaced_no_click(det, alpha, t.n_max);
  const MatrixXcd b = displaced_no_click(det, beta, t.n_max);
  Primitives out;
  for (std::size_t i = 0; i < e.kets.size(); ++i) {
    const MatrixXcd& c = e.kets[i];
    const MatrixXcd ac = a * c;
    out.joint += e.weights[i] * (c.adjoint() * ac * b.transpose()).trace().real();
    out.first += e.weights[i] * (c.adjoint() * ac).trace().real();
    out.second += e.weights[i] * (c.transpose() * c.conjugate() * b).trace().real();
  }
  return out;
}

IpsOracleResult ips_oracle_state(const IpsParams& p, std::optional<FockTruncation> trunc) {
  auto [e, p11] = ips_ensemble(p, trunc.value_or(FockTruncation::for_state(p)));
  TwoModeDensity rho = e.density();
  rho.validate(0.0);
  return {std::move(rho), p11};
}

OperatorBoundResult operator_bound_check(const StateSpec& state, const DetectorParams& det,
                                         const DisplacementQuad& quad,
                                         const FockTruncation& trunc) {
  const int n = trunc.n_max + 1;
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  auto observable = [&](Complex z) {
    return MatrixXcd(id - 2.0 * displaced_no_click(det, z, trunc.n_max));
  };
  const MatrixXcd a0 = observable(quad.alpha), a1 = observable(quad.alpha_p);
  const MatrixXcd b0 = observable(quad.beta), b1 = observable(quad.beta_p);
  auto kron = [](const MatrixXcd& x, const MatrixXcd& y) {
    MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  const MatrixXcd bell = kron(a0, b0) + kron(a1, b0) + kron(a0, b1) - kron(a1, b1);
  const MatrixXcd sq = bell * bell;

  auto anti = [](const MatrixXcd& x, const MatrixXcd& y) { return MatrixXcd(x * y + y * x); };
  auto comm = [](const MatrixXcd& x, const MatrixXcd& y) { return MatrixXcd(x * y - y * x); };
  const MatrixXcd a00 = a0 * a0, a11 = a1 * a1, b00 = b0 * b0, b11 = b1 * b1;
  const MatrixXcd expansion = kron(a00 + a11, b00 + b11) + kron(a00 - a11, anti(b0, b1)) +
                              kron(anti(a0, a1), b00 - b11) - kron(comm(a0, a1), comm(b0, b1));

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sq, Eigen::EigenvaluesOnly);

  const PureEnsemble e = oracle_state(state, trunc);
  double expectation = 0.0;
  for (std::size_t i = 0; i < e.kets.size(); ++i) {
    Eigen::VectorXcd v(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) v(a * n + b) = e.kets[i](a, b);
    expectation += e.weights[i] * (v.adjoint() * bell * v)(0, 0).real();
  }
  return {es.eigenvalues().maxCoeff(), expectation, (sq - expansion).cwiseAbs().maxCoeff()};
}

std::vector<double> observable_spectrum(const DetectorParams& det, int n_max) {
  const PovmWeights w = povm_fock_weights(det, n_max);
  std::vector<double> out;
  for (double x : w.no_click) out.push_back(1.0 - 2.0 * x);
  return out;
}

}  // namespace onoff

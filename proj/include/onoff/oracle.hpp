#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "onoff/bell.hpp"
#include "onoff/common.hpp"
#include "onoff/detector.hpp"
#include "onoff/states.hpp"

namespace onoff {

inline constexpr double kMaxTailBound = 1e-10;

/// Per-mode photon cutoff and the probability mass it discards.
struct FockTruncation {
  int n_max = 32;
  double tail_bound = 0.0;

  /// 32 photons per mode, raised until the twin-beam tail tanh^{2(n+1)} r is
  /// below 1e-10; IPS states start at 20.
  static FockTruncation for_state(const StateSpec& state);
};

/// Density matrix indexed by n1 (n_max + 1) + n2.
class TwoModeDensity {
 public:
  TwoModeDensity(int n_max, Eigen::MatrixXcd matrix);

  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return matrix_; }
  [[nodiscard]] double trace() const { return matrix_.trace().real(); }

  /// Hermitian to 1e-12, trace in [1 - tail_bound, 1], eigenvalues >= -1e-10.
  /// Throws DomainError otherwise.
  void validate(double tail_bound) const;

 private:
  int n_max_;
  Eigen::MatrixXcd matrix_;
};

/// Mixture sum_i w_i |psi_i><psi_i|, each psi_i stored as coefficients C(n1, n2).
struct PureEnsemble {
  int n_max = 0;
  std::vector<double> weights;
  std::vector<Eigen::MatrixXcd> kets;

  [[nodiscard]] double trace() const;
  [[nodiscard]] TwoModeDensity density() const;
};

/// Fock-space construction of the state, independent of the phase-space formulas.
[[nodiscard]] PureEnsemble oracle_state(const StateSpec& state, const FockTruncation& trunc);

/// <m|D(alpha)|n> for m, n <= n_max. Throws CutoffError unless |alpha|^2 e / n_max < 1.
[[nodiscard]] Eigen::MatrixXcd displacement_matrix(Complex alpha, int n_max);

/// D(alpha) Pi_0 D(alpha)^dag restricted to n <= n_max, with the inner photon
/// sum carried well past the cutoff.
[[nodiscard]] Eigen::MatrixXcd displaced_no_click(const DetectorParams& det, Complex alpha,
                                                  int n_max);

/// I, G, Y by matrix algebra. Any dark-count model.
[[nodiscard]] Primitives oracle_primitives(const StateSpec& state, const DetectorParams& det,
                                           Complex alpha, Complex beta,
                                           std::optional<FockTruncation> trunc = std::nullopt);

struct IpsOracleResult {
  TwoModeDensity density;
  double p11;
};

/// Twin beam, two beam splitters of transmissivity T onto vacuum ancillas, click
/// weights 1 - (1 - eps)^k on each ancilla level, normalized.
/// Throws DegenerateError when p11 < 1e-12.
[[nodiscard]] IpsOracleResult ips_oracle_state(const IpsParams& p,
                                               std::optional<FockTruncation> trunc = std::nullopt);

struct OperatorBoundResult {
  double norm_sq;             // largest eigenvalue of the squared Bell operator
  double expectation;         // <B> in the truncated state
  double expansion_residual;  // max |B^2 - commutator expansion| entry
};

/// Builds O(z) = 1 - 2 D(z) Pi_0 D(z)^dag on each mode, the Bell operator and its
/// square, and eigen-solves it. Cost grows as (n_max + 1)^6; keep n_max small.
[[nodiscard]] OperatorBoundResult operator_bound_check(const StateSpec& state,
                                                       const DetectorParams& det,
                                                       const DisplacementQuad& quad,
                                                       const FockTruncation& trunc);

/// Eigenvalues 1 - 2 w_n of O(0).
[[nodiscard]] std::vector<double> observable_spectrum(const DetectorParams& det, int n_max);

}  // namespace onoff

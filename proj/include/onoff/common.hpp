#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace onoff {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTsirelson = 2.8284271247461900976;  // 2*sqrt(2)

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Valid input, but the requested path is not implemented for it.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fock-space truncation too small for the requested accuracy.
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on an event of (numerically) zero probability.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Click-free probabilities entering the correlation function:
/// joint no-click I(alpha, beta) and marginals G(alpha), Y(beta).
struct Primitives {
  double joint = 0.0;   // I
  double first = 0.0;   // G
  double second = 0.0;  // Y

  /// E = 1 + 4I - 2(G + Y).
  [[nodiscard]] double correlation() const { return 1.0 + 4.0 * joint - 2.0 * (first + second); }
};

}  // namespace onoff

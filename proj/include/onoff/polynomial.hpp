#pragma once

#include <array>
#include <map>

#include "onoff/common.hpp"

namespace onoff {

/// Exponents of z, conj(z), w, conj(w).
using Monomial = std::array<int, 4>;

/// Sparse polynomial in (z, z*, w, w*) with complex coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Complex constant) {
    if (constant != Complex{}) terms_[Monomial{0, 0, 0, 0}] = constant;
  }

  static Polynomial monomial(Monomial m, Complex coeff = 1.0) {
    Polynomial p;
    if (coeff != Complex{}) p.terms_[m] = coeff;
    return p;
  }
  static Polynomial z() { return monomial({1, 0, 0, 0}); }
  static Polynomial zc() { return monomial({0, 1, 0, 0}); }
  static Polynomial w() { return monomial({0, 0, 1, 0}); }
  static Polynomial wc() { return monomial({0, 0, 0, 1}); }

  [[nodiscard]] const std::map<Monomial, Complex>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  [[nodiscard]] int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[0] + m[1] + m[2] + m[3]);
    return d;
  }

  /// True when no term involves w or w*.
  [[nodiscard]] bool first_mode_only() const {
    for (const auto& [m, c] : terms_)
      if (m[2] != 0 || m[3] != 0) return false;
    return true;
  }

  [[nodiscard]] Complex operator()(Complex zv, Complex wv) const {
    Complex sum{};
    const Complex vars[4] = {zv, std::conj(zv), wv, std::conj(wv)};
    for (const auto& [m, c] : terms_) {
      Complex t = c;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < m[i]; ++k) t *= vars[i];
      sum += t;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_)
        out.add_term({ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]}, ca * cb);
    return out;
  }

 private:
  void add_term(const Monomial& m, Complex c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }

  std::map<Monomial, Complex> terms_;
};

}  // namespace onoff

#include <cmath>

#include "doctest.h"
#include "onoff/search.hpp"

using namespace onoff;

namespace {

SearchConfig config_for(const StateSpec& s) {
  SearchConfig c;
  c.scheme = scheme_family(natural_scheme(s));
  c.j = {0.0, 0.5, 51};
  return c;
}

}  // namespace

TEST_CASE("axis and config validation") {
  SearchConfig c;
  c.j = {0.0, 0.5, 2};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.j = {0.5, 0.0, 10};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.j = {0.0, 0.5, 10};
  c.refine_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.refine_tol = 1e-9;
  c.scheme = SchemeFamily::TwoPhoton;
  c.kappa_axis = Axis{2.0, 4.0, 5};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.kappa_axis.reset();
  c.state_axis = Axis{0.0, 1.0, 5};
  CHECK_THROWS_AS((void)maximize_bell(BellPsi{}, DetectorParams(1.0), c), DomainError);
}

TEST_CASE("state parameters") {
  CHECK(*state_parameter(Twb{0.3}) == 0.3);
  CHECK(*state_parameter(UnbalancedPhi{0.2}) == 0.2);
  CHECK_FALSE(state_parameter(BellPsi{}).has_value());
  CHECK(std::get<IpsParams>(with_state_parameter(IpsParams{0.1, 0.8, 0.7}, 0.5)).r == 0.5);
  CHECK(std::get<IpsParams>(with_state_parameter(IpsParams{0.1, 0.8, 0.7}, 0.5)).ips_eff == 0.7);
  CHECK_THROWS_AS((void)with_state_parameter(TwoPhoton{}, 0.5), DomainError);
}

TEST_CASE("Bell-state optimum") {
  const StateSpec s = BellPhi{Sign::Plus};
  const auto r = maximize_bell(s, DetectorParams(1.0), config_for(s));
  CHECK(r.bell == doctest::Approx(2.68).epsilon(0.004));
  CHECK(r.j == doctest::Approx(0.17).epsilon(0.06));
  CHECK(r.violation);
  CHECK(std::abs(r.bell) >= r.grid_best);
  // Origin symmetry.
  CHECK(bell_parameter(s, DetectorParams(1.0), to_quad(Opposite{-r.j, r.kappa})) ==
        doctest::Approx(r.bell).epsilon(1e-12));
}

TEST_CASE("refinement never loses to the grid and is deterministic") {
  for (const StateSpec& s : {StateSpec{BellPsi{}}, StateSpec{TwoPhoton{}}, StateSpec{Twb{0.5}}}) {
    for (double eta : {1.0, 0.9}) {
      const auto a = maximize_bell(s, DetectorParams(eta), config_for(s));
      const auto b = maximize_bell(s, DetectorParams(eta), config_for(s));
      CHECK(std::abs(a.bell) >= a.grid_best);
      CHECK(a.bell == b.bell);
      CHECK(a.j == b.j);
    }
  }
}

TEST_CASE("joint search over the twin-beam squeezing") {
  SearchConfig c = config_for(Twb{});
  c.state_axis = Axis{0.0, 1.5, 31};
  const auto r = maximize_bell(Twb{0.1}, DetectorParams(1.0), c);
  CHECK(r.bell == doctest::Approx(2.45).epsilon(0.004));
  CHECK(r.j == doctest::Approx(0.16).epsilon(0.0625));
  CHECK(*state_parameter(r.state) == doctest::Approx(0.74).epsilon(0.0135));
}

TEST_CASE("kappa re-optimized at unit efficiency") {
  for (const StateSpec& s : {StateSpec{BellPsi{}}, StateSpec{BellPhi{}}, StateSpec{Twb{0.74}}}) {
    SearchConfig c = config_for(s);
    c.kappa_axis = Axis{1.5, 5.0, 15};
    const auto r = maximize_bell(s, DetectorParams(1.0), c);
    CHECK(r.kappa >= 3.0);
    CHECK(r.kappa <= 3.7);
    const auto fixed = maximize_bell(s, DetectorParams(1.0), config_for(s));
    CHECK(std::abs(r.bell) >= std::abs(fixed.bell) - 1e-9);
  }
}

TEST_CASE("flat landscape and missing violation") {
  SearchConfig c = config_for(BellPsi{});
  c.j = {0.0, 1e-12, 5};
  const auto r = maximize_bell(BellPsi{}, DetectorParams(1.0), c);
  CHECK_FALSE(r.violation);
  CHECK(r.diagnostic.find("flat") != std::string::npos);

  ThresholdConfig tc;
  tc.search = config_for(Twb{});
  const auto t = threshold_eta(Twb{0.0}, tc);
  CHECK_FALSE(t.eta_star.has_value());
  CHECK(t.diagnostic.find("no violation") != std::string::npos);
}

TEST_CASE("threshold protocols") {
  const StateSpec s = BellPsi{};
  ThresholdConfig tc;
  tc.search = config_for(s);
  const auto scheme = threshold_eta(s, tc);
  REQUIRE(scheme.eta_star.has_value());
  CHECK(*scheme.eta_star == doctest::Approx(0.836).epsilon(0.006));
  tc.protocol = ThresholdProtocol::FixedQuad;
  const auto quad = threshold_eta(s, tc);
  REQUIRE(quad.eta_star.has_value());
  // Freezing j can only make the violation disappear earlier.
  CHECK(*quad.eta_star >= *scheme.eta_star - 5e-4);
  tc.eta_lo = 0.95;
  tc.protocol = ThresholdProtocol::FixedScheme;
  CHECK_FALSE(threshold_eta(s, tc).eta_star.has_value());
}

TEST_CASE("complex refinement") {
  const auto seed = to_quad(Opposite{0.17});
  const auto r = maximize_bell_complex(BellPhi{}, DetectorParams(0.9), seed, 3, 4, 2000);
  CHECK(std::abs(r.bell) >= std::abs(r.seed_bell) - 1e-12);
  CHECK(std::abs(r.bell) <= kTsirelson);
  const auto again = maximize_bell_complex(BellPhi{}, DetectorParams(0.9), seed, 3, 4, 2000);
  CHECK(again.bell == r.bell);
}

TEST_CASE("IPS dependence on transmissivity and subtraction efficiency") {
  const DetectorParams ideal(1.0);
  const auto q = to_quad(Opposite{0.16});
  double prev = -10.0;
  for (double t : {0.8, 0.9, 0.95, 0.9999}) {
    const double b = bell_parameter(IpsParams{0.39, t, 1.0}, ideal, q);
    CHECK(b >= prev);
    prev = b;
  }
  const double h = 1e-4;
  auto b = [&](double t, double e) { return bell_parameter(IpsParams{0.39, t, e}, ideal, q); };
  const double d_t = (b(0.95 + h, 0.95) - b(0.95 - h, 0.95)) / (2 * h);
  const double d_e = (b(0.95, 0.95 + h) - b(0.95, 0.95 - h)) / (2 * h);
  CHECK(std::abs(d_t) > std::abs(d_e));
}

#include "onoff/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace onoff {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kWorst = -std::numeric_limits<double>::infinity();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;  // value to maximize

struct Box {
  Point lo, hi;
  [[nodiscard]] Point clamp(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  }
};

struct Vertex {
  Point x;
  double f;  // maximized
};

// Maximizes f by reflect/expand/contract/shrink with coefficients 1, 2, 0.5, 0.5.
Vertex nelder_mead(const Objective& f, const Point& start, const Point& step,
                   const std::optional<Box>& box, double ftol, int max_iters) {
  const std::size_t d = start.size();
  auto clamp = [&](Point x) { return box ? box->clamp(std::move(x)) : x; };
  auto eval = [&](Point x) {
    x = clamp(std::move(x));
    const double v = f(x);
    return Vertex{std::move(x), v};
  };
  std::vector<Vertex> s;
  s.push_back(eval(start));
  for (std::size_t i = 0; i < d; ++i) {
    Point x = start;
    x[i] += step[i];
    if (box && x[i] > box->hi[i]) x[i] = start[i] - step[i];
    s.push_back(eval(x));
  }
  auto better = [](const Vertex& a, const Vertex& b) { return a.f > b.f; };
  for (int it = 0; it < max_iters; ++it) {
    std::stable_sort(s.begin(), s.end(), better);
    double diameter = 0.0;
    for (std::size_t i = 1; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k) diameter = std::max(diameter, std::abs(s[i].x[k] - s[0].x[k]));
    if (std::abs(s[0].f - s[d].f) < ftol && diameter < 1e-7) break;

    Point centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) centroid[k] += s[i].x[k] / static_cast<double>(d);
    auto along = [&](double t) {
      Point x(d);
      for (std::size_t k = 0; k < d; ++k) x[k] = centroid[k] + t * (s[d].x[k] - centroid[k]);
      return eval(x);
    };
    const Vertex r = along(-1.0);
    if (r.f > s[0].f) {
      const Vertex e = along(-2.0);
      s[d] = e.f > r.f ? e : r;
    } else if (r.f > s[d - 1].f) {
      s[d] = r;
    } else {
      const Vertex c = r.f > s[d].f ? along(-0.5) : along(0.5);
      if (c.f > std::max(r.f, s[d].f)) {
        s[d] = c;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          Point x(d);
          for (std::size_t k = 0; k < d; ++k) x[k] = s[0].x[k] + 0.5 * (s[i].x[k] - s[0].x[k]);
          s[i] = eval(x);
        }
      }
    }
  }
  std::stable_sort(s.begin(), s.end(), better);
  return s[0];
}

struct Layout {
  bool has_kappa;
  bool has_state;
  [[nodiscard]] std::size_t dims() const { return 1 + (has_kappa ? 1 : 0) + (has_state ? 1 : 0); }
};

struct Decoded {
  StateSpec state;
  double j, kappa;
};

Decoded decode(const StateSpec& base, const SearchConfig& cfg, const Layout& lay, const Point& x) {
  std::size_t i = 1;
  const double kappa = lay.has_kappa ? x[i++] : cfg.kappa;
  const StateSpec s = lay.has_state ? with_state_parameter(base, x[i]) : base;
  return {s, x[0], kappa};
}

}  // namespace

void Axis::validate(const char* name) const {
  if (steps < 3) throw DomainError(std::string(name) + " axis needs at least 3 steps");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError(std::string(name) + " axis needs lo < hi");
}

void SearchConfig::validate() const {
  if (scheme == SchemeFamily::Full)
    throw DomainError("the full scheme is searched with maximize_bell_complex");
  j.validate("j");
  if (kappa_axis) {
    if (scheme == SchemeFamily::TwoPhoton)
      throw DomainError("the two-photon scheme has no kappa parameter");
    kappa_axis->validate("kappa");
    if (!(kappa_axis->lo > 0.0)) throw DomainError("kappa axis must stay positive");
  } else if (!(kappa > 0.0)) {
    throw DomainError("kappa must be > 0");
  }
  if (state_axis) state_axis->validate("state parameter");
  if (!(refine_tol > 0.0)) throw DomainError("refine_tol must be > 0");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
}

SchemeFamily scheme_family(const QuadScheme& scheme) {
  return std::visit(Overloaded{
                        [](const Opposite&) { return SchemeFamily::Opposite; },
                        [](const Aligned&) { return SchemeFamily::Aligned; },
                        [](const TwoPhotonScheme&) { return SchemeFamily::TwoPhoton; },
                        [](const Full&) { return SchemeFamily::Full; },
                    },
                    scheme);
}

QuadScheme make_scheme(SchemeFamily family, double j, double kappa) {
  switch (family) {
    case SchemeFamily::Opposite:
      return Opposite{j, kappa};
    case SchemeFamily::Aligned:
      return Aligned{j, kappa};
    case SchemeFamily::TwoPhoton:
      return TwoPhotonScheme{j};
    case SchemeFamily::Full:
      break;
  }
  throw DomainError("the full scheme is not a one-parameter family");
}

std::optional<double> state_parameter(const StateSpec& state) {
  return std::visit(Overloaded{
                        [](const Twb& s) -> std::optional<double> { return s.r; },
                        [](const IpsParams& s) -> std::optional<double> { return s.r; },
                        [](const UnbalancedPsi& s) -> std::optional<double> { return s.phi; },
                        [](const UnbalancedPhi& s) -> std::optional<double> { return s.phi; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    state);
}

StateSpec with_state_parameter(const StateSpec& state, double value) {
  return std::visit(Overloaded{
                        [&](Twb s) -> StateSpec {
                          s.r = value;
                          return s;
                        },
                        [&](IpsParams s) -> StateSpec {
                          s.r = value;
                          return s;
                        },
                        [&](UnbalancedPsi s) -> StateSpec {
                          s.phi = value;
                          return s;
                        },
                        [&](UnbalancedPhi s) -> StateSpec {
                          s.phi = value;
                          return s;
                        },
                        [&](const auto&) -> StateSpec {
                          throw DomainError("state " + state_name(state) +
                                            " has no tunable parameter");
                        },
                    },
                    state);
}

SearchResult maximize_bell(const StateSpec& state, const DetectorParams& det,
                           const SearchConfig& config) {
  config.validate();
  validate(state);
  const Layout lay{config.kappa_axis.has_value(), config.state_axis.has_value()};
  if (lay.has_state && !state_parameter(state))
    throw DomainError("state " + state_name(state) + " has no tunable parameter");

  std::vector<Axis> axes{config.j};
  if (lay.has_kappa) axes.push_back(*config.kappa_axis);
  if (lay.has_state) axes.push_back(*config.state_axis);

  // Signed B at x, or NaN where the state is degenerate.
  auto bell_at = [&](const Point& x) {
    const Decoded d = decode(state, config, lay, x);
    try {
      return bell_parameter(d.state, det, to_quad(make_scheme(config.scheme, d.j, d.kappa)));
    } catch (const DegenerateError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  auto score = [&](const Point& x) {
    const double b = bell_at(x);
    return std::isnan(b) ? kWorst : std::abs(b);
  };

  std::size_t total = 1;
  for (const auto& a : axes) total *= static_cast<std::size_t>(a.steps);
  auto grid_point = [&](std::size_t idx) {
    Point x(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const auto steps = static_cast<std::size_t>(axes[k].steps);
      x[k] = axes[k].at(static_cast<int>(idx % steps));
      idx /= steps;
    }
    return x;
  };
  std::vector<double> scores(total);
  parallel_for(total, [&](std::size_t i) { scores[i] = score(grid_point(i)); });

  std::size_t best = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = kWorst;
  for (std::size_t i = 0; i < total; ++i) {
    if (scores[i] == kWorst) continue;
    lo = std::min(lo, scores[i]);
    hi = std::max(hi, scores[i]);
    const double jb = std::abs(grid_point(best)[0]), ji = std::abs(grid_point(i)[0]);
    if (scores[best] == kWorst || scores[i] > scores[best] + 1e-15 ||
        (std::abs(scores[i] - scores[best]) <= 1e-15 && ji < jb))
      best = i;
  }
  if (scores[best] == kWorst)
    throw DegenerateError("every grid point of the search is degenerate");

  Vertex top{grid_point(best), scores[best]};
  std::string diagnostic;
  if (hi - lo < config.refine_tol) {
    diagnostic = "flat landscape: |B| varies by less than refine_tol across the grid";
  } else {
    Point step(axes.size()), blo(axes.size()), bhi(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) {
      step[k] = axes[k].spacing();
      blo[k] = axes[k].lo;
      bhi[k] = axes[k].hi;
    }
    const Vertex refined =
        nelder_mead(score, top.x, step, Box{blo, bhi}, config.refine_tol, config.max_iters);
    if (refined.f > top.f) top = refined;
  }

  const Decoded d = decode(state, config, lay, top.x);
  SearchResult out{d.state, to_quad(make_scheme(config.scheme, d.j, d.kappa)), d.j, d.kappa,
                   bell_at(top.x), scores[best], false, diagnostic};
  out.violation = std::abs(out.bell) > 2.0 + kViolationMargin;
  if (!out.violation && out.diagnostic.empty()) out.diagnostic = "no violation: max |B| <= 2";
  return out;
}

ComplexSearchResult maximize_bell_complex(const StateSpec& state, const DetectorParams& det,
                                          const DisplacementQuad& seed, std::uint64_t rng_seed,
                                          int perturbations, int max_iters) {
  if (perturbations < 0) throw DomainError("perturbations must be >= 0");
  auto to_point = [](const DisplacementQuad& q) {
    return Point{q.alpha.real(), q.alpha.imag(), q.beta.real(),   q.beta.imag(),
                 q.alpha_p.real(), q.alpha_p.imag(), q.beta_p.real(), q.beta_p.imag()};
  };
  auto to_quad_pt = [](const Point& x) {
    return DisplacementQuad{{x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]}, {x[6], x[7]}};
  };
  auto score = [&](const Point& x) {
    try {
      return std::abs(bell_parameter(state, det, to_quad_pt(x)));
    } catch (const DegenerateError&) {
      return kWorst;
    }
  };

  std::vector<Point> starts{to_point(seed)};
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  for (int i = 0; i < perturbations; ++i) {
    Point x = starts[0];
    for (double& v : x) v += jitter(rng);
    starts.push_back(x);
  }
  const Box box{Point(8, -3.0), Point(8, 3.0)};
  std::vector<Vertex> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    results[i] = nelder_mead(score, starts[i], Point(8, 0.05), box, 1e-12, max_iters);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].f > results[best].f) best = i;

  const DisplacementQuad q = to_quad_pt(results[best].x);
  return {q, bell_parameter(state, det, q), bell_parameter(state, det, seed)};
}

ThresholdResult threshold_eta(const StateSpec& state, const ThresholdConfig& config) {
  if (!(config.eta_lo > 0.0 && config.eta_lo < 1.0))
    throw DomainError("eta_lo must lie in (0, 1)");
  if (!(config.tol > 0.0)) throw DomainError("threshold tolerance must be > 0");
  auto detector = [&](double eta) { return DetectorParams(eta, config.dark, config.background); };

  ThresholdResult out;
  out.at_unit = maximize_bell(state, detector(1.0), config.search);
  if (!out.at_unit.violation) {
    out.diagnostic = "no threshold: no violation at eta = 1";
    return out;
  }

  SearchConfig fixed = config.search;
  fixed.kappa = out.at_unit.kappa;
  fixed.kappa_axis.reset();
  fixed.state_axis.reset();

  auto violates = [&](double eta) {
    switch (config.protocol) {
      case ThresholdProtocol::FixedQuad:
        return std::abs(bell_parameter(out.at_unit.state, detector(eta), out.at_unit.quad)) >
               2.0 + kViolationMargin;
      case ThresholdProtocol::FixedScheme:
        return maximize_bell(out.at_unit.state, detector(eta), fixed).violation;
      case ThresholdProtocol::Reoptimize:
        return maximize_bell(state, detector(eta), config.search).violation;
    }
    return false;
  };

  if (violates(config.eta_lo)) {
    out.diagnostic = "violation persists down to eta_lo = " + std::to_string(config.eta_lo);
    return out;
  }
  double lo = config.eta_lo, hi = 1.0;
  while (hi - lo > config.tol) {
    const double mid = 0.5 * (lo + hi);
    (violates(mid) ? hi : lo) = mid;
  }
  out.eta_star = 0.5 * (lo + hi);
  return out;
}

}  // namespace onoff

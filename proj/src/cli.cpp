#include "onoff/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "onoff/oracle.hpp"

namespace onoff::cli {
namespace {

using nlohmann::json;

const std::map<std::string, Command> kCommands = {
    {"scan", Command::Scan},
    {"optimize", Command::Optimize},
    {"threshold", Command::Threshold},
    {"oracle-check", Command::OracleCheck},
    {"bound", Command::Bound},
};

const Axis kDefaultJAxis{0.0, 0.5, 51};

std::string background_name(Background b) {
  return b == Background::Thermal ? "thermal" : "poissonian";
}

Background parse_background(const std::string& s) {
  if (s == "thermal") return Background::Thermal;
  if (s == "poissonian") return Background::Poissonian;
  throw UsageError("unknown background '" + s + "' (thermal|poissonian)");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("unknown format '" + s + "' (csv|json)");
}

ThresholdProtocol parse_protocol(const std::string& s) {
  if (s == "fixed-scheme") return ThresholdProtocol::FixedScheme;
  if (s == "fixed-quad") return ThresholdProtocol::FixedQuad;
  if (s == "reoptimize") return ThresholdProtocol::Reoptimize;
  throw UsageError("unknown protocol '" + s + "' (fixed-scheme|fixed-quad|reoptimize)");
}

SchemeFamily parse_scheme(const std::string& s) {
  if (s == "opposite") return SchemeFamily::Opposite;
  if (s == "aligned") return SchemeFamily::Aligned;
  if (s == "two-photon") return SchemeFamily::TwoPhoton;
  if (s == "full") return SchemeFamily::Full;
  throw UsageError("unknown scheme '" + s + "' (opposite|aligned|two-photon|full)");
}

json axis_json(const Axis& a) { return {{"lo", a.lo}, {"hi", a.hi}, {"steps", a.steps}}; }

Axis axis_from_json(const json& j) {
  Axis a{j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("steps").get<int>()};
  for (const auto& [k, v] : j.items())
    if (k != "lo" && k != "hi" && k != "steps") throw UsageError("unknown axis key '" + k + "'");
  return a;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

DetectorParams detector(const RunConfig& c) { return DetectorParams(c.eta, c.dark, c.background); }

std::string parameter_column(const StateSpec& s) {
  return std::holds_alternative<UnbalancedPsi>(s) || std::holds_alternative<UnbalancedPhi>(s)
             ? "phi"
             : "r";
}

SchemeFamily scheme_for(const RunConfig& c, const StateSpec& s) {
  return c.scheme ? parse_scheme(*c.scheme) : scheme_family(natural_scheme(s));
}

SearchConfig search_config(const RunConfig& c, const StateSpec& s) {
  SearchConfig sc;
  sc.scheme = scheme_for(c, s);
  if (sc.scheme == SchemeFamily::Full) sc.scheme = scheme_family(natural_scheme(s));
  sc.j = c.grid.value_or(kDefaultJAxis);
  sc.kappa = c.kappa.value_or(kDefaultKappa);
  sc.kappa_axis = c.kappa_grid;
  sc.state_axis = c.state_grid;
  return sc;
}

double reported(const RunConfig& c, const StateSpec& s, double b) {
  if (c.report_abs) return std::abs(b);
  return negative_convention(s) ? -b : b;
}

std::string bell_column(const RunConfig& c, const StateSpec& s) {
  if (c.report_abs) return "abs_B";
  return negative_convention(s) ? "minus_B" : "B";
}

Table cmd_scan(const RunConfig& c) {
  const StateSpec base = build_state(c);
  const SchemeFamily family = scheme_for(c, base);
  if (family == SchemeFamily::Full)
    throw UsageError("scan needs a one-parameter scheme (opposite|aligned|two-photon)");
  if (c.kappa_grid) throw UsageError("--kappa-grid applies to optimize and threshold only");
  const Axis j = c.grid.value_or(kDefaultJAxis);
  j.validate("j");
  const double kappa = c.kappa.value_or(kDefaultKappa);
  const DetectorParams det = detector(c);

  Table t;
  t.columns = {"j"};
  std::vector<double> params{std::nan("")};
  if (c.state_grid) {
    c.state_grid->validate("state");
    t.columns.push_back(parameter_column(base));
    params.clear();
    for (int i = 0; i < c.state_grid->steps; ++i) params.push_back(c.state_grid->at(i));
  }
  t.columns.push_back(bell_column(c, base));
  for (double p : params) {
    const StateSpec s = std::isnan(p) ? base : with_state_parameter(base, p);
    for (int i = 0; i < j.steps; ++i) {
      const double jv = j.at(i);
      std::vector<Cell> row{jv};
      if (!std::isnan(p)) row.emplace_back(p);
      try {
        row.emplace_back(reported(c, s, bell_parameter(s, det, to_quad(make_scheme(family, jv, kappa)))));
      } catch (const DegenerateError&) {
        row.emplace_back(std::monostate{});
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table cmd_optimize(const RunConfig& c) {
  const StateSpec base = build_state(c);
  const DetectorParams det = detector(c);
  const SearchConfig sc = search_config(c, base);
  const SearchResult r = maximize_bell(base, det, sc);
  const std::optional<double> param = state_parameter(r.state);
  Table t;
  if (scheme_for(c, base) == SchemeFamily::Full) {
    const ComplexSearchResult cx = maximize_bell_complex(r.state, det, r.quad, c.seed);
    t.columns = {"state",    "eta",     "dark",       "alpha_re",  "alpha_im",
                 "beta_re",  "beta_im", "alpha_p_re", "alpha_p_im", "beta_p_re",
                 "beta_p_im", "real_B", bell_column(c, base)};
    const auto& q = cx.quad;
    t.rows.push_back({state_name(base), c.eta, c.dark, q.alpha.real(), q.alpha.imag(),
                      q.beta.real(), q.beta.imag(), q.alpha_p.real(), q.alpha_p.imag(),
                      q.beta_p.real(), q.beta_p.imag(), reported(c, base, cx.seed_bell),
                      reported(c, base, cx.bell)});
    return t;
  }
  t.columns = {"state", "eta",  "dark", "scheme", "j", "kappa", "param", bell_column(c, base),
               "violation", "diagnostic"};
  t.rows.push_back({state_name(base), c.eta, c.dark, scheme_name(make_scheme(sc.scheme, r.j, r.kappa)),
                    r.j, r.kappa, param ? Cell{*param} : Cell{}, reported(c, base, r.bell),
                    std::string(r.violation ? "yes" : "no"), r.diagnostic});
  return t;
}

Table cmd_threshold(const RunConfig& c) {
  const StateSpec base = build_state(c);
  if (scheme_for(c, base) == SchemeFamily::Full)
    throw UsageError("threshold needs a one-parameter scheme");
  ThresholdConfig tc;
  tc.search = search_config(c, base);
  tc.protocol = parse_protocol(c.protocol);
  tc.dark = c.dark;
  tc.background = c.background;
  const ThresholdResult r = threshold_eta(base, tc);
  const std::optional<double> param = state_parameter(r.at_unit.state);
  Table t;
  t.columns = {"state", "protocol", "eta_star", "j_at_unit", "kappa_at_unit", "param_at_unit",
               "B_at_unit", "diagnostic"};
  t.rows.push_back({state_name(base), c.protocol, r.eta_star ? Cell{*r.eta_star} : Cell{},
                    r.at_unit.j, r.at_unit.kappa, param ? Cell{*param} : Cell{},
                    r.at_unit.bell, r.diagnostic});
  return t;
}

CommandResult cmd_oracle_check(const RunConfig& c) {
  const StateSpec s = build_state(c);
  const DetectorParams det = detector(c);
  if (c.dark > 0.0 && c.background == Background::Poissonian)
    throw UsageError("no closed form to check for Poissonian dark counts");
  if (c.points < 1) throw UsageError("--points must be >= 1");
  const double tol = std::holds_alternative<IpsParams>(s) ? 1e-5 : 1e-9;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);

  CommandResult res;
  res.table.columns = {"point", "alpha_re", "alpha_im", "beta_re", "beta_im", "I_closed",
                       "I_oracle", "G_closed", "G_oracle", "Y_closed", "Y_oracle", "max_abs_diff"};
  double worst = -1.0;
  int worst_point = 0;
  for (int i = 0; i < c.points; ++i) {
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    const Primitives cf = primitives(s, det, a, b);
    const Primitives ob = oracle_primitives(s, det, a, b);
    const double diff = std::max({std::abs(cf.joint - ob.joint), std::abs(cf.first - ob.first),
                                  std::abs(cf.second - ob.second)});
    if (diff > worst) {
      worst = diff;
      worst_point = i;
    }
    res.table.rows.push_back({static_cast<double>(i), a.real(), a.imag(), b.real(), b.imag(),
                              cf.joint, ob.joint, cf.first, ob.first, cf.second, ob.second, diff});
  }
  if (worst > tol) {
    res.exit_code = 1;
    res.message = "oracle check failed: point " + std::to_string(worst_point) +
                  " differs by " + format_number(worst) + " (tolerance " + format_number(tol) + ")";
  } else {
    res.message = "oracle check passed: max difference " + format_number(worst);
  }
  return res;
}

Table cmd_bound(const RunConfig& c) {
  if (c.dark > 0.0) throw UsageError("bound requires --dark 0");
  const StateSpec s = build_state(c);
  const SchemeFamily family = scheme_for(c, s);
  if (family == SchemeFamily::Full) throw UsageError("bound needs a one-parameter scheme");
  const Axis j = c.grid.value_or(kDefaultJAxis);
  j.validate("j");
  const double kappa = c.kappa.value_or(kDefaultKappa);
  const DetectorParams det = detector(c);
  Table t;
  t.columns = {"j", "j_prime", bell_column(c, s), "B_max", "tsirelson"};
  for (int i = 0; i < j.steps; ++i) {
    const DisplacementQuad q = to_quad(make_scheme(family, j.at(i), kappa));
    t.rows.push_back({j.at(i), q.alpha_p.real(), reported(c, s, bell_parameter(s, det, q)),
                      bell_max_bound(s, det, q), kTsirelson});
  }
  return t;
}

std::string plot_stub(const RunConfig& c) {
  const std::string data = c.out.value_or("data.csv");
  return "import csv\n"
         "import matplotlib.pyplot as plt\n\n"
         "with open(\"" + data + "\") as f:\n"
         "    rows = list(csv.DictReader(f))\n"
         "cols = list(rows[0].keys())\n"
         "x = [float(r[cols[0]]) for r in rows]\n"
         "y = [float(r[cols[-1]]) if r[cols[-1]] else float(\"nan\") for r in rows]\n"
         "plt.plot(x, y)\n"
         "plt.xlabel(cols[0])\n"
         "plt.ylabel(cols[-1])\n"
         "plt.axhline(2.0, linestyle=\"--\")\n"
         "plt.show()\n";
}

// Option name -> JSON key.
std::string key_of(const std::string& option) {
  std::string k = option;
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  for (char& ch : k)
    if (ch == '-') ch = '_';
  return k;
}

}  // namespace

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "scan";
}

Command parse_command(const std::string& name) {
  const auto it = kCommands.find(name);
  if (it == kCommands.end()) throw UsageError("unknown command '" + name + "'");
  return it->second;
}

Axis parse_axis(const std::string& text) {
  std::istringstream is(text);
  std::string lo, hi, steps;
  if (!std::getline(is, lo, ':') || !std::getline(is, hi, ':') || !std::getline(is, steps) ||
      is.rdbuf()->in_avail() > 0)
    throw UsageError("grid must be lo:hi:steps, got '" + text + "'");
  try {
    std::size_t p1 = 0, p2 = 0, p3 = 0;
    Axis a{std::stod(lo, &p1), std::stod(hi, &p2), std::stoi(steps, &p3)};
    if (p1 != lo.size() || p2 != hi.size() || p3 != steps.size()) throw std::invalid_argument("");
    a.validate("grid");
    return a;
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const std::exception&) {
    throw UsageError("grid must be lo:hi:steps, got '" + text + "'");
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  j["state"] = c.state;
  if (c.r) j["r"] = *c.r;
  if (c.phi) j["phi"] = *c.phi;
  if (c.transmissivity) j["transmissivity"] = *c.transmissivity;
  if (c.ips_eff) j["ips_eff"] = *c.ips_eff;
  j["eta"] = c.eta;
  j["dark"] = c.dark;
  j["background"] = background_name(c.background);
  if (c.scheme) j["scheme"] = *c.scheme;
  if (c.kappa) j["kappa"] = *c.kappa;
  if (c.grid) j["grid"] = axis_json(*c.grid);
  if (c.kappa_grid) j["kappa_grid"] = axis_json(*c.kappa_grid);
  if (c.state_grid) j["state_grid"] = axis_json(*c.state_grid);
  j["protocol"] = c.protocol;
  j["points"] = c.points;
  j["seed"] = c.seed;
  if (c.out) j["out"] = *c.out;
  j["format"] = c.format == Format::Csv ? "csv" : "json";
  j["report_abs"] = c.report_abs;
  if (c.plot_script) j["plot_script"] = *c.plot_script;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("run configuration must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = parse_command(v.get<std::string>());
      else if (key == "state") c.state = v.get<std::string>();
      else if (key == "r") c.r = v.get<double>();
      else if (key == "phi") c.phi = v.get<double>();
      else if (key == "transmissivity") c.transmissivity = v.get<double>();
      else if (key == "ips_eff") c.ips_eff = v.get<double>();
      else if (key == "eta") c.eta = v.get<double>();
      else if (key == "dark") c.dark = v.get<double>();
      else if (key == "background") c.background = parse_background(v.get<std::string>());
      else if (key == "scheme") c.scheme = v.get<std::string>();
      else if (key == "kappa") c.kappa = v.get<double>();
      else if (key == "grid") c.grid = axis_from_json(v);
      else if (key == "kappa_grid") c.kappa_grid = axis_from_json(v);
      else if (key == "state_grid") c.state_grid = axis_from_json(v);
      else if (key == "protocol") c.protocol = v.get<std::string>();
      else if (key == "points") c.points = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = parse_format(v.get<std::string>());
      else if (key == "report_abs") c.report_abs = v.get<bool>();
      else if (key == "plot_script") c.plot_script = v.get<std::string>();
      else throw UsageError("unknown configuration key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

StateSpec build_state(const RunConfig& c) {
  auto reject = [&](std::initializer_list<std::pair<const char*, bool>> flags) {
    for (const auto& [name, given] : flags)
      if (given) throw UsageError(std::string("--") + name + " does not apply to state " + c.state);
  };
  auto need = [&](const std::optional<double>& v, const char* name, bool grid_ok) {
    if (v) return *v;
    if (grid_ok && c.state_grid) return c.state_grid->lo;
    throw UsageError("state " + c.state + " requires --" + name);
  };
  const bool r = c.r.has_value(), phi = c.phi.has_value();
  const bool t = c.transmissivity.has_value(), e = c.ips_eff.has_value();
  StateSpec s;
  if (c.state == "bell-psi-plus" || c.state == "bell-psi-minus" || c.state == "bell-phi-plus" ||
      c.state == "bell-phi-minus" || c.state == "two-photon") {
    reject({{"r", r}, {"phi", phi}, {"transmissivity", t}, {"ips-eff", e}});
    if (c.state_grid) throw UsageError("state " + c.state + " has no parameter to grid");
    if (c.state == "bell-psi-plus") s = BellPsi{Sign::Plus};
    else if (c.state == "bell-psi-minus") s = BellPsi{Sign::Minus};
    else if (c.state == "bell-phi-plus") s = BellPhi{Sign::Plus};
    else if (c.state == "bell-phi-minus") s = BellPhi{Sign::Minus};
    else s = TwoPhoton{};
  } else if (c.state == "unbal-psi" || c.state == "unbal-phi") {
    reject({{"r", r}, {"transmissivity", t}, {"ips-eff", e}});
    const double angle = need(c.phi, "phi", true);
    if (c.state == "unbal-psi") s = UnbalancedPsi{angle};
    else s = UnbalancedPhi{angle};
  } else if (c.state == "twb") {
    reject({{"phi", phi}, {"transmissivity", t}, {"ips-eff", e}});
    s = Twb{need(c.r, "r", true)};
  } else if (c.state == "ips") {
    reject({{"phi", phi}});
    s = IpsParams{need(c.r, "r", true), need(c.transmissivity, "transmissivity", false),
                  need(c.ips_eff, "ips-eff", false)};
  } else {
    throw UsageError("unknown state '" + c.state + "'");
  }
  try {
    validate(s);
  } catch (const DomainError& ex) {
    throw UsageError(ex.what());
  }
  return s;
}

bool negative_convention(const StateSpec& s) {
  return std::holds_alternative<BellPsi>(s) || std::holds_alternative<UnbalancedPsi>(s) ||
         std::holds_alternative<TwoPhoton>(s);
}

std::string render(const Table& t, Format format) {
  if (format == Format::Json) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const auto& cell : row) {
        if (const auto* d = std::get_if<double>(&cell)) {
          if (std::isnan(*d)) r.push_back(nullptr);
          else r.push_back(*d);
        } else if (const auto* s = std::get_if<std::string>(&cell)) {
          r.push_back(*s);
        } else {
          r.push_back(nullptr);
        }
      }
      rows.push_back(std::move(r));
    }
    return json{{"columns", t.columns}, {"rows", rows}}.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (const auto* d = std::get_if<double>(&row[i])) out += format_number(*d);
      else if (const auto* s = std::get_if<std::string>(&row[i])) out += csv_field(*s);
    }
    out += "\n";
  }
  return out;
}

CommandResult run(const RunConfig& c) {
  try {
    switch (c.command) {
      case Command::Scan:
        return {cmd_scan(c), 0, ""};
      case Command::Optimize:
        return {cmd_optimize(c), 0, ""};
      case Command::Threshold:
        return {cmd_threshold(c), 0, ""};
      case Command::OracleCheck:
        return cmd_oracle_check(c);
      case Command::Bound:
        return {cmd_bound(c), 0, ""};
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const UnsupportedError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown command");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHSH and CH Bell tests with displaced on/off photodetection"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path, background = "thermal", format = "csv";
  std::string grid, kappa_grid, state_grid;
  double r = 0, phi = 0, transmissivity = 0, ips_eff = 0, kappa = 0;
  std::string scheme, out_path, plot_script;

  std::vector<CLI::App*> subs;
  for (const auto& [name, cmd] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, "");
    subs.push_back(sub);
    sub->add_option("--config", config_path, "JSON run file");
    sub->add_option("--state", flags.state, "state family");
    sub->add_option("--eta", flags.eta, "detector efficiency");
    sub->add_option("--dark", flags.dark, "mean dark counts");
    sub->add_option("--background", background, "thermal|poissonian");
    sub->add_option("--scheme", scheme, "opposite|aligned|two-photon|full");
    sub->add_option("--kappa", kappa, "ratio j'/j");
    sub->add_option("--grid", grid, "j axis lo:hi:steps");
    sub->add_option("--kappa-grid", kappa_grid, "kappa axis lo:hi:steps");
    sub->add_option("--state-grid", state_grid, "r or phi axis lo:hi:steps");
    sub->add_option("--r", r, "squeezing");
    sub->add_option("--phi", phi, "superposition angle");
    sub->add_option("--transmissivity", transmissivity, "IPS beam-splitter transmissivity");
    sub->add_option("--ips-eff", ips_eff, "IPS detector efficiency");
    sub->add_option("--protocol", flags.protocol, "fixed-scheme|fixed-quad|reoptimize");
    sub->add_option("--points", flags.points, "oracle-check sample points");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv|json");
    sub->add_flag("--report-abs", flags.report_abs, "report |B|");
    sub->add_option("--plot-script", plot_script, "write a plotting script stub");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    flags.command = parse_command(sub->get_name());
    auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
    if (given("--r")) flags.r = r;
    if (given("--phi")) flags.phi = phi;
    if (given("--transmissivity")) flags.transmissivity = transmissivity;
    if (given("--ips-eff")) flags.ips_eff = ips_eff;
    if (given("--kappa")) flags.kappa = kappa;
    if (given("--scheme")) flags.scheme = scheme;
    if (given("--grid")) flags.grid = parse_axis(grid);
    if (given("--kappa-grid")) flags.kappa_grid = parse_axis(kappa_grid);
    if (given("--state-grid")) flags.state_grid = parse_axis(state_grid);
    if (given("--out")) flags.out = out_path;
    if (given("--plot-script")) flags.plot_script = plot_script;
    flags.background = parse_background(background);
    flags.format = parse_format(format);

    RunConfig config = flags;
    if (given("--config")) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read " + config_path);
      json file;
      try {
        file = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError(config_path + ": " + e.what());
      }
      if (!file.is_object()) throw UsageError(config_path + ": expected a JSON object");
      if (file.contains("command") && file["command"] != sub->get_name())
        throw UsageError(config_path + " is a '" + file["command"].get<std::string>() +
                         "' run, not '" + sub->get_name() + "'");
      const json from_flags = to_json(flags);
      for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_name();
        if (name == "--config" || name == "--help" || opt->count() == 0) continue;
        const std::string key = key_of(name);
        if (file.contains(key))
          throw UsageError(name + " conflicts with '" + key + "' in " + config_path);
        file[key] = from_flags.at(key);
      }
      file["command"] = sub->get_name();
      config = config_from_json(file);
    }

    const CommandResult res = run(config);
    const std::string text = render(res.table, config.format);
    if (config.out) {
      std::ofstream f(*config.out, std::ios::binary);
      if (!f) throw UsageError("cannot write " + *config.out);
      f << text;
    } else {
      out << text;
    }
    if (config.plot_script) {
      std::ofstream f(*config.plot_script, std::ios::binary);
      if (!f) throw UsageError("cannot write " + *config.plot_script);
      f << plot_stub(config);
    }
    if (!res.message.empty()) err << res.message << "\n";
    return res.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace onoff::cli

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "milne/cli/verify.hpp"
#include "milne/core/error.hpp"
#include "milne/milne/continuation.hpp"
#include "milne/milne/energy_integral.hpp"
#include "milne/milne/wkb.hpp"
#include "milne/models/model.hpp"
#include "milne/models/tabulated.hpp"
#include "milne/oracle/shooting.hpp"
#include "milne/quantize/spectrum.hpp"

namespace milne::cli {

using json = nlohmann::ordered_json;

enum Exit : int { ok = 0, config = 1, partial_scan = 2, bracketing = 3, verification = 4 };

/// Parses "3.5", "-1e-3" or "15/2". Errors name the flag.
inline double parse_number(const std::string& flag, const std::string& text) {
  auto one = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
      fail(ErrorKind::ConfigError, flag + ": '" + text + "' is not a number");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const double d = one(text.substr(slash + 1));
  if (d == 0.0) fail(ErrorKind::ConfigError, flag + ": zero denominator in '" + text + "'");
  return one(text.substr(0, slash)) / d;
}

inline std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Rounded to 15 significant digits so the serializer's shortest form has at most 15.
inline json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt15(v).c_str(), nullptr);
}

struct Config {
  std::string model = "harmonic";
  std::string omega = "1/2", alpha = "1/8", beta = "1/4", dyson = "0";
  std::string kappa = "2", lambda, sector = "minus";
  std::string table;
  std::string backend;
  std::string out;
  std::string format;
  int jobs = 1;
  // scan
  std::string emin, emax;
  int steps = 101;
  // spectrum / compare
  int levels = 6;
  std::string tol = "1e-10";
  // verify
  std::string suite;
  std::string energy;
};

inline models::ModelSpec build_model(const Config& c) {
  using namespace models;
  auto sector = [&] {
    if (c.sector == "minus" || c.sector == "-") return Sector::minus;
    if (c.sector == "plus" || c.sector == "+") return Sector::plus;
    fail(ErrorKind::ConfigError, "--sector: expected minus or plus, got '" + c.sector + "'");
  };
  try {
    if (c.model == "swanson") {
      Swanson s;
      s.omega = parse_number("--omega", c.omega);
      s.alpha = parse_number("--alpha", c.alpha);
      s.beta = parse_number("--beta", c.beta);
      s.dyson_lambda = parse_number("--dyson-lambda", c.dyson);
      return make_model(s);
    }
    if (c.model == "pt-pair") {
      return make_model(PoschlTellerPair{parse_number("--kappa", c.kappa),
                                         parse_number("--lambda", c.lambda.empty() ? "3" : c.lambda), sector()});
    }
    if (c.model == "sech-pair") {
      return make_model(SechPair{parse_number("--lambda", c.lambda.empty() ? "15/2" : c.lambda), sector()});
    }
    if (c.model == "harmonic") return make_model(Harmonic{});
    if (c.model == "custom") {
      if (c.table.empty()) fail(ErrorKind::ConfigError, "--table: required for --model custom");
      return make_model(CustomTabulated{std::make_shared<const TabulatedPotential>(read_potential_table(c.table))});
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(ErrorKind::ConfigError, std::string("model parameters: ") + e.what());
  }
  fail(ErrorKind::ConfigError, "--model: unknown model '" + c.model + "'");
}

inline json params_json(const models::ModelSpec& m) {
  json p = json::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, models::Swanson>) {
          p["omega"] = num(v.omega);
          p["alpha"] = num(v.alpha);
          p["beta"] = num(v.beta);
          p["dyson_lambda"] = num(v.dyson_lambda);
          p["mu_plus"] = num(v.mu_plus);
          p["mu_minus"] = num(v.mu_minus);
        } else if constexpr (std::is_same_v<T, models::PoschlTellerPair>) {
          p["kappa"] = num(v.kappa);
          p["lambda"] = num(v.lambda);
          p["sector"] = to_string(v.sector);
        } else if constexpr (std::is_same_v<T, models::SechPair>) {
          p["lambda"] = num(v.lambda);
          p["sector"] = to_string(v.sector);
        } else if constexpr (std::is_same_v<T, models::CustomTabulated>) {
          p["points"] = v.table->x.size();
          p["x_min"] = num(v.table->x.front());
          p["x_max"] = num(v.table->x.back());
        }
      },
      m.variant);
  return p;
}

inline Backend backend_of(const Config& c, const models::ModelSpec& m) {
  if (c.backend.empty()) {
    return std::holds_alternative<models::CustomTabulated>(m.variant) ? Backend::numeric : Backend::analytic;
  }
  if (c.backend == "analytic") {
    if (std::holds_alternative<models::CustomTabulated>(m.variant)) {
      fail(ErrorKind::ConfigError, "--backend: a custom model has no analytic backend");
    }
    return Backend::analytic;
  }
  if (c.backend == "numeric") return Backend::numeric;
  fail(ErrorKind::ConfigError, "--backend: expected analytic or numeric, got '" + c.backend + "'");
}

inline std::string format_of(const Config& c, const std::string& fallback) {
  if (c.format.empty()) return fallback;
  if (c.format != "csv" && c.format != "json") {
    fail(ErrorKind::ConfigError, "--format: expected csv or json, got '" + c.format + "'");
  }
  return c.format;
}

inline EnergyIntegralOptions integral_options() {
  EnergyIntegralOptions o;
  o.quad_tol = quad_tol_from_env();
  return o;
}

struct Outcome {
  int code = ok;
  std::string text;
};

inline Outcome run_scan(const Config& c) {
  const auto m = build_model(c);
  const auto backend = backend_of(c, m);
  const auto format = format_of(c, "csv");
  if (c.emin.empty()) fail(ErrorKind::ConfigError, "--emin: required");
  if (c.emax.empty()) fail(ErrorKind::ConfigError, "--emax: required");
  const double lo = parse_number("--emin", c.emin), hi = parse_number("--emax", c.emax);
  if (c.steps < 2) fail(ErrorKind::ConfigError, "--steps: steps must be ≥ 2");
  if (!(lo < hi)) fail(ErrorKind::ConfigError, "--emin/--emax: emin must be below emax");
  const EnergyCurve curve(m, backend, integral_options(), c.jobs);
  const auto scan = quantize::scan_energy_integral(curve, lo, hi, c.steps, c.jobs);

  std::ostringstream os;
  if (format == "csv") {
    os << "E,I,im_residual,quad_error,backend\n";
    for (const auto& p : scan.points) {
      if (p.sample) {
        os << fmt15(p.E) << ',' << fmt15(p.sample->I) << ',' << fmt15(p.sample->im_residual) << ','
           << fmt15(p.sample->quadrature_error) << ',' << to_string(backend) << '\n';
      } else {
        os << fmt15(p.E) << ",nan,nan,nan," << to_string(backend) << '\n';
      }
    }
  } else {
    json doc;
    doc["model"] = models::model_name(m);
    doc["params"] = params_json(m);
    doc["backend"] = to_string(backend);
    json pts = json::array();
    for (const auto& p : scan.points) {
      json row;
      row["E"] = num(p.E);
      if (p.sample) {
        row["I"] = num(p.sample->I);
        row["im_residual"] = num(p.sample->im_residual);
        row["quad_error"] = num(p.sample->quadrature_error);
      } else {
        row["error"] = p.error;
      }
      pts.push_back(row);
    }
    doc["samples"] = pts;
    doc["monotone"] = scan.monotone;
    os << doc.dump(2) << '\n';
  }
  return {scan.has_errors() ? partial_scan : ok, os.str()};
}

inline Outcome run_spectrum(const Config& c) {
  const auto m = build_model(c);
  const auto backend = backend_of(c, m);
  format_of(c, "json");
  if (c.levels < 1) fail(ErrorKind::ConfigError, "--levels: levels must be ≥ 1");
  const double tol = parse_number("--tol", c.tol);
  if (!(tol > 0.0)) fail(ErrorKind::ConfigError, "--tol: must be positive");
  const auto r = quantize::spectrum(m, c.levels, backend, {integral_options(), tol, c.jobs});

  json doc;
  doc["model"] = models::model_name(m);
  doc["params"] = params_json(m);
  doc["backend"] = to_string(backend);
  json levels = json::array();
  for (const auto& l : r.levels) {
    json e;
    e["n"] = l.n;
    e["E"] = num(l.E);
    e["I"] = num(l.I_at_E);
    e["im_residual"] = num(l.im_residual);
    e["iterations"] = l.iterations;
    levels.push_back(e);
  }
  doc["levels"] = levels;
  if (!r.errors.empty()) {
    json errs = json::array();
    for (const auto& e : r.errors) errs.push_back(json{{"n", e.n}, {"message", e.message}});
    doc["errors"] = errs;
  }
  if (r.exhausted) {
    doc["notice"] = "spectrum exhausted: " + std::to_string(r.available) + " bound levels below the continuum";
  }
  return {r.errors.empty() ? ok : bracketing, doc.dump(2) + "\n"};
}

inline Outcome run_verify(const Config& c) {
  const auto& names = verify::suite_names();
  if (std::find(names.begin(), names.end(), c.suite) == names.end()) {
    fail(ErrorKind::ConfigError, "--suite: unknown suite '" + c.suite + "'");
  }
  const auto m = build_model(c);
  verify::SuiteConfig sc;
  sc.backend = backend_of(c, m);
  sc.integral = integral_options();
  sc.jobs = c.jobs;
  sc.levels = c.levels;
  if (!c.energy.empty()) sc.energy = parse_number("--energy", c.energy);
  const auto checks = verify::run_suite(c.suite, m, sc);
  const bool pass = verify::all_pass(checks);

  std::ostringstream os;
  if (c.format == "json") {
    json doc;
    doc["suite"] = c.suite;
    doc["model"] = models::model_name(m);
    doc["params"] = params_json(m);
    doc["backend"] = to_string(sc.backend);
    json rows = json::array();
    for (const auto& k : checks) {
      json r;
      r["name"] = k.name;
      r["value"] = num(k.value);
      r["limit"] = num(k.limit);
      r["pass"] = k.pass;
      if (!k.note.empty()) r["note"] = k.note;
      rows.push_back(r);
    }
    doc["checks"] = rows;
    doc["passed"] = pass;
    os << doc.dump(2) << '\n';
  } else if (c.format.empty() || c.format == "csv") {
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %-22s %-10s %s\n", "check", "value", "limit", "result");
    os << line;
    for (const auto& k : checks) {
      std::snprintf(line, sizeof line, "%-34s %-22s %-10s %s", k.name.c_str(), fmt15(k.value).c_str(),
                    std::isnan(k.limit) ? "-" : fmt15(k.limit).c_str(),
                    std::isnan(k.limit) ? "info" : (k.pass ? "PASS" : "FAIL"));
      os << line;
      if (!k.note.empty()) os << "  " << k.note;
      os << '\n';
    }
    os << (pass ? "all checks passed\n" : "some checks FAILED\n");
  } else {
    format_of(c, "csv");
  }
  return {pass ? ok : verification, os.str()};
}

inline Outcome run_compare(const Config& c) {
  const auto m = build_model(c);
  const auto backend = backend_of(c, m);
  const auto format = format_of(c, "csv");
  if (!models::is_hermitian(m)) fail(ErrorKind::ConfigError, "--model: compare needs a real potential");
  if (c.levels < 1) fail(ErrorKind::ConfigError, "--levels: levels must be ≥ 1");
  const double tol = parse_number("--tol", c.tol);
  if (!(tol > 0.0)) fail(ErrorKind::ConfigError, "--tol: must be positive");
  const auto r = quantize::spectrum(m, c.levels, backend, {integral_options(), tol, c.jobs});
  struct Row {
    int n;
    double e_milne, e_oracle, wkb;
  };
  std::vector<Row> rows(r.levels.size());
  parallel_for(rows.size(), c.jobs, [&](std::size_t i) {
    const auto& l = r.levels[i];
    rows[i] = {l.n, l.E, NAN, NAN};
    try {
      rows[i].e_oracle = oracle::oracle_eigenvalue(m, l.n, tol);
    } catch (const Error&) {
    }
    try {
      rows[i].wkb = wkb_integral(m, l.E);
    } catch (const Error&) {
    }
  });

  std::ostringstream os;
  if (format == "csv") {
    os << "n,E_milne,E_oracle,I_wkb_at_E\n";
    for (const auto& w : rows) {
      os << w.n << ',' << fmt15(w.e_milne) << ',' << fmt15(w.e_oracle) << ',' << fmt15(w.wkb) << '\n';
    }
  } else {
    json doc;
    doc["model"] = models::model_name(m);
    doc["params"] = params_json(m);
    doc["backend"] = to_string(backend);
    json arr = json::array();
    for (const auto& w : rows) {
      arr.push_back(json{{"n", w.n}, {"E_milne", num(w.e_milne)}, {"E_oracle", num(w.e_oracle)},
                         {"I_wkb_at_E", num(w.wkb)}});
    }
    doc["levels"] = arr;
    if (!r.errors.empty()) {
      json errs = json::array();
      for (const auto& e : r.errors) errs.push_back(json{{"n", e.n}, {"message", e.message}});
      doc["errors"] = errs;
    }
    os << doc.dump(2) << '\n';
  }
  return {r.errors.empty() ? ok : bracketing, os.str()};
}

/// Whole program: parses argv, runs one subcommand, writes to `out` or --out.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Bound-state spectra from the Milne phase-amplitude quantization condition", "milne"};
  app.require_subcommand(1, 1);

  auto common = [&c](CLI::App* s) {
    s->add_option("--model", c.model, "swanson | pt-pair | sech-pair | harmonic | custom");
    s->add_option("--omega", c.omega, "Swanson omega");
    s->add_option("--alpha", c.alpha, "Swanson alpha");
    s->add_option("--beta", c.beta, "Swanson beta");
    s->add_option("--dyson-lambda", c.dyson, "Swanson Dyson-map parameter in [-1, 1]");
    s->add_option("--kappa", c.kappa, "Poschl-Teller kappa");
    s->add_option("--lambda", c.lambda, "Poschl-Teller / sech-pair lambda");
    s->add_option("--sector", c.sector, "minus | plus");
    s->add_option("--table", c.table, "potential table for --model custom (x ReV [ImV])");
    s->add_option("--backend", c.backend, "analytic | numeric");
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--format", c.format, "csv | json");
    s->add_option("--jobs", c.jobs, "worker threads");
  };
  auto* scan = app.add_subcommand("scan", "I(E) on a uniform energy grid (CSV)");
  common(scan);
  scan->add_option("--emin", c.emin, "lowest energy");
  scan->add_option("--emax", c.emax, "highest energy");
  scan->add_option("--steps", c.steps, "number of samples");
  auto* spec = app.add_subcommand("spectrum", "levels solving I(E) = n + 1 (JSON)");
  common(spec);
  spec->add_option("--levels", c.levels, "number of levels");
  spec->add_option("--tol", c.tol, "relative bisection tolerance");
  auto* ver = app.add_subcommand("verify", "identity and consistency checks");
  common(ver);
  ver->add_option("--suite", c.suite, "emp | iik | pt | wronskian | backends | wkb | oracle")->required();
  ver->add_option("--energy", c.energy, "energy to check at (default: first levels)");
  ver->add_option("--levels", c.levels, "levels for the oracle and wkb suites");
  auto* cmp = app.add_subcommand("compare", "Milne vs shooting oracle vs WKB table");
  common(cmp);
  cmp->add_option("--levels", c.levels, "number of levels");
  cmp->add_option("--tol", c.tol, "relative bisection tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config;
  }

  Outcome result;
  try {
    if (c.jobs < 1) fail(ErrorKind::ConfigError, "--jobs: must be ≥ 1");
    if (*scan) result = run_scan(c);
    else if (*spec) result = run_spectrum(c);
    else if (*ver) result = run_verify(c);
    else result = run_compare(c);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool cfg_error = e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::ParameterOutOfRange;
    if (cfg_error) return config;
    return *scan ? partial_scan : (*ver ? verification : bracketing);
  }

  if (c.out.empty()) {
    out << result.text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "error: --out: cannot write " << c.out << '\n';
      return config;
    }
    f << result.text;
  }
  if (result.code == partial_scan) err << "warning: some scan samples failed\n";
  if (result.code == bracketing) err << "error: some levels could not be bracketed\n";
  if (result.code == verification) err << "error: verification failed\n";
  return result.code;
}

}  // namespace milne::cli

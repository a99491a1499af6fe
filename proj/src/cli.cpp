#include "bjw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bjw/errors.hpp"
#include "bjw/flux.hpp"
#include "bjw/fronttrack.hpp"
#include "bjw/interactions.hpp"
#include "bjw/riemann.hpp"
#include "bjw/wavecurves.hpp"

namespace bjw::cli {

namespace {

using nlohmann::json;

constexpr double kTaylorRelTol = 0.02;
constexpr double kHugoniotTol = 1e-12;
constexpr double kClosedFormRelTol = 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(x)) {
    throw UsageError(what + ": '" + text + "' is not a finite number");
  }
  return x;
}

State parse_triple(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) vals.push_back(parse_number(item, what));
  if (vals.size() != 3) throw UsageError(what + " needs three comma-separated numbers (u,v,w)");
  return {vals[0], vals[1], vals[2]};
}

json state_json(const State& s) { return json::array({s.u, s.v, s.w}); }

State json_state(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw UsageError(where + " must be an array [u, v, w]");
  State s;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw UsageError(where + " must hold numbers");
    s[i] = j[i].get<double>();
  }
  if (!s.finite()) throw UsageError(where + " must be finite");
  return s;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw UsageError(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw UsageError("unknown key '" + item.key() + "' in " + where);
  }
}

double json_number(const json& obj, const char* key, const std::string& where) {
  const json& j = obj.at(key);
  if (!j.is_number()) throw UsageError(where + "." + key + " must be a number");
  return j.get<double>();
}

int json_int(const json& obj, const char* key, const std::string& where) {
  const json& j = obj.at(key);
  if (!j.is_number_integer()) throw UsageError(where + "." + key + " must be an integer");
  return j.get<int>();
}

std::string json_string(const json& obj, const char* key, const std::string& where) {
  const json& j = obj.at(key);
  if (!j.is_string()) throw UsageError(where + "." + key + " must be a string");
  return j.get<std::string>();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ";" : "") + items[i];
  return out;
}

class Row {
 public:
  Row& set(const std::string& key, const std::string& value) {
    rec_.emplace_back(key, value);
    return *this;
  }
  Row& set(const std::string& key, double value) { return set(key, format_double(value)); }
  Row& set(const std::string& key, int value) { return set(key, std::to_string(value)); }
  Row& set(const std::string& key, const State& s) {
    set(key + "_u", s.u);
    set(key + "_v", s.v);
    return set(key + "_w", s.w);
  }
  Row& check(const std::string& name, bool ok) {
    pass_ = pass_ && ok;
    return set("check_" + name, std::string(ok ? "pass" : "fail"));
  }
  bool pass() const { return pass_; }
  Record finish(const std::string& config) {
    set("pass", std::string(pass_ ? "true" : "false"));
    set("config", config);
    return std::move(rec_);
  }

 private:
  Record rec_;
  bool pass_ = true;
};

struct SuiteResult {
  std::vector<Record> rows;
  bool pass = true;
  bool numeric_failure = false;
  std::string summary;

  void add(Row& row, const std::string& config) {
    pass = pass && row.pass();
    rows.push_back(row.finish(config));
  }
};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

SuiteResult suite_hyperbolicity(const Config& cfg, const std::string& conf, bool gnl) {
  const ModelParams p{cfg.eta};
  const int n = cfg.samples > 0 ? cfg.samples : 10000;
  SuiteResult res;
  Row row;
  row.set("suite", cfg.suite).set("id", 0).set("eta", cfg.eta).set("radius", cfg.radius);
  row.set("samples", n).set("seed", std::to_string(cfg.seed));
  if (!gnl) {
    const auto rep = check_strict_hyperbolicity(p, cfg.radius, n, cfg.seed);
    row.set("min_gap12", rep.min_gap12).set("min_gap23", rep.min_gap23);
    for (int i = 0; i < 3; ++i) {
      row.set("lambda" + std::to_string(i + 1) + "_min", rep.lambda_min[i]);
      row.set("lambda" + std::to_string(i + 1) + "_max", rep.lambda_max[i]);
    }
    row.set("failures", rep.failures);
    row.check("gaps_positive", rep.pass);
  } else {
    const auto rep = check_genuine_nonlinearity(p, cfg.radius, n, cfg.seed);
    for (int i = 0; i < 3; ++i) {
      row.set("grad_dot_r" + std::to_string(i + 1) + "_min", rep.min_value[i]);
      row.set("grad_dot_r" + std::to_string(i + 1) + "_max", rep.max_value[i]);
    }
    for (int i = 0; i < 3; ++i) row.check("family" + std::to_string(i + 1), rep.family_pass[i]);
  }
  res.add(row, conf);
  return res;
}

SuiteResult suite_hugoniot(const Config& cfg, const std::string& conf) {
  const ModelParams p{cfg.eta};
  SuiteResult res;
  const double corners[8][2] = {{-0.5, -0.5}, {-0.5, 0.0}, {-0.5, 0.5}, {0.0, -0.5},
                                {0.0, 0.5},   {0.5, -0.5}, {0.5, 0.0},  {0.5, 0.5}};
  int id = 0;
  double worst = 0.0;
  for (int iv = 0; iv <= 16; ++iv) {
    const double vbar = -0.4 + 0.05 * iv;
    for (int is = 0; is <= 24; ++is) {
      const double s = -0.25 + 0.01 * is;
      for (const auto& c : corners) {
        const State base{c[0], vbar, c[1]};
        const CurvePoint cp =
            cfg.eta == 0.0 ? hugoniot2_closed_form(base, s) : hugoniot(Family::Two, base, s, p);
        const double r = rh_residual(base, cp.state, cp.speed, p);
        worst = std::max(worst, r);
        Row row;
        row.set("suite", cfg.suite).set("id", id++).set("eta", cfg.eta).set("base", base).set("s", s);
        row.set("state", cp.state).set("speed", cp.speed).set("rh_residual", r);
        row.check("rh_residual<=1e-12", r <= kHugoniotTol);
        res.add(row, conf);
      }
    }
  }
  res.summary = "max residual " + format_double(worst);
  return res;
}

SuiteResult suite_taylor22(const Config& cfg, const std::string& conf) {
  if (cfg.eta != 0.0) throw UsageError("taylor22 fits the eta = 0 expansion; --eta must be 0");
  const State Ul = cfg.ul ? *cfg.ul : Interaction22Scenario::sharp(cfg.a);
  const TaylorFit fit = taylor_fit_22(cfg.a, 0.0, Ul, default_taylor_scales(cfg.a));
  const double target = cfg.a / 32.0;
  const double g_ref[2][2] = {{4.0 / 32.0, 3.0 / 32.0}, {2.0 / 32.0, 3.0 / 32.0}};
  SuiteResult res;
  Row row;
  row.set("suite", cfg.suite).set("id", 0).set("a", cfg.a).set("eta", 0.0).set("ul", Ul);
  row.set("c_sigma", fit.c_sigma).set("c_tau", fit.c_tau);
  row.set("c_sigma_target", target).set("c_tau_target", -target);
  for (std::size_t k = 0; k < fit.scales.size(); ++k) {
    row.set("scale" + std::to_string(k), fit.scales[k]);
    row.set("c_sigma_scale" + std::to_string(k), fit.c_sigma_per_scale[k]);
    row.set("c_tau_scale" + std::to_string(k), fit.c_tau_per_scale[k]);
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) row.set("g" + std::to_string(i) + std::to_string(j), fit.g_matrix[i][j]);
  row.set("max_axis_value", fit.max_axis_value).set("extrapolation_condition", fit.extrapolation_condition);
  row.check("c_sigma_within_2pct", rel_err(fit.c_sigma, target) <= kTaylorRelTol);
  row.check("c_tau_within_2pct", rel_err(fit.c_tau, -target) <= kTaylorRelTol);
  bool g_ok = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g_ok = g_ok && rel_err(fit.g_matrix[i][j], g_ref[i][j]) <= kTaylorRelTol;
  row.check("g_within_2pct", g_ok);
  row.check("axes_vanish", fit.max_axis_value <= 1e-12);
  res.add(row, conf);
  return res;
}

SuiteResult suite_bounds12(const Config& cfg, const std::string& conf, bool contraction_view) {
  const int n = cfg.samples > 0 ? cfg.samples : 1000;
  SuiteResult res;
  double worst_ratio = 0.0;
  for (const Bounds12Row& r : verify_bounds_12(n, cfg.eta, cfg.seed)) {
    Row row;
    const auto& sc = r.scenario;
    row.set("suite", cfg.suite).set("id", r.id).set("eta", sc.eta).set("ul", sc.Ul);
    row.set("s", sc.s).set("sigma", sc.sigma);
    row.set("sigma_out", r.report.outgoing[0]).set("s_mid", r.report.outgoing[1]);
    row.set("tau_out", r.report.outgoing[2]).set("pattern", r.report.pattern);
    row.set("riemann_residual", r.report.residual);
    const ContractionResult cr = r.contraction.value_or(ContractionResult{});
    row.set("x0_sigma", cr.x0[0]).set("x0_tau", cr.x0[1]);
    row.set("fixed_sigma", cr.x[0]).set("fixed_tau", cr.x[1]);
    row.set("iterations", cr.iterations).set("contraction_ratio", cr.contraction_ratio);
    row.set("empirical_k", cr.empirical_k);
    row.set("error", r.error);
    worst_ratio = std::max(worst_ratio, cr.contraction_ratio);
    if (!r.error.empty()) res.numeric_failure = true;
    auto passed = [&](const std::string& name) {
      for (const BoundCheck& b : r.report.bound_checks)
        if (b.name == name) return b.pass;
      return false;
    };
    row.check("solved", r.error.empty());
    static const std::vector<std::string> bound_names = {
        "2sigma<=sigma'", "sigma'<=sigma/2", "sigma*s/100<=tau'", "tau'<=10*sigma*s", "s_mid=s",
        "pattern=SSS"};
    static const std::vector<std::string> contraction_names = {"|X_fixed-X_riemann|<=1e-9",
                                                               "contraction_ratio<=1/2"};
    for (const std::string& name : contraction_view ? contraction_names : bound_names) {
      row.check(name, passed(name));
    }
    if (contraction_view) row.check("in_ball", r.contraction.has_value() && cr.in_ball);
    res.add(row, conf);
  }
  res.summary = "max contraction ratio " + format_double(worst_ratio);
  return res;
}

SuiteResult suite_icszero(const Config& cfg, const std::string& conf) {
  if (cfg.eta != 0.0) throw UsageError("icszero compares with the eta = 0 closed form; --eta must be 0");
  const int n = cfg.samples > 0 ? cfg.samples : 500;
  SuiteResult res;
  double worst = 0.0;
  for (const Bounds12Row& r : verify_bounds_12(n, 0.0, cfg.seed)) {
    const auto& sc = r.scenario;
    const ClosedForm12 cf = closed_form_12_eta0(sc.Ul, sc.s, sc.sigma);
    const double es = rel_err(r.report.outgoing[0], cf.sigma_p);
    const double et = rel_err(r.report.outgoing[2], cf.tau_p);
    worst = std::max({worst, es, et});
    Row row;
    row.set("suite", cfg.suite).set("id", r.id).set("ul", sc.Ul).set("s", sc.s).set("sigma", sc.sigma);
    row.set("sigma_out", r.report.outgoing[0]).set("tau_out", r.report.outgoing[2]);
    row.set("sigma_closed", cf.sigma_p).set("tau_closed", cf.tau_p);
    row.set("rel_err_sigma", es).set("rel_err_tau", et);
    row.set("ratio_sigma", cf.ratio_sigma).set("ratio_tau", cf.ratio_tau);
    row.set("error", r.error);
    if (!r.error.empty()) res.numeric_failure = true;
    row.check("solved", r.error.empty());
    row.check("sigma_matches", es <= kClosedFormRelTol);
    row.check("tau_matches", et <= kClosedFormRelTol);
    row.check("ratio_sigma_bracket", cf.ratio_sigma_bracketed && r.report.outgoing[0] / sc.sigma > 2.0 / 3.0 &&
                                         r.report.outgoing[0] / sc.sigma < 1.0);
    const double rt = r.report.outgoing[2] / (sc.s * sc.sigma);
    row.check("ratio_tau_bracket", cf.ratio_tau_bracketed && rt > 1.0 / 21.0 && rt < 4.0);
    res.add(row, conf);
  }
  res.summary = "max relative error " + format_double(worst);
  return res;
}

SuiteResult suite_pattern22(const Config& cfg, const std::string& conf) {
  const int n = cfg.samples > 0 ? cfg.samples : 1000;
  SuiteResult res;
  int sss = 0;
  for (int k = 0; k < n; ++k) {
    const Interaction22Scenario sc = sample_22(cfg.seed, k, cfg.a, cfg.eps, cfg.eps * cfg.a);
    Row row;
    row.set("suite", cfg.suite).set("id", k).set("a", sc.a).set("eps", sc.eps).set("eta", sc.eta);
    row.set("ul", sc.Ul).set("s1", sc.s1).set("s2", sc.s2);
    try {
      const InteractionReport rep = interact_22(sc);
      row.set("sigma", rep.outgoing[0]).set("s_mid", rep.outgoing[1]).set("tau", rep.outgoing[2]);
      row.set("pattern", rep.pattern).set("riemann_residual", rep.residual);
      row.set("c_sigma_observed", rep.fitted_coeffs ? (*rep.fitted_coeffs)[0] : 0.0);
      row.set("c_tau_observed", rep.fitted_coeffs ? (*rep.fitted_coeffs)[1] : 0.0);
      row.set("error", std::string());
      for (const BoundCheck& b : rep.bound_checks) row.check(b.name, b.pass);
      row.check("pattern=SSS", rep.pattern == "SSS");
      if (rep.pattern == "SSS") ++sss;
    } catch (const DomainError&) {
      throw;
    } catch (const std::exception& e) {
      res.numeric_failure = true;
      const double nan = std::nan("");
      for (const char* key : {"sigma", "s_mid", "tau"}) row.set(key, nan);
      row.set("pattern", std::string()).set("riemann_residual", nan);
      row.set("c_sigma_observed", nan).set("c_tau_observed", nan);
      row.set("error", std::string(e.what()));
      for (const char* name : {"sigma<0", "tau>0", "s_mid=s1+s2", "pattern=SSS"}) row.check(name, false);
    }
    res.add(row, conf);
  }
  res.summary = std::to_string(sss) + "/" + std::to_string(n) + " SSS";
  return res;
}

struct Output {
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void write_json_records(std::ostream& os, const std::vector<Record>& rows, const Config& cfg) {
  json doc{{"schema_version", "1"}, {"config", json::parse(cfg.to_json())}, {"records", json::array()}};
  for (const Record& r : rows) {
    json obj = json::object();
    for (const auto& [k, v] : r) obj[k] = v;
    doc["records"].push_back(obj);
  }
  os << doc.dump(2) << "\n";
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  const std::string conf = cfg.to_json();
  SuiteResult res;
  const std::string& s = cfg.suite;
  if (s == "hyperbolicity" || s == "gnl") {
    res = suite_hyperbolicity(cfg, conf, s == "gnl");
  } else if (s == "hugoniot") {
    res = suite_hugoniot(cfg, conf);
  } else if (s == "taylor22") {
    res = suite_taylor22(cfg, conf);
  } else if (s == "bounds12" || s == "contraction") {
    res = suite_bounds12(cfg, conf, s == "contraction");
  } else if (s == "icszero") {
    res = suite_icszero(cfg, conf);
  } else if (s == "pattern22") {
    res = suite_pattern22(cfg, conf);
  } else {
    throw UsageError("unknown verify suite '" + s + "'");
  }
  Output o(cfg.out, out);
  if (cfg.format == "json") {
    write_json_records(o.stream(), res.rows, cfg);
  } else {
    write_csv(o.stream(), res.rows);
  }
  o.stream().flush();
  int passed = 0;
  for (const Record& r : res.rows) passed += r[r.size() - 2].second == "true";
  std::ostream& summary = o.to_file() ? out : err;
  summary << "verify " << s << ": " << passed << "/" << res.rows.size() << " rows pass";
  if (!res.summary.empty()) summary << ", " << res.summary;
  summary << "\n";
  if (res.numeric_failure) return kNumericFailure;
  return res.pass ? kOk : kCheckFailed;
}

json wave_json(const Wave& w) {
  return {{"family", index(w.family)}, {"kind", to_string(w.kind)}, {"strength", w.strength},
          {"speed", w.speed}, {"speed_lo", w.speed_lo}, {"speed_hi", w.speed_hi},
          {"left", state_json(w.left)}, {"right", state_json(w.right)}};
}

int cmd_riemann(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.ul || !cfg.ur) throw UsageError("riemann needs both --ul and --ur");
  const ModelParams p{cfg.eta};
  RiemannOptions ro;
  ro.tol = cfg.tol;
  const RiemannFan fan = solve_riemann(*cfg.ul, *cfg.ur, p, ro);
  const FanDiagnostics dg = check_fan(fan, p);

  std::vector<std::array<double, 4>> profile;
  if (cfg.sample_points > 0) {
    double lo = -1.0, hi = 1.0;
    if (!fan.waves.empty()) {
      lo = fan.waves.front().speed_lo - 1.0;
      hi = fan.waves.back().speed_hi + 1.0;
    }
    const int n = cfg.sample_points;
    for (int k = 0; k < n; ++k) {
      const double xi = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (n - 1);
      const State U = evaluate_fan(fan, xi, p);
      profile.push_back({xi, U.u, U.v, U.w});
    }
  }

  Output o(cfg.out, out);
  std::ostream& os = o.stream();
  if (cfg.format == "json") {
    json doc{{"schema_version", "1"},
             {"config", json::parse(cfg.to_json())},
             {"strengths", fan.strengths},
             {"residual", fan.residual},
             {"iterations", fan.iterations},
             {"waves", json::array()},
             {"profile", json::array()}};
    for (const Wave& w : fan.waves) doc["waves"].push_back(wave_json(w));
    for (const auto& r : profile) doc["profile"].push_back(r);
    os << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    std::vector<Record> rows;
    const std::string conf = cfg.to_json();
    for (const Wave& w : fan.waves) {
      Row row;
      row.set("family", index(w.family)).set("kind", to_string(w.kind)).set("strength", w.strength);
      row.set("speed", w.speed).set("speed_lo", w.speed_lo).set("speed_hi", w.speed_hi);
      row.set("left", w.left).set("right", w.right);
      row.check("fan", dg.valid);
      rows.push_back(row.finish(conf));
    }
    write_csv(os, rows);
  } else {
    os << std::setprecision(12);
    if (fan.waves.empty()) {
      os << "no waves\n";
    } else {
      os << "family  kind         strength            speed                 left -> right\n";
      for (const Wave& w : fan.waves) {
        os << std::left << std::setw(8) << index(w.family) << std::setw(13) << to_string(w.kind)
           << std::setw(20) << w.strength;
        if (w.kind == WaveKind::Rarefaction) {
          os << std::setw(20) << (format_double(w.speed_lo) + ".." + format_double(w.speed_hi));
        } else {
          os << std::setw(20) << w.speed;
        }
        os << "  " << w.left << " -> " << w.right << "\n";
      }
    }
    os << std::right << "residual " << fan.residual << "\n";
    if (!profile.empty()) {
      os << "\nxi\tu\tv\tw\n";
      for (const auto& r : profile) {
        os << format_double(r[0]) << '\t' << format_double(r[1]) << '\t' << format_double(r[2])
           << '\t' << format_double(r[3]) << "\n";
      }
    }
  }
  os.flush();
  if (!dg.valid) {
    for (const auto& msg : dg.problems) err << "fan check: " << msg << "\n";
    return kCheckFailed;
  }
  return kOk;
}

std::string join_numbers(const std::vector<double>& xs) {
  std::vector<std::string> items;
  for (double x : xs) items.push_back(format_double(x));
  return join(items);
}

int cmd_fronttrack(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.ul) throw UsageError("fronttrack needs the leftmost state (--ul or fronttrack.u_left)");
  std::vector<std::pair<double, State>> jumps;
  for (const Jump& j : cfg.jumps) jumps.emplace_back(j.x, j.state);
  if (jumps.empty() && cfg.ur) jumps.emplace_back(0.0, *cfg.ur);
  TrackerParams tp;
  tp.model.eta = cfg.eta;
  tp.delta = cfg.delta;
  tp.max_events = cfg.max_events;
  tp.tol_event = cfg.tol_event;
  tp.riemann.tol = cfg.tol;
  const RunResult res = run(init_from_piecewise(jumps, *cfg.ul, tp), cfg.t_end, cfg.max_events);
  const TrackerState& st = res.state;

  std::vector<Record> rows;
  const std::string conf = cfg.to_json();
  for (std::size_t k = 0; k < st.log.size(); ++k) {
    const CollisionEvent& ev = st.log[k];
    const Observables& ob = res.series.at(k + 1);
    std::vector<std::string> in_ids, out_ids, out_fam, out_kind;
    std::vector<double> in_s, out_s;
    for (std::size_t i = 0; i < ev.incoming.size(); ++i) {
      in_ids.push_back(std::to_string(ev.incoming_ids[i]));
      in_s.push_back(ev.incoming[i].strength);
    }
    for (std::size_t i = 0; i < ev.outgoing.size(); ++i) {
      out_ids.push_back(std::to_string(ev.outgoing_ids[i]));
      out_fam.push_back(std::to_string(index(ev.outgoing[i].family)));
      out_kind.push_back(to_string(ev.outgoing[i].kind));
      out_s.push_back(ev.outgoing[i].strength);
    }
    Row row;
    row.set("event", static_cast<int>(k)).set("t", ev.time).set("x", ev.position);
    row.set("classification", ev.classification);
    row.set("incoming_ids", join(in_ids)).set("incoming_strengths", join_numbers(in_s));
    row.set("outgoing_ids", join(out_ids)).set("outgoing_families", join(out_fam));
    row.set("outgoing_kinds", join(out_kind)).set("outgoing_strengths", join_numbers(out_s));
    row.set("riemann_residual", ev.residual).set("front_count", ob.front_count);
    row.set("max_norm", ob.max_norm).set("conserved", ob.conserved);
    row.check("shock_only", ev.shock_only());
    rows.push_back(row.finish(conf));
  }

  Output o(cfg.out, out);
  auto write_tsv = [&](std::ostream& os) {
    os << "id\tfamily\tt\tx\n";
    for (const TrajectorySegment& seg : trajectories(st, st.time)) {
      os << seg.id << '\t' << seg.family << '\t' << format_double(seg.t_start) << '\t'
         << format_double(seg.x_start) << '\n'
         << seg.id << '\t' << seg.family << '\t' << format_double(seg.t_stop) << '\t'
         << format_double(seg.x_stop) << '\n';
    }
  };
  if (cfg.format == "tsv") {
    write_tsv(o.stream());
  } else {
    write_csv(o.stream(), rows);
  }
  o.stream().flush();
  if (!cfg.trajectory.empty()) {
    std::ofstream tf(cfg.trajectory, std::ios::binary);
    if (!tf) throw UsageError("cannot open trajectory file '" + cfg.trajectory + "'");
    write_tsv(tf);
  }
  std::ostream& summary = o.to_file() ? out : err;
  summary << "fronttrack: events " << st.log.size() << ", fronts " << st.fronts.size() << ", time "
          << format_double(st.time) << ", truncated " << (res.truncated ? "yes" : "no") << "\n";
  if (!res.failure.empty()) {
    err << "fronttrack: " << res.failure << "\n";
    return kNumericFailure;
  }
  return kOk;
}

struct Flags {
  double eta = 0.0, a = 0.25, eps = 1e-2, radius = 0.9, tol = 1e-12;
  double delta = 1e-3, t_end = 10.0, tol_event = 1e-12;
  int samples = 0, sample_points = 0, max_events = 1000;
  unsigned long long seed = 7;
  std::string ul, ur, out, trajectory, format, scenario, suite;
};

void add_flags(CLI::App* app, Flags& f, bool verify) {
  app->add_option("--eta", f.eta, "Perturbation parameter, 0 <= eta < 1/4")->capture_default_str();
  app->add_option("--ul", f.ul, "Left state u,v,w");
  app->add_option("--ur", f.ur, "Right state u,v,w");
  app->add_option("--tol", f.tol, "Riemann solve tolerance")->capture_default_str();
  app->add_option("--out", f.out, "Output file (default: standard output)");
  app->add_option("--format", f.format, "Output format: csv, json, tsv or table")
                    ->check(CLI::IsMember({"csv", "json", "tsv", "table"}));
  app->add_option("--scenario", f.scenario, "Scenario JSON document");
  if (verify) {
    app->add_option("--a", f.a, "Base amplitude a of U = (a, 0, -a)")->capture_default_str();
    app->add_option("--eps", f.eps, "Neighbourhood size factor")->capture_default_str();
    app->add_option("--samples", f.samples, "Sample count (0: suite default)")
                       ->capture_default_str();
    app->add_option("--seed", f.seed, "Sampling seed")->capture_default_str();
    app->add_option("--radius", f.radius, "Sampling ball radius")->capture_default_str();
  }
}

void resolve(const Flags& f, const CLI::App* sub, Config& cfg) {
  auto given = [&](const std::string& k) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + k);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("scenario")) {
    std::ifstream in(f.scenario);
    if (!in) throw UsageError("cannot read scenario file '" + f.scenario + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_scenario_json(ss.str(), cfg);
    cfg.scenario = f.scenario;
  }
  if (given("eta")) cfg.eta = f.eta;
  if (given("ul")) cfg.ul = parse_triple(f.ul, "--ul");
  if (given("ur")) cfg.ur = parse_triple(f.ur, "--ur");
  if (given("tol")) cfg.tol = f.tol;
  if (given("out")) cfg.out = f.out;
  if (given("format")) cfg.format = f.format;
  if (given("a")) cfg.a = f.a;
  if (given("eps")) cfg.eps = f.eps;
  if (given("samples")) cfg.samples = f.samples;
  if (given("seed")) cfg.seed = f.seed;
  if (given("radius")) cfg.radius = f.radius;
  if (given("sample")) cfg.sample_points = f.sample_points;
  if (given("delta")) cfg.delta = f.delta;
  if (given("t-end")) cfg.t_end = f.t_end;
  if (given("max-events")) cfg.max_events = f.max_events;
  if (given("tol-event")) cfg.tol_event = f.tol_event;
  if (given("trajectory")) cfg.trajectory = f.trajectory;
}

void validate(Config& cfg) {
  ModelParams{cfg.eta}.validate();
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.samples < 0) throw UsageError("--samples must be non-negative");
  if (cfg.sample_points < 0) throw UsageError("--sample must be non-negative");
  const std::string def = cfg.command == "riemann" ? "table" : "csv";
  if (cfg.format.empty()) cfg.format = def;
  const bool ok = (cfg.command == "riemann" && (cfg.format == "table" || cfg.format == "json" ||
                                                cfg.format == "csv")) ||
                  (cfg.command == "verify" && (cfg.format == "csv" || cfg.format == "json")) ||
                  (cfg.command == "fronttrack" && (cfg.format == "csv" || cfg.format == "tsv"));
  if (!ok) throw UsageError("format '" + cfg.format + "' not available for " + cfg.command);
  if (cfg.command == "verify") {
    if (!(cfg.a > 0.0 && cfg.a < 0.5)) throw UsageError("--a must lie in (0, 1/2)");
    if (!(cfg.eps > 0.0)) throw UsageError("--eps must be positive");
    if (!(cfg.radius >= 0.0 && cfg.radius < 1.0)) throw UsageError("--radius must lie in [0, 1)");
  }
  if (cfg.command == "fronttrack") {
    if (!(cfg.delta > 0.0)) throw UsageError("--delta must be positive");
    if (!(cfg.t_end > 0.0)) throw UsageError("--t-end must be positive");
    if (cfg.max_events < 0) throw UsageError("--max-events must be non-negative");
    if (!(cfg.tol_event >= 0.0)) throw UsageError("--tol-event must be non-negative");
  }
}

}  // namespace

std::string Config::to_json() const {
  json j{{"schema_version", "1"},
         {"command", command},
         {"suite", suite},
         {"eta", eta},
         {"ul", ul ? state_json(*ul) : json(nullptr)},
         {"ur", ur ? state_json(*ur) : json(nullptr)},
         {"a", a},
         {"eps", eps},
         {"samples", samples},
         {"seed", seed},
         {"radius", radius},
         {"tol", tol},
         {"sample_points", sample_points},
         {"delta", delta},
         {"t_end", t_end},
         {"max_events", max_events},
         {"tol_event", tol_event},
         {"jumps", json::array()},
         {"out", out},
         {"trajectory", trajectory},
         {"format", format},
         {"scenario", scenario}};
  for (const Jump& jp : jumps) j["jumps"].push_back({{"x", jp.x}, {"state", state_json(jp.state)}});
  return j.dump();
}

void apply_scenario_json(const std::string& text, Config& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("scenario is not valid JSON: ") + e.what());
  }
  check_keys(doc, "scenario",
             {"schema_version", "command", "suite", "model", "states", "riemann", "verify",
              "fronttrack", "output"});
  if (!doc.contains("schema_version") || doc["schema_version"] != "1") {
    throw UsageError("scenario schema_version must be \"1\"");
  }
  if (doc.contains("command")) {
    const std::string c = json_string(doc, "command", "scenario");
    if (!cfg.command.empty() && c != cfg.command) {
      throw UsageError("scenario is for '" + c + "', not '" + cfg.command + "'");
    }
  }
  if (doc.contains("suite")) {
    const std::string s = json_string(doc, "suite", "scenario");
    if (cfg.suite.empty()) cfg.suite = s;
    if (s != cfg.suite) throw UsageError("scenario is for suite '" + s + "', not '" + cfg.suite + "'");
  }
  if (doc.contains("model")) {
    const json& m = doc["model"];
    check_keys(m, "model", {"eta"});
    if (m.contains("eta")) cfg.eta = json_number(m, "eta", "model");
  }
  if (doc.contains("states")) {
    const json& s = doc["states"];
    check_keys(s, "states", {"ul", "ur"});
    if (s.contains("ul")) cfg.ul = json_state(s["ul"], "states.ul");
    if (s.contains("ur")) cfg.ur = json_state(s["ur"], "states.ur");
  }
  if (doc.contains("riemann")) {
    const json& r = doc["riemann"];
    check_keys(r, "riemann", {"tol", "sample"});
    if (r.contains("tol")) cfg.tol = json_number(r, "tol", "riemann");
    if (r.contains("sample")) cfg.sample_points = json_int(r, "sample", "riemann");
  }
  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    check_keys(v, "verify", {"a", "eps", "samples", "seed", "radius"});
    if (v.contains("a")) cfg.a = json_number(v, "a", "verify");
    if (v.contains("eps")) cfg.eps = json_number(v, "eps", "verify");
    if (v.contains("samples")) cfg.samples = json_int(v, "samples", "verify");
    if (v.contains("seed")) {
      if (!v["seed"].is_number_unsigned()) throw UsageError("verify.seed must be a non-negative integer");
      cfg.seed = v["seed"].get<unsigned long long>();
    }
    if (v.contains("radius")) cfg.radius = json_number(v, "radius", "verify");
  }
  if (doc.contains("fronttrack")) {
    const json& f = doc["fronttrack"];
    check_keys(f, "fronttrack", {"u_left", "jumps", "delta", "t_end", "max_events", "tol_event"});
    if (f.contains("u_left")) cfg.ul = json_state(f["u_left"], "fronttrack.u_left");
    if (f.contains("jumps")) {
      if (!f["jumps"].is_array()) throw UsageError("fronttrack.jumps must be an array");
      cfg.jumps.clear();
      for (const json& jp : f["jumps"]) {
        check_keys(jp, "fronttrack.jumps[]", {"x", "state"});
        if (!jp.contains("x") || !jp.contains("state")) {
          throw UsageError("each jump needs x and state");
        }
        cfg.jumps.push_back({json_number(jp, "x", "jump"), json_state(jp["state"], "jump.state")});
      }
    }
    if (f.contains("delta")) cfg.delta = json_number(f, "delta", "fronttrack");
    if (f.contains("t_end")) cfg.t_end = json_number(f, "t_end", "fronttrack");
    if (f.contains("max_events")) cfg.max_events = json_int(f, "max_events", "fronttrack");
    if (f.contains("tol_event")) cfg.tol_event = json_number(f, "tol_event", "fronttrack");
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, "output", {"out", "format", "trajectory"});
    if (o.contains("out")) cfg.out = json_string(o, "out", "output");
    if (o.contains("format")) cfg.format = json_string(o, "format", "output");
    if (o.contains("trajectory")) cfg.trajectory = json_string(o, "trajectory", "output");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Riemann solver, interaction certification and front tracking for the perturbed 3x3 system F_eta"};
  app.name("bjw");
  app.require_subcommand(1);
  Flags f;

  CLI::App* riemann = app.add_subcommand("riemann", "Solve one Riemann problem and print its wave fan");
  add_flags(riemann, f, false);
  riemann->add_option("--sample", f.sample_points, "Emit (xi, u, v, w) at this many points")
                        ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "Run a certification suite");
  verify->add_option("suite", f.suite,
                     "hyperbolicity, gnl, hugoniot, taylor22, bounds12, contraction, icszero or pattern22")
      ->required();
  add_flags(verify, f, true);

  CLI::App* ft = app.add_subcommand("fronttrack", "Front tracking from piecewise-constant data");
  add_flags(ft, f, false);
  ft->add_option("--delta", f.delta, "Rarefaction front strength")->capture_default_str();
  ft->add_option("--t-end", f.t_end, "Final time")->capture_default_str();
  ft->add_option("--max-events", f.max_events, "Event limit")->capture_default_str();
  ft->add_option("--tol-event", f.tol_event, "Collision merge tolerance in time")
                           ->capture_default_str();
  ft->add_option("--trajectory", f.trajectory, "Write x-t trajectories (TSV) here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kCheckFailed;
  }

  Config cfg;
  const CLI::App* sub = riemann->parsed() ? riemann : verify->parsed() ? verify : ft;
  cfg.command = sub->get_name();
  cfg.suite = f.suite;
  try {
    resolve(f, sub, cfg);
    validate(cfg);
    if (cfg.command == "riemann") return cmd_riemann(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    return cmd_fronttrack(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const ConvergenceError& e) {
    err << "numeric failure: " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace bjw::cli

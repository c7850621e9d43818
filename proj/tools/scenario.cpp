#include "scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "bridge/energy.hpp"
#include "bridge/io.hpp"
#include "bridge/nonlin.hpp"
#include "bridge/ode4.hpp"
#include "bridge/plate.hpp"
#include "bridge/systems.hpp"
#include "bridge/truebeam.hpp"

namespace fs = std::filesystem;

namespace bridge::cli {

namespace {

// ---- json access ---------------------------------------------------------

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double num(const json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing numeric field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, std::optional<int> fallback = std::nullopt) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing integer field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const json& obj, const char* key, std::optional<std::string> fallback = std::nullopt) {
  if (!obj.is_object() || !obj.contains(key)) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing string field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& obj, const char* key, std::vector<double> fallback = {}) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string("field '") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- shared records ----------------------------------------------------------

Nonlinearity parse_nonlinearity(const json& p) {
  if (!p.contains("nonlinearity")) return linear();
  const json& n = p.at("nonlinearity");
  NonlinKind kind;
  try {
    kind = nonlin_kind_from_string(text(n, "kind"));
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  const json params = n.contains("params") ? n.at("params") : json::object();
  if (!params.is_object()) throw ParseError("nonlinearity params must be an object");
  NonlinParams np;
  np.epsilon = num(params, "epsilon", np.epsilon);
  np.p_exp = num(params, "p_exp", np.p_exp);
  np.a_coef = num(params, "a_coef", np.a_coef);
  np.b_coef = num(params, "b_coef", np.b_coef);
  np.sigma_f = num(params, "sigma_f", np.sigma_f);
  np.c_quad = num(params, "c_quad", np.c_quad);
  np.d_cub = num(params, "d_cub", np.d_cub);
  return make_nonlinearity(kind, np);
}

json nonlinearity_json(const Nonlinearity& nl) {
  const auto& p = nl.params();
  json params;
  switch (nl.kind()) {
    case NonlinKind::cubic: params = {{"epsilon", p.epsilon}}; break;
    case NonlinKind::power: params = {{"epsilon", p.epsilon}, {"p_exp", p.p_exp}}; break;
    case NonlinKind::exponential: params = {{"a_coef", p.a_coef}, {"b_coef", p.b_coef}}; break;
    case NonlinKind::mckenna_cubic:
      params = {{"sigma_f", p.sigma_f}, {"c_quad", p.c_quad}, {"d_cub", p.d_cub}};
      break;
    default: params = json::object();
  }
  return {{"kind", std::string(to_string(nl.kind()))}, {"params", params}};
}

IntegratorConfig parse_integrator(const json& p, double default_t_end) {
  IntegratorConfig c;
  c.t_end = default_t_end;
  if (p.contains("integrator")) {
    const json& i = p.at("integrator");
    c.rel_tol = num(i, "rel_tol", c.rel_tol);
    c.abs_tol = num(i, "abs_tol", c.abs_tol);
    c.max_step = num(i, "max_step", c.max_step);
    c.blowup_threshold = num(i, "blowup_threshold", c.blowup_threshold);
    c.t_end = num(i, "t_end", c.t_end);
  }
  c.t_end = num(p, "t_end", c.t_end);
  return c;
}

SysState parse_sys_state(const json& p) {
  const json& s = require(p, "initial");
  if (s.is_array()) {
    const auto v = numbers(p, "initial");
    if (v.size() != 4) throw ParseError("initial must hold x, xd, y, yd");
    return {0.0, v[0], v[1], v[2], v[3]};
  }
  return {num(s, "t", 0.0), num(s, "x", 0.0), num(s, "xd", 0.0), num(s, "y", 0.0), num(s, "yd", 0.0)};
}

plate::PlateGeom parse_geom(const json& p, plate::PlateGeom g = {}) {
  if (!p.contains("geom")) return g;
  const json& j = p.at("geom");
  g.length_L = num(j, "L", g.length_L);
  g.half_width_l = num(j, "l", g.half_width_l);
  g.poisson_sigma = num(j, "sigma", g.poisson_sigma);
  return g;
}

// ---- outputs -----------------------------------------------------------------

struct OutputSpec {
  std::optional<fs::path> csv, svg;
  double y_clip = std::numeric_limits<double>::infinity();
};

class Outputs {
 public:
  Outputs(const json& config, const fs::path& dir) {
    if (config.contains("outputs")) {
      const json& o = config.at("outputs");
      if (!o.is_array()) throw ParseError("outputs must be an array");
      for (const auto& e : o) {
        if (!e.is_object()) throw ParseError("each output must be an object");
        OutputSpec s;
        if (e.contains("csv_path")) s.csv = resolve(text(e, "csv_path"), dir);
        if (e.contains("svg_path")) s.svg = resolve(text(e, "svg_path"), dir);
        s.y_clip = num(e, "y_clip", s.y_clip);
        specs_.push_back(s);
      }
    }
    if (config.contains("report_path")) report_ = resolve(text(config, "report_path"), dir);
  }

  const OutputSpec* at(std::size_t i) const { return i < specs_.size() ? &specs_[i] : nullptr; }
  const std::optional<fs::path>& report() const { return report_; }

  static fs::path resolve(const std::string& p, const fs::path& dir) {
    fs::path path(p);
    if (path.is_absolute()) return std::getenv("BRIDGE_OUT") ? dir / path.filename() : path;
    return dir / path;
  }

 private:
  std::vector<OutputSpec> specs_;
  std::optional<fs::path> report_;
};

void add_table(RunResult& r, const Outputs& out, std::size_t slot, const io::CsvWriter& csv,
               const std::vector<io::Series>& series, io::PlotOptions opt) {
  const OutputSpec* s = out.at(slot);
  if (!s) return;
  if (s->csv) r.artifacts.push_back({*s->csv, csv.str()});
  if (s->svg) {
    opt.y_clip = s->y_clip;
    r.artifacts.push_back({*s->svg, io::svg_plot(series, opt)});
  }
}

void finish(RunResult& r, const Outputs& out) {
  if (out.report()) r.artifacts.push_back({*out.report(), r.report.dump(2) + "\n"});
}

std::string sformat(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

json blowup_json(const ode4::BlowupReport& b, Termination term) {
  json ratios = json::array();
  for (const auto& q : b.ratios) ratios.push_back({q[0], q[1]});
  return {{"blew_up", b.blew_up},
          {"R_est", finite_or_null(b.R_est)},
          {"R_err", finite_or_null(b.R_err)},
          {"termination", std::string(to_string(term))},
          {"zeros", b.zeros},
          {"ratios", ratios}};
}

std::string blowup_summary(const std::string& name, const ode4::BlowupReport& b, Termination term) {
  std::string s = name + ": termination=" + std::string(to_string(term)) + " blew_up=" + (b.blew_up ? "true" : "false");
  if (b.blew_up) s += " R_est=" + sformat("%.6g", b.R_est);
  s += " events=" + std::to_string(b.zeros.size());
  return s;
}

// ---- models ------------------------------------------------------------------

RunResult run_ode4(const std::string& name, const json& p, const Outputs& out) {
  ode4::OdeFamily fam;
  try {
    fam.kind = ode4::family_kind_from_string(text(p, "family", "canonical"));
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  fam.nl = parse_nonlinearity(p);
  fam.k_coef = num(p, "k", 0.0);
  fam.alpha_r = num(p, "alpha", 0.0);
  fam.beta_r = num(p, "beta", 0.0);
  fam.gamma_p = num(p, "gamma", 1.0);
  fam.c_speed = num(p, "c", 0.0);
  fam.delta_damp = num(p, "delta", 0.0);
  fam.a3 = num(p, "a", 0.0);
  fam.b1 = num(p, "b", 0.0);
  fam.c0 = num(p, "c0", 0.0);
  fam.k2 = fam.k_coef;
  fam.q_exp = num(p, "q", 2.0);
  const auto init = numbers(p, "initial");
  if (init.size() != 4) throw ParseError("initial must hold w, w', w'', w'''");
  const auto cfg = parse_integrator(p, 10.0);
  fam.validate();
  cfg.validate();

  const auto traj = ode4::integrate(fam, State4{num(p, "t0", 0.0), init[0], init[1], init[2], init[3]}, cfg);
  const auto rep = ode4::detect_blowup(traj, cfg);

  RunResult r;
  r.report = blowup_json(rep, traj.termination);
  r.report["t_last"] = traj.t_last();
  r.report["nonlinearity"] = nonlinearity_json(fam.nl);
  if (fam.kind == ode4::FamilyKind::canonical) r.report["hamiltonian_0"] = ode4::hamiltonian(fam, traj.samples.front());
  r.summary = blowup_summary(name, rep, traj.termination);

  io::CsvWriter csv({"t", "w", "w1", "w2", "w3"});
  io::Series sw{"w", {}, {}};
  for (const auto& s : traj.samples) {
    csv.row({s.t, s.w, s.w1, s.w2, s.w3});
    sw.x.push_back(s.t);
    sw.y.push_back(s.w);
  }
  add_table(r, out, 0, csv, {sw}, {name + ": w(t)", "t", "w"});
  finish(r, out);
  return r;
}

RunResult run_miosyst(const std::string& name, const json& p, const Outputs& out) {
  systems::MiosystParams mp{num(p, "beta", -1.0), num(p, "delta", 1.0)};
  const auto nl = parse_nonlinearity(p);
  const auto s0 = parse_sys_state(p);
  const auto cfg = parse_integrator(p, 10.0);
  cfg.validate();
  if (mp.delta == mp.beta) throw InvalidParameter("miosyst: delta must differ from beta");

  const auto sys = systems::integrate_miosyst(mp, nl, s0, cfg);
  const auto red = systems::to_fourth_order(mp, sys);
  const auto rep = ode4::detect_blowup(red, cfg);
  const auto cls = systems::classify_f0(mp.beta, mp.delta);

  RunResult r;
  r.report = blowup_json(rep, sys.termination);
  r.report["t_last"] = sys.t_last();
  r.report["initial_condition_holds"] = systems::check_initial_oscill(mp, s0);
  r.report["theorem_regime"] = mp.theorem_regime();
  r.report["first_integral_0"] = systems::first_integral_E(mp, nl, red.samples.front());
  r.report["f0"] = {{"A", cls.A_sum}, {"B", cls.B_diff}, {"Delta", cls.Delta_disc},
                    {"regime", std::string(to_string(cls.regime))}};
  r.summary = blowup_summary(name, rep, sys.termination);

  io::CsvWriter csv({"t", "x", "xd", "y", "yd"});
  io::Series sx{"x", {}, {}}, sy{"y", {}, {}};
  for (const auto& s : sys.samples) {
    csv.row({s.t, s.x, s.xd, s.y, s.yd});
    sx.x.push_back(s.t);
    sx.y.push_back(s.x);
    sy.x.push_back(s.t);
    sy.y.push_back(s.y);
  }
  add_table(r, out, 0, csv, {sx, sy}, {name + ": x(t), y(t)", "t", ""});

  io::CsvWriter csv4({"t", "w", "w1", "w2", "w3"});
  io::Series sw{"w = y - x", {}, {}};
  for (const auto& s : red.samples) {
    csv4.row({s.t, s.w, s.w1, s.w2, s.w3});
    sw.x.push_back(s.t);
    sw.y.push_back(s.w);
  }
  add_table(r, out, 1, csv4, {sw}, {name + ": reduced w(t)", "t", "w"});
  finish(r, out);
  return r;
}

RunResult run_pair(const std::string& name, const std::string& model, const json& p, const Outputs& out) {
  const auto nl = parse_nonlinearity(p);
  const auto s0 = parse_sys_state(p);
  const auto cfg = parse_integrator(p, 10.0);
  cfg.validate();
  SysTrajectory tr;
  if (model == "coupled") {
    systems::McKennaParams mp{num(p, "mass_m", 1.0), num(p, "half_width_l", 1.0), num(p, "omega2", 3.0)};
    tr = systems::integrate_coupled(mp, nl, s0, cfg);
  } else {
    tr = systems::integrate_truesystem(num(p, "omega2", 3.0), nl, s0, cfg);
  }
  double mx = 0.0, my = 0.0;
  io::CsvWriter csv({"t", "x", "xd", "y", "yd"});
  io::Series sx{model == "coupled" ? "theta" : "x", {}, {}}, sy{"y", {}, {}};
  for (const auto& s : tr.samples) {
    csv.row({s.t, s.x, s.xd, s.y, s.yd});
    mx = std::max(mx, std::abs(s.x));
    my = std::max(my, std::abs(s.y));
    sx.x.push_back(s.t);
    sx.y.push_back(s.x);
    sy.x.push_back(s.t);
    sy.y.push_back(s.y);
  }
  RunResult r;
  r.report = {{"termination", std::string(to_string(tr.termination))},
              {"t_last", tr.t_last()},
              {"max_abs_x", mx},
              {"max_abs_y", my},
              {"events", tr.events.size()}};
  r.summary = name + ": termination=" + std::string(to_string(tr.termination)) + " t_last=" +
              sformat("%.6g", tr.t_last()) + " events=" + std::to_string(tr.events.size());
  add_table(r, out, 0, csv, {sx, sy}, {name, "t", ""});
  finish(r, out);
  return r;
}

RunResult run_scanlan(const std::string& name, const json& p, const Outputs& out) {
  systems::ScanlanParams sp{num(p, "inertia_I", 1.0), num(p, "zeta", 0.0), num(p, "omega_n", 1.0), num(p, "A_lift", 0.0),
                            num(p, "B_lift", 0.0)};
  const int n = integer(p, "samples", 2001);
  if (n < 2) throw InvalidParameter("scanlan: samples must be >= 2");
  const auto sol = systems::solve_scanlan(sp, num(p, "theta0", 1.0), num(p, "thetad0", 0.0), num(p, "t_end", 50.0),
                                          static_cast<std::size_t>(n));
  const auto fit = systems::fit_log_envelope(sol.samples);
  RunResult r;
  r.report = {{"growth_exponent", sol.growth_exponent},
              {"roots", {{{"re", sol.roots[0].real()}, {"im", sol.roots[0].imag()}},
                         {{"re", sol.roots[1].real()}, {"im", sol.roots[1].imag()}}}},
              {"envelope_slope", fit.slope},
              {"envelope_r_squared", fit.r_squared},
              {"blew_up", false}};
  r.summary = name + ": growth_exponent=" + sformat("%.6g", sol.growth_exponent) +
              " envelope_R2=" + sformat("%.6g", fit.r_squared) + " finite-time blow-up: none";
  io::CsvWriter csv({"t", "theta", "thetad"});
  io::Series s{"theta", {}, {}};
  for (const auto& v : sol.samples) {
    csv.row({v.t, v.theta, v.thetad});
    s.x.push_back(v.t);
    s.y.push_back(v.theta);
  }
  add_table(r, out, 0, csv, {s}, {name + ": theta(t)", "t", "theta"});
  finish(r, out);
  return r;
}

RunResult run_truebeam(const std::string& name, const json& p, const Outputs& out) {
  truebeam::TrueBeamConfig c;
  c.geom = parse_geom(p, c.geom);
  c.damping_delta = num(p, "delta", 0.0);
  c.nl = parse_nonlinearity(p);
  c.threshold_Ebar = num(p, "Ebar", 1.0);
  c.modes_M = integer(p, "M", 4);
  c.bc_penalty_kappa = num(p, "kappa", 100.0);
  if (p.contains("frozen_switch") && !p.at("frozen_switch").is_null()) c.frozen_switch = integer(p, "frozen_switch");
  if (p.contains("gust")) {
    const json& g = p.at("gust");
    if (g.contains("knots")) {
      if (!g.at("knots").is_array()) throw ParseError("gust knots must be an array of [t, amplitude]");
      for (const auto& k : g.at("knots")) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ParseError("gust knots must be an array of [t, amplitude]");
        }
        c.forcing.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
    }
    c.forcing.p = numbers(g, "p");
    c.forcing.q = numbers(g, "q");
  }
  const auto cfg = parse_integrator(p, 10.0);
  c.integrator.rel_tol = cfg.rel_tol;
  c.integrator.abs_tol = cfg.abs_tol;
  c.integrator.blowup_threshold = cfg.blowup_threshold;
  c.integrator.max_step = p.contains("integrator") ? num(p.at("integrator"), "max_step", 0.05) : 0.05;
  c.validate();

  auto s0 = truebeam::ModalState::zero(c.modes_M);
  if (p.contains("initial")) {
    const json& i = p.at("initial");
    auto fill = [&](const char* key, std::vector<double>& dst) {
      const auto v = numbers(i, key);
      if (v.size() > dst.size()) throw InvalidParameter(std::string("truebeam: initial.") + key + " longer than M");
      std::copy(v.begin(), v.end(), dst.begin());
    };
    fill("a", s0.a);
    fill("ad", s0.ad);
    fill("b", s0.b);
    fill("bd", s0.bd);
  }
  const auto tr = truebeam::integrate_truebeam(c, s0, cfg.t_end);

  std::vector<std::string> header{"t", "switch"};
  for (int m = 1; m <= c.modes_M; ++m) header.push_back("a" + std::to_string(m));
  for (int m = 1; m <= c.modes_M; ++m) header.push_back("b" + std::to_string(m));
  io::CsvWriter csv(header);
  io::Series sa{"a1", {}, {}}, sb{"b1", {}, {}};
  for (const auto& s : tr.samples) {
    std::vector<double> row{s.t, static_cast<double>(s.switch_value)};
    row.insert(row.end(), s.a.begin(), s.a.end());
    row.insert(row.end(), s.b.begin(), s.b.end());
    csv.row(row);
    sa.x.push_back(s.t);
    sa.y.push_back(s.a[0]);
    sb.x.push_back(s.t);
    sb.y.push_back(s.b[0]);
  }
  json events = json::array();
  for (const auto& e : tr.events) events.push_back({{"t_switch", e.t_switch}, {"direction", e.direction}});
  RunResult r;
  r.report = {{"termination", std::string(to_string(tr.termination))},
              {"t_last", tr.samples.back().t},
              {"events", events},
              {"gust_spatial_integral", truebeam::GustEnergy(c.geom, c.forcing).spatial_integral()}};
  r.summary = name + ": termination=" + std::string(to_string(tr.termination)) +
              " switch_events=" + std::to_string(tr.events.size());
  if (!tr.events.empty()) r.summary += " first_switch=" + sformat("%.9g", tr.events.front().t_switch);
  add_table(r, out, 0, csv, {sa, sb}, {name + ": a1(t), b1(t)", "t", ""});
  finish(r, out);
  return r;
}

RunResult run_modes(const std::string& name, const json& p, const Outputs& out) {
  const auto g = parse_geom(p);
  g.validate();
  const int m_max = integer(p, "m_max", 4);
  const int grid = integer(p, "grid", 32);
  io::CsvWriter csv({"family", "m", "n", "lambda"});
  json rows = json::array();
  double worst = 0.0;
  auto emit = [&](const plate::Mode& md, plate::BcKind bc) {
    csv.raw_row({std::string(to_string(md.family)), std::to_string(md.m_index), std::to_string(md.n_index),
                 io::fmt(md.lambda)});
    const double res = plate::verify_mode(g, md, bc, grid).max();
    worst = std::max(worst, res);
    return res;
  };
  io::Series lam{"lambda_m", {}, {}};
  if (m_max > 0) {
    for (const auto& md : plate::analytic_modes(g, m_max)) {
      double res = emit(md, plate::BcKind::eigen1);
      res = std::max(res, plate::verify_mode(g, md, plate::BcKind::eigen2, grid).max());
      worst = std::max(worst, res);
      if (md.family == plate::ModeFamily::vertical) {
        lam.x.push_back(md.m_index);
        lam.y.push_back(md.lambda);
      }
    }
  }
  json navier = json::array();
  for (double S : numbers(p, "navier_S")) {
    if (S != std::floor(S)) throw ParseError("navier_S entries must be integers");
    json pairs = json::array();
    for (const auto& md : plate::navier_square_search(static_cast<std::int64_t>(S))) {
      emit(md, plate::BcKind::navier);
      pairs.push_back({md.m_index, md.n_index});
    }
    navier.push_back({{"S", static_cast<std::int64_t>(S)}, {"lambda", S * S}, {"pairs", pairs}, {"multiplicity", pairs.size()}});
  }
  RunResult r;
  r.report = {{"max_residual", worst}, {"navier", navier}, {"m_max", m_max}};
  r.summary = name + ": max_residual=" + sformat("%.3g", worst);
  for (const auto& n : navier) {
    r.summary += " S=" + std::to_string(n["S"].get<std::int64_t>()) + " multiplicity=" +
                 std::to_string(n["multiplicity"].get<std::size_t>());
  }
  add_table(r, out, 0, csv, {lam}, {name + ": lambda_m", "m", "lambda"});

  if (p.contains("field") && out.at(1) && out.at(1)->csv) {
    const json& f = p.at("field");
    const std::string fam = text(f, "family", "navier_square");
    const int m = integer(f, "m", 1), n = integer(f, "n", 1), res = integer(f, "grid", 48);
    if (res < 2) throw InvalidParameter("field grid must be >= 2");
    plate::Mode md;
    plate::PlateGeom fg = g;
    if (fam == "vertical") {
      md = plate::vertical_mode(g, m);
    } else if (fam == "torsional") {
      md = plate::torsional_mode(g, m);
    } else if (fam == "navier_square") {
      md = plate::navier_mode(m, n);
      fg = plate::PlateGeom::navier_square();
    } else {
      throw ParseError("unknown mode family '" + fam + "'");
    }
    io::CsvWriter grid_csv({"x1", "x2", "u"});
    for (int i = 0; i <= res; ++i) {
      for (int j = 0; j <= res; ++j) {
        const double x1 = fg.length_L * i / res, x2 = -fg.half_width_l + 2.0 * fg.half_width_l * j / res;
        grid_csv.row({x1, x2, md.u(x1, x2)});
      }
    }
    r.artifacts.push_back({*out.at(1)->csv, grid_csv.str()});
  }
  finish(r, out);
  return r;
}

RunResult run_flutter(const std::string& name, const json& p, const Outputs& out) {
  energy::FlutterParams fp;
  fp.half_width_l = num(p, "l", 1.0);
  fp.gyration_r = num(p, "r", fp.half_width_l / std::numbers::sqrt2);
  fp.omega_B = num(p, "omega_B", 1.0);
  fp.omega_T = num(p, "omega_T", 2.0);
  fp.alpha_mass = num(p, "alpha", 0.02);
  const auto scales = numbers(p, "scales", {1.0});
  io::CsvWriter csv({"scale", "l", "r", "V_c"});
  io::Series s{"V_c", {}, {}};
  json rows = json::array();
  double base = std::numeric_limits<double>::quiet_NaN();
  for (double c : scales) {
    if (!(c > 0.0)) throw InvalidParameter("flutter: scales must be > 0");
    auto q = fp;
    q.half_width_l *= c;
    q.gyration_r *= c;
    const double v = energy::flutter_speed(q);
    if (std::isnan(base)) base = v / c;
    csv.row({c, q.half_width_l, q.gyration_r, v});
    s.x.push_back(c);
    s.y.push_back(v);
    rows.push_back({{"scale", c}, {"V_c", v}});
  }
  RunResult r;
  r.report = {{"speeds", rows}};
  r.summary = name + ":";
  for (const auto& row : rows) {
    r.summary += " V_c(x" + sformat("%g", row["scale"].get<double>()) + ")=" + sformat("%.9g", row["V_c"].get<double>());
  }
  add_table(r, out, 0, csv, {s}, {name + ": flutter speed vs width scale", "scale", "V_c"});
  finish(r, out);
  return r;
}

json ledger_json(const energy::EnergyLedger& l) {
  const auto act = energy::active_mode_count(l);
  return {{"total_E", l.total_E},
          {"threshold_Ebar", l.threshold_Ebar},
          {"switch", energy::switch_state(l)},
          {"active_modes", act.active_modes},
          {"torsional_active", act.torsional_active}};
}

RunResult run_energy(const std::string& name, const json& p, const Outputs& out) {
  const double Ebar = num(p, "Ebar", 1.0);
  auto schedule = numbers(p, "schedule");
  RunResult r;
  if (p.contains("gust")) {
    // E(t) from a gust on the plate, tabulated on a time grid.
    const auto g = parse_geom(p);
    g.validate();
    truebeam::GustSpec gs;
    const json& gj = p.at("gust");
    if (gj.contains("knots")) {
      for (const auto& k : gj.at("knots")) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ParseError("gust knots must be an array of [t, amplitude]");
        }
        gs.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
    }
    gs.p = numbers(gj, "p");
    gs.q = numbers(gj, "q");
    gs.validate();
    const quad::Rect rect{0.0, g.length_L, -g.half_width_l, g.half_width_l};
    const auto times = numbers(p, "times", {0.0});
    io::CsvWriter csv({"t", "total_E", "switch", "active_modes", "torsional_active"});
    io::Series s{"E(t)", {}, {}};
    json last;
    for (double t : times) {
      const double E = energy::gust_energy([&](double x1, double x2, double tt) { return gs.phi(g, x1, x2, tt); }, t,
                                           rect, 16)
                           .value;
      const auto l = energy::make_ledger(E, Ebar, schedule);
      last = ledger_json(l);
      csv.row({t, E, static_cast<double>(energy::switch_state(l)),
               static_cast<double>(last["active_modes"].get<int>()), last["torsional_active"].get<bool>() ? 1.0 : 0.0});
      s.x.push_back(t);
      s.y.push_back(E);
    }
    r.report = last;
    add_table(r, out, 0, csv, {s}, {name + ": gust energy", "t", "E"});
  } else {
    const auto l = energy::make_ledger(num(p, "total_E"), Ebar, schedule);
    r.report = ledger_json(l);
  }
  r.summary = name + ": total_E=" + sformat("%.6g", r.report["total_E"].get<double>()) +
              " switch=" + std::to_string(r.report["switch"].get<int>()) +
              " active_modes=" + std::to_string(r.report["active_modes"].get<int>());
  finish(r, out);
  return r;
}

}  // namespace

RunResult run_scenario(const json& config, const fs::path& out_dir) {
  if (!config.is_object()) throw ParseError("config must be a JSON object");
  const std::string model = text(config, "model");
  const std::string name = text(config, "name", model);
  const json params = config.contains("parameters") ? config.at("parameters") : json::object();
  if (!params.is_object()) throw ParseError("parameters must be an object");
  const Outputs out(config, out_dir);
  if (model == "ode4") return run_ode4(name, params, out);
  if (model == "miosyst") return run_miosyst(name, params, out);
  if (model == "coupled" || model == "truesystem") return run_pair(name, model, params, out);
  if (model == "scanlan") return run_scanlan(name, params, out);
  if (model == "truebeam") return run_truebeam(name, params, out);
  if (model == "modes") return run_modes(name, params, out);
  if (model == "flutter") return run_flutter(name, params, out);
  if (model == "energy") return run_energy(name, params, out);
  throw ParseError("unknown model '" + model + "'");
}

void write_artifacts(const std::vector<Artifact>& artifacts) {
  std::vector<fs::path> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    const auto& a = artifacts[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (artifacts[j].path == a.path) {
        discard();
        throw std::runtime_error("two artifacts share the path " + a.path.string());
      }
    }
    std::error_code ec;
    if (a.path.has_parent_path()) fs::create_directories(a.path.parent_path(), ec);
    fs::path tmp = a.path;
    tmp += ".partial";
    std::ofstream f(tmp, std::ios::binary);
    if (f) staged.push_back(tmp);
    if (!f || !(f << a.content) || !(f.flush())) {
      discard();
      throw std::runtime_error("cannot write " + a.path.string());
    }
  }
  for (std::size_t i = 0; i < artifacts.size(); ++i) fs::rename(staged[i], artifacts[i].path);
}

fs::path output_dir(const json& config) {
  if (const char* env = std::getenv("BRIDGE_OUT"); env && *env) return env;
  if (config.is_object() && config.contains("output_dir")) return text(config, "output_dir");
  return ".";
}

json parse_config_text(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

json load_config(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

int report_failure(const std::string& context) {
  try {
    throw;
  } catch (const ParseError& e) {
    std::cerr << context << ": parse error: " << e.what() << "\n";
    return parse_failure;
  } catch (const json::exception& e) {
    std::cerr << context << ": parse error: " << e.what() << "\n";
    return parse_failure;
  } catch (const InvalidParameter& e) {
    std::cerr << context << ": precondition violated: " << e.what() << "\n";
    return precondition_failure;
  } catch (const UnsupportedFamily& e) {
    std::cerr << context << ": precondition violated: " << e.what() << "\n";
    return precondition_failure;
  } catch (const std::exception& e) {
    std::cerr << context << ": runtime failure: " << e.what() << "\n";
    return runtime_failure;
  }
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v;
  const double span = (stop - start) / step;
  const auto n = static_cast<long>(std::floor(span + 1e-9)) + 1;
  for (long i = 0; i < n; ++i) v.push_back(start + static_cast<double>(i) * step);
  return v;
}

SweepSpec parse_sweep(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("sweep parameter must look like name=start:stop:step");
  SweepSpec spec;
  spec.path = s.substr(0, eq);
  const std::string range = s.substr(eq + 1);
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto colon = range.find(':', pos);
    const std::string part = range.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    if ((i < 2) == (colon == std::string::npos)) throw ParseError("sweep range must be start:stop:step");
    try {
      std::size_t used = 0;
      v[i] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ParseError("sweep range value '" + part + "' is not a number");
    }
    pos = colon + 1;
  }
  spec.start = v[0];
  spec.stop = v[1];
  spec.step = v[2];
  if (!(spec.step > 0.0) || !(spec.stop >= spec.start) || !std::isfinite(spec.stop)) {
    throw ParseError("sweep range needs step > 0 and stop >= start");
  }
  if (spec.values().size() > 10000) throw ParseError("sweep range has more than 10000 points");
  return spec;
}

json sweep_point(const json& config, const SweepSpec& spec, double value) {
  json c = config;
  if (!c.contains("parameters")) c["parameters"] = json::object();
  json* node = &c["parameters"];
  std::string key;
  std::stringstream ss(spec.path);
  std::vector<std::string> parts;
  while (std::getline(ss, key, '.')) parts.push_back(key);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ParseError("sweep path '" + spec.path + "' does not name an object field");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ParseError("sweep path '" + spec.path + "' does not name an object field");
  (*node)[parts.back()] = value;

  char tag[64];
  std::snprintf(tag, sizeof tag, "_%s%.10g", parts.back().c_str(), value);
  auto suffix = [&](json& entry, const char* field) {
    if (!entry.contains(field)) return;
    fs::path p(entry.at(field).get<std::string>());
    fs::path np = p.parent_path() / (p.stem().string() + tag + p.extension().string());
    entry[field] = np.string();
  };
  if (c.contains("outputs") && c["outputs"].is_array()) {
    for (auto& o : c["outputs"]) {
      suffix(o, "csv_path");
      suffix(o, "svg_path");
    }
  }
  suffix(c, "report_path");
  c["name"] = c.value("name", std::string("sweep")) + tag;
  return c;
}

}  // namespace bridge::cli

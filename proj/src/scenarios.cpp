#include "twinwell/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "twinwell/closed_forms.hpp"
#include "twinwell/csv.hpp"
#include "twinwell/field.hpp"
#include "twinwell/mode_bath.hpp"
#include "twinwell/wellcheck.hpp"

namespace twinwell {

namespace {

constexpr double kPi = std::numbers::pi;

using Assignment = std::map<std::string, double>;
using Rows = std::vector<std::vector<double>>;

std::vector<std::string> fixed_columns(Scenario s) {
  switch (s) {
    case Scenario::Rates:
      return {"omega0", "delta", "gamma", "beta", "eta", "re_d", "a", "gamma_plus_re", "gamma_plus_im",
              "gamma_minus_re", "gamma_minus_im", "amplitude_A", "phase_phi"};
    case Scenario::Tunneling:
      return {"omega0", "delta", "gamma", "beta", "eta", "t", "tau", "z_over_half_b", "z_longtime_over_half_b"};
    case Scenario::TunnelingOracle:
      return {"omega0", "delta", "gamma", "beta", "eta", "t", "tau", "p_plus", "p_minus",
              "z_numeric_over_half_b", "z_analytic_over_half_b", "photon_norm", "norm"};
    case Scenario::FieldPattern:
      return {"alpha", "g1_total", "g1_plus", "g1_minus", "envelope"};
    case Scenario::FieldOracle:
      return {"alpha", "g1_oracle", "g1_total", "g1_components", "rel_total", "rel_components",
              "tail_fraction", "error_estimate", "envelope"};
    case Scenario::Wellcheck:
      return {"V0_J", "a_m", "mass_kg", "delta_Hz", "b_m", "beta", "leakage", "pass"};
    case Scenario::FigAmplitude:
      return {"beta", "ln_gamma", "gamma", "a", "amplitude_A", "phase_phi"};
    case Scenario::FigZtau:
      return {"ln_gamma", "tau", "gamma", "z_over_half_b"};
    case Scenario::FigPolar:
      return {"alpha", "g1_plus", "g1_minus", "g1_total", "envelope"};
  }
  return {};
}

// Axes evaluated inside one task so they can share setup work.
bool grouped_axis(Scenario s, const std::string& name) {
  return s == Scenario::FieldOracle && name == "alpha";
}

std::vector<std::string> prefix_columns(const ScenarioConfig& cfg) {
  const std::vector<std::string> fixed = fixed_columns(cfg.scenario);
  std::vector<std::string> out;
  for (const SweepAxis& ax : cfg.sweeps) {
    if (std::find(fixed.begin(), fixed.end(), ax.name) == fixed.end()) out.push_back(ax.name);
  }
  return out;
}

ParamsBlock resolve(const ParamsBlock& base, const Assignment& a) {
  ParamsBlock p = base;
  for (const auto& [k, v] : a) {
    if (k == "omega0") p.omega0 = v;
    else if (k == "delta") p.delta = v;
    else if (k == "gamma") p.gamma = v;
    else if (k == "ln_gamma") p.gamma = std::exp(v);
    else if (k == "beta") p.beta = v;
    else if (k == "eta") p.eta = v;
    else if (k == "r") p.r = v;
    else if (k == "t_ret") p.t_ret = v;
    else if (k == "v0_freq") p.v0_freq = v;
    else if (k == "a_well") p.a_well = v;
    else if (k == "mass") p.mass = v;
    else if (k == "lambda0") p.lambda0 = v;
    else if (k == "omega0_scale") p.omega0_scale = v;
  }
  return p;
}

ModelParams model(const ParamsBlock& b) {
  return make_params_dimensionless(b.omega0, b.delta, b.gamma, b.beta, b.eta);
}

InitialExternalState initial(const ParamsBlock& b, Scenario s) {
  if (b.init == "default") return s == Scenario::FigPolar ? InitialExternalState::plus() : InitialExternalState::right_well();
  if (b.init == "right") return InitialExternalState::right_well();
  if (b.init == "left") return InitialExternalState::left_well();
  if (b.init == "plus") return InitialExternalState::plus();
  if (b.init == "minus") return InitialExternalState::minus();
  return InitialExternalState::normalized(b.c_plus, b.c_minus);
}

double retarded_time(const ParamsBlock& b, const ModelParams& p) {
  return b.t_ret < 0.0 ? 1.0 / p.gamma_rate : b.t_ret;
}

double value_of(const Assignment& a, const std::string& k) {
  const auto it = a.find(k);
  if (it == a.end()) throw ValidationError("internal: axis '" + k + "' missing");
  return it->second;
}

ModelParams half_b_units(ModelParams p) {
  p.b = 2.0;  // lengths reported in units of b/2
  return p;
}

QuarticWell well_of(const ParamsBlock& b) {
  return make_quartic_well(b.v0_freq, b.convention, b.a_well, b.mass, b.lambda0, b.preset);
}

GridOptions bath_grid(const OracleBlock& o, const ModelParams& p, double t_end) {
  GridOptions g = suggest_grid(p, t_end, o.omega_max, o.n_mu);
  g.n_omega = o.n_omega > 0 ? o.n_omega : std::max(g.n_omega, 4000);
  g.density = o.density;
  g.renormalize = o.renormalize;
  return g;
}

// Parameter checks shared by validation and execution.
void check_point(const ScenarioConfig& cfg, const Assignment& a) {
  const ParamsBlock b = resolve(cfg.params, a);
  if (cfg.scenario == Scenario::Wellcheck) {
    well_of(b);
    if (!(b.omega0_scale > 0.0)) throw ValidationError("omega0_scale must be positive");
    if (b.n_grid < 2000) throw ValidationError("n_grid must be >= 2000");
    if (!(b.domain >= 2.5)) throw ValidationError("domain must be >= 2.5");
    return;
  }
  const ModelParams p = model(b);
  initial(b, cfg.scenario);
  if (a.count("t") && a.at("t") < 0.0) throw ValidationError("t must be >= 0");
  if (a.count("tau") && a.at("tau") < 0.0) throw ValidationError("tau must be >= 0");
  if (cfg.scenario == Scenario::FieldPattern || cfg.scenario == Scenario::FieldOracle ||
      cfg.scenario == Scenario::FigPolar) {
    FieldPoint::polar(b.r, a.count("alpha") ? a.at("alpha") : 0.0, p);
    if (!(retarded_time(b, p) > 0.0)) throw ValidationError("t_ret must be positive");
  }
  if (cfg.scenario == Scenario::TunnelingOracle) {
    build_grid(p, bath_grid(cfg.oracle, p, cfg.oracle.t_end / p.gamma_rate));
  }
}

Rows compute_point(const ScenarioConfig& cfg, const Assignment& a) {
  const ParamsBlock b = resolve(cfg.params, a);
  Rows rows;
  switch (cfg.scenario) {
    case Scenario::Rates: {
      const ModelParams p = model(b);
      const ComplexRate gp = gamma_pm_ratio(p.eta, p.beta, p.delta_small, +1);
      const ComplexRate gm = gamma_pm_ratio(p.eta, p.beta, p.delta_small, -1);
      const TunnelingTrajectoryParams tt = amp_A(p.eta, p.beta, p.gamma_ratio);
      rows.push_back({p.omega0, p.delta_small, p.gamma_ratio, p.beta, p.eta, re_d(p.eta, p.beta),
                      a_coeff(p.eta, p.beta), gp.re, gp.im, gm.re, gm.im, tt.amplitude_A, tt.phase_phi});
      break;
    }
    case Scenario::Tunneling: {
      const ModelParams p = model(b);
      const InitialExternalState init = initial(b, cfg.scenario);
      const double t = a.count("t") ? a.at("t") : value_of(a, "tau") / p.delta_tunnel;
      const TunnelingTrajectoryParams tt = amp_A(p.eta, p.beta, p.gamma_ratio);
      const double lt = 2.0 * init.c_plus * init.c_minus * tt.amplitude_A *
                        std::cos(p.delta_tunnel * t + tt.phase_phi);
      rows.push_back({p.omega0, p.delta_small, p.gamma_ratio, p.beta, p.eta, t, p.delta_tunnel * t,
                      z_analytic(t, half_b_units(p), init), lt});
      break;
    }
    case Scenario::TunnelingOracle: {
      const ModelParams p = model(b);
      const InitialExternalState init = initial(b, cfg.scenario);
      const double t_end = cfg.oracle.t_end / p.gamma_rate;
      const BathGrid grid = build_grid(p, bath_grid(cfg.oracle, p, t_end));
      const double dt0 = cfg.oracle.dt > 0.0 ? cfg.oracle.dt : grid.max_dt();
      const long steps = static_cast<long>(std::ceil(t_end / dt0));
      IntegrateOptions io;
      io.t_end = t_end;
      io.dt = cfg.oracle.dt;
      io.stride = static_cast<int>(std::max(1L, steps / (cfg.oracle.samples - 1)));
      const Trajectory traj = integrate(grid, p, init, io);
      const std::vector<double> z = z_numeric(traj, grid, half_b_units(p));
      for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const Snapshot& s = traj.snapshots[i];
        rows.push_back({p.omega0, p.delta_small, p.gamma_ratio, p.beta, p.eta, s.t, p.delta_tunnel * s.t,
                        std::norm(s.c_plus), std::norm(s.c_minus), z[i], z_analytic(s.t, half_b_units(p), init),
                        s.photon_norm, s.norm});
      }
      break;
    }
    case Scenario::FieldPattern: {
      const ModelParams p = model(b);
      const InitialExternalState init = initial(b, cfg.scenario);
      const double alpha = value_of(a, "alpha");
      const FieldPoint pt = FieldPoint::polar(b.r, alpha, p);
      const double t0 = pt.r + 0.5 * p.b + retarded_time(b, p);
      const int m = b.time_average ? b.average_samples : 1;
      const double period = 2.0 * kPi / p.delta_tunnel;
      double tot = 0.0, gp = 0.0, gm = 0.0;
      for (int j = 0; j < m; ++j) {
        const double t = t0 + period * j / m;
        const G1Result g = g1_total(pt, t, p, init);
        const double k = g1_prefactor(pt, t, p);
        tot += g.total / k;
        gp += g.post_plus / k;
        gm += g.post_minus / k;
      }
      const double s = std::sin(p.eta - alpha);
      rows.push_back({alpha, tot / m, gp / m, gm / m, s * s});
      break;
    }
    case Scenario::Wellcheck: {
      const QuarticWell w = well_of(b);
      const TwoLevelReport r = validate_two_level(w, b.omega0_scale * w.omega0(), b.n_grid, b.domain);
      rows.push_back({r.well.v0, r.well.a_well, r.well.mass, r.delta_convention, r.b, r.beta, r.leakage,
                      r.pass ? 1.0 : 0.0});
      break;
    }
    case Scenario::FigAmplitude: {
      const ModelParams p = model(b);
      const TunnelingTrajectoryParams tt = amp_A(p.eta, p.beta, p.gamma_ratio);
      rows.push_back({p.beta, value_of(a, "ln_gamma"), p.gamma_ratio, tt.a_coeff, tt.amplitude_A, tt.phase_phi});
      break;
    }
    case Scenario::FigZtau: {
      const ModelParams p = model(b);
      const InitialExternalState init = initial(b, cfg.scenario);
      const double tau = value_of(a, "tau");
      rows.push_back({value_of(a, "ln_gamma"), tau, p.gamma_ratio,
                      z_analytic(tau / p.delta_tunnel, half_b_units(p), init)});
      break;
    }
    case Scenario::FigPolar: {
      const ModelParams p = model(b);
      const InitialExternalState init = initial(b, cfg.scenario);
      const double alpha = value_of(a, "alpha");
      const FieldPoint pt = FieldPoint::polar(b.r, alpha, p);
      const double t = pt.r + 0.5 * p.b + retarded_time(b, p);
      const G1Result g = g1_postselected_pattern(pt, t, p, init);
      const double k = g1_prefactor(pt, t, p);
      const double s = std::sin(p.eta - alpha);
      rows.push_back({alpha, g.post_plus / k, g.post_minus / k, g.total / k, s * s});
      break;
    }
    case Scenario::FieldOracle:
      throw ValidationError("internal: field-oracle runs as a grouped task");
  }
  return rows;
}

Rows compute_field_oracle(const ScenarioConfig& cfg, const Assignment& outer, const std::vector<double>& alphas) {
  const ParamsBlock b = resolve(cfg.params, outer);
  const ModelParams p = model(b);
  const InitialExternalState init = initial(b, cfg.scenario);
  std::vector<FieldPoint> pts;
  for (double alpha : alphas) pts.push_back(FieldPoint::polar(b.r, alpha, p));
  const double t = b.r + 0.5 * p.b + retarded_time(b, p);
  OracleOptions o;
  o.n_theta = cfg.oracle.n_theta;
  o.n_phi = cfg.oracle.n_phi;
  o.n_omega = cfg.oracle.field_n_omega;
  o.window = cfg.oracle.window;
  o.tau_step = cfg.oracle.tau_step;
  const std::vector<OracleResult> res = g1_quadrature_oracle_scan(pts, t, p, init, o);
  Rows rows;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double k = g1_prefactor(pts[i], t, p);
    const double go = res[i].g1.total / k;
    const double gt = g1_total(pts[i], t, p, init).total / k;
    const double gc = g1_from_components(pts[i], t, p, init).total / k;
    const double s = std::sin(p.eta - alphas[i]);
    rows.push_back({alphas[i], go, gt, gc, go / gt - 1.0, go / gc - 1.0, res[i].tail_fraction,
                    res[i].error_estimate, s * s});
  }
  return rows;
}

struct Plan {
  std::vector<const SweepAxis*> outer;
  std::vector<const SweepAxis*> inner;
  std::vector<std::vector<double>> outer_values;
  std::vector<std::vector<double>> inner_values;
  std::size_t tasks = 1;
  std::size_t inner_points = 1;
};

Plan make_plan(const ScenarioConfig& cfg) {
  Plan pl;
  for (const SweepAxis& ax : cfg.sweeps) {
    if (grouped_axis(cfg.scenario, ax.name)) {
      pl.inner.push_back(&ax);
      pl.inner_values.push_back(ax.values());
      pl.inner_points *= ax.count;
    } else {
      pl.outer.push_back(&ax);
      pl.outer_values.push_back(ax.values());
      pl.tasks *= ax.count;
    }
  }
  return pl;
}

Assignment decode(const std::vector<const SweepAxis*>& axes, const std::vector<std::vector<double>>& values,
                  std::size_t index) {
  Assignment a;
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t n = values[k].size();
    a[axes[k]->name] = values[k][index % n];
    index /= n;
  }
  return a;
}

std::string describe(const Assignment& a) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : a) {
    os << (first ? "" : ", ") << k << "=" << format_number(v);
    first = false;
  }
  return os.str();
}

template <class E>
[[noreturn]] void rethrow_at(const E& e, const Assignment& a) {
  if (a.empty()) throw e;
  throw E("at " + describe(a) + ": " + e.what());
}

Rows run_task(const ScenarioConfig& cfg, const Plan& pl, std::size_t task) {
  const Assignment outer = decode(pl.outer, pl.outer_values, task);
  try {
    if (cfg.scenario == Scenario::FieldOracle) {
      // with no alpha axis configured there is always the default one
      return compute_field_oracle(cfg, outer, pl.inner_values.at(0));
    }
    return compute_point(cfg, outer);
  } catch (const ValidationError& e) {
    rethrow_at(e, outer);
  } catch (const RuntimeError& e) {
    rethrow_at(e, outer);
  }
}

std::vector<double> prefix_values(const ScenarioConfig& cfg, const Assignment& a) {
  std::vector<double> v;
  for (const std::string& name : prefix_columns(cfg)) v.push_back(a.at(name));
  return v;
}

}  // namespace

std::vector<std::string> output_columns(const ScenarioConfig& cfg) {
  std::vector<std::string> c = prefix_columns(cfg);
  const std::vector<std::string> f = fixed_columns(cfg.scenario);
  c.insert(c.end(), f.begin(), f.end());
  return c;
}

RunSummary validate_scenario(const ScenarioConfig& cfg) {
  const Plan pl = make_plan(cfg);
  RunSummary s;
  s.columns = output_columns(cfg);
  s.tasks = pl.tasks;
  for (std::size_t t = 0; t < pl.tasks; ++t) {
    const Assignment outer = decode(pl.outer, pl.outer_values, t);
    for (std::size_t i = 0; i < pl.inner_points; ++i) {
      Assignment a = outer;
      const Assignment in = decode(pl.inner, pl.inner_values, i);
      a.insert(in.begin(), in.end());
      try {
        check_point(cfg, a);
      } catch (const ValidationError& e) {
        rethrow_at(e, a);
      }
    }
  }
  s.rows = cfg.scenario == Scenario::TunnelingOracle ? 0 : pl.tasks * pl.inner_points;
  if (cfg.output != "-") {
    const std::filesystem::path dir = std::filesystem::path(cfg.output).parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir)) {
      throw ValidationError("output.path: directory '" + dir.string() + "' does not exist");
    }
  }
  return s;
}

RunSummary run_to_stream(const ScenarioConfig& cfg, std::ostream& os) {
  RunSummary summary = validate_scenario(cfg);
  const Plan pl = make_plan(cfg);
  std::vector<Rows> results(pl.tasks);
  std::vector<std::exception_ptr> errors(pl.tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < pl.tasks; t = next++) {
      try {
        results[t] = run_task(cfg, pl, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, pl.tasks));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  write_csv_header(os, summary.columns);
  summary.rows = 0;
  for (std::size_t t = 0; t < pl.tasks; ++t) {
    const Assignment outer = decode(pl.outer, pl.outer_values, t);
    for (std::size_t i = 0; i < results[t].size(); ++i) {
      Assignment a = outer;
      if (!pl.inner.empty()) {
        const Assignment in = decode(pl.inner, pl.inner_values, i);
        a.insert(in.begin(), in.end());
      }
      std::vector<double> row = prefix_values(cfg, a);
      row.insert(row.end(), results[t][i].begin(), results[t][i].end());
      write_csv_row(os, row);
      ++summary.rows;
    }
  }
  return summary;
}

RunSummary run(const ScenarioConfig& cfg) {
  if (cfg.output == "-") return run_to_stream(cfg, std::cout);
  std::ostringstream buf;
  const RunSummary s = run_to_stream(cfg, buf);
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw ValidationError("output.path: cannot open '" + cfg.output + "' for writing");
  out << buf.str();
  out.flush();
  if (!out) throw RuntimeError("output.path: write to '" + cfg.output + "' failed");
  return s;
}

}  // namespace twinwell

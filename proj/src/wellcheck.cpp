#include "twinwell/wellcheck.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "twinwell/closed_forms.hpp"
#include "twinwell/csv.hpp"

namespace twinwell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCsMass = 2.2069469e-25;  // kg
constexpr double kCsLambda = 852.4e-9;     // m, D2 line
constexpr double kCsBarrier = 0.23e6;      // quoted barrier frequency

struct RawSpectrum {
  std::vector<double> e;  // units of V0
  std::vector<double> u;  // column-major n x m, sum u^2 = 1
  int n = 0;
  int m = 0;
  double dx = 0.0;  // units of a
  double L = 0.0;
  double u_at(int state, int i) const { return u[static_cast<std::size_t>(state) * n + i]; }
};

// H = -eps d^2/dx^2 + (x^2 - 1)^2 on n interior points of (-L, L), Dirichlet.
RawSpectrum fd_solve(double eps, int n, double L, int m) {
  RawSpectrum s;
  s.n = n;
  s.m = m;
  s.L = L;
  s.dx = 2.0 * L / (n + 1);
  const double t = eps / (s.dx * s.dx);
  std::vector<double> d(n), e(n, -t);
  for (int i = 0; i < n; ++i) {
    const double x = -L + (i + 1) * s.dx;
    d[i] = 2.0 * t + (x * x - 1.0) * (x * x - 1.0);
  }
  s.e.resize(n);
  s.u.resize(static_cast<std::size_t>(n) * m);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(m));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, m,
                                         0.0, &found, s.e.data(), s.u.data(), n, isuppz.data());
  if (info != 0 || found != m) {
    std::ostringstream msg;
    msg << "wellcheck: dstevr failed (info " << info << ", " << found << " of " << m << " states)";
    throw RuntimeError(msg.str());
  }
  s.e.resize(m);
  // Near-degenerate doublets come back mixed at the 1e-10 level (1e-5 for deep
  // wells); project each state onto its parity, which alternates with k.
  // Sign convention: even states positive on average, odd states positive on the right.
  for (int k = 0; k < m; ++k) {
    double* col = s.u.data() + static_cast<std::size_t>(k) * n;
    const double par = k % 2 == 0 ? 1.0 : -1.0;
    double nrm = 0.0;
    for (int i = 0; i < n / 2; ++i) {
      const double v = 0.5 * (col[i] + par * col[n - 1 - i]);
      col[i] = v;
      col[n - 1 - i] = par * v;
      nrm += 2.0 * v * v;
    }
    if (n % 2) {
      if (par < 0.0) col[n / 2] = 0.0;
      nrm += col[n / 2] * col[n / 2];
    }
    nrm = 1.0 / std::sqrt(nrm);
    for (int i = 0; i < n; ++i) col[i] *= nrm;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += col[i] * (k % 2 == 0 ? 1.0 : -L + (i + 1) * s.dx);
    if (acc < 0.0) for (int i = 0; i < n; ++i) col[i] = -col[i];
  }
  return s;
}

double edge_tail(const RawSpectrum& s, int state) {
  double mx = 0.0;
  for (int i = 0; i < s.n; ++i) mx = std::max(mx, std::abs(s.u_at(state, i)));
  return std::max(std::abs(s.u_at(state, 0)), std::abs(s.u_at(state, s.n - 1))) / mx;
}

}  // namespace

const char* to_string(FrequencyConvention c) { return c == FrequencyConvention::Hbar ? "hbar" : "h"; }

FrequencyConvention frequency_convention_from_string(const std::string& s) {
  if (s == "hbar") return FrequencyConvention::Hbar;
  if (s == "h") return FrequencyConvention::H;
  throw ValidationError("convention: expected 'hbar' or 'h', got '" + s + "'");
}

double QuarticWell::omega0() const { return 2.0 * kPi * si::c / lambda0; }

void QuarticWell::validate() const {
  for (double v : {v0, a_well, mass, lambda0}) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ValidationError("QuarticWell: v0, a_well, mass and lambda0 must be positive and finite");
    }
  }
}

QuarticWell make_quartic_well(double v0_frequency, FrequencyConvention convention, double a_well,
                              double mass, double lambda0, std::string name) {
  QuarticWell w;
  w.name = std::move(name);
  w.convention = convention;
  const double unit = convention == FrequencyConvention::Hbar ? si::hbar : 2.0 * kPi * si::hbar;
  w.v0 = unit * v0_frequency;
  w.a_well = a_well;
  w.mass = mass;
  w.lambda0 = lambda0;
  w.validate();
  return w;
}

QuarticWell cs_preset(FrequencyConvention convention) {
  return make_quartic_well(kCsBarrier, convention, kCsLambda / 4.0, kCsMass, kCsLambda,
                           std::string("cs-") + to_string(convention));
}

WellSpectrum solve_spectrum(const QuarticWell& well, int n_grid, double domain_half_width, int n_states) {
  well.validate();
  if (n_grid < 2000) throw ValidationError("solve_spectrum: n_grid must be >= 2000");
  if (!(domain_half_width >= 2.5)) throw ValidationError("solve_spectrum: domain must cover >= 2.5 a_well");
  if (n_states < 10) throw ValidationError("solve_spectrum: need >= 10 states");
  if (n_states > n_grid / 4) throw ValidationError("solve_spectrum: too many states for the grid");

  const double eps = si::hbar * si::hbar / (2.0 * well.mass * well.a_well * well.a_well * well.v0);
  const RawSpectrum s = fd_solve(eps, n_grid, domain_half_width, n_states);
  const RawSpectrum f = fd_solve(eps, 2 * n_grid + 1, domain_half_width, n_states);

  WellSpectrum out;
  for (int k = 0; k < 10; ++k) {
    out.max_rel_change = std::max(out.max_rel_change, std::abs(f.e[k] - s.e[k]) / std::abs(f.e[k]));
  }
  if (out.max_rel_change > 1e-3) {
    std::ostringstream msg;
    msg << "solve_spectrum: energies change by " << out.max_rel_change
        << " under grid doubling (limit 1e-3); raise n_grid";
    throw RuntimeError(msg.str());
  }
  out.boundary_tail = std::max(edge_tail(s, 0), edge_tail(s, 1));
  if (out.boundary_tail > 1e-8) {
    std::ostringstream msg;
    msg << "solve_spectrum: doublet tail " << out.boundary_tail << " at the boundary; widen the domain";
    throw RuntimeError(msg.str());
  }
  const double split_s = s.e[1] - s.e[0], split_f = f.e[1] - f.e[0];
  out.delta_rel_change = std::abs(split_f - split_s) / split_f;
  // dx halves between the two grids (up to the +1 point), second-order stencil
  out.delta_richardson = (4.0 * split_f - split_s) / 3.0 * well.v0 / si::hbar;

  out.energies.resize(n_states);
  for (int k = 0; k < n_states; ++k) out.energies[k] = s.e[k] * well.v0;
  out.grid.dz = s.dx * well.a_well;
  out.grid.z.resize(s.n);
  for (int i = 0; i < s.n; ++i) out.grid.z[i] = (-s.L + (i + 1) * s.dx) * well.a_well;
  const double norm = 1.0 / std::sqrt(out.grid.dz);
  out.states.assign(n_states, std::vector<double>(s.n));
  for (int k = 0; k < n_states; ++k) {
    for (int i = 0; i < s.n; ++i) out.states[k][i] = s.u_at(k, i) * norm;
  }
  out.tunnel_delta = split_s * well.v0 / si::hbar;
  // <R|z|R> = <0|z|1> since the diagonal elements vanish by parity
  out.b_sep = 2.0 * std::abs(position_element(out, 0, 1));
  out.beta_out = well.omega0() * out.b_sep / si::c;
  return out;
}

double position_element(const WellSpectrum& sp, int m, int n) {
  const auto& a = sp.states.at(m);
  const auto& b = sp.states.at(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * sp.grid.z[i] * b[i];
  return acc * sp.grid.dz;
}

double beta_param(const WellSpectrum& spectrum, double omega0) {
  return omega0 * spectrum.b_sep / si::c;
}

LeakageReport emission_leakage_k(const WellSpectrum& sp, double k, int from_state) {
  if (from_state != 0 && from_state != 1) throw ValidationError("emission_leakage: from_state must be 0 or 1");
  if (sp.states.size() < 10) throw ValidationError("emission_leakage: need >= 10 states");
  const auto& psi = sp.states[from_state];
  const std::size_t n = psi.size();
  std::vector<std::complex<double>> src(n);
  for (std::size_t i = 0; i < n; ++i) src[i] = std::polar(psi[i], k * sp.grid.z[i]);
  LeakageReport rep;
  for (std::size_t m = 0; m < sp.states.size(); ++m) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += sp.states[m][i] * src[i];
    const double p = std::norm(acc * sp.grid.dz);
    rep.completeness += p;
    if (m >= 2) rep.leakage += p;
  }
  if (std::abs(rep.completeness - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "emission_leakage: completeness sum " << rep.completeness << " differs from 1 by more than 1e-6"
        << " with " << sp.states.size() << " states";
    rep.warnings.push_back(msg.str());
  }
  return rep;
}

LeakageReport emission_leakage(const WellSpectrum& sp, double omega0, int from_state) {
  return emission_leakage_k(sp, omega0 / si::c, from_state);
}

TwoLevelReport validate_two_level(const QuarticWell& well, double omega0, int n_grid, double domain_half_width) {
  if (!std::isfinite(omega0) || !(omega0 > 0.0)) throw ValidationError("validate_two_level: omega0 must be positive");
  const WellSpectrum sp = solve_spectrum(well, n_grid, domain_half_width);
  TwoLevelReport r;
  r.well = well;
  r.omega0 = omega0;
  r.delta = sp.tunnel_delta;
  r.delta_over_2pi = sp.tunnel_delta / (2.0 * kPi);
  r.delta_convention = well.convention == FrequencyConvention::Hbar ? r.delta : r.delta_over_2pi;
  r.b = sp.b_sep;
  r.beta = beta_param(sp, omega0);
  const LeakageReport l0 = emission_leakage(sp, omega0, 0);
  const LeakageReport l1 = emission_leakage(sp, omega0, 1);
  r.leakage = l0.leakage;
  r.leakage_excited = l1.leakage;
  r.warnings = l0.warnings;
  r.warnings.insert(r.warnings.end(), l1.warnings.begin(), l1.warnings.end());
  r.gap_ratio = (sp.energies[2] - sp.energies[1]) / (si::hbar * sp.tunnel_delta);
  r.ground_energy_over_v0 = sp.energies[0] / well.v0;
  if (sp.delta_rel_change > 0.01) {
    std::ostringstream msg;
    msg << "tunnel splitting changes by " << 100.0 * sp.delta_rel_change << "% under grid doubling";
    r.warnings.push_back(msg.str());
  }
  r.pass = r.leakage < kMaxLeakage && r.gap_ratio > kMinGapRatio;
  return r;
}

void write_wellcheck_csv_header(std::ostream& os) {
  write_csv_header(os, {"V0_J", "a_m", "mass_kg", "delta_Hz", "b_m", "beta", "leakage", "pass"});
}

void write_wellcheck_csv_row(std::ostream& os, const TwoLevelReport& r) {
  write_csv_row(os, {r.well.v0, r.well.a_well, r.well.mass, r.delta_convention, r.b, r.beta, r.leakage,
                     r.pass ? 1.0 : 0.0});
}

}  // namespace twinwell

#include "twinwell/mode_bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "twinwell/closed_forms.hpp"
#include "twinwell/csv.hpp"
#include "twinwell/quadrature.hpp"

namespace twinwell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

double density_shape(SpectralDensity d, double omega, double omega0) {
  return d == SpectralDensity::Cubic ? omega * omega * omega : omega0 * omega0 * omega0;
}

// Channel layout per omega node j: q = j (cos^2 channel), q = n + j (sin^2).
// Block "+" holds c_{0+e}; its sin^2 channel has nu = omega0 - omega + Delta.
// Block "-" holds c_{0-e}; its sin^2 channel has nu = omega0 - omega - Delta.
struct ChannelEngine {
  int n = 0;
  int nq = 0;
  double h = 0.0;
  std::vector<double> w;
  std::vector<double> ep_hr, ep_hi, ep_1r, ep_1i;  // block + : e^{i nu h/2}, e^{i nu h}
  std::vector<double> em_hr, em_hi, em_1r, em_1i;  // block -
  std::vector<double> zp_r, zp_i, zm_r, zm_i;
  double q0 = 0.0;
  cplx qh_p, qh_m;

  // pending Z update from the previous step, per block
  cplx p1_p, pm_p, p4_p;
  cplx p1_m, pm_m, p4_m;

  struct Sums {
    cplx a0_p, ah_p, a1_p;
    cplx a0_m, ah_m, a1_m;
    double pnorm = 0.0;
    cplx k_cc, k_ss;
  };

  ChannelEngine(const BathGrid& grid, const ModelParams& p, double step) : h(step) {
    n = grid.n_omega;
    nq = 2 * n;
    w.resize(nq);
    for (auto* v : {&ep_hr, &ep_hi, &ep_1r, &ep_1i, &em_hr, &em_hi, &em_1r, &em_1i,
                    &zp_r, &zp_i, &zm_r, &zm_i}) {
      v->assign(nq, 0.0);
    }
    for (int j = 0; j < n; ++j) {
      w[j] = grid.s_cc[j];
      w[n + j] = grid.s_ss[j];
    }
    auto set_phase = [&](std::vector<double>& hr, std::vector<double>& hi,
                         std::vector<double>& fr, std::vector<double>& fi, int q, double nu) {
      hr[q] = std::cos(0.5 * nu * h);
      hi[q] = std::sin(0.5 * nu * h);
      fr[q] = std::cos(nu * h);
      fi[q] = std::sin(nu * h);
    };
    for (int j = 0; j < n; ++j) {
      const double nu = p.omega0 - grid.omega[j];
      set_phase(ep_hr, ep_hi, ep_1r, ep_1i, j, nu);
      set_phase(em_hr, em_hi, em_1r, em_1i, j, nu);
      set_phase(ep_hr, ep_hi, ep_1r, ep_1i, n + j, nu + p.delta_tunnel);
      set_phase(em_hr, em_hi, em_1r, em_1i, n + j, nu - p.delta_tunnel);
    }
    for (int q = 0; q < nq; ++q) {
      q0 += w[q];
      qh_p += w[q] * cplx(ep_hr[q], ep_hi[q]);
      qh_m += w[q] * cplx(em_hr[q], em_hi[q]);
    }
  }

  // Applies the pending update and accumulates the RK4 sums of the new state.
  template <bool kSnapshot>
  Sums pass() {
    const double p1pr = p1_p.real(), p1pi = p1_p.imag();
    const double pmpr = pm_p.real(), pmpi = pm_p.imag();
    const double p4pr = p4_p.real(), p4pi = p4_p.imag();
    const double p1mr = p1_m.real(), p1mi = p1_m.imag();
    const double pmmr = pm_m.real(), pmmi = pm_m.imag();
    const double p4mr = p4_m.real(), p4mi = p4_m.imag();
    double a0pr = 0, a0pi = 0, ahpr = 0, ahpi = 0, a1pr = 0, a1pi = 0;
    double a0mr = 0, a0mi = 0, ahmr = 0, ahmi = 0, a1mr = 0, a1mi = 0;
    double pn = 0, kcr = 0, kci = 0, ksr = 0, ksi = 0;
    const double* W = w.data();
    const double *phr = ep_hr.data(), *phi = ep_hi.data(), *p1r = ep_1r.data(), *p1i = ep_1i.data();
    const double *mhr = em_hr.data(), *mhi = em_hi.data(), *m1r = em_1r.data(), *m1i = em_1i.data();
    double *zpr = zp_r.data(), *zpi = zp_i.data(), *zmr = zm_r.data(), *zmi = zm_i.data();
    const int nn = n;

#pragma omp simd reduction(+ : a0pr, a0pi, ahpr, ahpi, a1pr, a1pi, a0mr, a0mi, ahmr, ahmi, \
                               a1mr, a1mi, pn, kcr, kci, ksr, ksi)
    for (int q = 0; q < nq; ++q) {
      const double wq = W[q];
      // block +
      const double upr = zpr[q] + p1pr, upi = zpi[q] + p1pi;
      const double npr = p1r[q] * upr - p1i[q] * upi + phr[q] * pmpr - phi[q] * pmpi + p4pr;
      const double npi = p1r[q] * upi + p1i[q] * upr + phr[q] * pmpi + phi[q] * pmpr + p4pi;
      zpr[q] = npr;
      zpi[q] = npi;
      a0pr += wq * npr;
      a0pi += wq * npi;
      ahpr += wq * (phr[q] * npr - phi[q] * npi);
      ahpi += wq * (phr[q] * npi + phi[q] * npr);
      a1pr += wq * (p1r[q] * npr - p1i[q] * npi);
      a1pi += wq * (p1r[q] * npi + p1i[q] * npr);
      // block -
      const double umr = zmr[q] + p1mr, umi = zmi[q] + p1mi;
      const double nmr = m1r[q] * umr - m1i[q] * umi + mhr[q] * pmmr - mhi[q] * pmmi + p4mr;
      const double nmi = m1r[q] * umi + m1i[q] * umr + mhr[q] * pmmi + mhi[q] * pmmr + p4mi;
      zmr[q] = nmr;
      zmi[q] = nmi;
      a0mr += wq * nmr;
      a0mi += wq * nmi;
      ahmr += wq * (mhr[q] * nmr - mhi[q] * nmi);
      ahmi += wq * (mhr[q] * nmi + mhi[q] * nmr);
      a1mr += wq * (m1r[q] * nmr - m1i[q] * nmi);
      a1mi += wq * (m1r[q] * nmi + m1i[q] * nmr);
      if constexpr (kSnapshot) {
        pn += wq * (npr * npr + npi * npi + nmr * nmr + nmi * nmi);
        // cos^2 channels: conj(Z-) Z+ ; sin^2 channels: conj(Z+) Z-
        const double cr = wq * (nmr * npr + nmi * npi);
        const double ci = wq * (nmr * npi - nmi * npr);
        const double sr = wq * (npr * nmr + npi * nmi);
        const double si = wq * (npr * nmi - npi * nmr);
        const double is_cc = q < nn ? 1.0 : 0.0;
        kcr += is_cc * cr;
        kci += is_cc * ci;
        ksr += (1.0 - is_cc) * sr;
        ksi += (1.0 - is_cc) * si;
      }
    }
    Sums s;
    s.a0_p = {a0pr, a0pi};
    s.ah_p = {ahpr, ahpi};
    s.a1_p = {a1pr, a1pi};
    s.a0_m = {a0mr, a0mi};
    s.ah_m = {ahmr, ahmi};
    s.a1_m = {a1mr, a1mi};
    s.pnorm = pn;
    s.k_cc = {kcr, kci};
    s.k_ss = {ksr, ksi};
    return s;
  }

  // RK4 stages for one block given the channel sums of the current state.
  cplx stage(cplx c, cplx a0, cplx ah, cplx a1, cplx qh, double ct, cplx& p1, cplx& pm,
             cplx& p4) const {
    const cplx ict(0.0, ct);
    const cplx k1 = -a0 + ict * c;
    const cplx c2 = c + 0.5 * h * k1;
    const cplx k2 = -ah - 0.5 * h * c * qh + ict * c2;
    const cplx c3 = c + 0.5 * h * k2;
    const cplx k3 = -ah - 0.5 * h * c2 * q0 + ict * c3;
    const cplx c4 = c + h * k3;
    const cplx k4 = -a1 - h * c3 * qh + ict * c4;
    p1 = (h / 6.0) * c;
    pm = (h / 3.0) * (c2 + c3);
    p4 = (h / 6.0) * c4;
    return c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

// e^z - 1 without cancellation for small |z|
cplx expm1_c(cplx z) {
  const double x = z.real(), y = z.imag();
  const double sh = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

void check_state_size(const AmplitudeState& s, const BathGrid& g) {
  if (s.c_photon_minus.size() != g.modes.size() || s.c_photon_plus.size() != g.modes.size()) {
    throw ValidationError("amplitude state does not match the bath grid");
  }
}

}  // namespace

double BathGrid::recurrence_time() const { return kTwoPi / d_omega; }

BathGrid build_grid(const ModelParams& params, double omega_max, int n_omega, int n_mu,
                    SpectralDensity density, bool zero_recoil, bool renormalize) {
  if (n_omega < 500) throw ValidationError("build_grid: n_omega must be >= 500");
  if (n_mu < 16) throw ValidationError("build_grid: n_mu must be >= 16");
  if (!(omega_max >= 3.0 * params.omega0)) {
    throw ValidationError("build_grid: omega_max must be >= 3 omega0");
  }
  const double dw = omega_max / n_omega;
  if (dw > params.gamma_rate / 10.0) {
    std::ostringstream msg;
    msg << "build_grid: d_omega = " << dw << " exceeds Gamma/10 = " << params.gamma_rate / 10.0
        << " (Lorentzian unresolved)";
    throw ValidationError(msg.str());
  }

  BathGrid g;
  g.omega_max = omega_max;
  g.n_omega = n_omega;
  g.n_mu = n_mu;
  g.d_omega = dw;
  g.density = density;
  const QuadratureRule gl = gauss_legendre(n_mu);
  std::vector<double> hw(n_mu);
  double hsum = 0.0;
  for (int m = 0; m < n_mu; ++m) {
    hw[m] = h_angular(params.eta, gl.nodes[m]) * gl.weights[m];
    hsum += hw[m];
  }
  // g^2 density at omega0 is C shape(omega0) hsum; golden rule gives 2 pi times it.
  g.coupling_norm =
      params.gamma_rate / (kTwoPi * density_shape(density, params.omega0, params.omega0) * hsum);

  g.modes.resize(static_cast<std::size_t>(n_omega) * n_mu);
  g.omega.resize(n_omega);
  g.s_cc.assign(n_omega, 0.0);
  g.s_ss.assign(n_omega, 0.0);
  g.s_sc.assign(n_omega, 0.0);
  const int half = n_mu / 2;
  for (int j = 0; j < n_omega; ++j) {
    const double om = (j + 1) * dw;
    g.omega[j] = om;
    const double pref = g.coupling_norm * density_shape(density, om, params.omega0) * dw;
    for (int m = 0; m < n_mu; ++m) {
      BathMode& md = g.modes[static_cast<std::size_t>(j) * n_mu + m];
      md.omega = om;
      md.mu = gl.nodes[m];
      md.weight = pref * hw[m];
      md.kappa = zero_recoil ? 0.0 : om * gl.nodes[m] * params.beta / (2.0 * params.omega0);
    }
    // accumulate mirrored pairs together so s_sc cancels exactly
    const BathMode* row = &g.modes[static_cast<std::size_t>(j) * n_mu];
    double cc = 0.0, ss = 0.0, sc = 0.0;
    for (int m = 0; m < half; ++m) {
      const BathMode& a = row[m];
      const BathMode& b = row[n_mu - 1 - m];
      const double ca = std::cos(a.kappa), sa = std::sin(a.kappa);
      const double cb = std::cos(b.kappa), sb = std::sin(b.kappa);
      cc += a.weight * ca * ca + b.weight * cb * cb;
      ss += a.weight * sa * sa + b.weight * sb * sb;
      sc += a.weight * sa * ca + b.weight * sb * cb;
    }
    if (n_mu % 2 == 1) cc += row[half].weight;  // mu = 0 node, kappa = 0
    g.s_cc[j] = cc;
    g.s_ss[j] = ss;
    g.s_sc[j] = sc;
  }
  if (renormalize) {
    // Pole at s = -Gamma/2 of s = i d - sum W / (s - i nu) needs
    // d = sum W nu / (nu^2 + Gamma^2/4).
    const double hg2 = 0.25 * params.gamma_rate * params.gamma_rate;
    auto shift = [&](int sign) {
      double acc = 0.0;
      for (int j = 0; j < n_omega; ++j) {
        const double nu = params.omega0 - g.omega[j];
        const double nus = nu + sign * params.delta_tunnel;
        acc += g.s_cc[j] * nu / (nu * nu + hg2) + g.s_ss[j] * nus / (nus * nus + hg2);
      }
      return acc;
    };
    g.counterterm_plus = shift(+1);
    g.counterterm_minus = shift(-1);
  }
  return g;
}

BathGrid build_grid(const ModelParams& params, const GridOptions& opt) {
  return build_grid(params, opt.omega_max, opt.n_omega, opt.n_mu, opt.density, opt.zero_recoil,
                    opt.renormalize);
}

double golden_rule_rate(const BathGrid& grid, const ModelParams& params) {
  // total weight per omega node, linearly interpolated to omega0
  const double x = params.omega0 / grid.d_omega - 1.0;
  const int j0 = std::clamp(static_cast<int>(std::floor(x)), 0, grid.n_omega - 2);
  const double f = x - j0;
  auto dens = [&](int j) { return (grid.s_cc[j] + grid.s_ss[j]) / grid.d_omega; };
  return kTwoPi * ((1.0 - f) * dens(j0) + f * dens(j0 + 1));
}

GridOptions suggest_grid(const ModelParams& params, double t_end, double omega_max, int n_mu) {
  GridOptions o;
  o.omega_max = omega_max;
  o.n_mu = n_mu;
  const double by_gamma = std::ceil(omega_max / (params.gamma_rate / 10.0));
  const double by_recur = std::ceil(1.1 * t_end * omega_max / kTwoPi) + 1.0;
  o.n_omega = static_cast<int>(std::max({500.0, by_gamma, by_recur}));
  return o;
}

double AmplitudeState::norm() const {
  double s = std::norm(c_plus_e) + std::norm(c_minus_e);
  for (const cplx& v : c_photon_minus) s += std::norm(v);
  for (const cplx& v : c_photon_plus) s += std::norm(v);
  return s;
}

AmplitudeState initial_state(const BathGrid& grid, const InitialExternalState& init) {
  AmplitudeState s;
  s.c_plus_e = init.c_plus;
  s.c_minus_e = init.c_minus;
  s.c_photon_minus.assign(grid.modes.size(), 0.0);
  s.c_photon_plus.assign(grid.modes.size(), 0.0);
  return s;
}

AmplitudeState step_rhs(const AmplitudeState& s, const BathGrid& grid, const ModelParams& p) {
  check_state_size(s, grid);
  AmplitudeState d;
  d.t = s.t;
  d.c_photon_minus.resize(grid.modes.size());
  d.c_photon_plus.resize(grid.modes.size());
  const cplx ed = std::exp(kI * (p.delta_tunnel * s.t));
  const cplx edc = std::conj(ed);
  cplx sum_m = 0.0, sum_p = 0.0;
  for (std::size_t k = 0; k < grid.modes.size(); ++k) {
    const BathMode& m = grid.modes[k];
    const double g = std::sqrt(m.weight);
    const cplx ph = std::exp(kI * ((p.omega0 - m.omega) * s.t));
    const double ck = std::cos(m.kappa), sk = std::sin(m.kappa);
    const cplx am = s.c_photon_minus[k], ap = s.c_photon_plus[k];
    sum_m += g * ph * (ck * am + kI * sk * edc * ap);
    sum_p += g * ph * (ck * ap + kI * sk * ed * am);
    const cplx phc = std::conj(ph);
    d.c_photon_minus[k] = -kI * g * phc * (ck * s.c_minus_e - kI * sk * edc * s.c_plus_e);
    d.c_photon_plus[k] = -kI * g * phc * (ck * s.c_plus_e - kI * sk * ed * s.c_minus_e);
  }
  d.c_minus_e = -kI * sum_m + kI * grid.counterterm_minus * s.c_minus_e;
  d.c_plus_e = -kI * sum_p + kI * grid.counterterm_plus * s.c_plus_e;
  return d;
}

namespace {

// y + a * k for the per-mode reference integrator
AmplitudeState axpy(const AmplitudeState& y, double a, const AmplitudeState& k) {
  AmplitudeState r = y;
  r.c_plus_e += a * k.c_plus_e;
  r.c_minus_e += a * k.c_minus_e;
  for (std::size_t i = 0; i < r.c_photon_minus.size(); ++i) {
    r.c_photon_minus[i] += a * k.c_photon_minus[i];
    r.c_photon_plus[i] += a * k.c_photon_plus[i];
  }
  return r;
}

long step_count(const BathGrid& grid, double t_end, double& dt) {
  if (!(t_end > 0.0)) throw ValidationError("integrate: t_end must be positive");
  if (dt == 0.0) dt = grid.max_dt();
  if (!(dt > 0.0)) throw ValidationError("integrate: dt must be positive");
  if (dt > grid.max_dt() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "integrate: dt = " << dt << " exceeds 0.05/omega_max = " << grid.max_dt();
    throw ValidationError(msg.str());
  }
  if (!(t_end < grid.recurrence_time())) {
    std::ostringstream msg;
    msg << "integrate: t_end = " << t_end << " reaches the grid recurrence time 2 pi/d_omega = "
        << grid.recurrence_time();
    throw ValidationError(msg.str());
  }
  const long n = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  dt = t_end / n;
  return n;
}

}  // namespace

std::vector<AmplitudeState> integrate_modes(const BathGrid& grid, const ModelParams& p,
                                            const InitialExternalState& init, double t_end,
                                            double dt, int stride) {
  if (stride < 1) throw ValidationError("integrate: stride must be >= 1");
  const long n = step_count(grid, t_end, dt);
  std::vector<AmplitudeState> out;
  AmplitudeState y = initial_state(grid, init);
  out.push_back(y);
  for (long s = 1; s <= n; ++s) {
    const double t = (s - 1) * dt;
    y.t = t;
    const AmplitudeState k1 = step_rhs(y, grid, p);
    AmplitudeState y2 = axpy(y, 0.5 * dt, k1);
    y2.t = t + 0.5 * dt;
    const AmplitudeState k2 = step_rhs(y2, grid, p);
    AmplitudeState y3 = axpy(y, 0.5 * dt, k2);
    y3.t = t + 0.5 * dt;
    const AmplitudeState k3 = step_rhs(y3, grid, p);
    AmplitudeState y4 = axpy(y, dt, k3);
    y4.t = t + dt;
    const AmplitudeState k4 = step_rhs(y4, grid, p);
    y = axpy(y, dt / 6.0, k1);
    y = axpy(y, dt / 3.0, k2);
    y = axpy(y, dt / 3.0, k3);
    y = axpy(y, dt / 6.0, k4);
    y.t = s * dt;
    if (s % stride == 0 || s == n) out.push_back(y);
  }
  return out;
}

Trajectory integrate(const BathGrid& grid, const ModelParams& p, const InitialExternalState& init,
                     const IntegrateOptions& opt) {
  if (opt.stride < 1) throw ValidationError("integrate: stride must be >= 1");
  double dt = opt.dt;
  const long n = step_count(grid, opt.t_end, dt);

  ChannelEngine eng(grid, p, dt);
  Trajectory traj;
  traj.dt = dt;
  traj.steps = n;
  traj.snapshots.reserve(static_cast<std::size_t>(n / opt.stride + 2));

  cplx cp = init.c_plus, cm = init.c_minus;
  for (long s = 0; s <= n; ++s) {
    const bool snap = (s % opt.stride == 0) || s == n;
    ChannelEngine::Sums sm = snap ? eng.pass<true>() : eng.pass<false>();
    if (snap) {
      const double t = s * dt;
      Snapshot sn;
      sn.t = t;
      sn.c_plus = cp;
      sn.c_minus = cm;
      sn.K = sm.k_cc + std::exp(kI * (2.0 * p.delta_tunnel * t)) * sm.k_ss;
      sn.photon_norm = sm.pnorm;
      sn.norm = std::norm(cp) + std::norm(cm) + sm.pnorm;
      traj.snapshots.push_back(sn);
    }
    if (s == n) break;
    cp = eng.stage(cp, sm.a0_p, sm.ah_p, sm.a1_p, eng.qh_p, grid.counterterm_plus, eng.p1_p, eng.pm_p, eng.p4_p);
    cm = eng.stage(cm, sm.a0_m, sm.ah_m, sm.a1_m, eng.qh_m, grid.counterterm_minus, eng.p1_m, eng.pm_m, eng.p4_m);
  }

  if (opt.keep_final_modes) {
    const double t = n * dt;
    AmplitudeState fs = initial_state(grid, init);
    fs.t = t;
    fs.c_plus_e = cp;
    fs.c_minus_e = cm;
    const int nw = grid.n_omega;
    for (int j = 0; j < nw; ++j) {
      const double nu = p.omega0 - grid.omega[j];
      // X = e^{-i nu t} Z
      const cplx xp = std::exp(-kI * (nu * t)) * cplx(eng.zp_r[j], eng.zp_i[j]);
      const cplx xm = std::exp(-kI * (nu * t)) * cplx(eng.zm_r[j], eng.zm_i[j]);
      const cplx ym = std::exp(-kI * ((nu + p.delta_tunnel) * t)) *
                      cplx(eng.zp_r[nw + j], eng.zp_i[nw + j]);
      const cplx yp = std::exp(-kI * ((nu - p.delta_tunnel) * t)) *
                      cplx(eng.zm_r[nw + j], eng.zm_i[nw + j]);
      for (int m = 0; m < grid.n_mu; ++m) {
        const std::size_t k = static_cast<std::size_t>(j) * grid.n_mu + m;
        const BathMode& md = grid.modes[k];
        const double g = std::sqrt(md.weight);
        const double ck = std::cos(md.kappa), sk = std::sin(md.kappa);
        fs.c_photon_minus[k] = -kI * g * (ck * xm - kI * sk * ym);
        fs.c_photon_plus[k] = -kI * g * (ck * xp - kI * sk * yp);
      }
    }
    traj.final_state = std::move(fs);
  }
  return traj;
}

Trajectory integrate(const BathGrid& grid, const ModelParams& params,
                     const InitialExternalState& init, double t_end, double dt) {
  IntegrateOptions o;
  o.t_end = t_end;
  o.dt = dt;
  return integrate(grid, params, init, o);
}

SurvivalSeries survival(const Trajectory& traj) {
  SurvivalSeries s;
  for (const Snapshot& sn : traj.snapshots) {
    s.t.push_back(sn.t);
    s.plus.push_back(std::norm(sn.c_plus));
    s.minus.push_back(std::norm(sn.c_minus));
  }
  return s;
}

std::vector<cplx> k_correlator(const Trajectory& traj, const BathGrid&) {
  std::vector<cplx> k;
  k.reserve(traj.snapshots.size());
  for (const Snapshot& sn : traj.snapshots) k.push_back(sn.K);
  return k;
}

std::vector<double> z_numeric(const Trajectory& traj, const BathGrid&, const ModelParams& p) {
  std::vector<double> z;
  z.reserve(traj.snapshots.size());
  for (const Snapshot& sn : traj.snapshots) {
    const cplx rho = sn.c_plus * std::conj(sn.c_minus) + sn.K;
    z.push_back(p.b * std::real(rho * std::exp(-kI * (p.delta_tunnel * sn.t))));
  }
  return z;
}

PhotonPair photon_amp_closedform(const BathMode& mode, double t, const ModelParams& p,
                                 const InitialExternalState& init) {
  if (t < 0.0) throw ValidationError("photon_amp_closedform: t must be >= 0");
  const double g = std::sqrt(mode.weight);
  const double ck = std::cos(mode.kappa), sk = std::sin(mode.kappa);
  const double hg = 0.5 * p.gamma_rate;
  const double dw = mode.omega - p.omega0;
  auto frac = [&](double shift) {
    // (1 - e^{(-i(omega0 - shift - omega) - Gamma/2) t}) / (omega - omega0 + shift + i Gamma/2)
    const cplx expo(-hg * t, (dw + shift) * t);
    const cplx num = -expm1_c(expo);
    return num / cplx(dw + shift, hg);
  };
  PhotonPair r;
  r.plus = g * (init.c_plus * ck * frac(0.0) - kI * init.c_minus * sk * frac(p.delta_tunnel));
  r.minus = g * (init.c_minus * ck * frac(0.0) - kI * init.c_plus * sk * frac(-p.delta_tunnel));
  return r;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const BathGrid& grid,
                          const ModelParams& p) {
  write_csv_header(os, {"t", "re_c_plus", "im_c_plus", "re_c_minus", "im_c_minus", "norm",
                        "z_over_b2", "re_K", "im_K"});
  const std::vector<double> z = z_numeric(traj, grid, p);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const Snapshot& s = traj.snapshots[i];
    const double zb = p.b > 0.0 ? z[i] / (0.5 * p.b) : 2.0 * std::real((s.c_plus * std::conj(s.c_minus) + s.K) *
                                                                    std::exp(-kI * (p.delta_tunnel * s.t)));
    write_csv_row(os, {s.t, s.c_plus.real(), s.c_plus.imag(), s.c_minus.real(),
                       s.c_minus.imag(), s.norm, zb, s.K.real(), s.K.imag()});
  }
}

}  // namespace twinwell

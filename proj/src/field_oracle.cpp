// Direct numerical evaluation of the angular and frequency integrals for I+-.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twinwell/closed_forms.hpp"
#include "twinwell/field.hpp"
#include "twinwell/quadrature.hpp"
#include "twinwell/special_functions.hpp"

namespace twinwell {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

// J_r(tau) = int e^{i w tau} / (w - w_r + i Gamma/2) dw for tau < 0 equals
// e^{i w_r tau} B(tau) with the same B for every resonance w_r. B is tabulated
// on a uniform tau grid: Simpson over u = w - w_r in [-W, W] plus exact tails.
struct EnvelopeTable {
  double tau0 = 0.0;
  double h = 0.0;
  int n = 0;
  std::vector<cd> full;
  std::vector<cd> tail;

  EnvelopeTable(double gamma, double window, int n_omega, double tau_lo, double tau_hi, double step) {
    if (n_omega < 2 || n_omega % 2) throw ValidationError("field oracle: n_omega must be even and >= 2");
    if (!(tau_hi < 0.0)) throw ValidationError("field oracle: tau grid must stay retarded (tau < 0)");
    h = step;
    tau0 = tau_lo - 2.0 * h;
    n = static_cast<int>(std::ceil((tau_hi - tau0) / h)) + 3;
    while (tau0 + (n - 1) * h >= 0.0) --n;
    if (n < 4) throw ValidationError("field oracle: tau table too short");
    full.resize(n);
    tail.resize(n);
    const double a = 0.5 * gamma;
    const double du = 2.0 * window / n_omega;
    std::vector<cd> wl(n_omega + 1);
    for (int m = 0; m <= n_omega; ++m) {
      const double u = -window + m * du;
      const double sw = (m == 0 || m == n_omega) ? 1.0 : (m % 2 ? 4.0 : 2.0);
      wl[m] = (sw * du / 3.0) / cd(u, a);
    }
    for (int k = 0; k < n; ++k) {
      const double tau = tau0 + k * h;
      const cd step_ph = std::exp(kI * (du * tau));
      cd ph = std::exp(kI * (-window * tau));
      cd acc = 0.0;
      for (int m = 0; m <= n_omega; ++m) {
        acc += wl[m] * ph;
        ph *= step_ph;
      }
      const double s = -tau;
      const cd hi = std::exp(cd(0.0, -s * window)) * expint_e1_scaled(cd(-s * a, s * window));
      const cd lo = -std::exp(cd(0.0, s * window)) * expint_e1_scaled(cd(-s * a, -s * window));
      tail[k] = hi + lo;
      full[k] = acc + tail[k];
    }
  }

  struct Stencil {
    int i;
    double w[4];
  };
  // four-point Lagrange interpolation weights
  Stencil stencil(double tau) const {
    const double x = (tau - tau0) / h;
    Stencil s;
    s.i = std::clamp(static_cast<int>(std::floor(x)) - 1, 0, n - 4);
    const double f = x - (s.i + 1);
    s.w[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
    s.w[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
    s.w[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
    s.w[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
    return s;
  }
  static cd apply(const std::vector<cd>& v, const Stencil& s) {
    return s.w[0] * v[s.i] + s.w[1] * v[s.i + 1] + s.w[2] * v[s.i + 2] + s.w[3] * v[s.i + 3];
  }
};

// J at the three resonances omega0, omega0 - Delta, omega0 + Delta
struct JValues {
  cd c, sp, sm;
};

int default_theta_nodes(double kr) { return std::max(128, static_cast<int>(std::ceil(1.1 * kr)) + 64); }
// doubled so the even-node half rule used for the error estimate is resolved
int default_phi_nodes(double kr) {
  const int n = std::max(256, 2 * (static_cast<int>(std::ceil(1.2 * kr)) + 64));
  return (n + 3) / 4 * 4;
}

struct Sums {
  cd px, pz, mx, mz;  // branch +, branch -
  Sums& operator+=(const Sums& o) {
    px += o.px; pz += o.pz; mx += o.mx; mz += o.mz;
    return *this;
  }
  Sums operator*(double w) const { return {px * w, pz * w, mx * w, mz * w}; }
  double norm_plus() const { return std::sqrt(std::norm(px) + std::norm(pz)); }
  double norm_minus() const { return std::sqrt(std::norm(mx) + std::norm(mz)); }
};

}  // namespace

std::vector<OracleResult> g1_quadrature_oracle_scan(const std::vector<FieldPoint>& points, double t,
                                                    const ModelParams& p,
                                                    const InitialExternalState& init,
                                                    const OracleOptions& opt) {
  if (points.empty()) return {};
  if (!(opt.window > 0.0) || !(opt.tau_step > 0.0)) throw ValidationError("field oracle: bad window or tau step");
  double r_max = 0.0;
  for (const FieldPoint& pt : points) {
    if (!(t > pt.r + 0.5 * pt.b)) {
      std::ostringstream msg;
      msg << "field oracle: t = " << t << " must exceed (r + b/2)/c = " << pt.r + 0.5 * pt.b;
      throw ValidationError(msg.str());
    }
    r_max = std::max(r_max, pt.r);
  }
  const double hb = 0.5 * p.b;
  const double tau_lo = -t - r_max - hb;
  const double tau_hi = -t + r_max + hb;

  const double W = opt.window * p.gamma_rate;
  // keep the Simpson phase step du |tau| below 0.5 rad across the table
  int n_omega = std::max(opt.n_omega, static_cast<int>(std::ceil(2.0 * W * (-tau_lo) / 0.5)));
  n_omega += n_omega % 2;
  const EnvelopeTable env(p.gamma_rate, W, n_omega, tau_lo, tau_hi, opt.tau_step);
  auto jvalues = [&](double tau, JValues& full, JValues& tail) {
    const EnvelopeTable::Stencil st = env.stencil(tau);
    const cd bf = EnvelopeTable::apply(env.full, st);
    const cd bt = EnvelopeTable::apply(env.tail, st);
    const cd c0 = std::polar(1.0, p.omega0 * tau);
    const cd cd_ = std::polar(1.0, p.delta_tunnel * tau);
    const cd cs_p = c0 * std::conj(cd_), cs_m = c0 * cd_;
    full = {c0 * bf, cs_p * bf, cs_m * bf};
    tail = {c0 * bt, cs_p * bt, cs_m * bt};
  };

  const double kr = p.omega0 * (r_max + hb) + 1.0;
  const int n_theta = opt.n_theta > 0 ? opt.n_theta : default_theta_nodes(kr);
  int n_phi = opt.n_phi > 0 ? opt.n_phi : default_phi_nodes(kr);
  if (n_phi % 4) throw ValidationError("field oracle: n_phi must be a multiple of 4");
  const QuadratureRule gl = gauss_legendre(n_theta, 0.0, kPi);
  const int half = n_phi / 2;
  std::vector<double> cphi(half + 1), mult(half + 1);
  for (int k = 0; k <= half; ++k) {
    cphi[k] = std::cos(2.0 * kPi * k / n_phi);
    mult[k] = (k == 0 || k == half) ? 1.0 : 2.0;
  }

  const double se = std::sin(p.eta), ce = std::cos(p.eta);
  const double w0c = std::pow(p.omega0, 3);
  const double wsp = std::pow(p.omega0 - p.delta_tunnel, 3);
  const double wsm = std::pow(p.omega0 + p.delta_tunnel, 3);
  const double dip = dipole_scaled(p.omega0, p.gamma_rate);
  const double pref = -dip / (16.0 * kPi * kPi * kPi);

  std::vector<OracleResult> out;
  out.reserve(points.size());
  for (const FieldPoint& pt : points) {
    Sums full{}, tail{}, half_rule{};
    for (int i = 0; i < n_theta; ++i) {
      const double th = gl.nodes[i];
      const double st = std::sin(th), ct = std::cos(th);
      const double d = hb * ct;
      Sums row{}, row_tail{}, row_half{};
      for (int k = 0; k <= half; ++k) {
        const double scp = st * cphi[k];
        const double ke = scp * se + ct * ce;
        const double fx = se - scp * ke;
        const double fz = ce - ct * ke;
        const double tau0 = pt.z * ct + pt.x * scp - t;
        const double tp = tau0 + d, tm = tau0 - d;
        JValues fp, tpl, fm, tmi;
        jvalues(tp, fp, tpl);
        jvalues(tm, fm, tmi);
        const cd jsum = 0.5 * (fp.c + fm.c);
        const cd ap = w0c * init.c_plus * jsum - wsp * init.c_minus * 0.5 * (fp.sp - fm.sp);
        const cd am = w0c * init.c_minus * jsum - wsm * init.c_plus * 0.5 * (fp.sm - fm.sm);
        const cd tsum = 0.5 * (tpl.c + tmi.c);
        const cd tap = w0c * init.c_plus * tsum - wsp * init.c_minus * 0.5 * (tpl.sp - tmi.sp);
        const cd tam = w0c * init.c_minus * tsum - wsm * init.c_plus * 0.5 * (tpl.sm - tmi.sm);
        const Sums v{fx * ap, fz * ap, fx * am, fz * am};
        const Sums vt{fx * tap, fz * tap, fx * tam, fz * tam};
        row += v * mult[k];
        row_tail += vt * mult[k];
        if (k % 2 == 0) row_half += v * mult[k];
      }
      const double wt = gl.weights[i] * st;
      full += row * wt;
      tail += row_tail * wt;
      half_rule += row_half * wt;
    }
    const double dphi = 2.0 * kPi / n_phi;
    full = full * (pref * dphi);
    tail = tail * (pref * dphi);
    half_rule = half_rule * (pref * 2.0 * dphi);

    OracleResult res;
    res.n_theta = n_theta;
    res.n_phi = n_phi;
    res.g1.alpha = pt.alpha;
    res.g1.r = pt.r;
    res.g1.post_plus = std::norm(full.px) + std::norm(full.pz);
    res.g1.post_minus = std::norm(full.mx) + std::norm(full.mz);
    res.g1.total = res.g1.post_plus + res.g1.post_minus;
    const double fn = std::hypot(full.norm_plus(), full.norm_minus());
    const double tn = std::hypot(tail.norm_plus(), tail.norm_minus());
    res.tail_fraction = fn > 0.0 ? tn / fn : 0.0;
    const double hp = std::norm(half_rule.px) + std::norm(half_rule.pz) + std::norm(half_rule.mx) +
                      std::norm(half_rule.mz);
    res.error_estimate = res.g1.total > 0.0 ? std::abs(hp - res.g1.total) / res.g1.total : 0.0;
    if (res.tail_fraction > 0.01) {
      std::ostringstream msg;
      msg << "field oracle: Lorentzian tail correction is " << 100.0 * res.tail_fraction
          << "% of the field at alpha = " << pt.alpha << " (limit 1%); widen the window";
      throw RuntimeError(msg.str());
    }
    out.push_back(res);
  }
  return out;
}

OracleResult g1_quadrature_oracle(const FieldPoint& point, double t, const ModelParams& params,
                                  const InitialExternalState& init, const OracleOptions& opt) {
  return g1_quadrature_oracle_scan({point}, t, params, init, opt).front();
}

}  // namespace twinwell

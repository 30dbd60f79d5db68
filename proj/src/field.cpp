#include "twinwell/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twinwell/closed_forms.hpp"

namespace twinwell {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

double sq(double v) { return v * v; }

}  // namespace

FieldPoint FieldPoint::from_xz(double x, double z, const ModelParams& params) {
  if (!std::isfinite(x) || !std::isfinite(z)) throw ValidationError("FieldPoint: non-finite coordinates");
  FieldPoint p;
  p.x = x;
  p.z = z;
  p.b = params.b;
  p.r = std::hypot(x, z);
  const double min_r = 100.0 * std::max(params.b, 1.0 / params.omega0);
  if (p.r < min_r) {
    std::ostringstream msg;
    msg << "FieldPoint: r = " << p.r << " is not in the far field (need r >= " << min_r << ")";
    throw ValidationError(msg.str());
  }
  p.alpha = std::atan2(x, z);
  const double hb = 0.5 * params.b;
  p.r_plus = std::hypot(x, z + hb);
  p.r_minus = std::hypot(x, z - hb);
  p.alpha_plus = std::atan2(x, z + hb);
  p.alpha_minus = std::atan2(x, z - hb);
  // r_+^2 - r_-^2 = 2 z b, without the cancellation of the direct difference
  p.delta_r = 2.0 * z * params.b / (p.r_plus + p.r_minus);
  return p;
}

FieldPoint FieldPoint::polar(double r, double alpha, const ModelParams& params) {
  return from_xz(r * std::sin(alpha), r * std::cos(alpha), params);
}

namespace detail {

cd component_sum(double eta, double a_plus, double a_minus, cd w_plus, cd w_minus,
                 int relative_sign, bool z_component) {
  const double tp = z_component ? std::sin(a_plus) : std::cos(a_plus);
  const double tm = z_component ? std::sin(a_minus) : std::cos(a_minus);
  return w_plus * std::sin(eta - a_plus) * tp +
         double(relative_sign) * w_minus * std::sin(eta - a_minus) * tm;
}

}  // namespace detail

namespace {

void check_retardation(const FieldPoint& pt, double t) {
  if (!(t > pt.r + 0.5 * pt.b)) {
    std::ostringstream msg;
    msg << "field: t = " << t << " must exceed (r + b/2)/c = " << pt.r + 0.5 * pt.b;
    throw ValidationError(msg.str());
  }
}

// One branch of Icx2/Isx2: c amplitude `cc` at omega0, s amplitude `cs` at omega_s.
BranchComponents branch(const FieldPoint& pt, double t, const ModelParams& p, double cc, double cs,
                        double omega_s) {
  const double dip = dipole_scaled(p.omega0, p.gamma_rate);
  const double hg = 0.5 * p.gamma_rate;
  auto wave = [&](double om, double r) {
    // e^{-i w t} e^{iR}/R with w = om - i Gamma/2, R = w r
    const cd w(om, -hg);
    return std::exp(kI * w * (r - t)) / (w * r);
  };
  const cd pc = std::pow(p.omega0, 3) * dip * cc / (8.0 * kPi);
  const cd ps = -std::pow(omega_s, 3) * dip * cs / (8.0 * kPi);
  const cd cp = wave(p.omega0, pt.r_plus), cm = wave(p.omega0, pt.r_minus);
  const cd sp = wave(omega_s, pt.r_plus), sm = wave(omega_s, pt.r_minus);
  BranchComponents b;
  b.I_cx = pc * detail::component_sum(p.eta, pt.alpha_plus, pt.alpha_minus, cp, cm, +1, false);
  b.I_sx = ps * detail::component_sum(p.eta, pt.alpha_plus, pt.alpha_minus, sp, sm, -1, false);
  b.I_cz = -pc * detail::component_sum(p.eta, pt.alpha_plus, pt.alpha_minus, cp, cm, +1, true);
  b.I_sz = -ps * detail::component_sum(p.eta, pt.alpha_plus, pt.alpha_minus, sp, sm, -1, true);
  return b;
}

}  // namespace

double g1_prefactor(const FieldPoint& pt, double t, const ModelParams& p) {
  const double dip = dipole_scaled(p.omega0, p.gamma_rate);
  return std::pow(p.omega0, 4) * dip * dip / (16.0 * kPi * kPi) *
         std::exp(-p.gamma_rate * (t - pt.r)) / (pt.r * pt.r);
}

double dipole_envelope(const FieldPoint& pt, double t, const ModelParams& p) {
  return g1_prefactor(pt, t, p) * sq(std::sin(p.eta - pt.alpha));
}

FieldComponents i_components(const FieldPoint& pt, double t, const ModelParams& p,
                             const InitialExternalState& init) {
  check_retardation(pt, t);
  FieldComponents fc;
  fc.plus = branch(pt, t, p, init.c_plus, init.c_minus, p.omega0 - p.delta_tunnel);
  fc.minus = branch(pt, t, p, init.c_minus, init.c_plus, p.omega0 + p.delta_tunnel);
  return fc;
}

G1Result g1_from_components(const FieldPoint& pt, double t, const ModelParams& p,
                            const InitialExternalState& init) {
  const FieldComponents fc = i_components(pt, t, p, init);
  auto inten = [](const BranchComponents& b) {
    return std::norm(b.I_cx + b.I_sx) + std::norm(b.I_cz + b.I_sz);
  };
  G1Result g;
  g.alpha = pt.alpha;
  g.r = pt.r;
  g.post_plus = inten(fc.plus);
  g.post_minus = inten(fc.minus);
  g.total = g.post_plus + g.post_minus;
  return g;
}

G1Result g1_total(const FieldPoint& pt, double t, const ModelParams& p,
                  const InitialExternalState& init) {
  check_retardation(pt, t);
  const double k = 0.25 * g1_prefactor(pt, t, p);
  auto branch_intensity = [&](int sign) {
    const double cs = sign > 0 ? init.c_plus : init.c_minus;
    const double co = sign > 0 ? init.c_minus : init.c_plus;
    const cd ph_c = std::exp(kI * (p.omega0 * pt.delta_r));
    const cd ph_s = std::exp(kI * ((p.omega0 - sign * p.delta_tunnel) * pt.delta_r));
    const cd beat = std::exp(kI * (sign * p.delta_tunnel * (t - pt.r_minus)));
    double s = 0.0;
    for (bool zc : {false, true}) {
      const cd a = cs * detail::component_sum(p.eta, pt.alpha_plus, pt.alpha_minus, ph_c, 1.0, +1, zc);
      const cd b = co * beat * detail::component_sum(p.eta, pt.alpha_plus, pt.alpha_minus, ph_s, 1.0, -1, zc);
      s += std::norm(a - b);
    }
    return k * s;
  };
  G1Result g;
  g.alpha = pt.alpha;
  g.r = pt.r;
  g.post_plus = branch_intensity(+1);
  g.post_minus = branch_intensity(-1);
  g.total = g.post_plus + g.post_minus;
  return g;
}

double g1_postselected(const FieldPoint& pt, double t, const ModelParams& p,
                       const InitialExternalState& init, int which) {
  if (which != 1 && which != -1) throw ValidationError("g1_postselected: which must be +1 or -1");
  check_retardation(pt, t);
  const double cs = which > 0 ? init.c_plus : init.c_minus;
  const double co = which > 0 ? init.c_minus : init.c_plus;
  const cd e = std::exp(kI * (p.beta * std::cos(pt.alpha)));
  return dipole_envelope(pt, t, p) * 0.25 * std::norm(cs * (e + 1.0) - co * (e - 1.0));
}

G1Result g1_postselected_pattern(const FieldPoint& pt, double t, const ModelParams& p,
                                 const InitialExternalState& init) {
  G1Result g;
  g.alpha = pt.alpha;
  g.r = pt.r;
  g.post_plus = g1_postselected(pt, t, p, init, +1);
  g.post_minus = g1_postselected(pt, t, p, init, -1);
  g.total = g.post_plus + g.post_minus;
  return g;
}

double delocalized_fringe_factor(double alpha, const ModelParams& p, int sign) {
  const double db = p.delta_tunnel * p.b;
  const double ca = std::cos(alpha);
  return 1.0 + sign * std::sin(0.5 * db * ca) * std::sin((p.beta + sign * 0.5 * db) * ca);
}

double right_well_fringe_factor(double alpha, double t_ret, const ModelParams& p) {
  const double db = p.delta_tunnel * p.b;
  const double ca = std::cos(alpha);
  const double x = std::sin(0.5 * db * ca);
  const double cb = std::cos(p.beta * ca);
  return 1.0 + x * (cb * x - std::sin(p.delta_tunnel * t_ret) * (1.0 + cb));
}

double visibility(const std::vector<double>& intensity, const std::vector<double>& envelope) {
  if (intensity.size() != envelope.size() || intensity.empty()) {
    throw ValidationError("visibility: intensity and envelope sizes differ or are empty");
  }
  const double emax = *std::max_element(envelope.begin(), envelope.end());
  if (!(emax > 0.0)) throw ValidationError("visibility: envelope is zero everywhere");
  double lo = INFINITY, hi = -INFINITY;
  int used = 0;
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    if (envelope[i] <= 1e-6 * emax) continue;
    const double v = intensity[i] / envelope[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++used;
  }
  if (used < 2) throw ValidationError("visibility: fewer than two points with nonzero envelope");
  if (hi + lo == 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

double visibility_refined(const std::function<double(double)>& f, double lo, double hi, int n) {
  if (n < 3 || !(hi > lo)) throw ValidationError("visibility_refined: need n >= 3 and hi > lo");
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = lo + (hi - lo) * i / (n - 1);
    y[i] = f(x[i]);
  }
  constexpr double g = 0.6180339887498949;
  auto refine = [&](int i, double sgn) {
    // golden section on the bracket around sample i; sgn = +1 for a minimum
    double a = x[std::max(i - 1, 0)], b = x[std::min(i + 1, n - 1)];
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = sgn * f(x1), f2 = sgn * f(x2);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (f1 < f2) {
        b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = sgn * f(x1);
      } else {
        a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = sgn * f(x2);
      }
    }
    return std::min({sgn * f1, sgn * f2, sgn * y[i]}) * sgn;
  };
  const int imin = static_cast<int>(std::min_element(y.begin(), y.end()) - y.begin());
  const int imax = static_cast<int>(std::max_element(y.begin(), y.end()) - y.begin());
  const double vmin = refine(imin, +1.0);
  const double vmax = refine(imax, -1.0);
  if (vmax + vmin == 0.0) return 0.0;
  return (vmax - vmin) / (vmax + vmin);
}

}  // namespace twinwell

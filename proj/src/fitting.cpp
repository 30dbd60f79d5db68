#include "twinwell/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace twinwell {

namespace {

constexpr double kGolden = 0.6180339887498949;

double rms(const Eigen::VectorXd& r) { return std::sqrt(r.squaredNorm() / r.size()); }

// Minimizes f on [lo, hi] by golden-section search.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && (b - a) > tol * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

struct LinearFit {
  Eigen::VectorXd coef;
  double residual = 0.0;
};

LinearFit linear_fit(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y) {
  LinearFit lf;
  lf.coef = basis.colPivHouseholderQr().solve(y);
  lf.residual = rms(y - basis * lf.coef);
  return lf;
}

Eigen::MatrixXd sinusoid_basis(const Eigen::VectorXd& t, double w, std::optional<double> rate) {
  const int cols = rate ? 4 : 2;
  Eigen::MatrixXd m(t.size(), cols);
  for (int i = 0; i < t.size(); ++i) {
    const double c = std::cos(w * t[i]), s = std::sin(w * t[i]);
    m(i, 0) = c;
    m(i, 1) = s;
    if (rate) {
      const double e = std::exp(-*rate * t[i]);
      m(i, 2) = e * c;
      m(i, 3) = e * s;
    }
  }
  return m;
}

// Frequency estimate from a scan of the projected power, then refinement.
double estimate_frequency(const Eigen::VectorXd& t, const Eigen::VectorXd& y) {
  const double span = t[t.size() - 1] - t[0];
  const double dt = span / (t.size() - 1);
  const double w_min = 2.0 * std::numbers::pi / span;
  const double w_max = std::numbers::pi / dt;
  auto resid = [&](double w) { return linear_fit(sinusoid_basis(t, w, std::nullopt), y).residual; };
  const int n_scan = std::min<int>(4 * t.size(), 20000);
  double best_w = w_min, best_r = resid(w_min);
  const double step = (w_max - w_min) / n_scan;
  for (int k = 1; k <= n_scan; ++k) {
    const double w = w_min + k * step;
    const double r = resid(w);
    if (r < best_r) {
      best_r = r;
      best_w = w;
    }
  }
  return golden_min(resid, std::max(1e-300, best_w - step), best_w + step, 1e-14);
}

void fill_amp_phase(FitResult& r, double cc, double sc) {
  // cc cos + sc sin = A cos(x + phi)
  r.amplitude = std::hypot(cc, sc);
  r.phase = std::atan2(-sc, cc);
}

}  // namespace

FitResult fit_decay_and_amplitude(const std::vector<double>& tv, const std::vector<double>& yv,
                                  FitModel model, const FitOptions& opt) {
  if (tv.size() != yv.size()) throw ValidationError("fit: t and y sizes differ");
  if (tv.size() < 8) throw ValidationError("fit: need at least 8 samples");
  for (std::size_t i = 0; i < tv.size(); ++i) {
    if (!std::isfinite(tv[i]) || !std::isfinite(yv[i])) throw ValidationError("fit: non-finite sample");
    if (i && !(tv[i] > tv[i - 1])) throw ValidationError("fit: times must increase");
  }
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(tv.data(), tv.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), yv.size());
  FitResult r;
  r.model = model;
  r.data_rms = rms(y);

  if (model == FitModel::Exponential) {
    // log-linear start on positive samples, then 1-D projection refinement
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i < t.size(); ++i) {
      if (y[i] <= 0.0) continue;
      const double ly = std::log(y[i]);
      sx += t[i];
      sy += ly;
      sxx += t[i] * t[i];
      sxy += t[i] * ly;
      ++n;
    }
    if (n < 3) throw FitError("fit: exponential model needs positive samples", r.data_rms);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double rate0 = -slope;
    auto project = [&](double rate, double* amp) {
      Eigen::VectorXd e = (-rate * t.array()).exp();
      const double a = e.dot(y) / e.squaredNorm();
      if (amp) *amp = a;
      return rms(y - a * e);
    };
    double rate = rate0;
    if (rate0 > 0.0) {
      rate = golden_min([&](double k) { return project(k, nullptr); }, 0.5 * rate0, 2.0 * rate0, 1e-15);
      if (project(rate0, nullptr) <= project(rate, nullptr)) rate = rate0;
    }
    double amp = 0.0;
    r.residual_rms = project(rate, &amp);
    r.rate = rate;
    r.amplitude = amp;
    if (!(rate > 0.0) || !std::isfinite(r.residual_rms) || r.residual_rms > 0.1 * r.data_rms) {
      std::ostringstream msg;
      msg << "fit: exponential model did not converge (rate " << rate << ", residual rms "
          << r.residual_rms << " of data rms " << r.data_rms << ")";
      throw FitError(msg.str(), r.residual_rms);
    }
    return r;
  }

  const double w = opt.frequency ? *opt.frequency : estimate_frequency(t, y);
  if (!(w > 0.0)) throw ValidationError("fit: frequency must be positive");
  r.frequency = w;

  if (model == FitModel::Sinusoid) {
    const LinearFit lf = linear_fit(sinusoid_basis(t, w, std::nullopt), y);
    fill_amp_phase(r, lf.coef[0], lf.coef[1]);
    r.residual_rms = lf.residual;
  } else {
    double rate;
    if (opt.rate) {
      rate = *opt.rate;
    } else {
      const double span = t[t.size() - 1] - t[0];
      auto resid = [&](double lr) { return linear_fit(sinusoid_basis(t, w, std::exp(lr)), y).residual; };
      const double lo = std::log(0.1 / span), hi = std::log(1000.0 / span);
      const double lr = golden_min(resid, lo, hi, 1e-14);
      if (lr - lo < 1e-6 || hi - lr < 1e-6) {
        throw FitError("fit: damping rate ran to the search boundary", resid(lr));
      }
      rate = std::exp(lr);
    }
    const LinearFit lf = linear_fit(sinusoid_basis(t, w, rate), y);
    fill_amp_phase(r, lf.coef[0], lf.coef[1]);
    r.rate = rate;
    r.damped_amplitude = std::hypot(lf.coef[2], lf.coef[3]);
    r.residual_rms = lf.residual;
  }
  if (!std::isfinite(r.residual_rms) || r.residual_rms > 0.5 * r.data_rms) {
    std::ostringstream msg;
    msg << "fit: oscillation model did not converge (residual rms " << r.residual_rms
        << " of data rms " << r.data_rms << ")";
    throw FitError(msg.str(), r.residual_rms);
  }
  return r;
}

}  // namespace twinwell

#pragma once
// Far-field first-order correlation of the emitted photon.
//
// Units: eps0 = hbar = c = 1, dipole set so the vacuum rate equals
// params.gamma_rate. Coordinates in units of c/omega0 when omega0 = 1.

#include <complex>
#include <functional>
#include <vector>

#include "twinwell/core_types.hpp"

namespace twinwell {

struct FieldPoint {
  double x = 0.0;
  double z = 0.0;
  double r = 0.0;
  double alpha = 0.0;  // tan alpha = x / z
  double r_plus = 0.0;
  double r_minus = 0.0;
  double alpha_plus = 0.0;   // tan alpha_+ = x / (z + b/2)
  double alpha_minus = 0.0;  // tan alpha_- = x / (z - b/2)
  double delta_r = 0.0;      // r_+ - r_-
  double b = 0.0;

  // Rejects points closer than 100 max(b, 1/omega0).
  static FieldPoint from_xz(double x, double z, const ModelParams& params);
  static FieldPoint polar(double r, double alpha, const ModelParams& params);
};

struct BranchComponents {
  std::complex<double> I_cx, I_sx, I_cz, I_sz;
  std::complex<double> I_y{0.0, 0.0};  // identically zero
};

struct FieldComponents {
  BranchComponents plus;
  BranchComponents minus;
};

struct G1Result {
  double total = 0.0;
  double post_plus = 0.0;
  double post_minus = 0.0;
  double alpha = 0.0;
  double r = 0.0;
};

// omega0^4 dipole^2 / (16 pi^2 r^2) e^{-Gamma (t - r)}: the single-emitter scale.
double g1_prefactor(const FieldPoint& point, double t, const ModelParams& params);

// Dipole envelope prefactor * sin^2(eta - alpha).
double dipole_envelope(const FieldPoint& point, double t, const ModelParams& params);

FieldComponents i_components(const FieldPoint& point, double t, const ModelParams& params,
                             const InitialExternalState& init);

// |I|^2 built from i_components.
G1Result g1_from_components(const FieldPoint& point, double t, const ModelParams& params,
                            const InitialExternalState& init);

// Summary |I+-|^2 form with the delta_r phase and the Delta beat terms.
G1Result g1_total(const FieldPoint& point, double t, const ModelParams& params,
                  const InitialExternalState& init);

// Delta -> 0, far-field (alpha_pm -> alpha) branch intensity.
double g1_postselected(const FieldPoint& point, double t, const ModelParams& params,
                       const InitialExternalState& init, int which);
G1Result g1_postselected_pattern(const FieldPoint& point, double t, const ModelParams& params,
                                 const InitialExternalState& init);

// Leading-order expansions in Delta b / c, envelope-normalized.
double delocalized_fringe_factor(double alpha, const ModelParams& params, int sign);
double right_well_fringe_factor(double alpha, double t_retarded, const ModelParams& params);

struct OracleOptions {
  int n_theta = 0;   // 0: sized from omega0 r
  int n_phi = 0;     // 0: sized from omega0 r
  int n_omega = 4096;    // minimum; raised until du |tau| <= 0.5 over the table
  double window = 400.0;  // half-width in units of Gamma
  double tau_step = 0.05;  // table step for the slowly varying envelope
};

struct OracleResult {
  G1Result g1;
  double tail_fraction = 0.0;    // |tail part| / |full| of the field integrals
  double error_estimate = 0.0;   // relative change against the half-order phi rule
  int n_theta = 0;
  int n_phi = 0;
};

OracleResult g1_quadrature_oracle(const FieldPoint& point, double t, const ModelParams& params,
                                  const InitialExternalState& init,
                                  const OracleOptions& opt = {});

// Same, for several points sharing (r, t); reuses the frequency tables.
std::vector<OracleResult> g1_quadrature_oracle_scan(const std::vector<FieldPoint>& points, double t,
                                                    const ModelParams& params,
                                                    const InitialExternalState& init,
                                                    const OracleOptions& opt = {});

// (max - min) / (max + min) of intensity / envelope over points with
// non-negligible envelope.
double visibility(const std::vector<double>& intensity, const std::vector<double>& envelope);

// Same on a normalized pattern function, with golden-section refinement of
// the extrema found on an n-point grid over [lo, hi].
double visibility_refined(const std::function<double(double)>& normalized, double lo, double hi,
                          int n);

namespace detail {
// x-type component sum  w_+ sin(eta - a_+) trig(a_+) + s w_- sin(eta - a_-) trig(a_-),
// trig = cos for the x component and sin for the z component.
std::complex<double> component_sum(double eta, double a_plus, double a_minus,
                                   std::complex<double> w_plus, std::complex<double> w_minus,
                                   int relative_sign, bool z_component);
}  // namespace detail

}  // namespace twinwell

#pragma once
// Discretized-continuum reference dynamics for the one-excitation sector.
//
// Modes are lumped over (phi, polarization) into (omega, mu = cos theta)
// cells. Amplitude-sector observables depend on the grid only through
// S_cc = sum_mu g^2 cos^2 kappa and S_ss = sum_mu g^2 sin^2 kappa per omega
// (S_sc vanishes on the mirrored mu grid), so the production integrator
// evolves four channels per omega and rebuilds per-mode amplitudes on demand.

#include <complex>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "twinwell/core_types.hpp"

namespace twinwell {

using cplx = std::complex<double>;

enum class SpectralDensity {
  Resonant,  // g^2 density with omega^3 frozen at omega0 (default)
  Cubic,     // literal omega^3 density
};

struct BathMode {
  double omega = 0.0;
  double mu = 0.0;
  double weight = 0.0;  // g^2 of the lumped mode
  double kappa = 0.0;   // omega mu beta / (2 omega0)
};

struct BathGrid {
  std::vector<BathMode> modes;  // omega-major: index j * n_mu + m
  double omega_max = 0.0;
  int n_omega = 0;
  int n_mu = 0;
  double coupling_norm = 0.0;
  double d_omega = 0.0;
  SpectralDensity density = SpectralDensity::Resonant;
  // Frequency counterterms added to the excited amplitudes of the + and -
  // blocks so the dressed emission line sits at omega0 (zero if disabled).
  double counterterm_plus = 0.0;
  double counterterm_minus = 0.0;

  // Per-omega channel weights.
  std::vector<double> omega;
  std::vector<double> s_cc;
  std::vector<double> s_ss;
  std::vector<double> s_sc;

  double recurrence_time() const;
  double max_dt() const { return 0.05 / omega_max; }
};

struct GridOptions {
  double omega_max = 4.0;
  int n_omega = 4000;
  int n_mu = 24;
  SpectralDensity density = SpectralDensity::Resonant;
  bool zero_recoil = false;  // force kappa = 0
  bool renormalize = true;   // cancel the cutoff-induced line shift
};

BathGrid build_grid(const ModelParams& params, double omega_max, int n_omega,
                    int n_mu, SpectralDensity density = SpectralDensity::Resonant,
                    bool zero_recoil = false, bool renormalize = true);
BathGrid build_grid(const ModelParams& params, const GridOptions& opt);

// 2 pi x (coupling density at omega0) from the discrete weights.
double golden_rule_rate(const BathGrid& grid, const ModelParams& params);

// Smallest grid passing all gates for a run of length t_end.
GridOptions suggest_grid(const ModelParams& params, double t_end,
                         double omega_max = 4.0, int n_mu = 24);

struct AmplitudeState {
  cplx c_plus_e{0.0, 0.0};
  cplx c_minus_e{0.0, 0.0};
  std::vector<cplx> c_photon_minus;
  std::vector<cplx> c_photon_plus;
  double t = 0.0;

  double norm() const;
};

AmplitudeState initial_state(const BathGrid& grid, const InitialExternalState& init);

// Time derivative of the full per-mode state (interaction picture).
AmplitudeState step_rhs(const AmplitudeState& state, const BathGrid& grid,
                        const ModelParams& params);

// Literal per-mode RK4 on step_rhs; small grids only.
std::vector<AmplitudeState> integrate_modes(const BathGrid& grid, const ModelParams& params,
                                            const InitialExternalState& init, double t_end,
                                            double dt, int stride);

struct Snapshot {
  double t = 0.0;
  cplx c_plus{0.0, 0.0};
  cplx c_minus{0.0, 0.0};
  cplx K{0.0, 0.0};
  double photon_norm = 0.0;
  double norm = 0.0;
};

struct IntegrateOptions {
  double t_end = 0.0;
  double dt = 0.0;  // 0 selects grid.max_dt()
  int stride = 1;
  bool keep_final_modes = false;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  double dt = 0.0;
  long steps = 0;
  std::optional<AmplitudeState> final_state;
};

Trajectory integrate(const BathGrid& grid, const ModelParams& params,
                     const InitialExternalState& init, const IntegrateOptions& opt);
Trajectory integrate(const BathGrid& grid, const ModelParams& params,
                     const InitialExternalState& init, double t_end, double dt);

struct SurvivalSeries {
  std::vector<double> t;
  std::vector<double> plus;   // |c_{0+e}|^2
  std::vector<double> minus;  // |c_{0-e}|^2
};

SurvivalSeries survival(const Trajectory& traj);
std::vector<cplx> k_correlator(const Trajectory& traj, const BathGrid& grid);
// <z(t)> in the length units of params.b.
std::vector<double> z_numeric(const Trajectory& traj, const BathGrid& grid,
                              const ModelParams& params);

struct PhotonPair {
  cplx minus{0.0, 0.0};  // c_{1k-g}
  cplx plus{0.0, 0.0};   // c_{1k+g}
};

// Finite-time amplitudes with exponentially decaying excited amplitudes.
PhotonPair photon_amp_closedform(const BathMode& mode, double t, const ModelParams& params,
                                 const InitialExternalState& init);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const BathGrid& grid,
                          const ModelParams& params);

}  // namespace twinwell

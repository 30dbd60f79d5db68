#pragma once
// 1-D quartic double well V(z) = V0 (z^2 - a^2)^2 / a^4 in SI units: tunnel
// splitting, well separation and photon-recoil leakage out of the ground doublet.

#include <iosfwd>
#include <string>
#include <vector>

#include "twinwell/core_types.hpp"

namespace twinwell {

// How a barrier height quoted as a frequency f converts to Joules.
enum class FrequencyConvention {
  Hbar,  // V0 = hbar * f (f read as an angular frequency)
  H,     // V0 = h * f
};

const char* to_string(FrequencyConvention c);
FrequencyConvention frequency_convention_from_string(const std::string& s);

struct QuarticWell {
  std::string name;
  double v0 = 0.0;       // J
  double a_well = 0.0;   // m, half the well-to-well distance
  double mass = 0.0;     // kg
  double lambda0 = 0.0;  // m
  FrequencyConvention convention = FrequencyConvention::Hbar;

  double omega0() const;  // 2 pi c / lambda0
  void validate() const;
};

// Barrier given as a frequency in the chosen convention.
QuarticWell make_quartic_well(double v0_frequency, FrequencyConvention convention, double a_well,
                              double mass, double lambda0, std::string name = "custom");

// Cs at 852.4 nm, a = lambda/4, V0 = 0.23 MHz in the given convention.
QuarticWell cs_preset(FrequencyConvention convention = FrequencyConvention::Hbar);

struct SpatialGrid {
  std::vector<double> z;  // m
  double dz = 0.0;
};

struct WellSpectrum {
  std::vector<double> energies;             // J, ascending
  std::vector<std::vector<double>> states;  // int psi^2 dz = 1 (units m^-1/2)
  SpatialGrid grid;
  double tunnel_delta = 0.0;  // (E1 - E0) / hbar, rad/s
  double b_sep = 0.0;         // 2 <R|z|R>, m
  double beta_out = 0.0;      // omega0 b_sep / c
  // diagnostics
  double max_rel_change = 0.0;        // lowest 10 energies, grid doubling
  double delta_rel_change = 0.0;      // tunnel splitting, grid doubling
  double delta_richardson = 0.0;      // extrapolated splitting, rad/s
  double boundary_tail = 0.0;         // max |psi(edge)| / max |psi| over the doublet
};

// Finite-difference spectrum on [-L, L], L = domain_half_width * a_well.
WellSpectrum solve_spectrum(const QuarticWell& well, int n_grid = 3000, double domain_half_width = 2.5,
                            int n_states = 40);

double beta_param(const WellSpectrum& spectrum, double omega0);

// <m| z |n> in meters.
double position_element(const WellSpectrum& spectrum, int m, int n);

struct LeakageReport {
  double leakage = 0.0;       // sum_{m>=2} |<m|e^{ikz}|n>|^2
  double completeness = 0.0;  // sum over all kept states
  std::vector<std::string> warnings;
};

LeakageReport emission_leakage_k(const WellSpectrum& spectrum, double k, int from_state);
// Worst case k_z = omega0 / c.
LeakageReport emission_leakage(const WellSpectrum& spectrum, double omega0, int from_state);

struct TwoLevelReport {
  QuarticWell well;
  double omega0 = 0.0;
  double delta = 0.0;            // rad/s
  double delta_over_2pi = 0.0;   // Hz
  double delta_convention = 0.0; // splitting quoted in the well's frequency convention
  double b = 0.0;                // m
  double beta = 0.0;
  double leakage = 0.0;          // from the ground state
  double leakage_excited = 0.0;  // from the first excited state
  double gap_ratio = 0.0;        // (E2 - E1) / (hbar Delta)
  double ground_energy_over_v0 = 0.0;
  bool pass = false;
  std::vector<std::string> warnings;
};

constexpr double kMaxLeakage = 0.10;
constexpr double kMinGapRatio = 50.0;

TwoLevelReport validate_two_level(const QuarticWell& well, double omega0, int n_grid = 3000,
                                  double domain_half_width = 2.5);

void write_wellcheck_csv_header(std::ostream& os);
void write_wellcheck_csv_row(std::ostream& os, const TwoLevelReport& report);

}  // namespace twinwell

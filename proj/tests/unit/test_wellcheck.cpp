#include <doctest.h>

#include <cmath>
#include <sstream>

#include "twinwell/closed_forms.hpp"
#include "twinwell/wellcheck.hpp"

using namespace twinwell;

namespace {

const WellSpectrum& cs_spectrum() {
  static const WellSpectrum sp = solve_spectrum(cs_preset());
  return sp;
}

}  // namespace

TEST_CASE("convention names round-trip") {
  for (FrequencyConvention c : {FrequencyConvention::Hbar, FrequencyConvention::H}) {
    CHECK(frequency_convention_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(frequency_convention_from_string("planck"), ValidationError);
}

TEST_CASE("well validation") {
  QuarticWell w = cs_preset();
  CHECK_NOTHROW(w.validate());
  w.mass = -1.0;
  CHECK_THROWS_AS(w.validate(), ValidationError);
  CHECK(cs_preset(FrequencyConvention::H).v0 == doctest::Approx(2.0 * M_PI * cs_preset().v0));
  CHECK_THROWS_AS(solve_spectrum(cs_preset(), 1000), ValidationError);
  CHECK_THROWS_AS(solve_spectrum(cs_preset(), 3000, 2.0), ValidationError);
}

TEST_CASE("spectrum is ordered, orthonormal and parity-alternating") {
  const WellSpectrum& sp = cs_spectrum();
  REQUIRE(sp.energies.size() >= 10);
  for (std::size_t i = 1; i < sp.energies.size(); ++i) CHECK(sp.energies[i] > sp.energies[i - 1]);
  const auto& z = sp.grid.z;
  const std::size_t n = z.size();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += sp.states[a][i] * sp.states[b][i];
      CHECK(s * sp.grid.dz == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
    }
    const double sgn = a % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n / 2; i += 97) CHECK(sp.states[a][n - 1 - i] == doctest::Approx(sgn * sp.states[a][i]));
  }
  CHECK(std::abs(position_element(sp, 0, 0)) < 1e-12 * cs_preset().a_well);
  CHECK(position_element(sp, 0, 1) == doctest::Approx(position_element(sp, 1, 0)));
  CHECK(sp.max_rel_change < 1e-3);
  CHECK(sp.boundary_tail < 1e-8);
}

TEST_CASE("doublet is deep in the barrier") {
  const WellSpectrum& sp = cs_spectrum();
  const double gap = sp.energies[2] - sp.energies[1];
  CHECK(gap / (si::hbar * sp.tunnel_delta) > 50.0);
  CHECK(sp.energies[1] < cs_preset().v0);
  // localized |R> sits near the well minimum
  CHECK(sp.b_sep == doctest::Approx(2.0 * cs_preset().a_well).epsilon(0.1));
}

TEST_CASE("leakage") {
  const WellSpectrum& sp = cs_spectrum();
  const LeakageReport none = emission_leakage_k(sp, 0.0, 0);
  CHECK(none.leakage < 1e-20);
  CHECK(none.completeness == doctest::Approx(1.0).epsilon(1e-10));
  const double k = cs_preset().omega0() / si::c;
  const LeakageReport l0 = emission_leakage_k(sp, k, 0);
  CHECK(l0.leakage > 0.0);
  CHECK(l0.leakage < 0.2);
  CHECK(l0.completeness == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(emission_leakage(sp, cs_preset().omega0(), 0).leakage == doctest::Approx(l0.leakage));
  // leakage grows with the recoil momentum
  CHECK(emission_leakage_k(sp, 0.5 * k, 0).leakage < l0.leakage);
}

TEST_CASE("two-level report for the Cs preset") {
  const TwoLevelReport r = validate_two_level(cs_preset(), cs_preset().omega0());
  CHECK(r.beta == doctest::Approx(beta_param(cs_spectrum(), cs_preset().omega0())));
  CHECK(r.delta_over_2pi == doctest::Approx(r.delta / (2 * M_PI)));
  CHECK(r.delta_convention == doctest::Approx(r.delta));
  CHECK(r.pass);
  std::ostringstream os;
  write_wellcheck_csv_header(os);
  write_wellcheck_csv_row(os, r);
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 2);
}

TEST_CASE("a heavier atom tunnels more slowly") {
  QuarticWell w = cs_preset();
  w.mass *= 1.05;
  const WellSpectrum heavy = solve_spectrum(w);
  CHECK(heavy.tunnel_delta < cs_spectrum().tunnel_delta);
}

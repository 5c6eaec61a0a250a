#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frengate/coupling.hpp"

using namespace frengate;

namespace {
const PhysicalParams kParams = PhysicalParams::make(0.5025, 0.005);
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("mode profile interpolation") {
  SUBCASE("linear hits samples and midpoints") {
    ModeProfile p({0.0, 1.0, 2.0}, {1.0, 3.0, 2.0}, ModeProfile::Kind::linear);
    CHECK(p(0.0) == doctest::Approx(1.0));
    CHECK(p(1.0) == doctest::Approx(3.0));
    CHECK(p(0.5) == doctest::Approx(2.0));
    CHECK(p(1.5) == doctest::Approx(2.5));
  }
  SUBCASE("cubic reproduces linear data exactly") {
    ModeProfile p({0.0, 1.0, 2.0, 3.0}, {0.5, 1.0, 1.5, 2.0}, ModeProfile::Kind::cubic);
    for (double x : {0.25, 0.9, 1.5, 2.75})
      CHECK(p(x) == doctest::Approx(0.5 + 0.5 * x).epsilon(1e-12));
  }
  SUBCASE("cubic approximates a smooth profile") {
    std::vector<double> xs, ys;
    for (int k = 0; k <= 40; ++k) {
      const double x = k / 40.0;
      xs.push_back(x);
      ys.push_back(1.0 + std::sin(kPi * x));
    }
    ModeProfile p(xs, ys, ModeProfile::Kind::cubic);
    for (double x : {0.1125, 0.33, 0.51, 0.875})
      CHECK(p(x) == doctest::Approx(1.0 + std::sin(kPi * x)).epsilon(1e-5));
  }
  SUBCASE("out-of-range evaluation rejected") {
    ModeProfile p = ModeProfile::constant(0.0, 1.0, 2.0);
    CHECK_THROWS_AS(p(-0.1), std::domain_error);
    CHECK_THROWS_AS(p(1.1), std::domain_error);
  }
  SUBCASE("invalid samples rejected") {
    CHECK_THROWS_AS(ModeProfile({0.0, 0.0}, {1.0, 1.0}, ModeProfile::Kind::linear),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModeProfile({0.0, 1.0}, {1.0, -0.5}, ModeProfile::Kind::linear),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModeProfile({0.0}, {1.0}, ModeProfile::Kind::linear),
                    std::invalid_argument);
  }
  SUBCASE("constant profile") {
    ModeProfile p = ModeProfile::constant(0.4, 0.6, 3.5);
    CHECK(p(0.5) == doctest::Approx(3.5));
  }
}

TEST_CASE("gaussian coupling amplitude") {
  GaussianCoupling g{2e-6, 2.5e-6, 0.0052};
  SUBCASE("peak value") {
    const double expected =
        std::sqrt(g.gamma / kPi) * std::pow(2.0 * kPi * g.beta * g.beta, -0.25);
    CHECK(gaussian_coupling(g, g.center) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("squared amplitude integrates to gamma/pi") {
    // Fine trapezoid over +-10 beta around the center.
    const int n = 4001;
    const double lo = g.center - 10.0 * g.beta, hi = g.center + 10.0 * g.beta;
    const double h = (hi - lo) / (n - 1);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = gaussian_coupling(g, lo + k * h);
      sum += ((k == 0 || k == n - 1) ? 0.5 : 1.0) * v * v * h;
    }
    CHECK(sum == doctest::Approx(g.gamma / kPi).epsilon(1e-8));
  }
  SUBCASE("even symmetry about the center") {
    for (double x : {1e-7, 5e-7, 3e-6})
      CHECK(gaussian_coupling(g, g.center + x) ==
            doctest::Approx(gaussian_coupling(g, g.center - x)).epsilon(1e-14));
  }
  SUBCASE("invalid spec rejected") {
    CHECK_THROWS_AS(gaussian_coupling(GaussianCoupling{0.0, 1.0, 0.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(gaussian_coupling(GaussianCoupling{1.0, -1.0, 0.0}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("branch coupling") {
  auto unit = [](double) { return std::complex<double>(1.0, 0.0); };
  SUBCASE("two-photon resonance with equal frequencies") {
    // omega = omega' = omega_2X / 2: bracket = 1/(-dX/2) - 1/(dX/2) = -4/dX.
    const double half = kParams.omega_2X / 2.0;
    const auto v = branch_coupling(kParams, unit, unit, half, half);
    CHECK(v.real() == doctest::Approx(-4.0 / kParams.delta_X).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
  SUBCASE("vanishing excitonic coupling") {
    auto zero = [](double) { return std::complex<double>(0.0, 0.0); };
    CHECK(std::abs(branch_coupling(kParams, zero, unit, 0.497, 0.504)) == 0.0);
  }
  SUBCASE("bracket sign flips under reflection about the resonances") {
    // omega -> 2 omega_X - omega, omega' -> 2 (omega_2X - omega_X) - omega'
    // negates both detunings, hence the bracket.
    const double o = kParams.omega_X + 7e-4;
    const double op = (kParams.omega_2X - kParams.omega_X) - 3e-4;
    const auto v = branch_coupling(kParams, unit, unit, op, o);
    const auto w = branch_coupling(kParams, unit, unit,
                                   2.0 * (kParams.omega_2X - kParams.omega_X) - op,
                                   2.0 * kParams.omega_X - o);
    CHECK(w.real() == doctest::Approx(-v.real()).epsilon(1e-12));
  }
  SUBCASE("pole floor enforcement") {
    CHECK_THROWS_AS(
        branch_coupling(kParams, unit, unit, 0.497, kParams.omega_X + 1e-10, 1e-9),
        std::domain_error);
  }
}

TEST_CASE("combined coupling") {
  const ModeProfile mode = ModeProfile::constant(0.4, 0.7, 1.0);
  SUBCASE("symmetric under photon exchange") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(0.45, 0.55);
    for (int k = 0; k < 100; ++k) {
      const double o = dist(rng), op = dist(rng);
      const double a = combined_coupling(kParams, mode, op, o, 1e-6);
      const double b = combined_coupling(kParams, mode, o, op, 1e-6);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
  SUBCASE("vanishes without fine-structure splitting") {
    PhysicalParams flat = PhysicalParams::make(0.5, 0.0);
    for (double o : {0.46, 0.52, 0.55})
      CHECK(combined_coupling(flat, mode, 0.47, o) == doctest::Approx(0.0));
  }
  SUBCASE("vanishes for a dark mode") {
    const ModeProfile dark = ModeProfile::constant(0.4, 0.7, 0.0);
    CHECK(combined_coupling(kParams, dark, 0.47, 0.52) == 0.0);
  }
  SUBCASE("matches the two-branch sum with unit one-photon couplings") {
    auto unit = [](double) { return std::complex<double>(1.0, 0.0); };
    const double o = 0.521, op = 0.468;
    const double branches =
        (branch_coupling(kParams, unit, unit, op, o) +
         branch_coupling(kParams, unit, unit, o, op))
            .real();
    CHECK(combined_coupling(kParams, mode, op, o) ==
          doctest::Approx(kParams.D * branches).epsilon(1e-12));
  }
  SUBCASE("linear in the dipole prefactor") {
    PhysicalParams scaled = kParams;
    scaled.D = 3.0;
    CHECK(combined_coupling(scaled, mode, 0.47, 0.52) ==
          doctest::Approx(3.0 * combined_coupling(kParams, mode, 0.47, 0.52))
              .epsilon(1e-14));
  }
  SUBCASE("first-order in delta_X at fixed detunings") {
    // Fix the excitonic detunings and shrink delta_X; the bracket scales
    // linearly, matched against a finite-difference slope.
    const double de = 8e-3, dpe = -5e-3;
    auto value = [&](double dx) {
      const PhysicalParams p = PhysicalParams::make(0.5, dx);
      return combined_coupling(p, ModeProfile::constant(0.3, 0.7, 1.0),
                               p.omega_X + dpe, p.omega_X + de);
    };
    const double slope = (value(2e-6) - value(1e-6)) / 1e-6;
    CHECK(value(1e-7) == doctest::Approx(slope * 1e-7).epsilon(1e-4));
  }
  SUBCASE("pole floor enforcement") {
    CHECK_THROWS_AS(
        combined_coupling(kParams, mode, 0.47, kParams.omega_X - kParams.delta_X + 1e-12,
                          1e-9),
        std::domain_error);
  }
}

TEST_CASE("spectral function") {
  PhysicalParams p = kParams;
  p.Gamma = 1e-5;
  CouplingSpec spec{GaussianCoupling{4e-6, p.Gamma / 4.0, 0.0052}};
  const Window window{0.0052 - 4e-5, 0.0052 + 4e-5, 4001};
  SUBCASE("isotropic rates Gamma/4 reproduce Gamma") {
    CHECK(spectral_function(spec, 1.0, window) == doctest::Approx(p.Gamma).epsilon(1e-8));
  }
  SUBCASE("independent of the collective frequency") {
    const double j0 = spectral_function(spec, 1.0, window);
    for (double ws : {0.9, 0.99, 1.01, 1.1})
      CHECK(std::abs(spectral_function(spec, ws, window) - j0) < 1e-10 * j0);
  }
  SUBCASE("quadratic in the coupling scale") {
    CouplingSpec doubled{GaussianCoupling{4e-6, p.Gamma, 0.0052}};  // gamma x4 = g x2
    CHECK(spectral_function(doubled, 1.0, window) ==
          doctest::Approx(4.0 * spectral_function(spec, 1.0, window)).epsilon(1e-12));
  }
  SUBCASE("window too small flagged") {
    CHECK_THROWS_AS(spectral_function(spec, 1.0, Window{0.0052 - 4e-6, 0.0052 + 4e-6, 101}),
                    std::domain_error);
  }
}

TEST_CASE("principal value integral") {
  const double pole = 1.0;
  SUBCASE("symmetric J gives zero") {
    auto J = [&](double w) { return std::exp(-(w - pole) * (w - pole) / 2e-4); };
    const double v = principal_value_shift(J, pole, Window{pole - 0.05, pole + 0.05, 4001});
    CHECK(std::abs(v) < 1e-10);
  }
  SUBCASE("constant J on a symmetric window gives zero") {
    auto J = [](double) { return 3.0; };
    CHECK(std::abs(principal_value_shift(J, pole, Window{pole - 0.1, pole + 0.1, 2001})) <
          1e-12);
  }
  SUBCASE("constant J on an asymmetric window") {
    // PV of J0/(p - w) over [p - a, p + b] = J0 ln(a/b).
    auto J = [](double) { return 2.0; };
    const double v =
        principal_value_shift(J, pole, Window{pole - 0.5, pole + 0.2, 20001});
    CHECK(v == doctest::Approx(2.0 * std::log(0.5 / 0.2)).epsilon(1e-6));
  }
  SUBCASE("box support away from the pole") {
    // J = J0 on [p + a, p + b]: integral = -J0 ln(b/a), no pole inside.
    const double a = 0.01, b = 0.04, J0 = 1.5;
    auto J = [&](double w) { return (w >= pole + a && w <= pole + b) ? J0 : 0.0; };
    const double v = principal_value_shift(J, pole, Window{pole + a, pole + b, 40001});
    CHECK(v == doctest::Approx(-J0 * std::log(b / a)).epsilon(1e-3));
  }
  SUBCASE("linear J across a symmetric window") {
    // J = c (w - p): the symmetric-pair integrand is constant -2c.
    const double c = 4.0, L = 0.25;
    auto J = [&](double w) { return c * (w - pole); };
    const double v = principal_value_shift(J, pole, Window{pole - L, pole + L, 5001});
    CHECK(v == doctest::Approx(-2.0 * c * L).epsilon(1e-10));
  }
  SUBCASE("degenerate window rejected") {
    CHECK_THROWS_AS(principal_value_shift([](double) { return 1.0; }, 1.0,
                                          Window{1.0, 1.0, 100}),
                    std::invalid_argument);
  }
}

TEST_CASE("adiabatic regime report") {
  PhysicalParams p = kParams;
  p.S = 1e-5;
  SUBCASE("bound formulas") {
    const double T = 1e6, ge = 1e-5, gb = 2e-5, dw = 1e-5, de = 2.5e-3;
    const RegimeReport r = regime_check(p, T, ge, gb, dw, dw, de);
    const double sqrt2 = std::sqrt(2.0);
    CHECK(r.B1 == doctest::Approx(2.0 * sqrt2 * (ge + gb) / (T * de)).epsilon(1e-14));
    CHECK(r.B2 == doctest::Approx(2.0 * sqrt2 * ge * gb / (T * de * de)).epsilon(1e-14));
    CHECK(r.B3 == doctest::Approx(sqrt2 * (2.0 * p.S * (ge + gb) / (de * de * T) +
                                           p.S * (ge + gb) / de))
                      .epsilon(1e-14));
    CHECK(r.margin_time == doctest::Approx(T * de));
    CHECK(r.margin_bandwidth == doctest::Approx(de / dw));
    CHECK(r.margin_coupling == doctest::Approx(de / gb));
    CHECK(r.all_pass());
  }
  SUBCASE("no splitting means no splitting bound") {
    PhysicalParams flat = kParams;
    flat.S = 0.0;
    const RegimeReport r = regime_check(flat, 1e6, 1e-5, 1e-5, 1e-5, 1e-5, 2.5e-3);
    CHECK(r.B3 == 0.0);
  }
  SUBCASE("long interaction time suppresses the time-dependent bounds") {
    const RegimeReport slow = regime_check(p, 1e12, 1e-5, 1e-5, 1e-5, 1e-5, 2.5e-3);
    CHECK(slow.B1 < 1e-12);
    CHECK(slow.B2 < 1e-15);
    CHECK(slow.B3 == doctest::Approx(std::sqrt(2.0) * p.S * 2e-5 / 2.5e-3).epsilon(1e-6));
  }
  SUBCASE("short interaction time fails the time condition") {
    const RegimeReport fast = regime_check(p, 1.0, 1e-5, 1e-5, 1e-5, 1e-5, 2.5e-3);
    CHECK_FALSE(fast.cond_time);
    CHECK_FALSE(fast.all_pass());
  }
  SUBCASE("operating-point values pass all conditions") {
    // T chosen so T * delta_e = 100 with the quoted emission bandwidth.
    const double de = 2.5e-3, T = 100.0 / de;
    const RegimeReport r = regime_check(p, T, 1e-5, 1e-5, 2.5e-4, 2.5e-4, de);
    CHECK(r.all_pass());
  }
  SUBCASE("invalid inputs rejected") {
    CHECK_THROWS_AS(regime_check(p, -1.0, 1e-5, 1e-5, 1e-5, 1e-5, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(regime_check(p, 1.0, 0.0, 1e-5, 1e-5, 1e-5, 1e-3),
                    std::invalid_argument);
  }
}

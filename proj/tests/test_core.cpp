#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "frengate/errors.hpp"
#include "frengate/field.hpp"
#include "frengate/grid.hpp"
#include "frengate/io.hpp"
#include "frengate/params.hpp"

using namespace frengate;

TEST_CASE("physical parameter invariants") {
  PhysicalParams p = PhysicalParams::make(0.5025, 0.005);
  CHECK(p.omega_2X == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_NOTHROW(p.validate());

  PhysicalParams bad = p;
  bad.Gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.delta_X = -1e-3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.omega_X = 0.51;  // breaks the frequency relation
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("collective coordinates") {
  SUBCASE("equal frequencies") {
    const auto [s, d] = to_collective(1.0, 1.0);
    CHECK(s == 2.0);
    CHECK(d == 0.0);
  }
  SUBCASE("photon-pair centers") {
    const auto [s, d] = to_collective(0.5026, 0.4974);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d == doctest::Approx(0.0052).epsilon(1e-12));
  }
  SUBCASE("round trip on random pairs") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.1, 2.0);
    for (int i = 0; i < 100; ++i) {
      const double x = dist(rng), y = dist(rng);
      const auto [s, d] = to_collective(x, y);
      const auto [x2, y2] = from_collective(s, d);
      CHECK(x2 == doctest::Approx(x).epsilon(1e-15));
      CHECK(y2 == doctest::Approx(y).epsilon(1e-15));
    }
  }
  SUBCASE("exact round trip for dyadic inputs") {
    const auto [s, d] = to_collective(0.75, 0.25);
    const auto [x, y] = from_collective(s, d);
    CHECK(x == 0.75);
    CHECK(y == 0.25);
  }
}

namespace {
BiphotonField gaussian_test_field(double alpha, double ce, double cb, int n,
                                  double half_width) {
  FrequencyGrid grid = FrequencyGrid::centered(ce, cb, half_width, n);
  BiphotonField f(grid, ChannelLabel{});
  const double norm = 1.0 / std::sqrt(M_PI * alpha * alpha);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto [s, d] = to_collective(grid.omega(j), grid.omega_prime(i));
      const double es = s - (ce + cb), ed = d - (ce - cb);
      f.values(i, j) = norm * std::exp(-(es * es + ed * ed) / (4.0 * alpha * alpha));
    }
  return f;
}
}  // namespace

TEST_CASE("integrate2d") {
  SUBCASE("normalized gaussian integrates to one") {
    const BiphotonField f = gaussian_test_field(1e-3, 0.5026, 0.4974, 201, 8e-3);
    CHECK(integrate2d(f) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("zero field") {
    FrequencyGrid grid = FrequencyGrid::centered(0.5, 0.5, 0.1, 32);
    BiphotonField f(grid, ChannelLabel{});
    CHECK(integrate2d(f) == 0.0);
  }
  SUBCASE("resolution refinement changes the result below 1e-6") {
    const double coarse = integrate2d(gaussian_test_field(1e-3, 0.5026, 0.4974, 201, 8e-3));
    const double fine = integrate2d(gaussian_test_field(1e-3, 0.5026, 0.4974, 401, 8e-3));
    CHECK(std::abs(fine - coarse) / fine < 1e-6);
  }
  SUBCASE("degenerate grid rejected") {
    FrequencyGrid g;
    g.n_omega = 1;
    BiphotonField f;
    f.grid = g;
    CHECK_THROWS_AS(integrate2d(f), std::invalid_argument);
  }
  SUBCASE("linearity and monotonicity in |C|^2") {
    BiphotonField f = gaussian_test_field(1e-3, 0.5026, 0.4974, 101, 6e-3);
    const double base = integrate2d(f);
    BiphotonField scaled = f;
    scaled.values *= 2.0;
    CHECK(integrate2d(scaled) == doctest::Approx(4.0 * base).epsilon(1e-12));
    BiphotonField dominated = f;
    dominated.values *= 0.5;
    CHECK(integrate2d(dominated) < base);
  }
}

TEST_CASE("lorentzian emission factor") {
  PhysicalParams p = PhysicalParams::make(0.5025, 0.005);
  p.Gamma = 1e-5;
  SUBCASE("on resonance") {
    const auto v = lorentzian_emission(p.omega_2X, p);
    CHECK(v.real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
  SUBCASE("half-width detuning gives magnitude sqrt(2)") {
    const auto v = lorentzian_emission(p.omega_2X + p.Gamma / 2.0, p);
    // the detuning omega_2X + Gamma/2 is not exactly representable, so the
    // comparison carries the rounding of (1 + 5e-6) - 1
    CHECK(std::abs(v) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  }
  SUBCASE("vanishes far off resonance") {
    CHECK(std::abs(lorentzian_emission(p.omega_2X + 1e3, p)) < 1e-7);
    CHECK(std::abs(lorentzian_emission(p.omega_2X - 1e3, p)) < 1e-7);
  }
  SUBCASE("magnitude even in the detuning") {
    for (double det : {1e-6, 3e-5, 2e-4}) {
      CHECK(std::abs(lorentzian_emission(p.omega_2X + det, p)) ==
            doctest::Approx(std::abs(lorentzian_emission(p.omega_2X - det, p)))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("field serialization round trip") {
  const BiphotonField f = gaussian_test_field(1e-3, 0.5026, 0.4974, 11, 5e-3);
  const auto dir = std::filesystem::temp_directory_path() / "frengate_test_io";
  std::filesystem::create_directories(dir);
  const auto csv = dir / "field.csv";
  const auto sidecar = dir / "field.json";
  save_field_csv(f, csv);
  save_field_sidecar(f, PhysicalParams{}, sidecar);
  CHECK(std::filesystem::exists(csv));

  // Deterministic bytes: identical rewrite yields an identical checksum.
  const std::string sum1 = file_checksum(csv);
  save_field_csv(f, csv);
  CHECK(file_checksum(csv) == sum1);

  const nlohmann::json meta = load_config(sidecar);
  CHECK(meta["grid"]["n_omega"] == 11);
  CHECK(meta["channel"]["sigma"] == "R");
  std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing") {
  const auto dir = std::filesystem::temp_directory_path() / "frengate_test_cfg";
  std::filesystem::create_directories(dir);
  SUBCASE("toml subset") {
    const auto path = dir / "run.toml";
    std::ofstream(path) << "# comment\n"
                           "command = \"scatter\"\n"
                           "[input]\n"
                           "alpha = 1e-6  # width\n"
                           "points = [1, 2, 3]\n"
                           "shifted = true\n"
                           "[coupling.gaussian]\n"
                           "beta = 4e-6\n";
    const nlohmann::json cfg = load_config(path);
    CHECK(cfg["command"] == "scatter");
    CHECK(cfg["input"]["alpha"] == doctest::Approx(1e-6));
    CHECK(cfg["input"]["points"].size() == 3);
    CHECK(cfg["input"]["shifted"] == true);
    CHECK(cfg["coupling"]["gaussian"]["beta"] == doctest::Approx(4e-6));
  }
  SUBCASE("json passthrough") {
    const auto path = dir / "run.json";
    std::ofstream(path) << R"({"command": "regime", "T": 1.0})";
    CHECK(load_config(path)["command"] == "regime");
  }
  SUBCASE("unknown keys rejected") {
    nlohmann::json cfg = {{"alpha", 1.0}, {"extra", {{"nested", 2}}}};
    CHECK_THROWS_AS(reject_unknown_keys(cfg, {"alpha"}, "test"), config_error);
    CHECK_NOTHROW(reject_unknown_keys(cfg, {"alpha", "extra.nested"}, "test"));
  }
  SUBCASE("bad toml rejected") {
    const auto path = dir / "bad.toml";
    std::ofstream(path) << "key value-without-equals\n";
    CHECK_THROWS_AS(load_config(path), config_error);
  }
  std::filesystem::remove_all(dir);
}

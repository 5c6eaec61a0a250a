#include "frengate/scattering.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace frengate {

namespace {
constexpr double kPi = std::numbers::pi;

void require_equal_spacing(const FrequencyGrid& grid, const char* what) {
  const double d = grid.domega();
  const double dp = grid.domega_prime();
  if (std::abs(d - dp) > 1e-9 * std::max(d, dp))
    throw std::invalid_argument(std::string(what) +
                                ": anti-diagonal evaluation needs equal spacing on "
                                "both axes");
}
}  // namespace

BiphotonField gaussian_input(const GaussianInput& spec, const FrequencyGrid& grid) {
  spec.validate();
  grid.validate();
  const double cover = std::min({spec.omega_e - grid.omega_min,
                                 grid.omega_max - spec.omega_e,
                                 spec.omega_b - grid.omega_prime_min,
                                 grid.omega_prime_max - spec.omega_b});
  if (cover < 5.0 * spec.alpha)
    throw std::domain_error("gaussian_input: grid window narrower than 5 alpha around "
                            "the photon centers");
  BiphotonField field(grid, ChannelLabel{Direction::plus, Direction::plus});
  const double c_sigma = spec.omega_e + spec.omega_b;
  const double c_delta = spec.omega_e - spec.omega_b;
  const double a2 = spec.alpha * spec.alpha;
  const double norm = 1.0 / std::sqrt(2.0 * kPi * a2);
  for (int i = 0; i < grid.n_omega_prime; ++i) {
    const double op = grid.omega_prime(i);
    for (int j = 0; j < grid.n_omega; ++j) {
      const double o = grid.omega(j);
      const auto [ws, wd] = to_collective(o, op);
      const double es = ws - c_sigma;
      const double ed = wd - c_delta;
      field.values(i, j) = norm * std::exp(-(es * es + ed * ed) / (4.0 * a2));
    }
  }
  normalize(field);
  return field;
}

double comb_value(const CombFilter& filter, double omega, double center, int n_range) {
  const double two_dw2 = 2.0 * filter.peak_width * filter.peak_width;
  // Only teeth within ~12 widths of omega contribute above double precision.
  const int near = static_cast<int>(std::lround((omega - center) / filter.fsr));
  const int span = static_cast<int>(std::ceil(12.0 * filter.peak_width / filter.fsr)) + 1;
  const int lo = std::max(-n_range, near - span);
  const int hi = std::min(n_range, near + span);
  double f = 0.0;
  for (int n = lo; n <= hi; ++n) {
    const double x = omega - center - n * filter.fsr;
    f += std::exp(-x * x / two_dw2);
  }
  return f;
}

BiphotonField apply_comb_filter(const BiphotonField& field, const CombFilter& filter) {
  filter.validate();
  field.check_finite();
  const FrequencyGrid& grid = field.grid;
  const double half_width =
      std::max({std::abs(grid.omega_min), std::abs(grid.omega_max),
                std::abs(grid.omega_prime_min), std::abs(grid.omega_prime_max)});
  const double c1 = filter.shift_to_centers ? filter.center_omega : 0.0;
  const double c2 = filter.shift_to_centers ? filter.center_omega_prime : 0.0;
  // The comb must cover the full distance from its origin to the window edge.
  const double reach = filter.shift_to_centers
                           ? std::max({grid.omega_max - c1, c1 - grid.omega_min,
                                       grid.omega_prime_max - c2, c2 - grid.omega_prime_min})
                           : half_width;
  const int n_range = filter.resolve_n_range(reach);

  Eigen::ArrayXd f_omega(grid.n_omega);
  for (int j = 0; j < grid.n_omega; ++j)
    f_omega(j) = comb_value(filter, grid.omega(j), c1, n_range);
  Eigen::ArrayXd f_prime(grid.n_omega_prime);
  for (int i = 0; i < grid.n_omega_prime; ++i)
    f_prime(i) = comb_value(filter, grid.omega_prime(i), c2, n_range);

  BiphotonField out = field;
  out.normalized = false;
  out.values = field.values * (f_prime.matrix() * f_omega.matrix().transpose()).array();
  return out;
}

ScatterResult scatter(const BiphotonField& input, const CouplingSpec& coupling,
                      const PhysicalParams& params) {
  input.check_finite();
  if (!input.channel.is_input())
    throw std::invalid_argument("scatter: input must occupy the (+,+) channel");
  const FrequencyGrid& grid = input.grid;
  require_equal_spacing(grid, "scatter");
  const double step = grid.domega();
  const int N = grid.n_omega;
  const int M = grid.n_omega_prime;

  ScatterResult result;
  result.params = params;
  result.tau = params.tau;
  const auto labels = ChannelLabel::all();
  for (int c = 0; c < 4; ++c) result.channels[c] = BiphotonField(grid, labels[c]);

  // Coupling values per grid point (all four channels share the magnitude).
  Eigen::ArrayXXd g(M, N);
  for (int i = 0; i < M; ++i) {
    const double op = grid.omega_prime(i);
    for (int j = 0; j < N; ++j) {
      const auto [ws, wd] = to_collective(grid.omega(j), op);
      g(i, j) = coupling_value(coupling, ws, wd);
    }
  }

  // Anti-diagonal d = i + j has constant omega_sigma; the omega_delta' kernel
  // integral is evaluated once per anti-diagonal (trapezoid, step 2*step).
  for (int d = 0; d <= (M - 1) + (N - 1); ++d) {
    const int i_lo = std::max(0, d - (N - 1));
    const int i_hi = std::min(M - 1, d);
    const double omega_sigma = grid.omega_min + grid.omega_prime_min + d * step;
    std::complex<double> kernel = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
      const int j = d - i;
      const double w = (i == i_lo || i == i_hi) ? 0.5 : 1.0;
      kernel += w * g(i, j) * input.values(i, j);
    }
    kernel *= 2.0 * step;

    const std::complex<double> lorentz =
        -kPi * kernel / std::complex<double>(params.Gamma / 2.0,
                                             params.omega_2X - omega_sigma);
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, -omega_sigma * params.tau));
    for (int i = i_lo; i <= i_hi; ++i) {
      const int j = d - i;
      const std::complex<double> scattered = lorentz * g(i, j);
      for (int c = 0; c < 4; ++c) {
        std::complex<double> v = scattered;
        if (labels[c].is_input()) v += input.values(i, j);
        result.channels[c].values(i, j) = phase * v;
      }
    }
  }
  return result;
}

ScatterResult analytic_gaussian_outputs(const GaussianInput& spec, double beta,
                                        const PhysicalParams& params,
                                        const FrequencyGrid& grid) {
  spec.validate();
  if (!(beta > 0.0))
    throw std::invalid_argument("analytic_gaussian_outputs: beta must be positive");
  grid.validate();

  ScatterResult result;
  result.params = params;
  result.tau = params.tau;
  const auto labels = ChannelLabel::all();
  for (int c = 0; c < 4; ++c) result.channels[c] = BiphotonField(grid, labels[c]);

  const double a2 = spec.alpha * spec.alpha;
  const double b2 = beta * beta;
  const double c_sigma = spec.omega_e + spec.omega_b;
  const double c_delta = spec.omega_e - spec.omega_b;
  // Amplitudes for an input of unit norm over (omega, omega'); the collective
  // plane carries a Jacobian 1/2, hence the factor-2 reduction in each
  // denominator relative to the collective-plane normalization.
  const double input_norm = 1.0 / std::sqrt(kPi * a2);
  const double prefactor = std::sqrt(1.0 / (8.0 * kPi * (a2 + b2)));

  for (int i = 0; i < grid.n_omega_prime; ++i) {
    const double op = grid.omega_prime(i);
    for (int j = 0; j < grid.n_omega; ++j) {
      const auto [ws, wd] = to_collective(grid.omega(j), op);
      const double es = ws - c_sigma;
      const double ed = wd - c_delta;
      const std::complex<double> phase =
          std::exp(std::complex<double>(0.0, -ws * params.tau));
      const std::complex<double> term =
          prefactor * lorentzian_emission(ws, params) *
          std::exp(-es * es / (4.0 * a2)) * std::exp(-ed * ed / (4.0 * b2));
      const std::complex<double> cin =
          input_norm * std::exp(-(es * es / (4.0 * a2) + ed * ed / (4.0 * a2)));
      for (int c = 0; c < 4; ++c)
        result.channels[c].values(i, j) =
            labels[c].is_input() ? phase * (cin - term) : -phase * term;
    }
  }
  return result;
}

BiphotonField analytic_qudit_output(const GaussianInput& spec, const CombFilter& filter,
                                    double beta, const PhysicalParams& params,
                                    const FrequencyGrid& grid) {
  spec.validate();
  filter.validate();
  grid.validate();
  if (!(beta > 0.0))
    throw std::invalid_argument("analytic_qudit_output: beta must be positive");
  require_equal_spacing(grid, "analytic_qudit_output");

  const double a2 = spec.alpha * spec.alpha;
  const double b2 = beta * beta;
  const double dw2 = filter.peak_width * filter.peak_width;
  const double fsr = filter.fsr;
  const double c_sigma_env = spec.omega_e + spec.omega_b;
  const double c_delta = spec.omega_e - spec.omega_b;
  // Comb-sum centers: the shifted variant recenters the comb on the photon
  // pair and measures the tooth offsets from zero inside D_nm.
  const double c_sigma_comb = filter.shift_to_centers ? c_sigma_env : 0.0;
  const double c_delta_d = filter.shift_to_centers ? 0.0 : c_delta;

  const double mix = a2 * b2 + dw2 * (a2 + b2);
  const double prefactor = std::sqrt(dw2 / (8.0 * kPi * mix));  // unit-norm input in (omega, omega')

  const double half_width = (grid.omega_max - grid.omega_min +
                             grid.omega_prime_max - grid.omega_prime_min) / 2.0;
  const double reach =
      filter.shift_to_centers
          ? half_width
          : half_width + std::abs(c_sigma_env) / 1.0;  // teeth must span |omega_sigma|
  const int R = filter.resolve_n_range(reach);
  if (R > 5000)
    throw std::domain_error(
        "analytic_qudit_output: comb truncation range impractically large; use the "
        "shifted filter variant for combs far from zero frequency");

  // Tooth-pair weights grouped by p = n + m; the exp(D) factor depends on
  // q = n - m only.
  auto d_of_q = [&](int q) {
    const double off = c_delta_d - fsr * q;
    return -0.25 * (a2 + b2) * off * off / mix;
  };
  std::vector<double> weight(4 * R + 1, 0.0);       // index p + 2R
  std::vector<double> weight_edge(4 * R + 1, 0.0);  // contribution of |n|=R or |m|=R
  for (int n = -R; n <= R; ++n)
    for (int m = -R; m <= R; ++m) {
      const double e = std::exp(d_of_q(n - m));
      weight[n + m + 2 * R] += e;
      if (std::abs(n) == R || std::abs(m) == R) weight_edge[n + m + 2 * R] += e;
    }

  const double step = grid.domega();
  const int N = grid.n_omega;
  const int M = grid.n_omega_prime;
  const int n_diag = M + N - 1;
  Eigen::ArrayXd comb(n_diag), comb_edge(n_diag);
  for (int d = 0; d < n_diag; ++d) {
    const double ws = grid.omega_min + grid.omega_prime_min + d * step;
    double s = 0.0, se = 0.0;
    for (int p = -2 * R; p <= 2 * R; ++p) {
      const double x = ws - c_sigma_comb - fsr * p;
      const double tooth = std::exp(-x * x / (4.0 * dw2));
      s += weight[p + 2 * R] * tooth;
      se += weight_edge[p + 2 * R] * tooth;
    }
    comb(d) = s;
    comb_edge(d) = se;
  }
  const double comb_max = comb.maxCoeff();
  if (comb_max > 0.0 && comb_edge.maxCoeff() > 1e-10 * comb_max)
    throw std::domain_error("analytic_qudit_output: comb truncation n_range too small");

  BiphotonField field(grid, ChannelLabel{Direction::minus, Direction::plus});
  for (int i = 0; i < M; ++i) {
    const double op = grid.omega_prime(i);
    for (int j = 0; j < N; ++j) {
      const auto [ws, wd] = to_collective(grid.omega(j), op);
      const double es = ws - c_sigma_env;
      const double ed = wd - c_delta;
      const std::complex<double> phase =
          std::exp(std::complex<double>(0.0, -ws * params.tau));
      field.values(i, j) = -phase * prefactor * std::exp(-ed * ed / (4.0 * b2)) *
                           lorentzian_emission(ws, params) *
                           std::exp(-es * es / (4.0 * a2)) * comb(i + j);
    }
  }
  return field;
}

BiphotonField limit_jsi_amplitude(const GaussianInput& spec, double beta,
                                  const FrequencyGrid& grid) {
  spec.validate();
  if (!(beta > 0.0))
    throw std::invalid_argument("limit_jsi_amplitude: beta must be positive");
  const double a2 = spec.alpha * spec.alpha;
  const double b2 = beta * beta;
  const double c_sigma = spec.omega_e + spec.omega_b;
  const double c_delta = spec.omega_e - spec.omega_b;
  const double amp = std::sqrt(1.0 / (2.0 * kPi * (a2 + b2)));  // unit-norm input in (omega, omega')
  BiphotonField field(grid, ChannelLabel{Direction::minus, Direction::plus});
  for (int i = 0; i < grid.n_omega_prime; ++i) {
    const double op = grid.omega_prime(i);
    for (int j = 0; j < grid.n_omega; ++j) {
      const auto [ws, wd] = to_collective(grid.omega(j), op);
      const double es = ws - c_sigma;
      const double ed = wd - c_delta;
      field.values(i, j) =
          amp * std::exp(-ed * ed / (4.0 * b2)) * std::exp(-es * es / (4.0 * a2));
    }
  }
  return field;
}

}  // namespace frengate

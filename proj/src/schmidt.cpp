#include "frengate/schmidt.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace frengate {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kMaxHermiteOrder = 500;
}  // namespace

double hermite_gauss(int n, const BasisSpec& spec, double omega) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("hermite_gauss: order must be nonnegative");
  if (n > kMaxHermiteOrder)
    throw std::invalid_argument("hermite_gauss: order beyond the stable range (n > 500)");
  const double y = (omega - spec.center) / spec.scale;
  // Three-term recurrence with the Gaussian weight folded in at every step.
  double h_prev = 0.0;
  double h = std::pow(kPi, -0.25) * std::exp(-y * y / 2.0);
  for (int k = 1; k <= n; ++k) {
    const double h_next =
        std::sqrt(2.0 / k) * y * h - std::sqrt((k - 1.0) / k) * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h / std::sqrt(spec.scale);
}

Eigen::MatrixXd hermite_gauss_table(const BasisSpec& spec, const Eigen::ArrayXd& axis) {
  spec.validate();
  if (spec.count - 1 > kMaxHermiteOrder)
    throw std::invalid_argument("hermite_gauss_table: order beyond the stable range");
  const Eigen::ArrayXd y = (axis - spec.center) / spec.scale;
  Eigen::MatrixXd table(spec.count, axis.size());
  Eigen::ArrayXd h_prev = Eigen::ArrayXd::Zero(axis.size());
  Eigen::ArrayXd h = std::pow(kPi, -0.25) * (-y * y / 2.0).exp();
  const double root_scale = std::sqrt(spec.scale);
  table.row(0) = (h / root_scale).matrix();
  for (int k = 1; k < spec.count; ++k) {
    const Eigen::ArrayXd h_next =
        std::sqrt(2.0 / k) * y * h - std::sqrt((k - 1.0) / k) * h_prev;
    h_prev = h;
    h = h_next;
    table.row(k) = (h / root_scale).matrix();
  }
  return table;
}

ProjectionResult project(const BiphotonField& field, const BasisSpec& basis_omega,
                         const BasisSpec& basis_omega_prime) {
  field.check_finite();
  const FrequencyGrid& grid = field.grid;
  const Eigen::ArrayXd axis_o = grid.omega_axis();
  const Eigen::ArrayXd axis_p = grid.omega_prime_axis();
  const Eigen::MatrixXd B1 = hermite_gauss_table(basis_omega, axis_o);
  const Eigen::MatrixXd B2 = hermite_gauss_table(basis_omega_prime, axis_p);
  const Eigen::ArrayXd wo = trapezoid_weights(grid.n_omega, grid.domega());
  const Eigen::ArrayXd wp = trapezoid_weights(grid.n_omega_prime, grid.domega_prime());
  const Eigen::MatrixXd B1w = B1 * wo.matrix().asDiagonal();
  const Eigen::MatrixXd B2w = B2 * wp.matrix().asDiagonal();

  // Basis orthonormality on this grid (sampling-limited for high orders).
  const Eigen::MatrixXd gram1 = B1w * B1.transpose();
  const Eigen::MatrixXd gram2 = B2w * B2.transpose();
  const double ortho_err =
      std::max((gram1 - Eigen::MatrixXd::Identity(gram1.rows(), gram1.cols()))
                   .cwiseAbs().maxCoeff(),
               (gram2 - Eigen::MatrixXd::Identity(gram2.rows(), gram2.cols()))
                   .cwiseAbs().maxCoeff());
  if (ortho_err > 1e-2)
    throw std::domain_error("project: basis not orthonormal on this grid "
                            "(undersampled high-order modes)");

  ProjectionResult res;
  res.basis_omega = basis_omega;
  res.basis_omega_prime = basis_omega_prime;
  res.coeffs = B2w * field.values.matrix() * B1w.transpose();

  const Eigen::MatrixXcd recon = B2.transpose() * res.coeffs * B1;
  const Eigen::ArrayXXd diff2 = (field.values - recon.array()).abs2();
  const Eigen::ArrayXXd ref2 = field.values.abs2();
  const double num = (wp.matrix().transpose() * diff2.matrix() * wo.matrix())(0, 0);
  const double den = (wp.matrix().transpose() * ref2.matrix() * wo.matrix())(0, 0);
  if (!(den > 0.0)) throw std::invalid_argument("project: zero field");
  res.reconstruction_error = std::sqrt(num / den);
  res.truncation_sufficient = res.reconstruction_error <= 1e-3;
  return res;
}

double schmidt_number(const Eigen::VectorXd& lambdas) {
  if (lambdas.size() == 0) throw std::invalid_argument("schmidt_number: empty spectrum");
  const double s4 = lambdas.array().square().square().sum();
  if (!(s4 > 0.0)) throw std::invalid_argument("schmidt_number: all-zero spectrum");
  return 1.0 / s4;
}

EntropyResult entanglement_entropy(const Eigen::VectorXd& lambdas) {
  if (lambdas.size() == 0)
    throw std::invalid_argument("entanglement_entropy: empty spectrum");
  double nats = 0.0;
  for (int k = 0; k < lambdas.size(); ++k) {
    const double p = lambdas(k) * lambdas(k);
    if (p > 0.0) nats -= p * std::log(p);
  }
  EntropyResult e;
  e.nats = nats;
  e.bits = nats / std::numbers::ln2;
  e.normalized =
      lambdas.size() > 1 ? nats / std::log(static_cast<double>(lambdas.size())) : 0.0;
  return e;
}

SchmidtSpectrum schmidt_decompose(const Eigen::MatrixXcd& coeffs) {
  if (coeffs.size() == 0 || !coeffs.allFinite())
    throw std::invalid_argument("schmidt_decompose: empty or non-finite matrix");
  if (coeffs.norm() == 0.0)
    throw std::invalid_argument("schmidt_decompose: all-zero coefficient matrix");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(coeffs,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtSpectrum s;
  s.lambdas = svd.singularValues() / svd.singularValues().norm();
  s.mode_coeffs_omega_prime = svd.matrixU();
  s.mode_coeffs_omega = svd.matrixV().conjugate();
  s.K = schmidt_number(s.lambdas);
  const EntropyResult e = entanglement_entropy(s.lambdas);
  s.entropy_nats = e.nats;
  s.entropy_bits = e.bits;
  s.normalized_entropy = e.normalized;
  s.truncation_n = static_cast<int>(coeffs.rows());
  s.truncation_m = static_cast<int>(coeffs.cols());
  return s;
}

namespace {
// Mean and standard deviation of a probability weight over an axis.
void axis_moments(const Eigen::ArrayXd& axis, const Eigen::ArrayXd& weight, double& mean,
                  double& sigma) {
  const double total = weight.sum();
  if (!(total > 0.0)) throw std::domain_error("axis_moments: zero total weight");
  mean = (axis * weight).sum() / total;
  const double var = ((axis - mean).square() * weight).sum() / total;
  sigma = std::sqrt(std::max(0.0, var));
}
}  // namespace

SchmidtSpectrum schmidt_of_field(const BiphotonField& field, int count) {
  const FrequencyGrid& grid = field.grid;
  const Eigen::ArrayXd wo = trapezoid_weights(grid.n_omega, grid.domega());
  const Eigen::ArrayXd wp = trapezoid_weights(grid.n_omega_prime, grid.domega_prime());
  const Eigen::ArrayXXd mag2 = field.values.abs2();
  const Eigen::ArrayXd marg_o =
      (mag2.matrix().transpose() * wp.matrix()).array() * wo;  // over omega
  const Eigen::ArrayXd marg_p = (mag2.matrix() * wo.matrix()).array() * wp;

  BasisSpec b1, b2;
  axis_moments(grid.omega_axis(), marg_o, b1.center, b1.scale);
  axis_moments(grid.omega_prime_axis(), marg_p, b2.center, b2.scale);
  if (!(b1.scale > 0.0) || !(b2.scale > 0.0))
    throw std::domain_error("schmidt_of_field: degenerate (zero-variance) field");
  b1.count = count;
  b2.count = count;

  const ProjectionResult proj = project(field, b1, b2);
  SchmidtSpectrum s = schmidt_decompose(proj.coeffs);
  s.reconstruction_error = proj.reconstruction_error;
  return s;
}

Eigen::VectorXcd sample_schmidt_mode(const SchmidtSpectrum& spectrum, const BasisSpec& basis,
                                     int k, const Eigen::ArrayXd& axis, bool omega_side) {
  const Eigen::MatrixXcd& coeffs =
      omega_side ? spectrum.mode_coeffs_omega : spectrum.mode_coeffs_omega_prime;
  if (k < 0 || k >= coeffs.cols())
    throw std::invalid_argument("sample_schmidt_mode: mode index out of range");
  const Eigen::MatrixXd table = hermite_gauss_table(basis, axis);
  return table.transpose() * coeffs.col(k);
}

ChannelProbabilities success_probability_numeric(const ScatterResult& result,
                                                 const BiphotonField& input) {
  const double denom = integrate2d(input);
  if (!(denom > 0.0))
    throw std::invalid_argument("success_probability_numeric: zero input norm");
  ChannelProbabilities out;
  for (int c = 0; c < 4; ++c) {
    out.p[c] = integrate2d(result.channels[c]) / denom;
    if (!result.channels[c].channel.is_input()) out.p_success += out.p[c];
  }
  return out;
}

double success_probability_analytic(double r) {
  if (!(r > 0.0))
    throw std::invalid_argument("success_probability_analytic: ratio must be positive");
  return 3.0 * r / (2.0 * (1.0 + r * r));
}

DistributionStats distribution_stats(const BiphotonField& field) {
  const FrequencyGrid& grid = field.grid;
  const Eigen::ArrayXd wo = trapezoid_weights(grid.n_omega, grid.domega());
  const Eigen::ArrayXd wp = trapezoid_weights(grid.n_omega_prime, grid.domega_prime());
  const Eigen::ArrayXXd mag2 = field.values.abs2();

  double total = 0.0;
  double mean_o = 0.0, mean_p = 0.0;
  for (int i = 0; i < grid.n_omega_prime; ++i)
    for (int j = 0; j < grid.n_omega; ++j) {
      const double w = wp(i) * wo(j) * mag2(i, j);
      total += w;
      mean_o += w * grid.omega(j);
      mean_p += w * grid.omega_prime(i);
    }
  if (!(total > 0.0)) throw std::domain_error("distribution_stats: zero field");
  mean_o /= total;
  mean_p /= total;

  double var_o = 0.0, var_p = 0.0, cov = 0.0;
  for (int i = 0; i < grid.n_omega_prime; ++i)
    for (int j = 0; j < grid.n_omega; ++j) {
      const double w = wp(i) * wo(j) * mag2(i, j);
      const double xo = grid.omega(j) - mean_o;
      const double xp = grid.omega_prime(i) - mean_p;
      var_o += w * xo * xo;
      var_p += w * xp * xp;
      cov += w * xo * xp;
    }
  var_o /= total;
  var_p /= total;
  cov /= total;

  // Collective-coordinate spreads follow from the same second moments.
  const double var_sigma = var_o + var_p + 2.0 * cov;
  const double var_delta = var_o + var_p - 2.0 * cov;
  if (!(var_sigma > 0.0) || !(var_delta > 0.0) || !(var_o > 0.0) || !(var_p > 0.0))
    throw std::domain_error("distribution_stats: degenerate (zero-variance) field");

  DistributionStats stats;
  stats.sigma_sigma = std::sqrt(var_sigma);
  stats.sigma_delta = std::sqrt(var_delta);
  const double tr = var_o + var_p;
  const double det = var_o * var_p - cov * cov;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double major = tr / 2.0 + disc;
  const double minor = std::max(0.0, tr / 2.0 - disc);
  stats.ellipticity = std::sqrt(std::max(0.0, 1.0 - minor / major));
  return stats;
}

std::vector<SweepRow> tradeoff_sweep(const std::vector<double>& r_values, double alpha,
                                     const PhysicalParams& params, int basis_count,
                                     int grid_n) {
  std::vector<SweepRow> rows;
  rows.reserve(r_values.size());
  for (double r : r_values) {
    SweepRow row;
    row.ratio = r;
    try {
      const double beta = r * alpha;
      GaussianInput in{alpha, params.omega_e, params.omega_b};
      const FrequencyGrid grid = default_grid(params, alpha, beta, grid_n);
      const BiphotonField input = gaussian_input(in, grid);
      const ScatterResult out = analytic_gaussian_outputs(in, beta, params, grid);
      const ChannelProbabilities probs = success_probability_numeric(out, input);
      row.p_success = probs.p_success;

      BiphotonField channel = out.channel(ChannelLabel{Direction::minus, Direction::plus});
      normalize(channel);
      try {
        const SchmidtSpectrum s = schmidt_of_field(channel, basis_count);
        row.schmidt_number = s.K;
        row.entropy_nats = s.entropy_nats;
        row.entropy_normalized = s.normalized_entropy;
        row.reconstruction_error = s.reconstruction_error;
      } catch (const std::exception& e) {
        row.schmidt_number = std::numeric_limits<double>::quiet_NaN();
        row.entropy_nats = std::numeric_limits<double>::quiet_NaN();
        row.entropy_normalized = std::numeric_limits<double>::quiet_NaN();
        row.reconstruction_error = std::numeric_limits<double>::quiet_NaN();
        row.note = std::string("entanglement metrics unavailable: ") + e.what();
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.note = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> qudit_sweep(const std::vector<double>& ratio_values, double alpha,
                                  const CombFilter& filter, const PhysicalParams& params,
                                  int basis_count, int grid_n) {
  std::vector<SweepRow> rows;
  rows.reserve(ratio_values.size());
  CombFilter shifted = filter;
  shifted.shift_to_centers = true;
  shifted.center_omega = params.omega_e;
  shifted.center_omega_prime = params.omega_b;
  for (double ratio : ratio_values) {
    SweepRow row;
    row.ratio = ratio;
    try {
      const double beta = ratio * shifted.peak_width;
      GaussianInput in{alpha, params.omega_e, params.omega_b};
      const FrequencyGrid grid = default_grid(params, alpha, beta, grid_n);
      const BiphotonField out = analytic_qudit_output(in, shifted, beta, params, grid);

      // The scattered ridge along omega_delta can be narrower than the grid
      // step at small ratios; its norm is computed by a 1-D factorization that
      // stays exact there.
      const double out_norm2 = [&] {
        const double a2 = in.alpha * in.alpha;
        const double b2 = beta * beta;
        const double dw2 = shifted.peak_width * shifted.peak_width;
        const double mix = a2 * b2 + dw2 * (a2 + b2);
        // squared closed-form prefactor for a unit-norm input in (omega, omega')
        const double pref2 = dw2 / (8.0 * std::numbers::pi * mix);
        // int |G_delta|^2 = beta sqrt(2 pi)
        const double delta_part = beta * std::sqrt(2.0 * std::numbers::pi);
        // 1-D integral over omega_sigma, resolved to a fraction of peak_width.
        const double c_sigma = in.omega_e + in.omega_b;
        const double hw = grid.omega_max - grid.omega_min;
        const double lo = c_sigma - hw, hi = c_sigma + hw;
        const int n = std::max(20001, static_cast<int>((hi - lo) / (shifted.peak_width / 8.0)));
        const double h = (hi - lo) / (n - 1);
        const int R = shifted.resolve_n_range(hw);
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
          const double ws = lo + k * h;
          double comb = 0.0;
          for (int p = -2 * R; p <= 2 * R; ++p) {
            const double off = shifted.fsr * p;
            const double x = ws - c_sigma - off;
            if (std::abs(x) > 12.0 * shifted.peak_width) continue;
            // weight over tooth pairs with n + m = p
            double wsum = 0.0;
            for (int nn = std::max(-R, p - R); nn <= std::min(R, p + R); ++nn) {
              const double qoff = shifted.fsr * (2.0 * nn - p);
              wsum += std::exp(-0.25 * (a2 + b2) * qoff * qoff / mix);
            }
            comb += wsum * std::exp(-x * x / (4.0 * dw2));
          }
          const double es = ws - c_sigma;
          const double env = std::exp(-es * es / (4.0 * a2));
          const double lor2 = std::norm(lorentzian_emission(ws, params));
          const double f = pref2 * lor2 * env * env * comb * comb;
          sum += ((k == 0 || k == n - 1) ? 0.5 : 1.0) * f * h;
        }
        return 0.5 * delta_part * sum;  // Jacobian 1/2 back to the (w, w') plane
      }();

      // The comb teeth are far narrower than any affordable 2-D grid step, so
      // the filtered-input norm also uses a 1-D factorization: the input is
      // separable and both axes carry the same envelope width and comb.
      const double in_norm2 = [&] {
        const double a2 = in.alpha * in.alpha;
        const double dw2 = shifted.peak_width * shifted.peak_width;
        const double span = 8.0 * in.alpha;
        const int n =
            std::max(20001, static_cast<int>(2.0 * span / (shifted.peak_width / 16.0)));
        const double h = 2.0 * span / (n - 1);
        const int R = shifted.resolve_n_range(span);
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
          const double x = -span + k * h;  // offset from the photon center
          double comb = 0.0;
          for (int t = -R; t <= R; ++t) {
            const double y = x - t * shifted.fsr;
            if (std::abs(y) > 12.0 * shifted.peak_width) continue;
            comb += std::exp(-y * y / (2.0 * dw2));
          }
          const double env2 = std::exp(-x * x / a2);
          sum += ((k == 0 || k == n - 1) ? 0.5 : 1.0) * env2 * comb * comb * h;
        }
        // per-axis amplitude of the unit-norm separable input: 1/(pi a^2)^(1/4)
        const double axis = sum / (in.alpha * std::sqrt(std::numbers::pi));
        return axis * axis;
      }();
      row.p_success = 3.0 * out_norm2 / in_norm2;

      BiphotonField channel = out;
      normalize(channel);
      try {
        const SchmidtSpectrum s = schmidt_of_field(channel, basis_count);
        row.schmidt_number = s.K;
        row.entropy_nats = s.entropy_nats;
        row.entropy_normalized = s.normalized_entropy;
        row.reconstruction_error = s.reconstruction_error;
      } catch (const std::exception& e) {
        row.schmidt_number = std::numeric_limits<double>::quiet_NaN();
        row.entropy_nats = std::numeric_limits<double>::quiet_NaN();
        row.entropy_normalized = std::numeric_limits<double>::quiet_NaN();
        row.reconstruction_error = std::numeric_limits<double>::quiet_NaN();
        row.note = std::string("entanglement metrics unavailable: ") + e.what();
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.note = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace frengate

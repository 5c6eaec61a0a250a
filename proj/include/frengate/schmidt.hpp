#ifndef FRENGATE_SCHMIDT_HPP
#define FRENGATE_SCHMIDT_HPP

#include <Eigen/Dense>
#include <vector>

#include "frengate/field.hpp"
#include "frengate/scattering.hpp"

namespace frengate {

// Hermite-Gauss basis parameters for one frequency axis.
struct BasisSpec {
  double center = 0.0;
  double scale = 1.0;
  int count = 60;

  void validate() const {
    if (!(scale > 0.0)) throw std::invalid_argument("BasisSpec: scale must be positive");
    if (count < 1) throw std::invalid_argument("BasisSpec: count must be >= 1");
  }
};

// Orthonormal Hermite-Gauss function O_n evaluated at omega.
double hermite_gauss(int n, const BasisSpec& spec, double omega);

// All basis functions up to spec.count sampled on an axis; row n holds O_n.
Eigen::MatrixXd hermite_gauss_table(const BasisSpec& spec, const Eigen::ArrayXd& axis);

struct ProjectionResult {
  Eigen::MatrixXcd coeffs;  // coeffs(n, m) pairs O_n along omega' with O_m along omega
  double reconstruction_error = 0.0;
  bool truncation_sufficient = true;  // reconstruction_error <= 1e-3
  BasisSpec basis_omega;
  BasisSpec basis_omega_prime;
};

ProjectionResult project(const BiphotonField& field, const BasisSpec& basis_omega,
                         const BasisSpec& basis_omega_prime);

struct SchmidtSpectrum {
  Eigen::VectorXd lambdas;  // descending, sum of squares = 1
  Eigen::MatrixXcd mode_coeffs_omega_prime;  // columns: Schmidt modes in basis 2
  Eigen::MatrixXcd mode_coeffs_omega;       // columns: Schmidt modes in basis 1
  double K = 0.0;
  double entropy_nats = 0.0;
  double entropy_bits = 0.0;
  double normalized_entropy = 0.0;  // entropy_nats / log(retained mode count)
  int truncation_n = 0;
  int truncation_m = 0;
  double reconstruction_error = 0.0;
};

SchmidtSpectrum schmidt_decompose(const Eigen::MatrixXcd& coeffs);

double schmidt_number(const Eigen::VectorXd& lambdas);

struct EntropyResult {
  double nats = 0.0;
  double bits = 0.0;
  double normalized = 0.0;
};

EntropyResult entanglement_entropy(const Eigen::VectorXd& lambdas);

// Moment-matched basis (center = marginal mean, scale = marginal std of |C|^2)
// followed by projection and SVD.
SchmidtSpectrum schmidt_of_field(const BiphotonField& field, int count = 60);

// Sample Schmidt mode k (0-based) of a decomposition on an axis.
Eigen::VectorXcd sample_schmidt_mode(const SchmidtSpectrum& spectrum, const BasisSpec& basis,
                                     int k, const Eigen::ArrayXd& axis, bool omega_side);

struct ChannelProbabilities {
  std::array<double, 4> p{};  // ordered as ChannelLabel::all()
  double p_success = 0.0;     // sum over the non-input channels
};

ChannelProbabilities success_probability_numeric(const ScatterResult& result,
                                                 const BiphotonField& input);

// 3r / (2 (1 + r^2)) with r = beta / alpha.
double success_probability_analytic(double r);

struct DistributionStats {
  double sigma_sigma = 0.0;
  double sigma_delta = 0.0;
  double ellipticity = 0.0;  // eccentricity of the covariance ellipse in (omega, omega')
};

DistributionStats distribution_stats(const BiphotonField& field);

struct SweepRow {
  double ratio = 0.0;
  double p_success = 0.0;
  double schmidt_number = 0.0;
  double entropy_nats = 0.0;
  double entropy_normalized = 0.0;
  double reconstruction_error = 0.0;
  bool ok = true;
  std::string note;
};

// Success probability vs entanglement metrics over the width ratio r = beta/alpha.
std::vector<SweepRow> tradeoff_sweep(const std::vector<double>& r_values, double alpha,
                                     const PhysicalParams& params, int basis_count = 60,
                                     int grid_n = 1024);

// Same trade-off for comb-filtered inputs over the ratio beta/peak_width.
std::vector<SweepRow> qudit_sweep(const std::vector<double>& ratio_values, double alpha,
                                  const CombFilter& filter, const PhysicalParams& params,
                                  int basis_count = 400, int grid_n = 1024);

}  // namespace frengate

#endif

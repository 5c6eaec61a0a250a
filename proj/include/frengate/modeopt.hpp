#ifndef FRENGATE_MODEOPT_HPP
#define FRENGATE_MODEOPT_HPP

#include <Eigen/Dense>

#include "frengate/coupling.hpp"
#include "frengate/params.hpp"

namespace frengate {

// Discretized design target T_ij = g(omega_j, omega'_i) / h(omega_j, omega'_i)
// over the two photon windows.
struct TargetMatrix {
  Eigen::MatrixXd T;            // rows: omega' window, cols: omega window
  Eigen::ArrayXd omega_axis;    // excitonic-photon window
  Eigen::ArrayXd omega_prime_axis;  // biexcitonic-photon window
  double sigma_ratio = 0.0;     // sigma_2 / sigma_1, rank-1 quality diagnostic
};

struct ModeSolution {
  Eigen::VectorXd u;        // over the omega window
  Eigen::VectorXd u_prime;  // over the omega' window
  double residual = 0.0;    // ||u u'^T - T||_F / ||T||_F
  int iterations = 0;
  bool anticorrelated = false;  // negative Pearson correlation of the trends
};

// Four-term detuning bracket of the combined coupling, without the mode
// product and dipole prefactor.
double nonseparable_bracket(const PhysicalParams& params, double omega_prime,
                            double omega, double pole_floor = 0.0);

TargetMatrix build_target(const PhysicalParams& params, const GaussianCoupling& g_target,
                          double omega_center, double omega_half_width,
                          double omega_prime_center, double omega_prime_half_width,
                          int n = 200, double pole_floor = 0.0);

// Rank-1 initialization from the leading singular triplet.
std::pair<Eigen::VectorXd, Eigen::VectorXd> rank1_init(const Eigen::MatrixXd& T);

// Alternating least squares with nonnegativity clamping; gauge ||u|| = ||u'||.
ModeSolution refine(const TargetMatrix& target,
                    const std::pair<Eigen::VectorXd, Eigen::VectorXd>& init);

// Merge the two window solutions into a single interpolated mode profile.
ModeProfile interpolate_profile(const TargetMatrix& target, const ModeSolution& solution,
                                ModeProfile::Kind kind);

}  // namespace frengate

#endif

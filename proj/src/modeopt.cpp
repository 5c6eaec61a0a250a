#include "frengate/modeopt.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "frengate/errors.hpp"

namespace frengate {

double nonseparable_bracket(const PhysicalParams& params, double omega_prime,
                            double omega, double pole_floor) {
  const double biexc_res = params.omega_X - params.delta_X;
  const double de = omega - params.omega_X;
  const double dpb = omega_prime - biexc_res;
  const double dpe = omega_prime - params.omega_X;
  const double db = omega - biexc_res;
  for (double d : {de, dpb, dpe, db})
    if (std::abs(d) <= pole_floor)
      throw std::domain_error(
          "nonseparable_bracket: one-photon detuning within the pole floor");
  return 1.0 / de - 1.0 / dpb + 1.0 / dpe - 1.0 / db;
}

TargetMatrix build_target(const PhysicalParams& params, const GaussianCoupling& g_target,
                          double omega_center, double omega_half_width,
                          double omega_prime_center, double omega_prime_half_width,
                          int n, double pole_floor) {
  g_target.validate();
  if (n < 2) throw std::invalid_argument("build_target: need n >= 2");
  TargetMatrix tm;
  tm.omega_axis = Eigen::ArrayXd::LinSpaced(n, omega_center - omega_half_width,
                                            omega_center + omega_half_width);
  tm.omega_prime_axis =
      Eigen::ArrayXd::LinSpaced(n, omega_prime_center - omega_prime_half_width,
                                omega_prime_center + omega_prime_half_width);
  tm.T.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double op = tm.omega_prime_axis(i);
      const double o = tm.omega_axis(j);
      const double h = nonseparable_bracket(params, op, o, pole_floor);
      if (h == 0.0)
        throw std::domain_error("build_target: non-separable bracket vanishes on the window");
      tm.T(i, j) = gaussian_coupling(g_target, o - op) / h;
    }
  if (!tm.T.allFinite())
    throw std::domain_error("build_target: non-finite target entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(tm.T);
  const auto& sv = svd.singularValues();
  tm.sigma_ratio = sv.size() > 1 && sv(0) > 0.0 ? sv(1) / sv(0) : 0.0;
  return tm;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> rank1_init(const Eigen::MatrixXd& T) {
  if (T.size() == 0 || T.norm() == 0.0)
    throw std::invalid_argument("rank1_init: zero target matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma1 = svd.singularValues()(0);
  if (!(sigma1 > 0.0)) throw std::invalid_argument("rank1_init: vanishing leading value");
  Eigen::VectorXd u = std::sqrt(sigma1) * svd.matrixV().col(0);       // omega window
  Eigen::VectorXd u_prime = std::sqrt(sigma1) * svd.matrixU().col(0); // omega' window
  // Canonicalize the sign so the majority of entries are nonnegative.
  if (u.sum() + u_prime.sum() < 0.0) {
    u = -u;
    u_prime = -u_prime;
  }
  return {u, u_prime};
}

namespace {
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(std::min(a.size(), b.size()));
  const Eigen::VectorXd x = a.head(n).array() - a.head(n).mean();
  const Eigen::VectorXd y = b.head(n).array() - b.head(n).mean();
  const double den = x.norm() * y.norm();
  return den > 0.0 ? x.dot(y) / den : 0.0;
}
}  // namespace

ModeSolution refine(const TargetMatrix& target,
                    const std::pair<Eigen::VectorXd, Eigen::VectorXd>& init) {
  const Eigen::MatrixXd& T = target.T;
  Eigen::VectorXd u = init.first.cwiseMax(0.0);
  Eigen::VectorXd up = init.second.cwiseMax(0.0);
  if (u.rows() != T.cols() || up.rows() != T.rows())
    throw std::invalid_argument("refine: init dimensions do not match the target");
  const double t_norm = T.norm();
  if (!(t_norm > 0.0)) throw std::invalid_argument("refine: zero target");

  auto residual_of = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& uup) {
    return (uup * uu.transpose() - T).norm() / t_norm;
  };

  double res = residual_of(u, up);
  int iter = 0;
  for (; iter < 500; ++iter) {
    // Each half-step is the exact nonnegative least-squares optimum for the
    // separable per-entry objective, so the residual never increases.
    const double up2 = up.squaredNorm();
    if (!(up2 > 0.0)) throw convergence_error("refine: collapsed factor");
    u = (T.transpose() * up / up2).cwiseMax(0.0);
    const double u2 = u.squaredNorm();
    if (!(u2 > 0.0)) throw convergence_error("refine: collapsed factor");
    up = (T * u / u2).cwiseMax(0.0);
    const double next = residual_of(u, up);
    const double improvement = res - next;
    res = next;
    if (improvement < 1e-12 * std::max(1.0, res)) break;
  }
  if (res > 0.5)
    throw convergence_error("refine: stagnated above residual 0.5 (ill-posed target)");

  // Gauge: equal factor norms leave the product unchanged.
  const double nu = u.norm(), nup = up.norm();
  const double s = std::sqrt(nu * nup);
  u *= s / nu;
  up *= s / nup;

  ModeSolution sol;
  sol.u = u;
  sol.u_prime = up;
  sol.residual = res;
  sol.iterations = iter + 1;
  sol.anticorrelated = pearson(u, up) < 0.0;
  return sol;
}

ModeProfile interpolate_profile(const TargetMatrix& target, const ModeSolution& solution,
                                ModeProfile::Kind kind) {
  if (solution.u.size() != target.omega_axis.size() ||
      solution.u_prime.size() != target.omega_prime_axis.size())
    throw std::invalid_argument("interpolate_profile: solution does not match target axes");

  struct Sample {
    double omega;
    double u;
  };
  std::vector<Sample> samples;
  samples.reserve(solution.u.size() + solution.u_prime.size());
  for (int i = 0; i < solution.u_prime.size(); ++i)
    samples.push_back({target.omega_prime_axis(i), solution.u_prime(i)});
  for (int j = 0; j < solution.u.size(); ++j)
    samples.push_back({target.omega_axis(j), solution.u(j)});
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.omega < b.omega; });

  // If the windows intersect, the two factors must agree there.
  const double lo_overlap =
      std::max(target.omega_axis.minCoeff(), target.omega_prime_axis.minCoeff());
  const double hi_overlap =
      std::min(target.omega_axis.maxCoeff(), target.omega_prime_axis.maxCoeff());
  if (lo_overlap < hi_overlap) {
    ModeProfile pu(std::vector<double>(target.omega_axis.data(),
                                       target.omega_axis.data() + target.omega_axis.size()),
                   std::vector<double>(solution.u.data(),
                                       solution.u.data() + solution.u.size()),
                   ModeProfile::Kind::linear);
    ModeProfile pup(
        std::vector<double>(target.omega_prime_axis.data(),
                            target.omega_prime_axis.data() + target.omega_prime_axis.size()),
        std::vector<double>(solution.u_prime.data(),
                            solution.u_prime.data() + solution.u_prime.size()),
        ModeProfile::Kind::linear);
    for (int k = 0; k <= 16; ++k) {
      const double w = lo_overlap + k * (hi_overlap - lo_overlap) / 16.0;
      const double a = pu(w), b = pup(w);
      const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
      if (std::abs(a - b) / scale > 0.05)
        throw std::domain_error(
            "interpolate_profile: window solutions disagree by more than 5% on the "
            "overlap");
    }
  }

  std::vector<double> omegas, us;
  for (const Sample& s : samples) {
    if (!omegas.empty() && s.omega <= omegas.back()) continue;  // drop duplicates
    omegas.push_back(s.omega);
    us.push_back(std::max(0.0, s.u));
  }
  return ModeProfile(std::move(omegas), std::move(us), kind);
}

}  // namespace frengate

#include "frengate/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "frengate/errors.hpp"

namespace frengate {

namespace {
using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);
}  // namespace

void DecayConfig::validate() const {
  params.validate();
  if (n_freq < 50) throw std::invalid_argument("DecayConfig: need n_freq >= 50");
  if (!(window_max > window_min))
    throw std::invalid_argument("DecayConfig: degenerate frequency window");
  if (!(t_max > 0.0) || !(dt > 0.0) || t_max < dt)
    throw std::invalid_argument("DecayConfig: invalid time span or step");
  if (!(coupling.mode_sigma > 0.0))
    throw std::invalid_argument("DecayConfig: coupling bandwidth must be positive");
  const double margin = 3.0 * coupling.mode_sigma;
  if (coupling.mode_center - margin < window_min ||
      coupling.mode_center + margin > window_max)
    throw std::invalid_argument(
        "DecayConfig: window must contain the emission bandwidth (center +- 3 sigma)");
  if (sample_stride < 1)
    throw std::invalid_argument("DecayConfig: sample_stride must be >= 1");
}

Eigen::MatrixXcd sector_hamiltonian(
    const PhysicalParams& params,
    const std::function<std::complex<double>(double)>& coupling, double omega_i,
    double omega_j) {
  const Complex gi = coupling(omega_i);
  const Complex gj = coupling(omega_j);
  const double wX = params.omega_X;
  const double S = params.S;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(6, 6);
  H(0, 0) = omega_i + omega_j;
  H(1, 1) = omega_i + wX;
  H(2, 2) = omega_i + wX;
  H(3, 3) = omega_j + wX;
  H(4, 4) = omega_j + wX;
  H(5, 5) = 2.0 * wX - params.delta_X;
  // ground <-> exciton (photon emission/absorption)
  H(0, 1) = gi;
  H(0, 2) = gi;
  H(0, 3) = gj;
  H(0, 4) = gj;
  // fine-structure splitting between the circular exciton states
  H(1, 2) = S;
  H(3, 4) = S;
  // exciton <-> biexciton
  H(1, 5) = gi;
  H(2, 5) = gi;
  H(3, 5) = gj;
  H(4, 5) = gj;
  // Hermitian completion
  for (int r = 0; r < 6; ++r)
    for (int c = r + 1; c < 6; ++c) H(c, r) = std::conj(H(r, c));
  return H;
}

namespace {

// Flat state layout: [0] biexciton; [1..N] X+; [N+1..2N] X-; then the
// symmetrized two-photon amplitudes indexed by pair (k <= l).
struct Layout {
  int N = 0;
  int xp(int k) const { return 1 + k; }
  int xm(int k) const { return 1 + N + k; }
  int pair_base() const { return 1 + 2 * N; }
  int size() const { return 1 + 2 * N + N * (N + 1) / 2; }
};

struct Derivative {
  const Layout& lay;
  const Eigen::ArrayXd& omegas;   // mode frequencies
  const Eigen::ArrayXd& g;        // couplings with sqrt(d_omega) folded in
  double omega_X, delta_X, S;

  // Rotating-frame derivative: phases carry the free evolution so only the
  // slow coupling dynamics is integrated.
  void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const {
    const int N = lay.N;
    Eigen::ArrayXcd A(N), Bc(N), Q(N), s(N);
    for (int k = 0; k < N; ++k) {
      A(k) = std::exp(kI * ((omegas(k) - omega_X) * t));
      Bc(k) = std::exp(kI * ((omegas(k) - omega_X + delta_X) * t));
      Q(k) = g(k) * A(k);
      s(k) = y(lay.xp(k)) + y(lay.xm(k));
    }

    Complex d2x = 0.0;
    for (int k = 0; k < N; ++k) d2x += g(k) * std::conj(Bc(k)) * s(k);
    dy(0) = -kI * d2x;

    Eigen::ArrayXcd acc = Eigen::ArrayXcd::Zero(N);
    int idx = lay.pair_base();
    const double root2 = std::sqrt(2.0);
    for (int k = 0; k < N; ++k) {
      // diagonal pair (k, k): bosonic sqrt(2) enhancement
      const Complex c_kk = y(idx);
      dy(idx) = -kI * root2 * Q(k) * s(k);
      acc(k) += root2 * std::conj(Q(k)) * c_kk;
      ++idx;
      for (int l = k + 1; l < N; ++l, ++idx) {
        const Complex c_kl = y(idx);
        dy(idx) = -kI * (Q(l) * s(k) + Q(k) * s(l));
        acc(k) += std::conj(Q(l)) * c_kl;
        acc(l) += std::conj(Q(k)) * c_kl;
      }
    }

    const Complex c2x = y(0);
    for (int k = 0; k < N; ++k) {
      const Complex drive = g(k) * Bc(k) * c2x;
      dy(lay.xp(k)) = -kI * (S * y(lay.xm(k)) + drive + acc(k));
      dy(lay.xm(k)) = -kI * (S * y(lay.xp(k)) + drive + acc(k));
    }
  }
};

}  // namespace

DecayTrajectory evolve(const DecayConfig& config) {
  config.validate();
  const int N = config.n_freq;
  const Layout lay{N};
  const double d_omega = (config.window_max - config.window_min) / (N - 1);
  Eigen::ArrayXd omegas(N), g(N);
  for (int k = 0; k < N; ++k) {
    omegas(k) = config.window_min + k * d_omega;
    g(k) = config.coupling(omegas(k)) * std::sqrt(d_omega);  // continuum weight
  }

  const Derivative deriv{lay, omegas, g, config.params.omega_X, config.params.delta_X,
                         config.params.S};

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(lay.size());
  y(0) = 1.0;  // biexciton occupied, field in vacuum
  Eigen::VectorXcd k1(lay.size()), k2(lay.size()), k3(lay.size()), k4(lay.size()),
      tmp(lay.size());

  DecayTrajectory traj;
  const long n_steps = static_cast<long>(std::ceil(config.t_max / config.dt));
  const double h = config.t_max / n_steps;

  auto record = [&](double t) {
    double p2x = std::norm(y(0));
    double px = 0.0;
    for (int k = 0; k < N; ++k) px += std::norm(y(lay.xp(k))) + std::norm(y(lay.xm(k)));
    double p0 = 0.0;
    for (int i = lay.pair_base(); i < lay.size(); ++i) p0 += std::norm(y(i));
    traj.times.push_back(t);
    traj.p2x.push_back(p2x);
    traj.px.push_back(px);
    traj.p0.push_back(p0);
    traj.norm.push_back(p0 + px + p2x);
    // <H> = sum_a E_a |phi_a|^2 + Re(i <phi | dphi>) in the rotating frame.
    deriv(t, y, k1);
    double energy = std::norm(y(0)) * (2.0 * config.params.omega_X - config.params.delta_X);
    for (int k = 0; k < N; ++k)
      energy += (std::norm(y(lay.xp(k))) + std::norm(y(lay.xm(k)))) *
                (omegas(k) + config.params.omega_X);
    int idx = lay.pair_base();
    for (int k = 0; k < N; ++k)
      for (int l = k; l < N; ++l, ++idx)
        energy += std::norm(y(idx)) * (omegas(k) + omegas(l));
    energy += (kI * y.dot(k1)).real();  // y.dot = conj(y) . k1
    traj.energy.push_back(energy);
  };

  record(0.0);
  for (long step = 0; step < n_steps; ++step) {
    const double t = step * h;
    deriv(t, y, k1);
    tmp = y + (h / 2.0) * k1;
    deriv(t + h / 2.0, tmp, k2);
    tmp = y + (h / 2.0) * k2;
    deriv(t + h / 2.0, tmp, k3);
    tmp = y + h * k3;
    deriv(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if ((step + 1) % config.sample_stride == 0 || step + 1 == n_steps) {
      record((step + 1) * h);
      const double drift = std::abs(traj.norm.back() - 1.0);
      if (drift > config.norm_tolerance)
        throw convergence_error(
            "evolve: norm drift " + std::to_string(drift) +
            " exceeds tolerance; reduce the time step (current dt = " +
            std::to_string(h) + ")");
    }
  }

  try {
    const DecayFit fit = fit_decay_rate(traj.times, traj.p2x);
    traj.gamma_fit = fit.gamma;
    traj.fit_residual = fit.residual;
    traj.fit_ok = true;
  } catch (const std::exception&) {
    traj.gamma_fit = std::numeric_limits<double>::quiet_NaN();
    traj.fit_residual = std::numeric_limits<double>::quiet_NaN();
    traj.fit_ok = false;
  }
  return traj;
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& p2x) {
  if (times.size() != p2x.size() || times.size() < 3)
    throw std::invalid_argument("fit_decay_rate: need matching series of length >= 3");
  std::vector<double> t_fit, ln_fit;
  double prev = 2.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p = p2x[i];
    if (p >= 0.1 && p <= 0.9) {
      if (p >= prev)
        throw std::domain_error(
            "fit_decay_rate: P_2X not strictly decreasing over the fit window "
            "(Rabi-dominated)");
      prev = p;
      t_fit.push_back(times[i]);
      ln_fit.push_back(std::log(p));
    }
  }
  if (t_fit.size() < 3)
    throw std::domain_error("fit_decay_rate: too few samples with 0.1 <= P_2X <= 0.9");
  const std::size_t n = t_fit.size();
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += t_fit[i];
    sl += ln_fit[i];
    stt += t_fit[i] * t_fit[i];
    stl += t_fit[i] * ln_fit[i];
  }
  const double denom = n * stt - st * st;
  if (!(std::abs(denom) > 0.0))
    throw std::domain_error("fit_decay_rate: degenerate time samples");
  const double slope = (n * stl - st * sl) / denom;
  const double intercept = (sl - slope * st) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ln_fit[i] - (slope * t_fit[i] + intercept);
    ss += r * r;
  }
  DecayFit fit;
  fit.gamma = -slope;
  fit.residual = std::sqrt(ss / n);
  return fit;
}

DecayConfig decay_preset(const std::string& name, int n_freq) {
  DecayConfig cfg;
  cfg.params = PhysicalParams::make(0.5025, 0.005);
  cfg.params.S = 1e-5;
  cfg.n_freq = n_freq;
  cfg.coupling.mode_center = cfg.params.omega_X - cfg.params.delta_X / 2.0;  // 0.5
  if (name == "adiabatic") {
    // One-photon lines at 0.5025 and 0.4975 lie far outside the bandwidth.
    cfg.coupling.mode_sigma = 2.5e-4;
    cfg.coupling.g0 = 1.4e-2;  // calibrated: fitted two-photon decay rate ~2e-5
    cfg.window_min = cfg.coupling.mode_center - 1.5e-3;
    cfg.window_max = cfg.coupling.mode_center + 1.5e-3;
    cfg.t_max = 3.0e5;
    cfg.dt = 25.0;
    cfg.sample_stride = 20;
  } else if (name == "resonant") {
    // Bandwidth widened until the one-photon lines fall inside it, opening the
    // first-order decay channel.
    cfg.coupling.mode_sigma = 2.5e-3;
    cfg.coupling.g0 = 1.2e-2;
    // Bias the bandwidth toward the upper one-photon emission line so the
    // intermediate excitonic level fills faster than it drains; a symmetric
    // bandwidth caps its transient population at 1/4.
    cfg.coupling.mode_center -= 9.0e-4;
    cfg.window_min = cfg.coupling.mode_center - 1.0e-2;
    cfg.window_max = cfg.coupling.mode_center + 1.0e-2;
    cfg.t_max = 6.0e4;
    cfg.dt = 8.0;
    cfg.sample_stride = 25;
  } else {
    throw config_error("decay_preset: unknown preset '" + name +
                       "' (expected 'adiabatic' or 'resonant')");
  }
  return cfg;
}

}  // namespace frengate

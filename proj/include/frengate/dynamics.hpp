#ifndef FRENGATE_DYNAMICS_HPP
#define FRENGATE_DYNAMICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "frengate/params.hpp"

namespace frengate {

// One-photon coupling g(omega) = g0 * sqrt(omega) * u(omega) with a Gaussian
// propagation-mode magnitude u.
struct DecayCoupling {
  double g0 = 0.0;
  double mode_center = 0.0;  // omega_X - delta_X / 2
  double mode_sigma = 0.0;   // emission bandwidth

  double operator()(double omega) const {
    const double x = omega - mode_center;
    return g0 * std::sqrt(omega) *
           std::exp(-x * x / (2.0 * mode_sigma * mode_sigma));
  }
};

struct DecayConfig {
  PhysicalParams params;
  int n_freq = 400;
  double window_min = 0.0;  // frequency continuum window, centered at omega_2X/2
  double window_max = 0.0;
  DecayCoupling coupling;
  double t_max = 0.0;
  double dt = 0.0;
  int sample_stride = 20;
  double norm_tolerance = 1e-5;  // abort threshold for unitarity drift

  void validate() const;
};

struct DecayTrajectory {
  std::vector<double> times;
  std::vector<double> p0, px, p2x;
  std::vector<double> norm;
  std::vector<double> energy;  // <H> at sample times
  double gamma_fit = 0.0;
  double fit_residual = 0.0;
  bool fit_ok = false;
};

// The 6x6 two-photon-sector matrix in the basis
// {|0; wi, wj>, |X+; wi>, |X-; wi>, |X+; wj>, |X-; wj>, |2X; vac>}.
Eigen::MatrixXcd sector_hamiltonian(
    const PhysicalParams& params,
    const std::function<std::complex<double>(double)>& coupling, double omega_i,
    double omega_j);

// Full coupled Wigner-Weisskopf evolution from C_2X = 1 on the discretized
// continuum (interaction-picture RK4; symmetrized two-photon sector).
DecayTrajectory evolve(const DecayConfig& config);

struct DecayFit {
  double gamma = 0.0;
  double residual = 0.0;
};

// Least-squares slope of ln P_2X over the window 0.1 <= P_2X <= 0.9.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& p2x);

// Bundled regimes: "adiabatic" (one-photon transitions detuned outside the
// bandwidth) and "resonant" (bandwidth overlapping the one-photon lines).
DecayConfig decay_preset(const std::string& name, int n_freq = 400);

}  // namespace frengate

#endif

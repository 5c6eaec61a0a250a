#ifndef FRENGATE_GRID_HPP
#define FRENGATE_GRID_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

#include "frengate/params.hpp"

namespace frengate {

// Uniformly spaced rectangle in the (omega, omega_prime) plane.
struct FrequencyGrid {
  double omega_min = 0.0;
  double omega_max = 1.0;
  int n_omega = 2;
  double omega_prime_min = 0.0;
  double omega_prime_max = 1.0;
  int n_omega_prime = 2;

  void validate() const {
    if (n_omega < 2 || n_omega_prime < 2)
      throw std::invalid_argument("FrequencyGrid: need at least 2 points per axis");
    if (!(omega_max > omega_min) || !(omega_prime_max > omega_prime_min))
      throw std::invalid_argument("FrequencyGrid: max must exceed min on both axes");
  }

  double domega() const { return (omega_max - omega_min) / (n_omega - 1); }
  double domega_prime() const {
    return (omega_prime_max - omega_prime_min) / (n_omega_prime - 1);
  }
  double omega(int j) const { return omega_min + j * domega(); }
  double omega_prime(int i) const { return omega_prime_min + i * domega_prime(); }

  Eigen::ArrayXd omega_axis() const {
    return Eigen::ArrayXd::LinSpaced(n_omega, omega_min, omega_max);
  }
  Eigen::ArrayXd omega_prime_axis() const {
    return Eigen::ArrayXd::LinSpaced(n_omega_prime, omega_prime_min, omega_prime_max);
  }

  bool operator==(const FrequencyGrid& o) const {
    return omega_min == o.omega_min && omega_max == o.omega_max && n_omega == o.n_omega &&
           omega_prime_min == o.omega_prime_min && omega_prime_max == o.omega_prime_max &&
           n_omega_prime == o.n_omega_prime;
  }

  // Square grid centered on (center_omega, center_omega_prime).
  static FrequencyGrid centered(double center_omega, double center_omega_prime,
                                double half_width, int n) {
    FrequencyGrid g;
    g.omega_min = center_omega - half_width;
    g.omega_max = center_omega + half_width;
    g.n_omega = n;
    g.omega_prime_min = center_omega_prime - half_width;
    g.omega_prime_max = center_omega_prime + half_width;
    g.n_omega_prime = n;
    g.validate();
    return g;
  }
};

// Collective coordinates: sum and difference of the two photon frequencies.
inline std::pair<double, double> to_collective(double omega, double omega_prime) {
  return {omega + omega_prime, omega - omega_prime};
}

inline std::pair<double, double> from_collective(double omega_sigma, double omega_delta) {
  return {(omega_sigma + omega_delta) / 2.0, (omega_sigma - omega_delta) / 2.0};
}

// Emission profile Gamma / (Gamma/2 + i(omega_2X - omega_Sigma)).
inline std::complex<double> lorentzian_emission(double omega_sigma,
                                                const PhysicalParams& params) {
  if (!(params.Gamma > 0.0))
    throw std::invalid_argument("lorentzian_emission: Gamma must be positive");
  return params.Gamma /
         std::complex<double>(params.Gamma / 2.0, params.omega_2X - omega_sigma);
}

}  // namespace frengate

#endif

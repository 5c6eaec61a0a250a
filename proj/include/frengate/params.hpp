#ifndef FRENGATE_PARAMS_HPP
#define FRENGATE_PARAMS_HPP

#include <cmath>
#include <stdexcept>

namespace frengate {

// All frequencies are dimensionless multiples of the biexciton frequency
// omega_2X; conversion to physical units happens only at the CLI boundary.
struct PhysicalParams {
  double omega_2X = 1.0;  // biexciton transition frequency (normalization)
  double omega_X = 0.5025;  // exciton frequency
  double delta_X = 0.005;   // binding frequency, omega_2X = 2*omega_X - delta_X
  double S = 0.0;           // fine-structure splitting
  double Gamma = 1e-5;      // biexciton decay rate
  double D = 1.0;           // dipole-product magnitude (hbar^2 absorbed)
  double omega_e = 0.5026;  // excitonic photon center
  double omega_b = 0.4974;  // biexcitonic photon center
  double tau = 0.0;         // scattering duration t1 - t0

  void validate() const {
    if (!(Gamma > 0.0)) throw std::invalid_argument("PhysicalParams: Gamma must be positive");
    if (delta_X < 0.0) throw std::invalid_argument("PhysicalParams: delta_X must be nonnegative");
    const double lhs = omega_2X;
    const double rhs = 2.0 * omega_X - delta_X;
    const double scale = std::abs(lhs) > 0 ? std::abs(lhs) : 1.0;
    if (std::abs(lhs - rhs) > 1e-12 * scale)
      throw std::invalid_argument("PhysicalParams: omega_2X != 2*omega_X - delta_X");
  }

  static PhysicalParams make(double omega_X, double delta_X) {
    PhysicalParams p;
    p.omega_X = omega_X;
    p.delta_X = delta_X;
    p.omega_2X = 2.0 * omega_X - delta_X;
    p.validate();
    return p;
  }
};

}  // namespace frengate

#endif

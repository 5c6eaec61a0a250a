#ifndef FRENGATE_FIELD_HPP
#define FRENGATE_FIELD_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include "frengate/grid.hpp"
#include "frengate/params.hpp"

namespace frengate {

enum class Direction { plus, minus };
enum class Polarization { R, L };

// One of the four direction-of-propagation output channels; the polarization
// pair is fixed by the selection rules.
struct ChannelLabel {
  Direction mu_prime = Direction::plus;
  Direction mu = Direction::plus;

  Polarization sigma_prime() const {
    if (mu_prime == Direction::plus && mu == Direction::plus) return Polarization::L;
    if (mu_prime == Direction::minus && mu == Direction::minus) return Polarization::R;
    if (mu_prime == Direction::minus && mu == Direction::plus) return Polarization::R;
    return Polarization::L;  // (+,-)
  }
  Polarization sigma() const {
    if (mu_prime == Direction::plus && mu == Direction::plus) return Polarization::R;
    if (mu_prime == Direction::minus && mu == Direction::minus) return Polarization::L;
    if (mu_prime == Direction::minus && mu == Direction::plus) return Polarization::R;
    return Polarization::L;  // (+,-)
  }

  bool is_input() const {
    return mu_prime == Direction::plus && mu == Direction::plus;
  }

  std::string name() const {
    std::string s;
    s += (mu_prime == Direction::plus) ? 'p' : 'm';
    s += (mu == Direction::plus) ? 'p' : 'm';
    return s;
  }

  bool operator==(const ChannelLabel& o) const {
    return mu_prime == o.mu_prime && mu == o.mu;
  }

  static std::array<ChannelLabel, 4> all() {
    return {ChannelLabel{Direction::plus, Direction::plus},
            ChannelLabel{Direction::minus, Direction::minus},
            ChannelLabel{Direction::minus, Direction::plus},
            ChannelLabel{Direction::plus, Direction::minus}};
  }
};

// Complex two-photon amplitude C(omega_prime, omega) sampled on a grid.
// values(i, j) holds C at omega_prime = grid.omega_prime(i), omega = grid.omega(j).
struct BiphotonField {
  FrequencyGrid grid;
  Eigen::ArrayXXcd values;  // rows: omega_prime, cols: omega
  ChannelLabel channel;
  bool normalized = false;

  BiphotonField() = default;
  BiphotonField(FrequencyGrid g, ChannelLabel ch)
      : grid(g), values(Eigen::ArrayXXcd::Zero(g.n_omega_prime, g.n_omega)), channel(ch) {
    grid.validate();
  }

  void check_finite() const {
    if (!values.isFinite().all())
      throw std::invalid_argument("BiphotonField: non-finite amplitude values");
  }
};

// Trapezoid weights for one axis: 1/2 at the ends, 1 inside, times the step.
inline Eigen::ArrayXd trapezoid_weights(int n, double step) {
  if (n < 2) throw std::invalid_argument("trapezoid_weights: need n >= 2");
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, step);
  w(0) = step / 2.0;
  w(n - 1) = step / 2.0;
  return w;
}

// Trapezoidal double integral of |C|^2 over the (omega, omega_prime) rectangle.
inline double integrate2d(const BiphotonField& field) {
  field.grid.validate();
  field.check_finite();
  const Eigen::ArrayXd wo = trapezoid_weights(field.grid.n_omega, field.grid.domega());
  const Eigen::ArrayXd wp =
      trapezoid_weights(field.grid.n_omega_prime, field.grid.domega_prime());
  // sum_ij wp_i * wo_j * |C_ij|^2 as a weighted quadratic form.
  const Eigen::ArrayXXd mag2 = field.values.abs2();
  return (wp.matrix().transpose() * mag2.matrix() * wo.matrix())(0, 0);
}

// L2 distance ||A - B|| / ||B|| with the same quadrature weights.
inline double relative_l2_error(const BiphotonField& a, const BiphotonField& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("relative_l2_error: fields on different grids");
  const Eigen::ArrayXd wo = trapezoid_weights(a.grid.n_omega, a.grid.domega());
  const Eigen::ArrayXd wp =
      trapezoid_weights(a.grid.n_omega_prime, a.grid.domega_prime());
  const Eigen::ArrayXXd diff2 = (a.values - b.values).abs2();
  const Eigen::ArrayXXd ref2 = b.values.abs2();
  const double num = (wp.matrix().transpose() * diff2.matrix() * wo.matrix())(0, 0);
  const double den = (wp.matrix().transpose() * ref2.matrix() * wo.matrix())(0, 0);
  if (!(den > 0.0)) throw std::invalid_argument("relative_l2_error: zero reference field");
  return std::sqrt(num / den);
}

// Rescale so that integrate2d(field) == 1.
inline void normalize(BiphotonField& field) {
  const double norm2 = integrate2d(field);
  if (!(norm2 > 0.0)) throw std::invalid_argument("normalize: zero-norm field");
  field.values /= std::sqrt(norm2);
  field.normalized = true;
}

// Default analysis window: centered on the photon pair, wide enough for the
// Gaussian envelopes and the Lorentzian core.
inline FrequencyGrid default_grid(const PhysicalParams& params, double alpha, double beta,
                                  int n = 512) {
  const double hw = 6.0 * std::max({alpha, beta, params.Gamma / 2.0});
  return FrequencyGrid::centered(params.omega_e, params.omega_b, hw, n);
}

}  // namespace frengate

#endif

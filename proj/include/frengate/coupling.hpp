#ifndef FRENGATE_COUPLING_HPP
#define FRENGATE_COUPLING_HPP

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "frengate/grid.hpp"
#include "frengate/params.hpp"

namespace frengate {

// Magnitude of the waveguide propagation mode u(omega), sampled and
// interpolated (linear or natural cubic spline). Evaluation is restricted to
// the sampled range.
class ModeProfile {
 public:
  enum class Kind { linear, cubic };

  ModeProfile() = default;
  ModeProfile(std::vector<double> omegas, std::vector<double> us, Kind kind);

  double operator()(double omega) const;
  Kind kind() const { return kind_; }
  const std::vector<double>& omegas() const { return omegas_; }
  const std::vector<double>& values() const { return us_; }

  // Constant profile over [lo, hi], handy for tests.
  static ModeProfile constant(double lo, double hi, double value);

 private:
  std::vector<double> omegas_;
  std::vector<double> us_;
  std::vector<double> second_derivs_;  // cubic only
  Kind kind_ = Kind::linear;
};

// Engineered Gaussian coupling g(omega_delta), isotropic across channels.
struct GaussianCoupling {
  double beta = 0.0;    // width
  double gamma = 0.0;   // per-channel emission rate
  double center = 0.0;  // omega_e - omega_b

  void validate() const;
};

// Coupling derived from the emitter parameters and a mode profile.
struct PhysicalCoupling {
  PhysicalParams params;
  ModeProfile mode;
  double pole_floor = 0.0;  // minimum allowed one-photon detuning magnitude
};

struct CouplingSpec {
  std::variant<GaussianCoupling, PhysicalCoupling> variant;

  bool is_gaussian() const { return std::holds_alternative<GaussianCoupling>(variant); }
  const GaussianCoupling& gaussian() const { return std::get<GaussianCoupling>(variant); }
  const PhysicalCoupling& physical() const { return std::get<PhysicalCoupling>(variant); }
};

// Adiabatic-regime diagnostics: operator-norm bounds for the three
// fast-oscillating contributions plus the time-scale inequalities.
struct RegimeReport {
  double B1 = 0.0;  // one-photon transition bound
  double B2 = 0.0;  // two-photon cross-term bound
  double B3 = 0.0;  // fine-structure-splitting bound
  // (i) interaction time long vs inverse detuning; (ii) detuning outside the
  // emission bandwidth; (iii) detuning large vs the coupling norms.
  bool cond_time = false;
  bool cond_bandwidth = false;
  bool cond_coupling = false;
  double margin_time = 0.0;
  double margin_bandwidth = 0.0;
  double margin_coupling = 0.0;
  bool all_pass() const { return cond_time && cond_bandwidth && cond_coupling; }
};

struct Window {
  double min = 0.0;
  double max = 0.0;
  int n = 0;
};

// Single-branch two-photon coupling built from one-photon couplings:
// g_biexc(omega') * g_exc(omega) * [1/(omega - omega_X) - 1/(omega' - (omega_2X - omega_X))].
std::complex<double> branch_coupling(
    const PhysicalParams& params,
    const std::function<std::complex<double>(double)>& one_photon_g_exc,
    const std::function<std::complex<double>(double)>& one_photon_g_biexc,
    double omega_prime, double omega, double pole_floor = 0.0);

// Full symmetrized two-photon coupling D * u(omega') * u(omega) * bracket,
// where the four-term bracket vanishes identically at delta_X = 0.
double combined_coupling(const PhysicalParams& params, const ModeProfile& mode,
                         double omega_prime, double omega, double pole_floor = 0.0);

// Gaussian coupling amplitude sqrt(gamma/pi) * (2*pi*beta^2)^(-1/4) * exp(...).
double gaussian_coupling(const GaussianCoupling& spec, double omega_delta);

// Coupling value for a spec in collective coordinates (shared by all four
// channels for the isotropic Gaussian and the symmetric physical variants).
double coupling_value(const CouplingSpec& spec, double omega_sigma, double omega_delta);

// J(omega_sigma) = pi * sum over the four channels of the squared-coupling
// integral over omega_delta.
double spectral_function(const CouplingSpec& spec, double omega_sigma,
                         const Window& delta_window);

// Cauchy principal value of int J(w)/(omega_2X - w) dw over sigma_window,
// with symmetric-pair quadrature around the pole.
double principal_value_shift(const std::function<double(double)>& J, double omega_2X,
                             const Window& sigma_window);

double lamb_shift(const CouplingSpec& spec, double omega_2X, const Window& sigma_window,
                  const Window& delta_window);

RegimeReport regime_check(const PhysicalParams& params, double T, double coupling_norm_exc,
                          double coupling_norm_biexc, double bandwidth_e,
                          double bandwidth_b, double detuning_e, double margin = 10.0);

}  // namespace frengate

#endif

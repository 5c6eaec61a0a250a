#include "frengate/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace frengate {

namespace {
constexpr double kPi = std::numbers::pi;

void check_detuning(double value, double floor, const char* what) {
  if (std::abs(value) <= floor)
    throw std::domain_error(std::string(what) +
                            ": one-photon detuning within the pole floor");
}
}  // namespace

ModeProfile::ModeProfile(std::vector<double> omegas, std::vector<double> us, Kind kind)
    : omegas_(std::move(omegas)), us_(std::move(us)), kind_(kind) {
  if (omegas_.size() != us_.size() || omegas_.size() < 2)
    throw std::invalid_argument("ModeProfile: need >= 2 matching samples");
  for (std::size_t i = 0; i + 1 < omegas_.size(); ++i)
    if (!(omegas_[i] < omegas_[i + 1]))
      throw std::invalid_argument("ModeProfile: abscissae must be strictly increasing");
  for (double u : us_)
    if (!(u >= 0.0) || !std::isfinite(u))
      throw std::invalid_argument("ModeProfile: mode magnitude must be nonnegative");
  if (kind_ == Kind::cubic) {
    // Natural cubic spline second derivatives via the standard tridiagonal solve.
    const std::size_t n = omegas_.size();
    second_derivs_.assign(n, 0.0);
    std::vector<double> c(n, 0.0);  // scratch for the forward sweep
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double sig = (omegas_[i] - omegas_[i - 1]) / (omegas_[i + 1] - omegas_[i - 1]);
      const double p = sig * second_derivs_[i - 1] + 2.0;
      second_derivs_[i] = (sig - 1.0) / p;
      const double d = (us_[i + 1] - us_[i]) / (omegas_[i + 1] - omegas_[i]) -
                       (us_[i] - us_[i - 1]) / (omegas_[i] - omegas_[i - 1]);
      c[i] = (6.0 * d / (omegas_[i + 1] - omegas_[i - 1]) - sig * c[i - 1]) / p;
    }
    second_derivs_[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 0;)
      second_derivs_[k] = second_derivs_[k] * second_derivs_[k + 1] + c[k];
  }
}

double ModeProfile::operator()(double omega) const {
  if (omegas_.empty()) throw std::logic_error("ModeProfile: empty profile");
  if (omega < omegas_.front() || omega > omegas_.back())
    throw std::domain_error("ModeProfile: evaluation outside the sampled range");
  const auto it = std::upper_bound(omegas_.begin(), omegas_.end(), omega);
  const std::size_t hi = std::min<std::size_t>(
      omegas_.size() - 1, static_cast<std::size_t>(it - omegas_.begin()));
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  if (hi == lo) return us_[lo];
  const double h = omegas_[hi] - omegas_[lo];
  const double a = (omegas_[hi] - omega) / h;
  const double b = (omega - omegas_[lo]) / h;
  if (kind_ == Kind::linear) return a * us_[lo] + b * us_[hi];
  return a * us_[lo] + b * us_[hi] +
         ((a * a * a - a) * second_derivs_[lo] + (b * b * b - b) * second_derivs_[hi]) *
             (h * h) / 6.0;
}

ModeProfile ModeProfile::constant(double lo, double hi, double value) {
  return ModeProfile({lo, hi}, {value, value}, Kind::linear);
}

void GaussianCoupling::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("GaussianCoupling: beta must be positive");
  if (!(gamma > 0.0))
    throw std::invalid_argument("GaussianCoupling: gamma must be positive");
}

std::complex<double> branch_coupling(
    const PhysicalParams& params,
    const std::function<std::complex<double>(double)>& one_photon_g_exc,
    const std::function<std::complex<double>(double)>& one_photon_g_biexc,
    double omega_prime, double omega, double pole_floor) {
  const double det_e = omega - params.omega_X;
  const double det_b = omega_prime - (params.omega_2X - params.omega_X);
  check_detuning(det_e, pole_floor, "branch_coupling");
  check_detuning(det_b, pole_floor, "branch_coupling");
  return one_photon_g_biexc(omega_prime) * one_photon_g_exc(omega) *
         (1.0 / det_e - 1.0 / det_b);
}

namespace {
// The four-term bracket of the combined coupling, symmetric in omega <-> omega'.
double coupling_bracket(const PhysicalParams& params, double omega_prime, double omega,
                        double pole_floor, const char* what) {
  const double biexc_res = params.omega_X - params.delta_X;  // = omega_2X - omega_X
  const double de = omega - params.omega_X;
  const double dpb = omega_prime - biexc_res;
  const double dpe = omega_prime - params.omega_X;
  const double db = omega - biexc_res;
  check_detuning(de, pole_floor, what);
  check_detuning(dpb, pole_floor, what);
  check_detuning(dpe, pole_floor, what);
  check_detuning(db, pole_floor, what);
  return 1.0 / de - 1.0 / dpb + 1.0 / dpe - 1.0 / db;
}
}  // namespace

double combined_coupling(const PhysicalParams& params, const ModeProfile& mode,
                         double omega_prime, double omega, double pole_floor) {
  const double bracket =
      coupling_bracket(params, omega_prime, omega, pole_floor, "combined_coupling");
  return params.D * mode(omega_prime) * mode(omega) * bracket;
}

double gaussian_coupling(const GaussianCoupling& spec, double omega_delta) {
  spec.validate();
  const double x = omega_delta - spec.center;
  return std::sqrt(spec.gamma / kPi) *
         std::pow(2.0 * kPi * spec.beta * spec.beta, -0.25) *
         std::exp(-x * x / (4.0 * spec.beta * spec.beta));
}

double coupling_value(const CouplingSpec& spec, double omega_sigma, double omega_delta) {
  if (spec.is_gaussian()) return gaussian_coupling(spec.gaussian(), omega_delta);
  const PhysicalCoupling& p = spec.physical();
  const auto [omega, omega_prime] = from_collective(omega_sigma, omega_delta);
  return combined_coupling(p.params, p.mode, omega_prime, omega, p.pole_floor);
}

double spectral_function(const CouplingSpec& spec, double omega_sigma,
                         const Window& delta_window) {
  if (delta_window.n < 2 || !(delta_window.max > delta_window.min))
    throw std::invalid_argument("spectral_function: degenerate integration window");
  const double h = (delta_window.max - delta_window.min) / (delta_window.n - 1);
  double sum = 0.0;
  double edge = 0.0;
  for (int k = 0; k < delta_window.n; ++k) {
    const double wd = delta_window.min + k * h;
    const double g = coupling_value(spec, omega_sigma, wd);
    const double w = (k == 0 || k == delta_window.n - 1) ? 0.5 : 1.0;
    sum += w * g * g * h;
    if (k == 0 || k == delta_window.n - 1) edge = std::max(edge, g * g);
  }
  // Four channels carry the same coupling magnitude.
  const double J = kPi * 4.0 * sum;
  if (sum > 0.0 && edge * (delta_window.max - delta_window.min) > 1e-6 * sum)
    throw std::domain_error("spectral_function: window too small (tail mass > 1e-6)");
  return J;
}

double principal_value_shift(const std::function<double(double)>& J, double omega_2X,
                             const Window& sigma_window) {
  if (sigma_window.n < 4 || !(sigma_window.max > sigma_window.min))
    throw std::invalid_argument("principal_value_shift: degenerate window");
  const double h = (sigma_window.max - sigma_window.min) / (sigma_window.n - 1);
  const double L1 = omega_2X - sigma_window.min;  // reach below the pole
  const double L2 = sigma_window.max - omega_2X;  // reach above the pole

  auto plain = [&](double lo, double hi) {
    // Trapezoid of J(w)/(omega_2X - w) on [lo, hi], pole-free by construction.
    if (!(hi > lo)) return 0.0;
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / h)) + 1);
    const double step = (hi - lo) / (n - 1);
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double w = lo + k * step;
      const double f = J(w) / (omega_2X - w);
      s += ((k == 0 || k == n - 1) ? 0.5 : 1.0) * f * step;
    }
    return s;
  };

  if (L1 <= 0.0 || L2 <= 0.0) return plain(sigma_window.min, sigma_window.max);

  // Symmetric part around the pole: int_0^Ls [J(p - x) - J(p + x)] / x dx,
  // excising one cell on each side and extending constantly over it.
  const double Ls = std::min(L1, L2);
  const int m = std::max(3, static_cast<int>(std::ceil(Ls / h)));
  const double step = Ls / m;
  double sym = 0.0;
  double first = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double x = k * step;
    const double f = (J(omega_2X - x) - J(omega_2X + x)) / x;
    if (k == 1) first = f;
    sym += ((k == 1 || k == m) ? 0.5 : 1.0) * f * step;
  }
  sym += first * step;  // excised cell [0, step], integrand extended by its edge value
  if (!std::isfinite(sym))
    throw std::domain_error("principal_value_shift: non-convergent integrand");

  // Leftover one-sided tail beyond the symmetric reach.
  double tail = 0.0;
  if (L1 > Ls) tail = plain(sigma_window.min, omega_2X - Ls);
  if (L2 > Ls) tail = plain(omega_2X + Ls, sigma_window.max);
  return sym + tail;
}

double lamb_shift(const CouplingSpec& spec, double omega_2X, const Window& sigma_window,
                  const Window& delta_window) {
  return principal_value_shift(
      [&](double w) { return spectral_function(spec, w, delta_window); }, omega_2X,
      sigma_window);
}

RegimeReport regime_check(const PhysicalParams& params, double T, double coupling_norm_exc,
                          double coupling_norm_biexc, double bandwidth_e,
                          double bandwidth_b, double detuning_e, double margin) {
  if (!(T > 0.0) || !(detuning_e > 0.0) || !(coupling_norm_exc > 0.0) ||
      !(coupling_norm_biexc > 0.0) || !(bandwidth_e > 0.0) || !(bandwidth_b > 0.0))
    throw std::invalid_argument("regime_check: all inputs must be positive");
  RegimeReport r;
  const double sum_norm = coupling_norm_exc + coupling_norm_biexc;
  const double sqrt2 = std::sqrt(2.0);
  r.B1 = 2.0 * sqrt2 * sum_norm / (T * detuning_e);
  r.B2 = 2.0 * sqrt2 * coupling_norm_exc * coupling_norm_biexc /
         (T * detuning_e * detuning_e);
  r.B3 = sqrt2 * (2.0 * params.S * sum_norm / (detuning_e * detuning_e * T) +
                  params.S * sum_norm / detuning_e);
  r.margin_time = T * detuning_e;
  r.margin_bandwidth = detuning_e / std::max(bandwidth_e, bandwidth_b);
  r.margin_coupling = detuning_e / std::max(coupling_norm_exc, coupling_norm_biexc);
  r.cond_time = r.margin_time >= margin;
  r.cond_bandwidth = r.margin_bandwidth >= margin;
  r.cond_coupling = r.margin_coupling >= margin;
  return r;
}

}  // namespace frengate

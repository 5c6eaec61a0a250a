#ifndef FRENGATE_SCATTERING_HPP
#define FRENGATE_SCATTERING_HPP

#include <array>

#include "frengate/coupling.hpp"
#include "frengate/field.hpp"

namespace frengate {

// Isotropic Gaussian two-photon input of width alpha centered at the photon
// pair (omega_e, omega_b); occupies the (+,+) channel.
struct GaussianInput {
  double alpha = 0.0;
  double omega_e = 0.0;
  double omega_b = 0.0;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("GaussianInput: alpha must be positive");
  }
};

// High-finesse cavity comb approximated as a sum of Gaussian teeth.
struct CombFilter {
  double fsr = 0.0;         // tooth spacing
  double peak_width = 0.0;  // tooth standard deviation
  int n_range = 0;          // truncation half-width; 0 = auto from the grid
  bool shift_to_centers = false;
  double center_omega = 0.0;        // per-axis comb origin when shifted
  double center_omega_prime = 0.0;

  void validate() const {
    if (!(fsr > 0.0) || !(peak_width > 0.0))
      throw std::invalid_argument("CombFilter: fsr and peak_width must be positive");
  }
  bool high_finesse() const { return fsr >= 5.0 * peak_width; }
  int resolve_n_range(double window_half_width) const {
    if (n_range > 0) return n_range;
    return static_cast<int>(std::ceil(window_half_width / fsr)) + 3;
  }
};

// Raw (unnormalized) scattered amplitudes for all four channels.
struct ScatterResult {
  std::array<BiphotonField, 4> channels;  // ordered as ChannelLabel::all()
  PhysicalParams params;
  double tau = 0.0;

  const BiphotonField& channel(const ChannelLabel& label) const {
    for (const auto& f : channels)
      if (f.channel == label) return f;
    throw std::logic_error("ScatterResult: unknown channel");
  }
};

BiphotonField gaussian_input(const GaussianInput& spec, const FrequencyGrid& grid);

// Comb transmission f(omega) = sum_n exp(-(omega - c - n*fsr)^2 / (2 dw^2)).
double comb_value(const CombFilter& filter, double omega, double center, int n_range);

BiphotonField apply_comb_filter(const BiphotonField& field, const CombFilter& filter);

// Scattering map evaluated on the grid; the omega_delta' integral is shared
// across an anti-diagonal (constant omega_sigma), keeping the cost O(N^2).
ScatterResult scatter(const BiphotonField& input, const CouplingSpec& coupling,
                      const PhysicalParams& params);

// Closed-form outputs for the Gaussian input under isotropic rates Gamma/4.
ScatterResult analytic_gaussian_outputs(const GaussianInput& spec, double beta,
                                        const PhysicalParams& params,
                                        const FrequencyGrid& grid);

// Closed-form non-input-channel output for the comb-filtered Gaussian input.
BiphotonField analytic_qudit_output(const GaussianInput& spec, const CombFilter& filter,
                                    double beta, const PhysicalParams& params,
                                    const FrequencyGrid& grid);

// Amplitude of the limit joint spectral intensity (Gamma >> alpha), useful as
// an analysis target: |C|^2 = exp(-(wD-cD)^2/2b^2) exp(-(wS-cS)^2/2a^2) / (4 pi (a^2+b^2)).
BiphotonField limit_jsi_amplitude(const GaussianInput& spec, double beta,
                                  const FrequencyGrid& grid);

}  // namespace frengate

#endif

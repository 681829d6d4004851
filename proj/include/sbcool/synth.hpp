#pragma once

// Synthetic experiment generation: noisy datasets drawn around the model
// curves, with the noise scale an explicit knob.
//
// Noise kinds:
//   none     -> y = model, sigma_y = 1 (uniform weights)
//   gaussian -> dynamics:        sigma = scale * sqrt(1 + <n>)
//               rate scenarios:  sigma = scale * max(|model|, 5% of peak)
//   poisson  -> rate scenarios only; scale is the effective integration
//               time in seconds: counts ~ Poisson(model * scale),
//               y = counts / scale, sigma = sqrt(max(expected, 10)) / scale
//               (the Gaussian-sigma floor below 10 expected counts)

#include <cstdint>
#include <string>
#include <vector>

#include "sbcool/core_model.hpp"
#include "sbcool/dataset.hpp"
#include "sbcool/params_io.hpp"

namespace sbcool {

struct NoiseSpec {
    enum class Kind { none, gaussian, poisson };
    Kind kind = Kind::none;
    double scale = 0.0;
};

NoiseSpec parse_noise_spec(const std::string& text);  // "none" | "gaussian:0.1" | "poisson:5e-5"
std::string to_string(const NoiseSpec& n);

std::vector<double> linspace(double lo, double hi, int n);

Dataset synth_dynamics_branch(const PhysicalParams& p, Branch branch, double n0,
                              const std::vector<double>& times, const NoiseSpec& noise,
                              std::uint64_t seed);

Dataset synth_saturation(double eta, double gamma_sat,
                         const std::vector<double>& gamma_sc_grid, const NoiseSpec& noise,
                         std::uint64_t seed);

Dataset synth_spectrum(const SpectrumConfig& cfg, int max_order,
                       const std::vector<double>& detuning_grid, const NoiseSpec& noise,
                       std::uint64_t seed);

}  // namespace sbcool

#pragma once

// Cavity emission spectrum versus laser-cavity detuning. A scattering event
// absorbs one traveling-wave photon (momentum along x/y) and emits one
// photon into the standing-wave mode cos(k z + phi), so the axial emission
// factor splits by parity: even delta_n_z terms carry cos^2(phi), odd terms
// carry sin^2(phi). Line weights come from the expansion of both factors to
// second order in the Lamb-Dicke parameters, thermally averaged over
// Bose-Einstein occupations.

#include <array>
#include <vector>

#include "sbcool/dataset.hpp"

namespace sbcool {

struct SpectrumGeometry {
    std::array<double, 3> trap_frequency{};        // rad/s: x, y, z
    double standing_wave_phase = 0.0;              // 0 = antinode, pi/2 = node
    std::array<double, 2> transverse_projection{}; // laser direction cosines on x, y
    std::array<double, 3> lamb_dicke_sq{};         // per mode
    std::array<double, 3> thermal_occupation{};    // nbar per mode

    void validate() const;
};

struct SpectrumLine {
    double offset = 0.0;           // rad/s, sum of dn_i * omega_i
    double weight = 0.0;           // relative strength, >= 0
    std::array<int, 3> order{};    // (dn_x, dn_y, dn_z)
};

struct SpectrumProfile {
    std::vector<double> detuning;  // rad/s grid
    std::vector<double> rate;      // photons/s
    double linewidth_used = 0.0;   // rad/s FWHM
};

// All lines with |dn_x| + |dn_y| + |dn_z| <= max_order (1 or 2). Weights of
// near-degenerate lines are kept separate; summing is the profile's job.
std::vector<SpectrumLine> line_weights(const SpectrumGeometry& g, int max_order);

// Sum of peak-normalized Lorentzians of common FWHM total_linewidth,
// amplitude weight * amplitude_scale, evaluated on the given grid.
SpectrumProfile spectrum_profile(const std::vector<SpectrumLine>& lines,
                                 double total_linewidth, double amplitude_scale,
                                 std::vector<double> grid);

enum class StandingWavePosition { antinode, node, intermediate };

std::string to_string(StandingWavePosition p);

struct PositionClassification {
    StandingWavePosition position = StandingWavePosition::intermediate;
    double confidence = 0.0;         // 0..1, separation from the nearest threshold
    double sideband_fraction = 0.0;  // s = A_axial1 / (A_carrier + A_axial1)
    double carrier_amplitude = 0.0;
    double axial_sideband_amplitude = 0.0;  // sum over +/- first axial lines
};

// Ratio test on fitted amplitudes: s = A_s1/(A_c + A_s1) with A_s1 the summed
// first-order axial sideband amplitudes. s <= 0.2 -> antinode, s >= 0.8 ->
// node, otherwise intermediate. The dataset must provide omega_x_hz,
// omega_y_hz, omega_z_hz (non-angular) and span the first-order axial lines;
// linewidth_hz may seed the width. Thresholds tolerate the residual carrier
// leakage seen in real node data.
PositionClassification classify_position(const Dataset& spectrum_data);

}  // namespace sbcool

#pragma once

// Parameter file loading. The on-disk format is a flat JSON document whose
// *_hz keys are ordinary (non-angular) frequencies; the x2pi conversion
// happens here, exactly once. // and /* */ comments are permitted.
//
// Required keys: kappa_hz, omega_hz, gamma_sc, eta, c_factor, n_dot_ext,
// delta_lc_hz, delta_ci_hz. eta_ld_sq is optional when a species block
// {mass_amu, lambda_nm} is present; it is then derived from the trap
// frequency. Optional blocks: cavity {finesse, waist_um, length_cm} and
// spectrum {omega_x_hz, omega_y_hz, omega_z_hz, phi, projection_x,
// projection_y, nbar_x, nbar_y, nbar_z, total_linewidth_hz,
// amplitude_scale}.

#include <filesystem>
#include <optional>

#include "sbcool/core_model.hpp"
#include "sbcool/spectrum.hpp"

namespace sbcool {

struct SpectrumConfig {
    SpectrumGeometry geometry;
    double total_linewidth = 0.0;   // rad/s
    double amplitude_scale = 1.0;   // photons/s at unit weight
};

struct ParameterFile {
    PhysicalParams params;
    std::optional<IonSpecies> species;
    std::optional<CavityParams> cavity;
    std::optional<SpectrumConfig> spectrum;
};

ParameterFile load_parameter_file(const std::filesystem::path& file);

}  // namespace sbcool

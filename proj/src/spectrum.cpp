#include "sbcool/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sbcool/constants.hpp"
#include "sbcool/errors.hpp"
#include "sbcool/fitkit.hpp"

namespace sbcool {

void SpectrumGeometry::validate() const {
    for (double w : trap_frequency)
        if (!(w > 0.0)) throw std::domain_error("SpectrumGeometry: trap frequencies must be > 0");
    for (double e : lamb_dicke_sq)
        if (!(e > 0.0)) throw std::domain_error("SpectrumGeometry: lamb_dicke_sq must be > 0");
    for (double n : thermal_occupation)
        if (n < 0.0) throw std::domain_error("SpectrumGeometry: occupations must be >= 0");
    for (double p : transverse_projection)
        if (p < 0.0 || p > 1.0)
            throw std::domain_error("SpectrumGeometry: projections must be in [0, 1]");
}

namespace {

// Thermally averaged squared matrix element of the per-mode expansion term
// producing a change dn, without the geometric prefactor:
//   dn = 0: 1                      (leading order)
//   dn = +-1: nbar + 1/2 +- 1/2    (<|<n+-1|a or a^dag|n>|^2>)
//   dn = +-2: (nbar + 1/2 +- 1/2)^2 / 2
// The dn = +-2 value uses the Bose-Einstein moments <n(n-1)> = 2 nbar^2 and
// <(n+1)(n+2)> = 2 (nbar+1)^2, divided by the 1/2! of the expansion and
// squared 1/2 operator factor: 2 nbar^2 / 4 = nbar^2 / 2.
double thermal_factor(int dn, double nbar) {
    switch (dn) {
        case 0: return 1.0;
        case +1: return nbar + 1.0;
        case -1: return nbar;
        case +2: return (nbar + 1.0) * (nbar + 1.0) / 2.0;
        case -2: return nbar * nbar / 2.0;
        default: return 0.0;
    }
}

// coupling strength^|dn| for one mode: (projection^2 * eta_ld_sq)^|dn|
double coupling_power(double proj_sq_eta_sq, int dn) {
    double c = 1.0;
    for (int i = 0; i < std::abs(dn); ++i) c *= proj_sq_eta_sq;
    return c;
}

}  // namespace

std::vector<SpectrumLine> line_weights(const SpectrumGeometry& g, int max_order) {
    g.validate();
    if (max_order < 1 || max_order > 2)
        throw UsageError("line_weights: max_order must be 1 or 2");

    // half-angle form gives exact parity zeros at phi = 0 and pi/2
    const double cos_two_phi = std::cos(2.0 * g.standing_wave_phase);
    const double cos_sq = 0.5 * (1.0 + cos_two_phi);
    const double sin_sq = 0.5 * (1.0 - cos_two_phi);
    const double px_sq = g.transverse_projection[0] * g.transverse_projection[0];
    const double py_sq = g.transverse_projection[1] * g.transverse_projection[1];

    std::vector<SpectrumLine> lines;
    for (int dx = -max_order; dx <= max_order; ++dx)
        for (int dy = -max_order; dy <= max_order; ++dy)
            for (int dz = -max_order; dz <= max_order; ++dz) {
                const int order = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (order > max_order) continue;

                // absorption: transverse modes, weighted by the beam projection
                double w = coupling_power(px_sq * g.lamb_dicke_sq[0], dx) *
                           thermal_factor(dx, g.thermal_occupation[0]);
                w *= coupling_power(py_sq * g.lamb_dicke_sq[1], dy) *
                     thermal_factor(dy, g.thermal_occupation[1]);
                // emission: standing-wave parity factor on the axial mode
                w *= coupling_power(g.lamb_dicke_sq[2], dz) *
                     thermal_factor(dz, g.thermal_occupation[2]);
                w *= (dz % 2 == 0) ? cos_sq : sin_sq;

                SpectrumLine line;
                line.order = {dx, dy, dz};
                line.offset = dx * g.trap_frequency[0] + dy * g.trap_frequency[1] +
                              dz * g.trap_frequency[2];
                line.weight = w;
                lines.push_back(line);
            }

    // deterministic order: by offset, then lexicographic order triple
    std::sort(lines.begin(), lines.end(), [](const SpectrumLine& a, const SpectrumLine& b) {
        if (a.offset != b.offset) return a.offset < b.offset;
        return a.order < b.order;
    });
    return lines;
}

SpectrumProfile spectrum_profile(const std::vector<SpectrumLine>& lines,
                                 double total_linewidth, double amplitude_scale,
                                 std::vector<double> grid) {
    if (!(total_linewidth > 0.0))
        throw std::domain_error("spectrum_profile: total_linewidth must be > 0");

    SpectrumProfile prof;
    prof.linewidth_used = total_linewidth;
    prof.rate.reserve(grid.size());
    for (double delta : grid) {
        double rate = 0.0;
        for (const SpectrumLine& line : lines) {
            const double u = 2.0 * (delta - line.offset) / total_linewidth;
            rate += line.weight * amplitude_scale / (1.0 + u * u);
        }
        prof.rate.push_back(rate);
    }
    prof.detuning = std::move(grid);
    return prof;
}

std::string to_string(StandingWavePosition p) {
    switch (p) {
        case StandingWavePosition::antinode: return "antinode";
        case StandingWavePosition::node: return "node";
        case StandingWavePosition::intermediate: return "intermediate";
    }
    throw UsageError("invalid position tag");
}

PositionClassification classify_position(const Dataset& spectrum_data) {
    spectrum_data.validate();
    const double wx = constants::angular(spectrum_data.meta_number("omega_x_hz"));
    const double wy = constants::angular(spectrum_data.meta_number("omega_y_hz"));
    const double wz = constants::angular(spectrum_data.meta_number("omega_z_hz"));

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (const auto& p : spectrum_data.points) {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
    }
    if (x_min > -wz || x_max < wz)
        throw CoverageError("classify_position: data do not span the first-order axial "
                            "sidebands at +-omega_z");

    // carrier, axial first order, and whichever transverse lines fit the span
    std::vector<double> centers = {0.0, -wz, +wz};
    std::vector<std::size_t> axial_idx = {1, 2};
    for (double c : {-wx, +wx, -wy, +wy})
        if (c >= x_min && c <= x_max) centers.push_back(c);

    SpectrumFitOptions opts;
    if (spectrum_data.has_meta("linewidth_hz"))
        opts.width_guess = constants::angular(spectrum_data.meta_number("linewidth_hz"));
    const FitResult fit = fit_spectrum(spectrum_data, centers, opts);

    const double a_carrier = std::max(0.0, fit.value("amp_0"));
    double a_axial = 0.0;
    for (std::size_t k : axial_idx)
        a_axial += std::max(0.0, fit.value("amp_" + std::to_string(k)));

    PositionClassification out;
    out.carrier_amplitude = a_carrier;
    out.axial_sideband_amplitude = a_axial;
    const double total = a_carrier + a_axial;
    if (total <= 0.0)
        throw CoverageError("classify_position: no significant carrier or axial sideband "
                            "amplitude found");
    const double s = a_axial / total;
    out.sideband_fraction = s;

    // s = 0 at a perfect antinode, 1 at a perfect node; thresholds leave room
    // for thermal leakage of the suppressed parity
    constexpr double lo = 0.2, hi = 0.8;
    if (s <= lo) {
        out.position = StandingWavePosition::antinode;
        out.confidence = (lo - s) / lo;
    } else if (s >= hi) {
        out.position = StandingWavePosition::node;
        out.confidence = (s - hi) / (1.0 - hi);
    } else {
        out.position = StandingWavePosition::intermediate;
        out.confidence = std::min(s - lo, hi - s) / (0.5 * (hi - lo));
    }
    out.confidence = std::clamp(out.confidence, 0.0, 1.0);
    return out;
}

}  // namespace sbcool

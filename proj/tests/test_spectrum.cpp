#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "sbcool/constants.hpp"
#include "sbcool/errors.hpp"
#include "sbcool/rng.hpp"
#include "sbcool/spectrum.hpp"
#include "sbcool/synth.hpp"

using namespace sbcool;
using doctest::Approx;

namespace {

SpectrumGeometry geometry(double phi) {
    SpectrumGeometry g;
    g.trap_frequency = {constants::angular(1.45e6), constants::angular(1.20e6),
                        constants::angular(0.87e6)};
    g.standing_wave_phase = phi;
    g.transverse_projection = {0.7071067811865476, 0.7071067811865476};
    g.lamb_dicke_sq = {0.0088, 0.0106, 0.0146};
    g.thermal_occupation = {8.0, 9.0, 12.0};
    return g;
}

double weight_of(const std::vector<SpectrumLine>& lines, int dx, int dy, int dz) {
    for (const auto& l : lines)
        if (l.order == std::array<int, 3>{dx, dy, dz}) return l.weight;
    FAIL("line not found");
    return 0.0;
}

}  // namespace

TEST_CASE("line offsets sit at the trap frequencies") {
    const auto lines = line_weights(geometry(0.3), 2);
    // first-order lines at +-0.87, +-1.20, +-1.45 MHz
    std::map<std::array<int, 3>, double> offsets;
    for (const auto& l : lines) offsets[l.order] = l.offset;
    CHECK(offsets[{0, 0, 1}] == Approx(constants::angular(0.87e6)));
    CHECK(offsets[{0, 0, -1}] == Approx(-constants::angular(0.87e6)));
    CHECK(offsets[{0, 1, 0}] == Approx(constants::angular(1.20e6)));
    CHECK(offsets[{1, 0, 0}] == Approx(constants::angular(1.45e6)));
    CHECK(offsets[{0, 0, 0}] == 0.0);
    CHECK(offsets[{0, 0, 2}] == Approx(constants::angular(1.74e6)));
    CHECK(offsets[{1, -1, 0}] == Approx(constants::angular(0.25e6)));

    // max_order = 1 has exactly the carrier and six first-order lines
    CHECK(line_weights(geometry(0.3), 1).size() == 7);
    CHECK_THROWS_AS(line_weights(geometry(0.3), 3), UsageError);
    CHECK_THROWS_AS(line_weights(geometry(0.3), 0), UsageError);
}

TEST_CASE("parity selection rules") {
    SUBCASE("antinode: odd axial weights vanish exactly") {
        const auto lines = line_weights(geometry(0.0), 2);
        for (const auto& l : lines) {
            if (std::abs(l.order[2]) % 2 == 1) CHECK(l.weight == 0.0);
        }
        CHECK(weight_of(lines, 0, 0, 0) > 0.0);
        CHECK(weight_of(lines, 0, 0, 2) > 0.0);
    }
    SUBCASE("node: carrier and even axial weights vanish exactly") {
        const auto lines = line_weights(geometry(constants::pi / 2.0), 2);
        for (const auto& l : lines) {
            if (l.order[2] % 2 == 0) CHECK(l.weight == 0.0);
        }
        CHECK(weight_of(lines, 0, 0, 1) > 0.0);
        CHECK(weight_of(lines, 0, 0, -1) > 0.0);
    }
    SUBCASE("weight algebra: cos^2/sin^2 factors over a phase grid") {
        const auto ref = line_weights(geometry(0.0), 2);
        const auto ref_node = line_weights(geometry(constants::pi / 2.0), 2);
        for (double phi : {0.1, 0.35, 0.7854, 1.1, 1.4}) {
            const double c2 = std::cos(phi) * std::cos(phi);
            const double s2 = std::sin(phi) * std::sin(phi);
            const auto lines = line_weights(geometry(phi), 2);
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (lines[i].order[2] % 2 == 0)
                    CHECK(lines[i].weight == Approx(ref[i].weight * c2).epsilon(1e-13));
                else
                    CHECK(lines[i].weight == Approx(ref_node[i].weight * s2).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("thermal weights") {
    SUBCASE("ground state has no red sidebands") {
        SpectrumGeometry g = geometry(0.4);
        g.thermal_occupation = {0.0, 0.0, 0.0};
        const auto lines = line_weights(g, 2);
        for (const auto& l : lines) {
            const bool lowers = l.order[0] < 0 || l.order[1] < 0 || l.order[2] < 0;
            if (lowers) CHECK(l.weight == 0.0);
        }
        CHECK(weight_of(lines, 0, 0, 1) > 0.0);  // blue sideband survives at T = 0
    }
    SUBCASE("red/blue ratio is nbar/(nbar+1) per mode") {
        const SpectrumGeometry g = geometry(0.6);
        const auto lines = line_weights(g, 1);
        for (int mode = 0; mode < 3; ++mode) {
            int up[3] = {0, 0, 0}, dn[3] = {0, 0, 0};
            up[mode] = 1;
            dn[mode] = -1;
            const double r = weight_of(lines, dn[0], dn[1], dn[2]) /
                             weight_of(lines, up[0], up[1], up[2]);
            const double nbar = g.thermal_occupation[mode];
            CHECK(r == Approx(nbar / (nbar + 1.0)).epsilon(1e-14));
        }
    }
    SUBCASE("weights are continuous in phi and nbar") {
        const auto a = line_weights(geometry(0.499999), 2);
        const auto b = line_weights(geometry(0.500001), 2);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].weight == Approx(b[i].weight).epsilon(1e-4));
        SpectrumGeometry g1 = geometry(0.3), g2 = geometry(0.3);
        g2.thermal_occupation[2] += 1e-7;
        const auto c = line_weights(g1, 2);
        const auto d = line_weights(g2, 2);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i].weight > 0.0) CHECK(d[i].weight == Approx(c[i].weight).epsilon(1e-5));
    }
}

TEST_CASE("spectrum profile") {
    std::vector<SpectrumLine> one(1);
    one[0].offset = constants::angular(0.5e6);
    one[0].weight = 0.7;
    const double width = constants::angular(150e3);

    SUBCASE("peak value and half width") {
        const SpectrumProfile at_peak = spectrum_profile(one, width, 2000.0, {one[0].offset});
        CHECK(at_peak.rate[0] == Approx(0.7 * 2000.0).epsilon(1e-14));
        const SpectrumProfile at_half =
            spectrum_profile(one, width, 2000.0, {one[0].offset + width / 2.0});
        CHECK(at_half.rate[0] == Approx(0.5 * 0.7 * 2000.0).epsilon(1e-13));
    }
    SUBCASE("profile is invariant under line reordering") {
        const auto lines = line_weights(geometry(0.5), 2);
        auto reversed = lines;
        std::reverse(reversed.begin(), reversed.end());
        const auto grid = linspace(-constants::angular(3.2e6), constants::angular(3.2e6), 301);
        const SpectrumProfile a = spectrum_profile(lines, width, 1.0, grid);
        const SpectrumProfile b = spectrum_profile(reversed, width, 1.0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(a.rate[i] == Approx(b.rate[i]).epsilon(1e-12));
        for (double v : a.rate) CHECK(v >= 0.0);
    }
    SUBCASE("width must be positive") {
        CHECK_THROWS_AS(spectrum_profile(one, 0.0, 1.0, {0.0}), std::domain_error);
    }
}

TEST_CASE("position classification from synthetic spectra") {
    auto make_config = [](double phi) {
        SpectrumConfig cfg;
        cfg.geometry = geometry(phi);
        cfg.total_linewidth = constants::angular(150e3);
        cfg.amplitude_scale = 8.6e4;
        return cfg;
    };
    const auto grid = linspace(-constants::angular(3.3e6), constants::angular(3.3e6), 441);
    NoiseSpec noise;
    noise.kind = NoiseSpec::Kind::gaussian;
    noise.scale = 0.04;

    SUBCASE("antinode") {
        const Dataset d = synth_spectrum(make_config(0.0), 2, grid, noise, 501);
        const PositionClassification c = classify_position(d);
        CHECK(c.position == StandingWavePosition::antinode);
        CHECK(c.sideband_fraction < 0.2);
    }
    SUBCASE("node") {
        const Dataset d = synth_spectrum(make_config(constants::pi / 2.0), 2, grid, noise, 502);
        const PositionClassification c = classify_position(d);
        CHECK(c.position == StandingWavePosition::node);
        CHECK(c.sideband_fraction > 0.8);
    }
    SUBCASE("halfway") {
        const Dataset d = synth_spectrum(make_config(constants::pi / 4.0), 2, grid, noise, 503);
        const PositionClassification c = classify_position(d);
        CHECK(c.position == StandingWavePosition::intermediate);
    }
    SUBCASE("insufficient span") {
        const auto short_grid =
            linspace(-constants::angular(0.5e6), constants::angular(0.5e6), 101);
        const Dataset d = synth_spectrum(make_config(0.0), 2, short_grid, noise, 504);
        CHECK_THROWS_AS(classify_position(d), CoverageError);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sbcool/constants.hpp"
#include "sbcool/csv.hpp"
#include "sbcool/dataset.hpp"
#include "sbcool/errors.hpp"
#include "sbcool/manifest.hpp"
#include "sbcool/params_io.hpp"
#include "sbcool/rng.hpp"
#include "sbcool/synth.hpp"

using namespace sbcool;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "sbcool_test_io";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out);
    out << text;
}

}  // namespace

TEST_CASE("dataset csv round trip is byte identical") {
    const fs::path dir = temp_dir();
    Dataset d;
    d.label = "roundtrip";
    std::mt19937_64 gen = rng::substream(71, 0);
    for (int i = 0; i < 50; ++i) {
        // awkward doubles on purpose: many digits, huge/small magnitudes
        const double x = (rng::uniform(gen) - 0.5) * std::pow(10.0, 12.0 * rng::uniform(gen) - 6.0);
        const double y = rng::normal(gen) * 1e7;
        const double s = rng::uniform_positive(gen);
        d.points.push_back({x, y, s});
    }
    d.metadata["branch"] = "red";
    d.metadata["seed"] = "71";

    const fs::path f1 = dir / "a.csv";
    const fs::path f2 = dir / "b.csv";
    write_dataset_csv(d, f1);
    const Dataset back = read_dataset_csv(f1);
    write_dataset_csv(back, f2);

    CHECK(slurp(f1) == slurp(f2));
    CHECK(back.points.size() == d.points.size());
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        CHECK(back.points[i].x == d.points[i].x);
        CHECK(back.points[i].y == d.points[i].y);
        CHECK(back.points[i].sigma_y == d.points[i].sigma_y);
    }
    CHECK(back.metadata.at("branch") == "red");
}

TEST_CASE("dataset csv accepts comments before the header and reports bad lines") {
    const fs::path dir = temp_dir();
    const fs::path f = dir / "commented.csv";
    spit(f, "# comment line\n# another\nx,y,sigma_y\n1,2,0.5\n");
    const Dataset d = read_dataset_csv(f);
    CHECK(d.points.size() == 1);
    CHECK(d.points[0].y == 2.0);

    spit(f, "x,y,sigma_y\n1,2\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(f), doctest::Contains(":2"), DataError);
    spit(f, "x,y,sigma_y\n1,abc,0.5\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(f), doctest::Contains("abc"), DataError);
    spit(f, "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(read_dataset_csv(f), DataError);
    spit(f, "x,y,sigma_y\n1,2,0\n");
    CHECK_THROWS_AS(read_dataset_csv(f), std::domain_error);
}

TEST_CASE("parameter file loading converts frequencies once") {
    const fs::path dir = temp_dir();
    const fs::path f = dir / "params.json";
    spit(f, R"({
        // comment in config
        "kappa_hz": 117e3,
        "omega_hz": 0.87e6,
        "gamma_sc": 2.87e6,
        "eta": 0.0148,
        "c_factor": 0.3333333333333333,
        "n_dot_ext": 17.0,
        "delta_lc_hz": -0.87e6,
        "delta_ci_hz": -10e6,
        "species": {"mass_amu": 88, "lambda_nm": 422, "gamma_atom_hz": 20.2e6}
    })");
    const ParameterFile pf = load_parameter_file(f);
    CHECK(pf.params.kappa == Approx(constants::two_pi * 117e3).epsilon(1e-14));
    CHECK(pf.params.omega == Approx(constants::two_pi * 0.87e6).epsilon(1e-14));
    CHECK(pf.params.gamma_sc == 2.87e6);  // rates are not angular
    CHECK(pf.params.delta_lc == Approx(-constants::two_pi * 0.87e6).epsilon(1e-14));
    // eta_ld_sq derived from the species block
    CHECK(pf.params.eta_ld_sq == Approx(0.014633563934313745).epsilon(1e-12));
    REQUIRE(pf.species.has_value());
    CHECK(pf.species->mass == Approx(88.0 * constants::atomic_mass_unit));

    SUBCASE("explicit eta_ld_sq wins over the species derivation") {
        spit(f, R"({"kappa_hz": 117e3, "omega_hz": 0.87e6, "gamma_sc": 2.87e6,
                    "eta": 0.0148, "eta_ld_sq": 0.0146, "c_factor": 0.333,
                    "n_dot_ext": 17.0, "delta_lc_hz": 0, "delta_ci_hz": 0})");
        CHECK(load_parameter_file(f).params.eta_ld_sq == 0.0146);
    }
    SUBCASE("missing keys are named") {
        spit(f, R"({"kappa_hz": 117e3})");
        CHECK_THROWS_WITH_AS(load_parameter_file(f), doctest::Contains("omega_hz"), DataError);
    }
    SUBCASE("no eta_ld_sq and no species is an error") {
        spit(f, R"({"kappa_hz": 117e3, "omega_hz": 0.87e6, "gamma_sc": 2.87e6,
                    "eta": 0.0148, "c_factor": 0.333, "n_dot_ext": 17.0,
                    "delta_lc_hz": 0, "delta_ci_hz": 0})");
        CHECK_THROWS_WITH_AS(load_parameter_file(f), doctest::Contains("eta_ld_sq"), DataError);
    }
    SUBCASE("malformed json is a data error") {
        spit(f, "{ not json");
        CHECK_THROWS_AS(load_parameter_file(f), DataError);
    }
    SUBCASE("invalid physics is a data error") {
        spit(f, R"({"kappa_hz": -1, "omega_hz": 0.87e6, "gamma_sc": 2.87e6,
                    "eta": 0.0148, "eta_ld_sq": 0.0146, "c_factor": 0.333,
                    "n_dot_ext": 17.0, "delta_lc_hz": 0, "delta_ci_hz": 0})");
        CHECK_THROWS_AS(load_parameter_file(f), DataError);
    }
}

TEST_CASE("shipped fixtures parse and carry the experiment constants") {
    // repo-relative; tests run from the build tree
    const fs::path fixtures = fs::path(__FILE__).parent_path().parent_path() / "fixtures";
    const ParameterFile dyn = load_parameter_file(fixtures / "cooling_dynamics.json");
    CHECK(dyn.params.eta == 0.0148);
    CHECK(dyn.params.gamma_sc == 2.87e6);
    CHECK(steady_state_n(dyn.params) == Approx(22.5).epsilon(0.02));

    const ParameterFile sat = load_parameter_file(fixtures / "saturation.json");
    CHECK(sat.params.eta == 0.018);

    const ParameterFile spec = load_parameter_file(fixtures / "spectrum.json");
    REQUIRE(spec.spectrum.has_value());
    CHECK(spec.spectrum->geometry.trap_frequency[0] ==
          Approx(constants::two_pi * 1.45e6).epsilon(1e-14));
    CHECK(spec.spectrum->total_linewidth == Approx(constants::two_pi * 150e3).epsilon(1e-14));
    // per-mode Lamb-Dicke factors derived from the species block
    CHECK(spec.spectrum->geometry.lamb_dicke_sq[2] == Approx(0.014633563934313745).epsilon(1e-9));
    CHECK(spec.spectrum->geometry.lamb_dicke_sq[0] <
          spec.spectrum->geometry.lamb_dicke_sq[2]);  // stiffer mode, smaller eta^2
}

TEST_CASE("csv table writer emits stable shortest-round-trip numbers") {
    const fs::path dir = temp_dir();
    CsvTable t;
    t.columns = {"a", "b", "tag"};
    t.add_row({0.1, 123456789.25, std::string("x")});
    t.add_row({2.5e-300, -7L, std::string("y")});
    const fs::path f = dir / "table.csv";
    write_csv(t, f);
    CHECK(slurp(f) == "a,b,tag\n0.1,123456789.25,x\n2.5e-300,-7,y\n");
    CHECK_THROWS_AS(t.add_row({1.0}), UsageError);
}

TEST_CASE("manifest identity") {
    const fs::path dir = temp_dir();
    const fs::path input = dir / "input.json";
    spit(input, "{\"x\": 1}\n");

    RunManifest a = make_manifest("simulate", "{config}", 42, {input});
    RunManifest b = make_manifest("simulate", "{config}", 42, {input});
    CHECK(a.config_hash == b.config_hash);
    CHECK(a.input_digests == b.input_digests);
    CHECK(a.seed == b.seed);
    CHECK(a.rng_algorithm == rng::algorithm_id);

    // different config, different hash; different input bytes, different digest
    const RunManifest c = make_manifest("simulate", "{config2}", 42, {input});
    CHECK(c.config_hash != a.config_hash);
    spit(input, "{\"x\": 2}\n");
    const RunManifest d = make_manifest("simulate", "{config}", 42, {input});
    CHECK(d.input_digests != a.input_digests);

    a.write(dir / "manifest.json");
    const std::string text = slurp(dir / "manifest.json");
    CHECK(text.find("\"seed\": 42") != std::string::npos);
    CHECK(text.find(a.config_hash) != std::string::npos);
}

TEST_CASE("noise spec parsing") {
    CHECK(parse_noise_spec("none").kind == NoiseSpec::Kind::none);
    const NoiseSpec g = parse_noise_spec("gaussian:0.1");
    CHECK(g.kind == NoiseSpec::Kind::gaussian);
    CHECK(g.scale == 0.1);
    const NoiseSpec p = parse_noise_spec("poisson:5e-5");
    CHECK(p.kind == NoiseSpec::Kind::poisson);
    CHECK(p.scale == 5e-5);
    CHECK_THROWS_AS(parse_noise_spec("uniform:1"), UsageError);
    CHECK_THROWS_AS(parse_noise_spec("gaussian"), UsageError);
    CHECK_THROWS_AS(parse_noise_spec("gaussian:-1"), UsageError);
    CHECK(to_string(parse_noise_spec("gaussian:0.25")) == "gaussian:0.25");
}

TEST_CASE("synthetic generators are deterministic and honest about zero noise") {
    PhysicalParams p;
    p.kappa = constants::angular(117e3);
    p.omega = constants::angular(0.87e6);
    p.gamma_sc = 2.87e6;
    p.eta = 0.0148;
    p.eta_ld_sq = 0.014633563934313745;
    p.recoil_factor = 1.0 / 3.0;
    p.n_dot_ext = 17.0;
    p.delta_lc = -p.omega;

    const auto grid = linspace(0.0, 8e-3, 10);
    NoiseSpec none;
    const Dataset clean = synth_dynamics_branch(p, Branch::red, 0.3, grid, none, 5);
    const CoolingCurve model = mean_n_trajectory(p, Branch::red, 0.3, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(clean.points[i].y == model.mean_n[i]);

    NoiseSpec g;
    g.kind = NoiseSpec::Kind::gaussian;
    g.scale = 0.1;
    const Dataset a = synth_dynamics_branch(p, Branch::red, 0.3, grid, g, 5);
    const Dataset b = synth_dynamics_branch(p, Branch::red, 0.3, grid, g, 5);
    const Dataset c = synth_dynamics_branch(p, Branch::red, 0.3, grid, g, 6);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.points[i].y == b.points[i].y);
        CHECK(a.points[i].y != model.mean_n[i]);
    }
    CHECK(a.points[1].y != c.points[1].y);
    CHECK(a.metadata.at("branch") == "red");
    CHECK(a.metadata.at("seed") == "5");
    CHECK_THROWS_AS(
        synth_dynamics_branch(p, Branch::red, 0.3, grid,
                              parse_noise_spec("poisson:1e-3"), 5),
        UsageError);
}

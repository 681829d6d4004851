#include "sbcool/params_io.hpp"

#include <fstream>
#include <json.hpp>

#include "sbcool/constants.hpp"
#include "sbcool/errors.hpp"

namespace sbcool {

namespace {

using nlohmann::json;

double need_number(const json& j, const std::string& key, const std::string& file) {
    if (!j.contains(key))
        throw DataError(file + ": missing required key '" + key + "'");
    if (!j.at(key).is_number())
        throw DataError(file + ": key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

double opt_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<double>();
}

}  // namespace

ParameterFile load_parameter_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open parameter file: " + file.string());

    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw DataError(file.string() + ": " + e.what());
    }
    const std::string fname = file.string();

    ParameterFile out;

    if (j.contains("species")) {
        const json& s = j.at("species");
        IonSpecies sp;
        sp.mass = need_number(s, "mass_amu", fname + " [species]") * constants::atomic_mass_unit;
        sp.wavelength = need_number(s, "lambda_nm", fname + " [species]") * 1e-9;
        sp.atomic_linewidth = constants::angular(opt_number(s, "gamma_atom_hz", 0.0));
        sp.name = s.value("name", "");
        sp.validate();
        out.species = sp;
    }
    if (j.contains("cavity")) {
        const json& c = j.at("cavity");
        CavityParams cv;
        cv.finesse = need_number(c, "finesse", fname + " [cavity]");
        cv.waist = need_number(c, "waist_um", fname + " [cavity]") * 1e-6;
        cv.length = opt_number(c, "length_cm", 0.0) * 1e-2;
        cv.linewidth = constants::angular(opt_number(c, "kappa_hz", 0.0));
        out.cavity = cv;
    }

    PhysicalParams& p = out.params;
    p.kappa = constants::angular(need_number(j, "kappa_hz", fname));
    p.omega = constants::angular(need_number(j, "omega_hz", fname));
    p.gamma_sc = need_number(j, "gamma_sc", fname);
    p.eta = need_number(j, "eta", fname);
    p.recoil_factor = need_number(j, "c_factor", fname);
    p.n_dot_ext = need_number(j, "n_dot_ext", fname);
    p.delta_lc = constants::angular(need_number(j, "delta_lc_hz", fname));
    p.delta_ci = constants::angular(need_number(j, "delta_ci_hz", fname));
    if (j.contains("eta_ld_sq")) {
        p.eta_ld_sq = j.at("eta_ld_sq").get<double>();
    } else if (out.species) {
        p.eta_ld_sq = lamb_dicke_sq(*out.species, p.omega);
    } else {
        throw DataError(fname + ": need either eta_ld_sq or a species block to derive it");
    }
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw DataError(fname + ": " + e.what());
    }
    if (out.cavity && out.cavity->linewidth == 0.0) out.cavity->linewidth = p.kappa;

    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        const std::string where = fname + " [spectrum]";
        SpectrumConfig cfg;
        SpectrumGeometry& g = cfg.geometry;
        g.trap_frequency = {constants::angular(need_number(s, "omega_x_hz", where)),
                            constants::angular(need_number(s, "omega_y_hz", where)),
                            constants::angular(opt_number(s, "omega_z_hz",
                                                          constants::ordinary(p.omega)))};
        g.standing_wave_phase = opt_number(s, "phi", 0.0);
        // cooling beam is perpendicular to the cavity axis; equal x/y split
        // unless stated
        const double inv_sqrt2 = 0.7071067811865476;
        g.transverse_projection = {opt_number(s, "projection_x", inv_sqrt2),
                                   opt_number(s, "projection_y", inv_sqrt2)};
        g.thermal_occupation = {need_number(s, "nbar_x", where),
                                need_number(s, "nbar_y", where),
                                need_number(s, "nbar_z", where)};
        for (int m = 0; m < 3; ++m) {
            const char* keys[3] = {"eta_ld_sq_x", "eta_ld_sq_y", "eta_ld_sq_z"};
            if (s.contains(keys[m])) {
                g.lamb_dicke_sq[m] = s.at(keys[m]).get<double>();
            } else if (out.species) {
                g.lamb_dicke_sq[m] = lamb_dicke_sq(*out.species, g.trap_frequency[m]);
            } else {
                throw DataError(where + ": need " + keys[m] +
                                " or a species block to derive it");
            }
        }
        cfg.total_linewidth = constants::angular(need_number(s, "total_linewidth_hz", where));
        cfg.amplitude_scale = opt_number(s, "amplitude_scale", 1.0);
        try {
            g.validate();
        } catch (const std::exception& e) {
            throw DataError(where + ": " + e.what());
        }
        out.spectrum = cfg;
    }
    return out;
}

}  // namespace sbcool

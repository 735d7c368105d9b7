#include "dstar/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dstar {

const char* to_string(Architecture a) {
    switch (a) {
        case Architecture::Dstar: return "dstar";
        case Architecture::DstarCoupled: return "dstar_coupled";
        case Architecture::SingleStar: return "single_star";
        case Architecture::DoubleRis: return "double_ris";
        case Architecture::HdxDstar: return "hdx_dstar";
        case Architecture::ModeSwitch: return "mode_switch";
        case Architecture::FixedPhase: return "fixed_phase";
        case Architecture::FixedAmplitude: return "fixed_amplitude";
    }
    return "unknown";
}

Architecture architecture_from_string(const std::string& name) {
    for (auto a : {Architecture::Dstar, Architecture::DstarCoupled, Architecture::SingleStar,
                   Architecture::DoubleRis, Architecture::HdxDstar, Architecture::ModeSwitch,
                   Architecture::FixedPhase, Architecture::FixedAmplitude}) {
        if (name == to_string(a)) return a;
    }
    throw std::invalid_argument("unknown architecture: " + name);
}

Geometry make_geometry(double bs_dstar_m, double user_dstar_m, double user_bs_m,
                       double inter_dstar_m) {
    if (bs_dstar_m <= 0 || user_dstar_m <= 0 || user_bs_m <= 0 || inter_dstar_m <= 0)
        throw std::invalid_argument("geometry distances must be strictly positive");

    Geometry g;
    g.bs = {0.0, 0.0};
    g.star_p = {bs_dstar_m, 0.0};
    g.star_s = {bs_dstar_m + inter_dstar_m, 0.0};

    // P-group centroids from the BS/STAR-P/user triangle.
    const double px =
        (bs_dstar_m * bs_dstar_m + user_bs_m * user_bs_m - user_dstar_m * user_dstar_m) /
        (2.0 * bs_dstar_m);
    const double py2 = user_bs_m * user_bs_m - px * px;
    if (py2 < 0.0)
        throw std::invalid_argument("infeasible geometry triangle (bs/user/surface distances)");
    const double py = std::sqrt(py2);
    g.pd = {px, py};
    g.pu = {px, -py};

    // S-group centroids mirror the P layout about the reference secondary
    // surface position (inter-surface spacing 100 m); they do not move when
    // inter_dstar_m is swept.
    const double ref_s = bs_dstar_m + 100.0;
    const double sx = ref_s + (bs_dstar_m - px);
    g.sd = {sx, py};
    g.su = {sx, -py};
    return g;
}

Vec2 ScenarioConfig::element_position(const Vec2& surface, int m) const {
    // Sub-panels sit on the deployment axis through the surface, 10 m apart,
    // centered on the original position. Panels shifted toward the BS shorten
    // both legs of the P-region cascades, which is where the partitioning
    // gain comes from; panels pushed further out fade quickly.
    const int per = elems_per_panel();
    const int panel = m / per;
    const double off = (panel - (n_panels - 1) / 2.0) * panel_spacing_m;
    return {surface.x + off, surface.y};
}

void ScenarioConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    require(n_tx >= 1 && n_rx >= 1, "antenna counts must be >= 1");
    require(k_pd >= 1 && k_sd >= 1 && k_pu >= 1 && k_su >= 1, "user counts must be >= 1");
    require(m_elems >= 1, "m_elems must be >= 1");
    require(n_panels >= 1 && m_elems % n_panels == 0,
            "m_elems must divide evenly into n_panels");
    require(std::isfinite(bs_power_dbm) && std::isfinite(user_power_dbm) &&
                std::isfinite(max_power_dbm) && std::isfinite(noise_dbm),
            "powers must be finite");
    require(ul_rate_threshold_bpshz >= 0.0, "ul rate threshold must be >= 0");
    require(rho1 > 0.0 && rho2 > 0.0 && kappa0 > 0.0, "penalty terms must be positive");
    require(max_iters >= 1, "max_iters must be >= 1");
    for (const Vec2* node : {&geometry.star_p, &geometry.star_s, &geometry.pd, &geometry.pu,
                             &geometry.sd, &geometry.su}) {
        require(distance(geometry.bs, *node) > 0.0, "geometry distances must be positive");
    }
    require(distance(geometry.star_p, geometry.star_s) > 0.0,
            "geometry distances must be positive");
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

struct GeometryKeys {
    double bs_dstar = 100.0, user_dstar = 30.0, user_bs = 80.0, inter_dstar = 100.0;
    bool touched = false;
};

} // namespace

void apply_scenario_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    auto as_int = [&] { return std::stoi(value); };
    auto as_double = [&] { return std::stod(value); };

    if (key == "n_tx") cfg.n_tx = as_int();
    else if (key == "n_rx") cfg.n_rx = as_int();
    else if (key == "k_pd") cfg.k_pd = as_int();
    else if (key == "k_sd") cfg.k_sd = as_int();
    else if (key == "k_pu") cfg.k_pu = as_int();
    else if (key == "k_su") cfg.k_su = as_int();
    else if (key == "m_elems") cfg.m_elems = as_int();
    else if (key == "n_panels") cfg.n_panels = as_int();
    else if (key == "panel_spacing_m") cfg.panel_spacing_m = as_double();
    else if (key == "bs_power_dbm") cfg.bs_power_dbm = as_double();
    else if (key == "user_power_dbm") cfg.user_power_dbm = as_double();
    else if (key == "max_power_dbm") cfg.max_power_dbm = as_double();
    else if (key == "noise_dbm") cfg.noise_dbm = as_double();
    else if (key == "ul_rate_threshold_bpshz") cfg.ul_rate_threshold_bpshz = as_double();
    else if (key == "pu_rate_threshold_bpshz") cfg.pu_rate_threshold_bpshz = as_double();
    else if (key == "su_rate_threshold_bpshz") cfg.su_rate_threshold_bpshz = as_double();
    else if (key == "surface_ref_db") cfg.pathloss.surface.ref_db = as_double();
    else if (key == "surface_exponent") cfg.pathloss.surface.exponent = as_double();
    else if (key == "direct_ref_db") cfg.pathloss.direct.ref_db = as_double();
    else if (key == "direct_exponent") cfg.pathloss.direct.exponent = as_double();
    else if (key == "si_attenuation_db") cfg.pathloss.si_attenuation_db = as_double();
    else if (key == "blockage_db") cfg.pathloss.blockage_db = as_double();
    else if (key == "rho1") cfg.rho1 = as_double();
    else if (key == "rho2") cfg.rho2 = as_double();
    else if (key == "kappa0") cfg.kappa0 = as_double();
    else if (key == "delta_rate") cfg.delta_rate = as_double();
    else if (key == "delta_vars") cfg.delta_vars = as_double();
    else if (key == "max_iters") cfg.max_iters = as_int();
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "architecture") cfg.architecture = architecture_from_string(value);
    else if (key == "bs_dstar_m" || key == "user_dstar_m" || key == "user_bs_m" ||
             key == "inter_dstar_m") {
        // Geometry keys are handled together so that partial overrides compose;
        // recover current distances from the stored layout first.
        double bs_dstar = cfg.geometry.star_p.x;
        double inter = cfg.geometry.star_s.x - cfg.geometry.star_p.x;
        double user_bs = distance(cfg.geometry.bs, cfg.geometry.pd);
        double user_dstar = distance(cfg.geometry.star_p, cfg.geometry.pd);
        double v = as_double();
        if (key == "bs_dstar_m") bs_dstar = v;
        else if (key == "user_dstar_m") user_dstar = v;
        else if (key == "user_bs_m") user_bs = v;
        else inter = v;
        cfg.geometry = make_geometry(bs_dstar, user_dstar, user_bs, inter);
    } else {
        throw std::invalid_argument("unknown scenario key: " + key);
    }
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& origin) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        try {
            apply_scenario_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open scenario file: " + path);
    return parse_scenario(f, path);
}

} // namespace dstar

#pragma once

#include "dstar/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dstar {

enum class Architecture {
    Dstar,          // full dual-surface joint UL/DL operation
    DstarCoupled,   // transmission/reflection phases constrained to +-pi/2 offset
    SingleStar,     // secondary surface fully off
    DoubleRis,      // reflection-only surfaces; S-region direct links enabled
    HdxDstar,       // half-duplex: separate DL and UL slots
    ModeSwitch,     // per-element binary reflect/transmit assignment
    FixedPhase,     // phases frozen at random initialization
    FixedAmplitude, // amplitudes frozen at initialization
};

const char* to_string(Architecture a);
Architecture architecture_from_string(const std::string& name);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Positions of the BS, the two surfaces and the four user-group centroids.
struct Geometry {
    Vec2 bs;
    Vec2 star_p;
    Vec2 star_s;
    Vec2 pd; // primary DL centroid
    Vec2 pu; // primary UL centroid
    Vec2 sd; // secondary DL centroid
    Vec2 su; // secondary UL centroid
};

/// Builds the deployment layout from its characteristic distances.
///
/// The BS sits at the origin, STAR-P on the x axis at `bs_dstar_m`, and the
/// secondary surface at `bs_dstar_m + inter_dstar_m`. User-group centroids are
/// placed for the reference deployment (inter-surface spacing of 100 m) and
/// stay put when `inter_dstar_m` is varied, so a distance sweep moves only the
/// secondary surface relative to its users.
Geometry make_geometry(double bs_dstar_m = 100.0, double user_dstar_m = 30.0,
                       double user_bs_m = 80.0, double inter_dstar_m = 100.0);

/// Log-distance path loss parameters for one link class.
struct PathLossClass {
    double ref_db;   // loss at 1 m
    double exponent;
};

struct PathLossModel {
    // Links touching a STAR surface are near-LoS; direct user-level links are not.
    PathLossClass surface{11.0, 2.2};
    PathLossClass direct{30.0, 3.0};
    double si_attenuation_db = 110.0; // BS self-interference floor below 0 dB
    double blockage_db = 3.0;         // extra loss on re-enabled S-region direct links

    double surface_gain(double d_m) const {
        return db_to_lin(-(surface.ref_db + 10.0 * surface.exponent * std::log10(d_m)));
    }
    double direct_gain(double d_m) const {
        return db_to_lin(-(direct.ref_db + 10.0 * direct.exponent * std::log10(d_m)));
    }
};

struct ScenarioConfig {
    int n_tx = 8; // BS transmit antennas
    int n_rx = 8; // BS receive antennas
    int k_pd = 2;
    int k_sd = 2;
    int k_pu = 2;
    int k_su = 2;
    int m_elems = 8;  // elements per STAR surface
    int n_panels = 1; // sub-panel count; m_elems must divide evenly
    double panel_spacing_m = 10.0;

    double bs_power_dbm = 30.0;   // nominal BS power, used for beam initialization
    double user_power_dbm = 20.0; // per UL user
    double max_power_dbm = 40.0;  // DL sum-power budget P_t
    double noise_dbm = -80.0;
    double ul_rate_threshold_bpshz = 1.0;
    // Per-group overrides of the UL threshold; negative = follow the common
    // value. Used by the bench harness to run best-effort baselines whose
    // hardware cannot serve one group at all.
    double pu_rate_threshold_bpshz = -1.0;
    double su_rate_threshold_bpshz = -1.0;

    Geometry geometry = make_geometry();
    PathLossModel pathloss;

    double rho1 = 1.0;   // ADMM penalty, primary amplitude pair
    double rho2 = 1.0;   // ADMM penalty, secondary amplitude pair
    double kappa0 = 0.1; // initial PCCP penalty

    double delta_rate = 1e-3;
    double delta_vars = 1e-3;
    int max_iters = 20;

    std::uint64_t seed = 1;
    Architecture architecture = Architecture::Dstar;

    int total_dl_users() const { return k_pd + k_sd; }
    double pu_threshold() const {
        return pu_rate_threshold_bpshz < 0.0 ? ul_rate_threshold_bpshz
                                             : pu_rate_threshold_bpshz;
    }
    double su_threshold() const {
        return su_rate_threshold_bpshz < 0.0 ? ul_rate_threshold_bpshz
                                             : su_rate_threshold_bpshz;
    }
    double noise_watt() const { return dbm_to_watt(noise_dbm); }
    double budget_watt() const { return dbm_to_watt(max_power_dbm); }
    double user_power_watt() const { return dbm_to_watt(user_power_dbm); }
    int elems_per_panel() const { return m_elems / n_panels; }

    /// Position of element `m` of the given surface, accounting for panel splits.
    Vec2 element_position(const Vec2& surface, int m) const;

    /// Throws std::invalid_argument on malformed configurations.
    void validate() const;
};

/// Reads a flat `key = value` scenario file (see README for the schema).
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in, const std::string& origin = "<stream>");

/// Applies one textual `key = value` override to an existing config.
void apply_scenario_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

} // namespace dstar

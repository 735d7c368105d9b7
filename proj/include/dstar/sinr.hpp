#pragma once

#include "dstar/beams.hpp"
#include "dstar/channels.hpp"
#include "dstar/star_profile.hpp"

namespace dstar {

/// Per-user SINRs, per-group rates and an interference breakdown for the four
/// user groups. UL symbol powers enter through the expectation convention:
/// every ||a^H x_u||^2 term evaluates to P_user * sum_k |a_k|^2.
struct SinrReport {
    RVec gamma_pd, gamma_sd, gamma_pu, gamma_su;
    double r_pd = 0, r_sd = 0, r_pu = 0, r_su = 0;

    // Diagnostics, one entry per DL user: interference received from the own
    // group, the other DL group and the two UL groups; plus the common
    // SI power seen by the UL receive chains.
    RVec pd_intra, pd_cross, pd_from_pu, pd_from_su;
    RVec sd_intra, sd_cross, sd_from_pu, sd_from_su;
    double ul_si = 0.0;

    double dl_sum_rate() const { return r_pd + r_sd; }
};

SinrReport sinr_all(const ChannelSet& channels, const StarProfile& star,
                    const BeamformerSet& beams, const ScenarioConfig& scenario);

/// Boolean-per-constraint feasibility record with measured slacks
/// (slack >= 0 means satisfied, up to the stated tolerance).
struct FeasibilityReport {
    bool unit_modulus = false;   // max | |theta|-1 | <= tol
    bool coupling = false;       // cos(theta_t - theta_r) = 0, coupled mode only
    bool energy_split = false;   // beta_r^2 + beta_t^2 = 1 per element pair
    bool ul_pu = false;          // R_PU >= threshold
    bool ul_su = false;          // R_SU >= threshold
    bool power = false;          // total DL power <= P_t

    double unit_modulus_slack = 0; // -max deviation
    double coupling_slack = 0;     // -max |cos(dtheta)|
    double energy_slack = 0;       // -max deviation from 1
    double ul_pu_slack = 0;        // R_PU - R_th
    double ul_su_slack = 0;        // R_SU - R_th
    double power_slack = 0;        // P_t - used power

    bool all_ok() const {
        return unit_modulus && coupling && energy_split && ul_pu && ul_su && power;
    }
};

FeasibilityReport check_feasibility(const StarProfile& star, const BeamformerSet& beams,
                                    const SinrReport& report, const ScenarioConfig& scenario,
                                    double tol = 1e-3);

} // namespace dstar

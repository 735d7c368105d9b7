#pragma once

#include "dstar/linalg.hpp"
#include "dstar/scenario.hpp"

namespace dstar {

/// All channel matrices of the system model. Naming follows the usual
/// convention: d* feed the DL side, u* the UL side, h* the secondary surface,
/// s is BS self-interference and v_* are user-to-user leakage links.
struct ChannelSet {
    CMat d;    // n_tx x k_pd   direct BS -> PD
    CMat d1;   // m x n_tx      BS -> STAR-P
    CMat d2;   // m x k_pd      STAR-P -> PD
    CMat d3;   // m x k_sd      STAR-P -> SD
    CMat u;    // n_rx x k_pu   direct PU -> BS
    CMat u1;   // m x k_pu      PU -> STAR-P
    CMat u2;   // n_rx x m      STAR-P -> BS
    CMat h1;   // m x k_su      SU -> STAR-S
    CMat h2;   // m x k_sd      STAR-S -> SD
    CMat h3;   // n_rx x m      STAR-S -> BS
    CMat h4;   // m x k_pd      STAR-S -> PD
    CMat s;    // n_rx x n_tx   BS self-interference
    CMat v_p;  // k_pu x k_pd   PU -> PD leakage
    CMat v_s;  // k_su x k_sd   SU -> SD leakage
    CMat d_sd; // n_tx x k_sd   direct BS -> SD; zero unless S-region links enabled
    CMat u_su; // n_rx x k_su   direct SU -> BS; zero unless S-region links enabled

    double ul_power_watt = 0.0; // per-UL-user transmit power

    void check_dims(const ScenarioConfig& sc) const; // throws on mismatch
};

/// Draws one Rayleigh-faded channel realization. Every entry is
/// circularly-symmetric complex Gaussian with variance equal to the link's
/// path-loss gain; the draw order is fixed so results are bit-reproducible
/// for a given (scenario, seed). The direct S-region links are drawn last and
/// zeroed unless the architecture re-enables them, so all other matrices are
/// identical across architectures for the same seed.
ChannelSet gen_channels(const ScenarioConfig& scenario, std::uint64_t seed);

} // namespace dstar

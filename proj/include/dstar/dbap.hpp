#pragma once

#include "dstar/beam_opt.hpp"
#include "dstar/errors.hpp"
#include "dstar/sinr.hpp"
#include "dstar/star_opt.hpp"

#include <vector>

namespace dstar {

enum class DbapStatus { ConvergedRate, ConvergedVars, MaxIter };
const char* to_string(DbapStatus s);

/// One row of the optimization trace.
struct IterRecord {
    int iter = 0;
    double dl_sum_rate = 0.0;
    double r_pu = 0.0, r_su = 0.0;
    double surrogate = 0.0; // beam-subproblem surrogate at the accepted beams
    double rate_delta = 0.0;
    double var_delta = 0.0; // largest per-block squared change (beams, amps, phases)
    bool feasible = false;
};

struct DbapTrace {
    std::vector<IterRecord> iters;
    DbapStatus status = DbapStatus::MaxIter;
    double init_rate = 0.0; // DL sum rate right after feasible initialization
    int best_iter = 0;      // 0 = initialization
};

struct DbapResult {
    BeamformerSet beams;
    StarProfile star;
    DbapTrace trace;
};

/// Runs the full alternating optimization for one channel realization:
/// random feasible initialization, then per iteration the auxiliary refresh,
/// beam solve, amplitude ADMM pass, phase solve and (in coupled mode) the
/// coupled-phase projection, until the rate or variable deltas drop below the
/// configured thresholds or the iteration cap hits. Returns the best-rate
/// feasible iterate. Throws InfeasibleError when an UL threshold is
/// unattainable for the drawn channels.
DbapResult run_dbap(const ScenarioConfig& sc, const ChannelSet& ch);

/// True (non-surrogate) rates of a candidate solution.
SinrReport evaluate_solution(const BeamformerSet& beams, const StarProfile& star,
                             const ChannelSet& ch, const ScenarioConfig& sc);

/// Fresh auxiliaries at the current operating point (SINR fixed points and
/// the matching ratio terms).
AuxState refresh_aux(const ChannelSet& ch, const StarProfile& star,
                     const BeamformerSet& beams, const ScenarioConfig& sc);

} // namespace dstar

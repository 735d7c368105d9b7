#pragma once

#include "dstar/beams.hpp"
#include "dstar/channels.hpp"
#include "dstar/sinr.hpp"
#include "dstar/star_profile.hpp"
#include "dstar/transforms.hpp"

namespace dstar {

/// All coefficient data of the active-beamforming sub-problem at a fixed
/// surface configuration. DL users are indexed jointly, primary group first,
/// and the decision variable is the stacked beam vector (see
/// BeamformerSet::stacked).
struct BeamSubproblem {
    int n_tx = 0, k_pd = 0, k_sd = 0;

    CMat d_rows;          // (k_pd + k_sd) x n_tx effective DL channel rows
    RVec ul_interference; // per DL user: UL-into-DL interference power (excl. noise)
    RVec gamma, lambda;   // fixed auxiliaries, one per DL user
    double sigma2 = 0.0;

    CMat s_t;                          // effective self-interference matrix
    double t_pu = 0.0, t_su = 0.0;     // aggregate-SINR thresholds
    double xi_pu = 0.0, xi_su = 0.0;   // UL received-power constants
    bool su_constraint_active = true;  // off when the secondary surface is idle
    double p_budget = 0.0;

    CVec w_prev; // linearization point, stacked

    int users() const { return k_pd + k_sd; }
    int dim() const { return n_tx * users(); }
    CVec slot(const CVec& x, int j) const { return x.segment(j * n_tx, n_tx); }

    /// Desired-signal power of DL user j.
    double eval_A(int j, const CVec& x) const;
    /// Total received power at DL user j plus UL interference and noise.
    double eval_C(int j, const CVec& x) const;
    /// First-order minorant of eval_A around w_prev.
    double eval_Atilde(int j, const CVec& x) const;
    /// Left-hand side of the UL protection constraint (>= 0 when satisfied).
    double ul_lhs(bool secondary, const CVec& x) const;
    /// The concave surrogate maximized by the sub-problem solve.
    double surrogate_objective(const CVec& x) const;
    /// The full surrogate DL sum rate (bps/Hz): surrogate_objective plus the
    /// x-independent auxiliary terms. Touches the true rate at the auxiliary
    /// fixed point, so it is directly comparable to the evaluated sum rate.
    double surrogate_rate(const CVec& x) const;
};

/// Effective BS->user DL channel row for one user at the current surfaces.
CRow effective_dl_row(const ChannelSet& ch, const StarProfile& star, bool secondary, int k);

/// Aggregate UL received-signal power constant for one UL group.
double ul_signal_power(const ChannelSet& ch, const StarProfile& star, bool secondary);

BeamSubproblem build_beam_subproblem(const ChannelSet& ch, const StarProfile& star,
                                     const BeamformerSet& beams_prev, const AuxState& aux,
                                     const ScenarioConfig& sc);

/// Maximizes the concave surrogate subject to the power budget and the UL
/// protection constraints. Throws InfeasibleError when no beamformer (not
/// even zero) can protect an UL group.
BeamformerSet solve_beam_subproblem(const BeamSubproblem& sub);

/// Re-points the given surface-side phases at the UL group (leading-eigenvector
/// alignment of the combined UL cascade). Used as a rescue when the random
/// initialization leaves too little UL signal power.
void align_ul_phases(const ChannelSet& ch, StarProfile& star, bool secondary);

/// Feasible starting beams: matched filters at nominal power, scaled down by a
/// common factor until the UL constraints and the power budget hold. May
/// realign star phases (rescue); throws InfeasibleError when a threshold is
/// unattainable outright.
BeamformerSet make_initial_beams(const ChannelSet& ch, StarProfile& star,
                                 const ScenarioConfig& sc);

} // namespace dstar

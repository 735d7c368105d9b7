#pragma once

#include "dstar/beams.hpp"
#include "dstar/channels.hpp"
#include "dstar/star_profile.hpp"
#include "dstar/transforms.hpp"

#include <array>

namespace dstar {

/// Quadratic-form data of the surface sub-problem at fixed beams: one
/// Hermitian matrix and linear row per side (acting on phi = beta .* theta),
/// plus the two UL protection constraints. `omega`/`lin` are indexed by Side;
/// the ST side carries no objective-linear term.
struct StarQuadratics {
    int m = 0;
    std::array<CMat, 4> omega; // quadratic penalties, per side
    std::array<CRow, 4> lin;   // objective-linear rows, per side
    double obj_const = 0.0;

    CMat upsilon1, upsilon2; // UL constraint quadratics on phi_PR
    CRow g1, g2;             // constraint-linear rows on phi_PR
    CRow g3;                 // constraint-linear row on phi_ST
    double c1 = 0.0, c2 = 0.0;
    double t_pu = 0.0, t_su = 0.0; // aggregate-SINR thresholds (0 disables)
    double sigma2 = 0.0;

    /// Surrogate objective at a full profile (constant term included, so this
    /// matches the direct linearized Dinkelbach objective).
    double objective(const StarProfile& star) const;
    /// UL protection constraint values; >= 0 means satisfied.
    double pu_value(const CVec& phi_pr) const;
    double su_value(const CVec& phi_pr, const CVec& phi_st) const;
};

StarQuadratics assemble_quadratics(const ChannelSet& ch, const StarProfile& star_prev,
                                   const BeamformerSet& beams, const AuxState& aux,
                                   const ScenarioConfig& sc);

// Restrictions of the phi-forms to the amplitude (theta fixed) and phase
// (beta fixed) sub-problems. Exposed for tests.
RMat restrict_beta(const CMat& omega, const CVec& theta0);
RRow restrict_beta_row(const CRow& lin, const CVec& theta0);
CMat restrict_theta(const CMat& omega, const RVec& beta);
CRow restrict_theta_row(const CRow& lin, const RVec& beta);

/// Splitting state of the amplitude ADMM: auxiliary transmission amplitudes
/// and scaled duals for the two surface pairs.
struct AdmmState {
    RVec z_pt, z_st; // auxiliaries standing in for beta_PT, beta_ST
    RVec u, r;       // duals of the energy-coupling constraints
    // Objective normalization of the most recent call; duals are rescaled
    // whenever it changes so the penalty/dual balance carries over between
    // outer iterations (0 = not yet set).
    double scale = 0.0;

    static AdmmState init(const StarProfile& star);
};

/// One ADMM pass (the six updates in their fixed order) over the amplitude
/// sub-problem; writes the new amplitudes into `star` and re-normalizes the
/// transmission sides to the unit energy split. Infeasible inner solves leave
/// the corresponding block unchanged.
void solve_amplitudes_admm(const StarQuadratics& quad, StarProfile& star, AdmmState& state,
                           const ScenarioConfig& sc);

struct PccpState {
    double kappa = 0.1;
    RVec b;             // last solved modulus slacks (diagnostic)
    double scale = 0.0; // objective normalization of the most recent call

    static PccpState init(double kappa0) { return {kappa0, RVec(), 0.0}; }
};

/// One penalized convex solve of the phase sub-problem (unit-modulus equality
/// relaxed into slack-penalized annuli), followed by exact projection onto the
/// unit circle and penalty growth. Solved as independent blocks: (PR, ST)
/// jointly - they share the secondary UL constraint - then PT, then SR.
void solve_phases_pccp(const StarQuadratics& quad, StarProfile& star, PccpState& state,
                       const ScenarioConfig& sc);

/// Enforces the coupled-phase hardware constraint (reflection/transmission
/// phases +-pi/2 apart) by picking, per element and surface, the best of the
/// four keep-one-side candidates under the surrogate objective.
StarProfile couple_phases(const StarProfile& star, const StarQuadratics& quad);

/// Uniform quantization to n_amp_bits amplitude and n_phase_bits phase levels;
/// the transmission amplitudes are re-derived from the quantized reflection
/// ones so the energy split stays exact.
StarProfile quantize_profile(const StarProfile& star, int n_amp_bits, int n_phase_bits);

} // namespace dstar

#include "dstar/dbap.hpp"

#include <limits>
#include <random>

namespace dstar {

const char* to_string(DbapStatus s) {
    switch (s) {
        case DbapStatus::ConvergedRate: return "converged_rate";
        case DbapStatus::ConvergedVars: return "converged_vars";
        case DbapStatus::MaxIter: return "max_iter";
    }
    return "?";
}

SinrReport evaluate_solution(const BeamformerSet& beams, const StarProfile& star,
                             const ChannelSet& ch, const ScenarioConfig& sc) {
    return sinr_all(ch, star, beams, sc);
}

AuxState refresh_aux(const ChannelSet& ch, const StarProfile& star,
                     const BeamformerSet& beams, const ScenarioConfig& sc) {
    const SinrReport rep = sinr_all(ch, star, beams, sc);
    AuxState aux;
    aux.gamma_pd = rep.gamma_pd;
    aux.gamma_sd = rep.gamma_sd;
    aux.lambda_pd = (rep.gamma_pd.array() / (1.0 + rep.gamma_pd.array())).matrix();
    aux.lambda_sd = (rep.gamma_sd.array() / (1.0 + rep.gamma_sd.array())).matrix();
    return aux;
}

namespace {

void binarize_amplitudes(StarProfile& star) {
    for (auto [r, t] : {std::pair{Side::PR, Side::PT}, std::pair{Side::SR, Side::ST}}) {
        for (int i = 0; i < star.elems(); ++i) {
            const double br = star.b(r)(i) * star.b(r)(i) >= 0.5 ? 1.0 : 0.0;
            star.b(r)(i) = br;
            star.b(t)(i) = br > 0.5 ? 0.0 : 1.0;
        }
    }
}

} // namespace

DbapResult run_dbap(const ScenarioConfig& sc, const ChannelSet& ch) {
    sc.validate();
    std::mt19937_64 rng(sc.seed);
    StarProfile star = StarProfile::random(sc.m_elems, rng);
    const Architecture arch = sc.architecture;
    if (arch == Architecture::SingleStar) {
        star.b(Side::SR).setZero();
        star.b(Side::ST).setZero();
    } else if (arch == Architecture::DoubleRis) {
        star.b(Side::PR).setOnes();
        star.b(Side::SR).setOnes();
        star.b(Side::PT).setZero();
        star.b(Side::ST).setZero();
    }
    const bool opt_amp =
        arch != Architecture::DoubleRis && arch != Architecture::FixedAmplitude;
    const bool opt_phase = arch != Architecture::FixedPhase;
    const bool coupled = arch == Architecture::DstarCoupled;

    BeamformerSet beams = make_initial_beams(ch, star, sc);

    DbapResult res;
    res.trace.status = DbapStatus::MaxIter;
    SinrReport rep = sinr_all(ch, star, beams, sc);
    FeasibilityReport feas = check_feasibility(star, beams, rep, sc);
    res.beams = beams;
    res.star = star;
    res.trace.init_rate = rep.dl_sum_rate();
    res.trace.best_iter = 0;
    double best_rate = rep.dl_sum_rate();
    bool best_feasible = feas.all_ok();

    AdmmState admm = AdmmState::init(star);
    PccpState pccp = PccpState::init(sc.kappa0);
    double prev_rate = rep.dl_sum_rate();

    for (int a = 1; a <= sc.max_iters; ++a) {
        // Beam step: alternating auxiliary refreshes and SCA rounds until the
        // genuine rate settles, so each outer iteration leaves the beams fully
        // optimized for the current surface profile.
        AuxState aux = refresh_aux(ch, star, beams, sc);
        BeamSubproblem sub = build_beam_subproblem(ch, star, beams, aux, sc);
        BeamformerSet new_beams = beams;
        double surrogate = sub.surrogate_rate(beams.stacked());
        // The surrogate ranks candidates, but acceptance is by genuine rate:
        // with the auxiliaries held fixed the surrogate is not a certified
        // minorant of the sum rate, so the loop keeps the best true iterate.
        const bool start_ok =
            beams.stacked().squaredNorm() <= sub.p_budget + 1e-9 &&
            sub.ul_lhs(false, beams.stacked()) >= 0.0 &&
            (!sub.su_constraint_active || sub.ul_lhs(true, beams.stacked()) >= 0.0);
        double best_inner =
            start_ok ? sinr_all(ch, star, beams, sc).dl_sum_rate() : -1.0;
        for (int round = 0; round < 2; ++round) {
            if (round > 0) {
                aux = refresh_aux(ch, star, new_beams, sc);
                sub = build_beam_subproblem(ch, star, new_beams, aux, sc);
            }
            const double round_start = best_inner;
            for (int inner = 0; inner < 15; ++inner) {
                const BeamformerSet cand = solve_beam_subproblem(sub);
                const double cand_rate = sinr_all(ch, star, cand, sc).dl_sum_rate();
                if (cand_rate > best_inner) {
                    best_inner = cand_rate;
                    new_beams = cand;
                    surrogate = sub.surrogate_rate(cand.stacked());
                }
                const double step =
                    (cand.stacked() - sub.w_prev).norm() / (1.0 + sub.w_prev.norm());
                sub.w_prev = cand.stacked();
                if (step < 1e-4) break;
            }
            if (best_inner - round_start <= 0.1 * sc.delta_rate) break;
        }

        // Auxiliaries are refreshed once more so the surface step sees the
        // operating point produced by the new beams.
        aux = refresh_aux(ch, star, new_beams, sc);
        const StarQuadratics quad = assemble_quadratics(ch, star, new_beams, aux, sc);
        const StarProfile prev_star = star;
        // One splitting pass per outer iteration; the proximal anchors inside
        // the block solves keep successive passes from overshooting each other
        // while the coupling duals settle across outer iterations.
        if (opt_amp) solve_amplitudes_admm(quad, star, admm, sc);
        if (opt_phase) solve_phases_pccp(quad, star, pccp, sc);
        if (coupled) star = couple_phases(star, quad);

        // Safeguard on the surface step: the exact unit-modulus projection can
        // collapse the received UL signal power below what any beam choice is
        // able to protect, which would make the next beam solve infeasible.
        // Keep the previous profile in that case; transient rate dips are fine
        // (the best feasible iterate is returned), irrecoverable ones are not.
        const double sigma2 = sc.noise_watt();
        auto ul_headroom = [&](const StarProfile& s) {
            double h = std::numeric_limits<double>::infinity();
            if (sc.pu_threshold() > 0.0)
                h = std::min(h, ul_signal_power(ch, s, false) /
                                    (jensen_ul_threshold(sc.pu_threshold()) * sigma2));
            if (sc.su_threshold() > 0.0 && arch != Architecture::SingleStar)
                h = std::min(h, ul_signal_power(ch, s, true) /
                                    (jensen_ul_threshold(sc.su_threshold()) * sigma2));
            return h;
        };
        if (ul_headroom(star) < 2.0 && ul_headroom(prev_star) >= 2.0) star = prev_star;

        // Variable-change criterion: per-block squared norms (w_PD, w_SD,
        // amplitudes, phases), all of which must settle below delta_vars.
        const double var_delta = std::max(
            {(new_beams.w_pd - beams.w_pd).squaredNorm(),
             (new_beams.w_sd - beams.w_sd).squaredNorm(),
             star.amp_delta_sq(prev_star), star.phase_delta_sq(prev_star)});
        beams = new_beams;
        rep = sinr_all(ch, star, beams, sc);
        feas = check_feasibility(star, beams, rep, sc);
        const double rate = rep.dl_sum_rate();

        IterRecord rec;
        rec.iter = a;
        rec.dl_sum_rate = rate;
        rec.r_pu = rep.r_pu;
        rec.r_su = rep.r_su;
        rec.surrogate = surrogate;
        rec.rate_delta = rate - prev_rate;
        rec.var_delta = var_delta;
        rec.feasible = feas.all_ok();
        res.trace.iters.push_back(rec);

        if (feas.all_ok() && (!best_feasible || rate > best_rate)) {
            best_rate = rate;
            best_feasible = true;
            res.beams = beams;
            res.star = star;
            res.trace.best_iter = a;
        }
        if (std::abs(rate - prev_rate) <= sc.delta_rate) {
            res.trace.status = DbapStatus::ConvergedRate;
            break;
        }
        if (var_delta <= sc.delta_vars) {
            res.trace.status = DbapStatus::ConvergedVars;
            break;
        }
        prev_rate = rate;
    }

    if (arch == Architecture::ModeSwitch) {
        // Project the converged energy-splitting solution onto the binary
        // reflect/transmit assignment, then give the phases one more pass.
        StarProfile ms = res.star;
        binarize_amplitudes(ms);
        AuxState aux = refresh_aux(ch, ms, res.beams, sc);
        const StarQuadratics quad = assemble_quadratics(ch, ms, res.beams, aux, sc);
        PccpState ms_pccp = PccpState::init(sc.kappa0);
        solve_phases_pccp(quad, ms, ms_pccp, sc);
        res.star = ms;
    }
    return res;
}

} // namespace dstar

#include "dstar/sinr.hpp"

#include <stdexcept>

namespace dstar {

namespace {

double log2_rate(const RVec& gamma) {
    double r = 0.0;
    for (int k = 0; k < gamma.size(); ++k) r += std::log2(1.0 + gamma(k));
    return r;
}

} // namespace

SinrReport sinr_all(const ChannelSet& ch, const StarProfile& star, const BeamformerSet& beams,
                    const ScenarioConfig& sc) {
    ch.check_dims(sc);
    if (star.elems() != sc.m_elems || beams.n_tx() != sc.n_tx ||
        beams.w_pd.cols() != sc.k_pd || beams.w_sd.cols() != sc.k_sd)
        throw std::invalid_argument("sinr_all: dimension mismatch");

    const double sigma2 = sc.noise_watt();
    const double p_ul = ch.ul_power_watt;
    const CVec phi_pr = star.phi(Side::PR);
    const CVec phi_pt = star.phi(Side::PT);
    const CVec phi_sr = star.phi(Side::SR);
    const CVec phi_st = star.phi(Side::ST);

    SinrReport rep;
    rep.gamma_pd.resize(sc.k_pd);
    rep.gamma_sd.resize(sc.k_sd);
    rep.gamma_pu.resize(sc.k_pu);
    rep.gamma_su.resize(sc.k_su);
    rep.pd_intra.setZero(sc.k_pd);
    rep.pd_cross.setZero(sc.k_pd);
    rep.pd_from_pu.setZero(sc.k_pd);
    rep.pd_from_su.setZero(sc.k_pd);
    rep.sd_intra.setZero(sc.k_sd);
    rep.sd_cross.setZero(sc.k_sd);
    rep.sd_from_pu.setZero(sc.k_sd);
    rep.sd_from_su.setZero(sc.k_sd);

    // --- Primary DL users ---
    for (int k = 0; k < sc.k_pd; ++k) {
        const CRow d_pd_k = ch.d2.col(k).adjoint() * phi_pr.asDiagonal() * ch.d1 +
                            ch.d.col(k).adjoint();
        const double sig = std::norm((d_pd_k * beams.w_pd.col(k))(0));
        for (int kk = 0; kk < sc.k_pd; ++kk)
            if (kk != k) rep.pd_intra(k) += std::norm((d_pd_k * beams.w_pd.col(kk))(0));
        for (int kk = 0; kk < sc.k_sd; ++kk)
            rep.pd_cross(k) += std::norm((d_pd_k * beams.w_sd.col(kk))(0));
        for (int kk = 0; kk < sc.k_pu; ++kk) {
            const Complex a = (ch.d2.col(k).adjoint() * phi_pr.asDiagonal() * ch.u1.col(kk))(0) +
                              ch.v_p(kk, k);
            rep.pd_from_pu(k) += p_ul * std::norm(a);
        }
        for (int kk = 0; kk < sc.k_su; ++kk) {
            const Complex a = (ch.h4.col(k).adjoint() * phi_st.asDiagonal() * ch.h1.col(kk))(0);
            rep.pd_from_su(k) += p_ul * std::norm(a);
        }
        const double den = rep.pd_intra(k) + rep.pd_cross(k) + rep.pd_from_pu(k) +
                           rep.pd_from_su(k) + sigma2;
        rep.gamma_pd(k) = sig / den;
    }

    // --- Secondary DL users (direct BS link is zero outside double-RIS mode) ---
    for (int k = 0; k < sc.k_sd; ++k) {
        const CRow d_sd_k = ch.d3.col(k).adjoint() * phi_pt.asDiagonal() * ch.d1 +
                            ch.d_sd.col(k).adjoint();
        const double sig = std::norm((d_sd_k * beams.w_sd.col(k))(0));
        for (int kk = 0; kk < sc.k_sd; ++kk)
            if (kk != k) rep.sd_intra(k) += std::norm((d_sd_k * beams.w_sd.col(kk))(0));
        for (int kk = 0; kk < sc.k_pd; ++kk)
            rep.sd_cross(k) += std::norm((d_sd_k * beams.w_pd.col(kk))(0));
        for (int kk = 0; kk < sc.k_pu; ++kk) {
            const Complex a = (ch.d3.col(k).adjoint() * phi_pt.asDiagonal() * ch.u1.col(kk))(0);
            rep.sd_from_pu(k) += p_ul * std::norm(a);
        }
        for (int kk = 0; kk < sc.k_su; ++kk) {
            const Complex a = (ch.h2.col(k).adjoint() * phi_sr.asDiagonal() * ch.h1.col(kk))(0) +
                              ch.v_s(kk, k);
            rep.sd_from_su(k) += p_ul * std::norm(a);
        }
        const double den = rep.sd_intra(k) + rep.sd_cross(k) + rep.sd_from_pu(k) +
                           rep.sd_from_su(k) + sigma2;
        rep.gamma_sd(k) = sig / den;
    }

    // --- UL users at the BS; shared denominator of SI plus noise ---
    const CMat s_t = ch.s + ch.u2 * phi_pr.asDiagonal() * ch.d1;
    rep.ul_si = (s_t * beams.w_pd).squaredNorm() + (s_t * beams.w_sd).squaredNorm();
    const double ul_den = rep.ul_si + sigma2;
    for (int k = 0; k < sc.k_pu; ++k) {
        const CVec a = ch.u2 * phi_pr.asDiagonal() * ch.u1.col(k) + ch.u.col(k);
        rep.gamma_pu(k) = p_ul * a.squaredNorm() / ul_den;
    }
    for (int k = 0; k < sc.k_su; ++k) {
        const CVec a = ch.h3 * phi_st.asDiagonal() * ch.h1.col(k) + ch.u_su.col(k);
        rep.gamma_su(k) = p_ul * a.squaredNorm() / ul_den;
    }

    rep.r_pd = log2_rate(rep.gamma_pd);
    rep.r_sd = log2_rate(rep.gamma_sd);
    rep.r_pu = log2_rate(rep.gamma_pu);
    rep.r_su = log2_rate(rep.gamma_su);
    return rep;
}

FeasibilityReport check_feasibility(const StarProfile& star, const BeamformerSet& beams,
                                    const SinrReport& report, const ScenarioConfig& sc,
                                    double tol) {
    FeasibilityReport f;
    const bool s_surface_on = sc.architecture != Architecture::SingleStar;

    double worst_mod = 0.0;
    for (auto s : kSides) {
        if (!s_surface_on && (s == Side::SR || s == Side::ST)) continue;
        for (int m = 0; m < star.elems(); ++m)
            worst_mod = std::max(worst_mod, std::abs(std::abs(star.t(s)(m)) - 1.0));
    }
    f.unit_modulus_slack = -worst_mod;
    f.unit_modulus = worst_mod <= tol;

    double worst_couple = 0.0;
    if (sc.architecture == Architecture::DstarCoupled) {
        for (auto [t, r] : {std::pair{Side::PT, Side::PR}, std::pair{Side::ST, Side::SR}}) {
            for (int m = 0; m < star.elems(); ++m) {
                // cos(theta_t - theta_r) scaled by the unit moduli; exactly zero
                // for theta_r = +-j theta_t.
                const double c = (star.t(t)(m) * std::conj(star.t(r)(m))).real();
                worst_couple = std::max(worst_couple, std::abs(c));
            }
        }
    }
    f.coupling_slack = -worst_couple;
    f.coupling = worst_couple <= tol;

    double worst_split = 0.0;
    auto split_dev = [&](Side r, Side t) {
        for (int m = 0; m < star.elems(); ++m) {
            const double e = star.b(r)(m) * star.b(r)(m) + star.b(t)(m) * star.b(t)(m);
            worst_split = std::max(worst_split, std::abs(e - 1.0));
        }
    };
    split_dev(Side::PR, Side::PT);
    if (s_surface_on) split_dev(Side::SR, Side::ST);
    f.energy_slack = -worst_split;
    f.energy_split = worst_split <= tol;

    f.ul_pu_slack = report.r_pu - sc.pu_threshold();
    f.ul_pu = f.ul_pu_slack >= -tol;
    // no serving path without STAR-S
    const double r_th_su = s_surface_on ? sc.su_threshold() : 0.0;
    f.ul_su_slack = report.r_su - r_th_su;
    f.ul_su = f.ul_su_slack >= -tol;

    f.power_slack = sc.budget_watt() - beams.total_power();
    f.power = f.power_slack >= -1e-6 * std::max(1.0, sc.budget_watt());
    return f;
}

} // namespace dstar

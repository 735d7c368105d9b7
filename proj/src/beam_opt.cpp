#include "dstar/beam_opt.hpp"

#include "dstar/errors.hpp"
#include "dstar/qcqp.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace dstar {

double BeamSubproblem::eval_A(int j, const CVec& x) const {
    return std::norm((d_rows.row(j) * slot(x, j))(0));
}

double BeamSubproblem::eval_C(int j, const CVec& x) const {
    double c = ul_interference(j) + sigma2;
    for (int i = 0; i < users(); ++i) c += std::norm((d_rows.row(j) * slot(x, i))(0));
    return c;
}

double BeamSubproblem::eval_Atilde(int j, const CVec& x) const {
    const Complex s0 = (d_rows.row(j) * slot(w_prev, j))(0);
    const Complex s = (d_rows.row(j) * slot(x, j))(0);
    return 2.0 * (std::conj(s0) * s).real() - std::norm(s0);
}

double BeamSubproblem::ul_lhs(bool secondary, const CVec& x) const {
    const double t = secondary ? t_su : t_pu;
    const double xi = secondary ? xi_su : xi_pu;
    double si = 0.0;
    for (int i = 0; i < users(); ++i) si += (s_t * slot(x, i)).squaredNorm();
    return xi - t * (si + sigma2);
}

double BeamSubproblem::surrogate_objective(const CVec& x) const {
    double v = 0.0;
    for (int j = 0; j < users(); ++j)
        v += (1.0 + gamma(j)) * (eval_Atilde(j, x) - lambda(j) * eval_C(j, x));
    return v;
}

double BeamSubproblem::surrogate_rate(const CVec& x) const {
    double v = 0.0;
    for (int j = 0; j < users(); ++j) {
        const double g = gamma(j);
        const double ratio = eval_Atilde(j, x) / eval_C(j, x);
        v += std::log2(1.0 + g) + ((1.0 + g) * ratio - g) / M_LN2;
    }
    return v;
}

CRow effective_dl_row(const ChannelSet& ch, const StarProfile& star, bool secondary, int k) {
    if (secondary)
        return ch.d3.col(k).adjoint() * star.phi(Side::PT).asDiagonal() * ch.d1 +
               ch.d_sd.col(k).adjoint();
    return ch.d2.col(k).adjoint() * star.phi(Side::PR).asDiagonal() * ch.d1 +
           ch.d.col(k).adjoint();
}

double ul_signal_power(const ChannelSet& ch, const StarProfile& star, bool secondary) {
    double xi = 0.0;
    if (secondary) {
        const CVec phi = star.phi(Side::ST);
        for (int k = 0; k < ch.h1.cols(); ++k)
            xi += (ch.h3 * phi.asDiagonal() * ch.h1.col(k) + ch.u_su.col(k)).squaredNorm();
    } else {
        const CVec phi = star.phi(Side::PR);
        for (int k = 0; k < ch.u1.cols(); ++k)
            xi += (ch.u2 * phi.asDiagonal() * ch.u1.col(k) + ch.u.col(k)).squaredNorm();
    }
    return ch.ul_power_watt * xi;
}

BeamSubproblem build_beam_subproblem(const ChannelSet& ch, const StarProfile& star,
                                     const BeamformerSet& beams_prev, const AuxState& aux,
                                     const ScenarioConfig& sc) {
    ch.check_dims(sc);
    if (star.elems() != sc.m_elems || beams_prev.n_tx() != sc.n_tx)
        throw std::invalid_argument("build_beam_subproblem: dimension mismatch");
    if (aux.gamma_pd.size() != sc.k_pd || aux.gamma_sd.size() != sc.k_sd)
        throw std::invalid_argument("build_beam_subproblem: aux not populated");

    BeamSubproblem sub;
    sub.n_tx = sc.n_tx;
    sub.k_pd = sc.k_pd;
    sub.k_sd = sc.k_sd;
    sub.sigma2 = sc.noise_watt();
    sub.p_budget = sc.budget_watt();
    sub.su_constraint_active = sc.architecture != Architecture::SingleStar;
    sub.t_pu = jensen_ul_threshold(sc.pu_threshold());
    sub.t_su = sub.su_constraint_active ? jensen_ul_threshold(sc.su_threshold()) : 0.0;
    sub.xi_pu = ul_signal_power(ch, star, false);
    sub.xi_su = ul_signal_power(ch, star, true);
    sub.s_t = ch.s + ch.u2 * star.phi(Side::PR).asDiagonal() * ch.d1;
    sub.w_prev = beams_prev.stacked();

    const int K = sub.users();
    sub.d_rows.resize(K, sc.n_tx);
    sub.ul_interference.setZero(K);
    sub.gamma.resize(K);
    sub.lambda.resize(K);
    const double p_ul = ch.ul_power_watt;
    const CVec phi_pr = star.phi(Side::PR);
    const CVec phi_pt = star.phi(Side::PT);
    const CVec phi_sr = star.phi(Side::SR);
    const CVec phi_st = star.phi(Side::ST);
    for (int k = 0; k < sc.k_pd; ++k) {
        sub.d_rows.row(k) = effective_dl_row(ch, star, false, k);
        double w = 0.0;
        for (int kk = 0; kk < sc.k_pu; ++kk)
            w += std::norm((ch.d2.col(k).adjoint() * phi_pr.asDiagonal() * ch.u1.col(kk))(0) +
                           ch.v_p(kk, k));
        for (int kk = 0; kk < sc.k_su; ++kk)
            w += std::norm((ch.h4.col(k).adjoint() * phi_st.asDiagonal() * ch.h1.col(kk))(0));
        sub.ul_interference(k) = p_ul * w;
        sub.gamma(k) = aux.gamma_pd(k);
        sub.lambda(k) = aux.lambda_pd(k);
    }
    for (int k = 0; k < sc.k_sd; ++k) {
        const int j = sc.k_pd + k;
        sub.d_rows.row(j) = effective_dl_row(ch, star, true, k);
        double w = 0.0;
        for (int kk = 0; kk < sc.k_pu; ++kk)
            w += std::norm((ch.d3.col(k).adjoint() * phi_pt.asDiagonal() * ch.u1.col(kk))(0));
        for (int kk = 0; kk < sc.k_su; ++kk)
            w += std::norm((ch.h2.col(k).adjoint() * phi_sr.asDiagonal() * ch.h1.col(kk))(0) +
                           ch.v_s(kk, k));
        sub.ul_interference(j) = p_ul * w;
        sub.gamma(j) = aux.gamma_sd(k);
        sub.lambda(j) = aux.lambda_sd(k);
    }
    return sub;
}

BeamformerSet solve_beam_subproblem(const BeamSubproblem& sub) {
    const int K = sub.users();
    const int n = sub.dim();
    // Solve in units of the power budget (w = s * v): the inner solver works
    // with absolute feasibility margins, so a vanishing budget must map onto a
    // unit ball rather than one the margin cannot resolve.
    const double s = std::sqrt(std::max(sub.p_budget, 0.0));
    if (s <= 0.0) return BeamformerSet::zero(sub.n_tx, sub.k_pd, sub.k_sd);

    ComplexQcqp prob;
    prob.n = n;
    CMat G = CMat::Zero(sub.n_tx, sub.n_tx);
    for (int j = 0; j < K; ++j)
        G += (1.0 + sub.gamma(j)) * sub.lambda(j) * sub.d_rows.row(j).adjoint() *
             sub.d_rows.row(j);
    prob.objective.Q = CMat::Zero(n, n);
    prob.objective.l = CRow::Zero(n);
    prob.objective.c = 0.0;
    for (int i = 0; i < K; ++i)
        prob.objective.Q.block(i * sub.n_tx, i * sub.n_tx, sub.n_tx, sub.n_tx) = s * s * G;
    for (int j = 0; j < K; ++j) {
        const Complex s0 = (sub.d_rows.row(j) * sub.slot(sub.w_prev, j))(0);
        prob.objective.l.segment(j * sub.n_tx, sub.n_tx) +=
            s * (1.0 + sub.gamma(j)) * std::conj(s0) * sub.d_rows.row(j);
        prob.objective.c += (1.0 + sub.gamma(j)) *
                            (-std::norm(s0) - sub.lambda(j) * (sub.ul_interference(j) + sub.sigma2));
    }

    { // sum-power budget, unit-ball in the scaled variable
        QuadraticForm power;
        power.Q = CMat::Identity(n, n);
        power.l = CRow::Zero(n);
        power.c = 1.0;
        prob.constraints.push_back(std::move(power));
    }
    const CMat sts = sub.s_t.adjoint() * sub.s_t;
    auto add_ul = [&](double t, double xi) {
        if (t <= 0.0) return;
        QuadraticForm con;
        con.Q = CMat::Zero(n, n);
        for (int i = 0; i < K; ++i) con.Q.block(i * sub.n_tx, i * sub.n_tx, sub.n_tx, sub.n_tx) =
            s * s * t * sts;
        con.l = CRow::Zero(n);
        con.c = xi - t * sub.sigma2;
        prob.constraints.push_back(std::move(con));
    };
    add_ul(sub.t_pu, sub.xi_pu);
    if (sub.su_constraint_active) add_ul(sub.t_su, sub.xi_su);

    const CVec warm = sub.w_prev / s;
    SolveResult res = solve(prob, &warm);
    res.x_star *= s;
    if (res.status == SolveStatus::Infeasible) {
        // Even the zero beamformer fails one of the UL constraints.
        const double pu_margin = sub.xi_pu - sub.t_pu * sub.sigma2;
        const double su_margin = sub.xi_su - sub.t_su * sub.sigma2;
        throw InfeasibleError(
            (!sub.su_constraint_active || pu_margin <= su_margin) ? "pu" : "su");
    }
    return BeamformerSet::from_stacked(res.x_star, sub.n_tx, sub.k_pd, sub.k_sd);
}

void align_ul_phases(const ChannelSet& ch, StarProfile& star, bool secondary) {
    const CMat& up = secondary ? ch.h3 : ch.u2;     // surface -> BS
    const CMat& down = secondary ? ch.h1 : ch.u1;   // users -> surface
    const Side side = secondary ? Side::ST : Side::PR;
    const int m = static_cast<int>(down.rows());
    const RVec& beta = star.b(side);

    CMat acc = CMat::Zero(m, m);
    for (int k = 0; k < down.cols(); ++k) {
        CMat c(up.rows(), m);
        for (int i = 0; i < m; ++i) c.col(i) = up.col(i) * (beta(i) * down(i, k));
        acc += c.adjoint() * c;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(acc);
    const CVec v = es.eigenvectors().col(m - 1); // largest eigenvalue last
    CVec& theta = star.t(side);
    for (int i = 0; i < m; ++i)
        if (std::abs(v(i)) > 1e-12) theta(i) = v(i) / std::abs(v(i));
}

BeamformerSet make_initial_beams(const ChannelSet& ch, StarProfile& star,
                                 const ScenarioConfig& sc) {
    const double sigma2 = sc.noise_watt();
    const double t_pu = jensen_ul_threshold(sc.pu_threshold());
    const double t_su = jensen_ul_threshold(sc.su_threshold());
    const bool su_active = sc.architecture != Architecture::SingleStar && t_su > 0.0;

    auto ensure_group = [&](bool secondary) {
        const double t = secondary ? t_su : t_pu;
        if (t <= 0.0) return;
        double xi = ul_signal_power(ch, star, secondary);
        if (xi < 2.0 * t * sigma2) { // too close to the noise floor: re-point the surface
            align_ul_phases(ch, star, secondary);
            xi = ul_signal_power(ch, star, secondary);
        }
        if (xi <= t * sigma2) throw InfeasibleError(secondary ? "su" : "pu");
    };
    if (t_pu > 0.0) ensure_group(false);
    if (su_active) ensure_group(true);

    const int K = sc.total_dl_users();
    const double p_user = dbm_to_watt(sc.bs_power_dbm) / K;
    BeamformerSet beams = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
    for (int k = 0; k < sc.k_pd; ++k) {
        const CRow d = effective_dl_row(ch, star, false, k);
        if (d.norm() > 0.0) beams.w_pd.col(k) = std::sqrt(p_user) * d.adjoint() / d.norm();
    }
    for (int k = 0; k < sc.k_sd; ++k) {
        const CRow d = effective_dl_row(ch, star, true, k);
        if (d.norm() > 0.0) beams.w_sd.col(k) = std::sqrt(p_user) * d.adjoint() / d.norm();
    }

    const CMat s_t = ch.s + ch.u2 * star.phi(Side::PR).asDiagonal() * ch.d1;
    double si = (s_t * beams.w_pd).squaredNorm() + (s_t * beams.w_sd).squaredNorm();
    double alpha_sq = 1.0;
    const double used = beams.total_power();
    if (used > sc.budget_watt()) alpha_sq = sc.budget_watt() / used;
    auto cap_for = [&](bool secondary) {
        const double t = secondary ? t_su : t_pu;
        if (t <= 0.0 || si <= 0.0) return;
        const double xi = ul_signal_power(ch, star, secondary);
        const double cap = 0.9 * (xi - t * sigma2) / (t * si);
        alpha_sq = std::min(alpha_sq, std::max(cap, 0.0));
    };
    cap_for(false);
    if (su_active) cap_for(true);

    beams.w_pd *= std::sqrt(alpha_sq);
    beams.w_sd *= std::sqrt(alpha_sq);
    return beams;
}

} // namespace dstar

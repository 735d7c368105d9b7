#include "dstar/star_opt.hpp"

#include "dstar/cascade.hpp"
#include "dstar/qcqp.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace dstar {

namespace {

double quad_side_value(const CMat& Q, const CRow& l, const CVec& phi) {
    return -(phi.adjoint() * Q * phi)(0).real() + 2.0 * (l * phi)(0).real();
}

/// Replaces negative eigenvalues with zero so dual-weighted quadratics stay
/// convex for the inner solver.
RMat psd_floor(const RMat& s) {
    Eigen::SelfAdjointEigenSolver<RMat> es(s);
    if (es.eigenvalues().minCoeff() >= 0.0) return s;
    RVec ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

RVec sqrt1m(const RVec& v) { // sqrt(1 - v^2) with clamping into [0,1]
    return (1.0 - v.cwiseMin(1.0).cwiseMax(0.0).array().square()).sqrt().matrix();
}

/// Common magnitude of the surrogate-objective coefficients. The physical
/// quadratics live on a (channel gain)^2 * power scale many orders below 1;
/// the penalty weights (rho, kappa) are calibrated against a unit-scale
/// objective, so both solvers divide their objective terms by this.
double objective_scale(const StarQuadratics& quad) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (quad.omega[i].size()) s = std::max(s, quad.omega[i].cwiseAbs().maxCoeff());
        if (quad.lin[i].size()) s = std::max(s, quad.lin[i].cwiseAbs().maxCoeff());
    }
    return s > 0.0 ? s : 1.0;
}

} // namespace

double StarQuadratics::objective(const StarProfile& star) const {
    double v = obj_const;
    for (auto s : kSides) {
        const CVec phi = star.phi(s);
        v += quad_side_value(omega[side_index(s)], lin[side_index(s)], phi);
    }
    return v;
}

double StarQuadratics::pu_value(const CVec& phi_pr) const {
    return -(phi_pr.adjoint() * upsilon1 * phi_pr)(0).real() + 2.0 * (g1 * phi_pr)(0).real() +
           c1;
}

double StarQuadratics::su_value(const CVec& phi_pr, const CVec& phi_st) const {
    return -(phi_pr.adjoint() * upsilon2 * phi_pr)(0).real() + 2.0 * (g2 * phi_pr)(0).real() +
           2.0 * (g3 * phi_st)(0).real() + c2;
}

RMat restrict_beta(const CMat& omega, const CVec& theta0) {
    return (theta0.conjugate().asDiagonal() * omega * theta0.asDiagonal()).real();
}

RRow restrict_beta_row(const CRow& lin, const CVec& theta0) {
    return (lin * theta0.asDiagonal()).real();
}

CMat restrict_theta(const CMat& omega, const RVec& beta) {
    const CVec b = beta.cast<Complex>();
    return b.conjugate().asDiagonal() * omega * b.asDiagonal();
}

CRow restrict_theta_row(const CRow& lin, const RVec& beta) {
    return lin * beta.cast<Complex>().asDiagonal();
}

StarQuadratics assemble_quadratics(const ChannelSet& ch, const StarProfile& star_prev,
                                   const BeamformerSet& beams, const AuxState& aux,
                                   const ScenarioConfig& sc) {
    ch.check_dims(sc);
    if (star_prev.elems() != sc.m_elems || beams.n_tx() != sc.n_tx)
        throw std::invalid_argument("assemble_quadratics: dimension mismatch");
    const int m = sc.m_elems;
    const double sqrt_p = std::sqrt(ch.ul_power_watt);

    StarQuadratics q;
    q.m = m;
    for (int i = 0; i < 4; ++i) {
        q.omega[i] = CMat::Zero(m, m);
        q.lin[i] = CRow::Zero(m);
    }
    q.sigma2 = sc.noise_watt();
    q.t_pu = jensen_ul_threshold(sc.pu_threshold());
    q.t_su = sc.architecture != Architecture::SingleStar
                 ? jensen_ul_threshold(sc.su_threshold())
                 : 0.0;

    const CVec phi0_pr = star_prev.phi(Side::PR);
    const CVec phi0_pt = star_prev.phi(Side::PT);
    const CVec phi0_st = star_prev.phi(Side::ST);

    auto elem_row = [&](const CVec& recv, const CVec& inc) -> CRow {
        return recv.conjugate().cwiseProduct(inc).transpose();
    };

    // --- objective: primary DL users (variable sides PR, ST) ---
    CMat& om_pr = q.omega[side_index(Side::PR)];
    CMat& om_pt = q.omega[side_index(Side::PT)];
    CMat& om_sr = q.omega[side_index(Side::SR)];
    CMat& om_st = q.omega[side_index(Side::ST)];
    for (int k = 0; k < sc.k_pd; ++k) {
        const double wgt = 1.0 + aux.gamma_pd(k);
        const double lam = aux.lambda_pd(k);
        CRow l_c = CRow::Zero(m);
        double const_c = q.sigma2;
        CMat quad = CMat::Zero(m, m);
        CRow sig_row;
        Complex sig_const;
        for (int kk = 0; kk < sc.k_pd; ++kk) {
            const CRow row = cascade_vector(ch.d2.col(k), ch.d1, beams.w_pd.col(kk));
            const Complex d = (ch.d.col(k).adjoint() * beams.w_pd.col(kk))(0);
            quad += row.adjoint() * row;
            l_c += std::conj(d) * row;
            const_c += std::norm(d);
            if (kk == k) {
                sig_row = row;
                sig_const = d;
            }
        }
        for (int kk = 0; kk < sc.k_sd; ++kk) {
            const CRow row = cascade_vector(ch.d2.col(k), ch.d1, beams.w_sd.col(kk));
            const Complex d = (ch.d.col(k).adjoint() * beams.w_sd.col(kk))(0);
            quad += row.adjoint() * row;
            l_c += std::conj(d) * row;
            const_c += std::norm(d);
        }
        for (int kk = 0; kk < sc.k_pu; ++kk) {
            const CRow row = sqrt_p * elem_row(ch.d2.col(k), ch.u1.col(kk));
            const Complex d = sqrt_p * ch.v_p(kk, k);
            quad += row.adjoint() * row;
            l_c += std::conj(d) * row;
            const_c += std::norm(d);
        }
        om_pr += wgt * lam * quad;
        for (int kk = 0; kk < sc.k_su; ++kk) { // interference via the ST side
            const CRow row = sqrt_p * elem_row(ch.h4.col(k), ch.h1.col(kk));
            om_st += wgt * lam * row.adjoint() * row;
        }
        const Complex s0 = (sig_row * phi0_pr)(0) + sig_const;
        q.lin[side_index(Side::PR)] += wgt * (std::conj(s0) * sig_row - lam * l_c);
        q.obj_const += wgt * (std::norm(sig_const) -
                              (phi0_pr.adjoint() * sig_row.adjoint() * sig_row * phi0_pr)(0)
                                  .real() -
                              lam * const_c);
    }

    // --- objective: secondary DL users (variable sides PT, SR) ---
    for (int k = 0; k < sc.k_sd; ++k) {
        const double wgt = 1.0 + aux.gamma_sd(k);
        const double lam = aux.lambda_sd(k);
        CRow l_c = CRow::Zero(m);
        CRow l_sr = CRow::Zero(m);
        double const_c = q.sigma2;
        CMat quad = CMat::Zero(m, m);
        CRow sig_row;
        Complex sig_const;
        for (int kk = 0; kk < sc.k_sd; ++kk) {
            const CRow row = cascade_vector(ch.d3.col(k), ch.d1, beams.w_sd.col(kk));
            const Complex d = (ch.d_sd.col(k).adjoint() * beams.w_sd.col(kk))(0);
            quad += row.adjoint() * row;
            l_c += std::conj(d) * row;
            const_c += std::norm(d);
            if (kk == k) {
                sig_row = row;
                sig_const = d;
            }
        }
        for (int kk = 0; kk < sc.k_pd; ++kk) {
            const CRow row = cascade_vector(ch.d3.col(k), ch.d1, beams.w_pd.col(kk));
            const Complex d = (ch.d_sd.col(k).adjoint() * beams.w_pd.col(kk))(0);
            quad += row.adjoint() * row;
            l_c += std::conj(d) * row;
            const_c += std::norm(d);
        }
        for (int kk = 0; kk < sc.k_pu; ++kk) {
            const CRow row = sqrt_p * elem_row(ch.d3.col(k), ch.u1.col(kk));
            quad += row.adjoint() * row;
        }
        om_pt += wgt * lam * quad;
        for (int kk = 0; kk < sc.k_su; ++kk) { // interference via the SR side
            const CRow row = sqrt_p * elem_row(ch.h2.col(k), ch.h1.col(kk));
            const Complex d = sqrt_p * ch.v_s(kk, k);
            om_sr += wgt * lam * row.adjoint() * row;
            l_sr += std::conj(d) * row;
            const_c += std::norm(d);
        }
        const Complex s0 = (sig_row * phi0_pt)(0) + sig_const;
        q.lin[side_index(Side::PT)] += wgt * (std::conj(s0) * sig_row - lam * l_c);
        q.lin[side_index(Side::SR)] += wgt * (-lam) * l_sr;
        q.obj_const += wgt * (std::norm(sig_const) -
                              (phi0_pt.adjoint() * sig_row.adjoint() * sig_row * phi0_pt)(0)
                                  .real() -
                              lam * const_c);
    }

    // --- UL protection constraints ---
    CMat upsilon_base = CMat::Zero(m, m); // SI leakage via the PR side
    CRow si_rows = CRow::Zero(m);
    double si_norms = 0.0;
    const int slots = beams.slots();
    for (int i = 0; i < slots; ++i) {
        const CVec w = beams.slot(i);
        const CMat psi = cascade_matrix(ch.u2, ch.d1, w);
        const CVec s = ch.s * w;
        upsilon_base += psi.adjoint() * psi;
        si_rows += s.adjoint() * psi;
        si_norms += s.squaredNorm();
    }
    q.upsilon1 = q.t_pu * upsilon_base;
    q.upsilon2 = q.t_su * upsilon_base;
    q.g1 = -q.t_pu * si_rows;
    q.g2 = -q.t_su * si_rows;
    q.g3 = CRow::Zero(m);
    q.c1 = -q.t_pu * (si_norms + q.sigma2);
    q.c2 = -q.t_su * (si_norms + q.sigma2);
    for (int k = 0; k < sc.k_pu; ++k) {
        CMat psi(sc.n_rx, m);
        for (int i = 0; i < m; ++i) psi.col(i) = sqrt_p * ch.u2.col(i) * ch.u1(i, k);
        const CVec u = sqrt_p * ch.u.col(k);
        q.g1 += phi0_pr.adjoint() * psi.adjoint() * psi + u.adjoint() * psi;
        q.c1 += -(phi0_pr.adjoint() * psi.adjoint() * psi * phi0_pr)(0).real() +
                u.squaredNorm();
    }
    for (int k = 0; k < sc.k_su; ++k) {
        CMat psi(sc.n_rx, m);
        for (int i = 0; i < m; ++i) psi.col(i) = sqrt_p * ch.h3.col(i) * ch.h1(i, k);
        const CVec u = sqrt_p * ch.u_su.col(k);
        q.g3 += phi0_st.adjoint() * psi.adjoint() * psi + u.adjoint() * psi;
        q.c2 += -(phi0_st.adjoint() * psi.adjoint() * psi * phi0_st)(0).real() +
                u.squaredNorm();
    }
    return q;
}

AdmmState AdmmState::init(const StarProfile& star) {
    AdmmState st;
    st.z_pt = star.b(Side::PT);
    st.z_st = star.b(Side::ST);
    st.u = RVec::Zero(star.elems());
    st.r = RVec::Zero(star.elems());
    return st;
}

namespace {

/// Solves max -b^T Q b + q^T b + (constraints, box [0,1]); returns false and
/// leaves `out` untouched when the sub-problem is infeasible.
bool solve_amp_block(const RMat& Q, const RVec& lin, std::vector<RealQuadratic> cons,
                     const RVec& warm, RVec& out) {
    const int m = static_cast<int>(Q.rows());
    ConvexQcqp prob;
    prob.n = m;
    prob.objective.Q = psd_floor(Q);
    prob.objective.q = lin;
    prob.constraints = std::move(cons);
    prob.lb = RVec::Zero(m);
    prob.ub = RVec::Ones(m);
    RealSolveResult res = solve(prob, &warm);
    if (res.status == SolveStatus::Infeasible) return false;
    out = res.x.cwiseMin(1.0).cwiseMax(0.0);
    return true;
}

} // namespace

void solve_amplitudes_admm(const StarQuadratics& quad, StarProfile& star, AdmmState& state,
                           const ScenarioConfig& sc) {
    const int m = quad.m;
    const bool secondary_active = sc.architecture != Architecture::SingleStar;

    // The penalty weights are calibrated against a unit-scale objective, so
    // the normalization must track the current quadratics (they grow with the
    // beam power across outer iterations). The duals live in scaled units and
    // are carried over by re-expressing them in the new scale.
    const double scale = objective_scale(quad);
    if (state.scale > 0.0 && state.scale != scale) {
        state.u *= state.scale / scale;
        state.r *= state.scale / scale;
    }
    state.scale = scale;
    const RMat om1 = restrict_beta(quad.omega[side_index(Side::PR)], star.t(Side::PR)) / scale;
    const RMat om3 = restrict_beta(quad.omega[side_index(Side::PT)], star.t(Side::PT)) / scale;
    const RMat om4 = restrict_beta(quad.omega[side_index(Side::SR)], star.t(Side::SR)) / scale;
    const RMat om2 = restrict_beta(quad.omega[side_index(Side::ST)], star.t(Side::ST)) / scale;
    const RRow f1 =
        restrict_beta_row(quad.lin[side_index(Side::PR)], star.t(Side::PR)) / scale;
    const RRow f2 =
        restrict_beta_row(quad.lin[side_index(Side::PT)], star.t(Side::PT)) / scale;
    const RRow f3 =
        restrict_beta_row(quad.lin[side_index(Side::SR)], star.t(Side::SR)) / scale;
    const RMat ups1 = restrict_beta(quad.upsilon1, star.t(Side::PR));
    const RMat ups2 = restrict_beta(quad.upsilon2, star.t(Side::PR));
    const RRow g1b = restrict_beta_row(quad.g1, star.t(Side::PR));
    const RRow g2b = restrict_beta_row(quad.g2, star.t(Side::PR));
    const RRow g3b = restrict_beta_row(quad.g3, star.t(Side::ST));

    // Reflection amplitudes of the primary surface, under both UL constraints.
    {
        std::vector<RealQuadratic> cons;
        if (quad.t_pu > 0.0) {
            RealQuadratic c;
            c.Q = ups1;
            c.q = 2.0 * g1b.transpose();
            c.c = quad.c1;
            cons.push_back(std::move(c));
        }
        if (quad.t_su > 0.0) {
            RealQuadratic c;
            c.Q = ups2;
            c.q = 2.0 * g2b.transpose();
            c.c = quad.c2 + 2.0 * g3b.dot(star.b(Side::ST));
            cons.push_back(std::move(c));
        }
        const RVec d = sqrt1m(state.z_pt);
        // rho-weighted proximal anchor at the incumbent amplitudes: damps the
        // step so successive outer iterations do not overshoot each other
        RMat Q = om1 + RMat(state.u.asDiagonal()) + 2.0 * sc.rho1 * RMat::Identity(m, m);
        RVec lin = 2.0 * f1.transpose() + 2.0 * sc.rho1 * (d + star.b(Side::PR));
        solve_amp_block(Q, lin, std::move(cons), star.b(Side::PR), star.b(Side::PR));
    }
    // Auxiliary transmission amplitudes of the primary surface.
    {
        const RVec d = sqrt1m(star.b(Side::PR));
        RMat Q = om3 + RMat(state.u.asDiagonal()) + 2.0 * sc.rho1 * RMat::Identity(m, m);
        RVec lin = 2.0 * f2.transpose() + 2.0 * sc.rho1 * (d + state.z_pt);
        solve_amp_block(Q, lin, {}, state.z_pt, state.z_pt);
        state.u += sc.rho1 * (state.z_pt.array().square() -
                              (1.0 - star.b(Side::PR).array().square()))
                                 .matrix();
    }
    if (secondary_active) {
        { // reflection amplitudes of the secondary surface
            const RVec d = sqrt1m(state.z_st);
            RMat Q = om4 + RMat(state.r.asDiagonal()) + 2.0 * sc.rho2 * RMat::Identity(m, m);
            RVec lin = 2.0 * f3.transpose() + 2.0 * sc.rho2 * (d + star.b(Side::SR));
            solve_amp_block(Q, lin, {}, star.b(Side::SR), star.b(Side::SR));
        }
        { // auxiliary transmission amplitudes, secondary UL constraint attached
            std::vector<RealQuadratic> cons;
            if (quad.t_su > 0.0) {
                const RVec bpr = star.b(Side::PR);
                RealQuadratic c;
                c.Q = RMat::Zero(m, m);
                c.q = 2.0 * g3b.transpose();
                c.c = quad.c2 - bpr.dot(ups2 * bpr) + 2.0 * g2b.dot(bpr);
                cons.push_back(std::move(c));
            }
            const RVec d = sqrt1m(star.b(Side::SR));
            RMat Q = om2 + RMat(state.r.asDiagonal()) + 2.0 * sc.rho2 * RMat::Identity(m, m);
            RVec lin = 2.0 * sc.rho2 * (d + state.z_st);
            solve_amp_block(Q, lin, std::move(cons), state.z_st, state.z_st);
            state.r += sc.rho2 * (state.z_st.array().square() -
                                  (1.0 - star.b(Side::SR).array().square()))
                                     .matrix();
        }
    }

    star.b(Side::PT) = sqrt1m(star.b(Side::PR));
    if (secondary_active) star.b(Side::ST) = sqrt1m(star.b(Side::SR));
}

namespace {

/// Block data for one PCCP convex solve over n_sides complex phase vectors
/// lifted to reals, with one modulus slack per element.
struct PhaseBlock {
    std::vector<Side> sides;
    std::vector<const CMat*> omegas; // restricted, per side
    std::vector<CRow> lins;          // restricted, per side
};

// Layout: [Re th_0; Im th_0; Re th_1; Im th_1; ...; slacks].
int re_base(int s, int m) { return 2 * m * s; }
int im_base(int s, int m) { return 2 * m * s + m; }

bool solve_phase_block(const PhaseBlock& blk, const StarQuadratics& quad,
                       const StarProfile& star, double kappa,
                       std::vector<RealQuadratic> extra_cons, StarProfile& out, RVec* b_out) {
    const int m = quad.m;
    const int ns = static_cast<int>(blk.sides.size());
    const int nb = ns * m;           // slack count
    const int n = 2 * m * ns + nb;   // total real dimension
    const int b_base = 2 * m * ns;

    ConvexQcqp prob;
    prob.n = n;
    prob.objective.Q = RMat::Zero(n, n);
    prob.objective.q = RVec::Zero(n);
    for (int s = 0; s < ns; ++s) {
        const CMat& om = *blk.omegas[s];
        prob.objective.Q.block(re_base(s, m), re_base(s, m), m, m) = om.real();
        prob.objective.Q.block(im_base(s, m), im_base(s, m), m, m) = om.real();
        prob.objective.Q.block(re_base(s, m), im_base(s, m), m, m) = -om.imag();
        prob.objective.Q.block(im_base(s, m), re_base(s, m), m, m) = om.imag();
        prob.objective.q.segment(re_base(s, m), m) = 2.0 * blk.lins[s].real().transpose();
        prob.objective.q.segment(im_base(s, m), m) = -2.0 * blk.lins[s].imag().transpose();
    }
    prob.objective.q.segment(b_base, nb).setConstant(-kappa);

    prob.lb = RVec::Constant(n, -2.0);
    prob.ub = RVec::Constant(n, 2.0);
    prob.lb.segment(b_base, nb).setZero();
    prob.ub.segment(b_base, nb).setConstant(4.0);

    RVec warm(n);
    for (int s = 0; s < ns; ++s) {
        const CVec& th = star.t(blk.sides[s]);
        warm.segment(re_base(s, m), m) = th.real();
        warm.segment(im_base(s, m), m) = th.imag();
    }
    warm.segment(b_base, nb).setConstant(1e-3);

    for (int s = 0; s < ns; ++s) {
        const CVec& th0 = star.t(blk.sides[s]);
        for (int i = 0; i < m; ++i) {
            const int bi = b_base + s * m + i;
            { // linearized lower modulus bound: Re{th0* th} >= 1 - b
                RealQuadratic c;
                c.support = {re_base(s, m) + i, im_base(s, m) + i, bi};
                c.Q = RMat::Zero(3, 3);
                c.q = RVec(3);
                c.q << th0(i).real(), th0(i).imag(), 1.0;
                c.c = -1.0;
                extra_cons.push_back(std::move(c));
            }
            { // upper modulus bound: |th|^2 <= 1 + b
                RealQuadratic c;
                c.support = {re_base(s, m) + i, im_base(s, m) + i, bi};
                c.Q = RMat::Zero(3, 3);
                c.Q(0, 0) = c.Q(1, 1) = 1.0;
                c.q = RVec::Zero(3);
                c.q(2) = 1.0;
                c.c = 1.0;
                extra_cons.push_back(std::move(c));
            }
        }
    }
    prob.constraints = std::move(extra_cons);

    RealSolveResult res = solve(prob, &warm);
    if (res.status == SolveStatus::Infeasible) return false;
    for (int s = 0; s < ns; ++s) {
        CVec th(m);
        th.real() = res.x.segment(re_base(s, m), m);
        th.imag() = res.x.segment(im_base(s, m), m);
        for (int i = 0; i < m; ++i) { // exact unit-modulus projection
            const double a = std::abs(th(i));
            th(i) = a > 1e-12 ? th(i) / a : Complex(1.0, 0.0);
        }
        out.t(blk.sides[s]) = th;
    }
    if (b_out) *b_out = res.x.segment(b_base, nb);
    return true;
}

} // namespace

void solve_phases_pccp(const StarQuadratics& quad, StarProfile& star, PccpState& state,
                       const ScenarioConfig& sc) {
    const int m = quad.m;
    const bool secondary_active = sc.architecture != Architecture::SingleStar;

    // Track the current quadratic magnitude so kappa stays calibrated against
    // a unit-scale objective (see the amplitude solver).
    state.scale = objective_scale(quad);
    const double scale = state.scale;
    const CMat om_pr =
        restrict_theta(quad.omega[side_index(Side::PR)], star.b(Side::PR)) / scale;
    const CMat om_pt =
        restrict_theta(quad.omega[side_index(Side::PT)], star.b(Side::PT)) / scale;
    const CMat om_sr =
        restrict_theta(quad.omega[side_index(Side::SR)], star.b(Side::SR)) / scale;
    const CMat om_st =
        restrict_theta(quad.omega[side_index(Side::ST)], star.b(Side::ST)) / scale;
    const CRow f1 =
        restrict_theta_row(quad.lin[side_index(Side::PR)], star.b(Side::PR)) / scale;
    const CRow f2 =
        restrict_theta_row(quad.lin[side_index(Side::PT)], star.b(Side::PT)) / scale;
    const CRow f3 =
        restrict_theta_row(quad.lin[side_index(Side::SR)], star.b(Side::SR)) / scale;
    const CRow f4 = CRow::Zero(m);

    // Joint (PR, ST) block carrying both UL constraints.
    {
        PhaseBlock blk;
        blk.sides = {Side::PR, Side::ST};
        blk.omegas = {&om_pr, &om_st};
        blk.lins = {f1, f4};
        std::vector<RealQuadratic> cons;
        const CMat ups1 = restrict_theta(quad.upsilon1, star.b(Side::PR));
        const CMat ups2 = restrict_theta(quad.upsilon2, star.b(Side::PR));
        const CRow g1t = restrict_theta_row(quad.g1, star.b(Side::PR));
        const CRow g2t = restrict_theta_row(quad.g2, star.b(Side::PR));
        const CRow g3t = restrict_theta_row(quad.g3, star.b(Side::ST));
        const int n = 4 * m + 2 * m;
        auto lift_pair = [&](const CMat& q_pr, const CRow& l_pr, const CRow& l_st,
                             double c) {
            RealQuadratic con;
            con.Q = RMat::Zero(n, n);
            con.Q.block(0, 0, m, m) = q_pr.real();
            con.Q.block(m, m, m, m) = q_pr.real();
            con.Q.block(0, m, m, m) = -q_pr.imag();
            con.Q.block(m, 0, m, m) = q_pr.imag();
            con.q = RVec::Zero(n);
            con.q.segment(0, m) = 2.0 * l_pr.real().transpose();
            con.q.segment(m, m) = -2.0 * l_pr.imag().transpose();
            con.q.segment(2 * m, m) = 2.0 * l_st.real().transpose();
            con.q.segment(3 * m, m) = -2.0 * l_st.imag().transpose();
            con.c = c;
            return con;
        };
        if (quad.t_pu > 0.0) cons.push_back(lift_pair(ups1, g1t, CRow::Zero(m), quad.c1));
        if (quad.t_su > 0.0 && secondary_active)
            cons.push_back(lift_pair(ups2, g2t, g3t, quad.c2));
        RVec b;
        if (solve_phase_block(blk, quad, star, state.kappa, std::move(cons), star, &b))
            state.b = b;
    }
    { // PT alone
        PhaseBlock blk;
        blk.sides = {Side::PT};
        blk.omegas = {&om_pt};
        blk.lins = {f2};
        solve_phase_block(blk, quad, star, state.kappa, {}, star, nullptr);
    }
    if (secondary_active) { // SR alone
        PhaseBlock blk;
        blk.sides = {Side::SR};
        blk.omegas = {&om_sr};
        blk.lins = {f3};
        solve_phase_block(blk, quad, star, state.kappa, {}, star, nullptr);
    }
    state.kappa = std::min(2.0 * state.kappa, 1e3);
}

StarProfile couple_phases(const StarProfile& star, const StarQuadratics& quad) {
    StarProfile out = star;
    const Complex j(0.0, 1.0);
    for (auto [t, r] : {std::pair{Side::PT, Side::PR}, std::pair{Side::ST, Side::SR}}) {
        for (int i = 0; i < out.elems(); ++i) {
            const Complex th_t = out.t(t)(i);
            const Complex th_r = out.t(r)(i);
            const std::array<std::pair<Complex, Complex>, 4> cands{
                std::pair{th_t, j * th_t}, std::pair{th_t, -j * th_t},
                std::pair{j * th_r, th_r}, std::pair{-j * th_r, th_r}};
            Complex best_t = th_t, best_r = j * th_t;
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& [ct, cr] : cands) {
                out.t(t)(i) = ct;
                out.t(r)(i) = cr;
                const double v = quad.objective(out);
                if (v > best) {
                    best = v;
                    best_t = ct;
                    best_r = cr;
                }
            }
            out.t(t)(i) = best_t;
            out.t(r)(i) = best_r;
        }
    }
    return out;
}

StarProfile quantize_profile(const StarProfile& star, int n_amp_bits, int n_phase_bits) {
    if (n_amp_bits < 1 || n_amp_bits > 16 || n_phase_bits < 1 || n_phase_bits > 16)
        throw std::invalid_argument("quantize_profile: bit counts must be in [1,16]");
    StarProfile out = star;
    const double amp_levels = std::exp2(n_amp_bits);
    const double phase_levels = std::exp2(n_phase_bits);
    auto quant_amp = [&](double b) {
        return std::min(std::floor(b * amp_levels + 1e-9) / amp_levels, 1.0);
    };
    auto quant_theta = [&](Complex t) {
        double ang = std::atan2(t.imag(), t.real());
        if (ang <= 0.0) ang += 2.0 * M_PI; // canonical range (0, 2pi]
        const double q =
            std::floor(ang / (2.0 * M_PI) * phase_levels + 1e-9) * 2.0 * M_PI / phase_levels;
        return std::polar(1.0, q);
    };
    for (auto s : kSides)
        for (int i = 0; i < out.elems(); ++i) out.t(s)(i) = quant_theta(out.t(s)(i));
    for (int i = 0; i < out.elems(); ++i) {
        out.b(Side::PR)(i) = quant_amp(out.b(Side::PR)(i));
        out.b(Side::SR)(i) = quant_amp(out.b(Side::SR)(i));
    }
    out.b(Side::PT) = (1.0 - out.b(Side::PR).array().square()).sqrt().matrix();
    out.b(Side::ST) = (1.0 - out.b(Side::SR).array().square()).sqrt().matrix();
    return out;
}

} // namespace dstar

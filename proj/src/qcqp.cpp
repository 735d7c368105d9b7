#include "dstar/qcqp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dstar {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::MaxIter: return "max_iter";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

double RealQuadratic::value(const RVec& x) const {
    if (support.empty()) return -(x.dot(Q * x)) + q.dot(x) + c;
    RVec xs(support.size());
    for (size_t i = 0; i < support.size(); ++i) xs(i) = x(support[i]);
    return -(xs.dot(Q * xs)) + q.dot(xs) + c;
}

void ConvexQcqp::check() const {
    auto psd = [](const RMat& m) {
        if (m.size() == 0) return true;
        Eigen::SelfAdjointEigenSolver<RMat> es(m, Eigen::EigenvaluesOnly);
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        return es.eigenvalues().minCoeff() >= -1e-9 * scale;
    };
    if (!psd(objective.Q)) throw std::invalid_argument("qcqp: objective Q not PSD");
    for (const auto& con : constraints)
        if (!psd(con.Q)) throw std::invalid_argument("qcqp: constraint Q not PSD");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimization-side constraint h(x) = x^T Q x - q^T x - c <= 0, scaled.
struct Term {
    RMat Q;
    RVec q;
    double c = 0.0;
    std::vector<int> sup; // empty => dense
};

double term_value(const Term& t, const RVec& x) {
    if (t.sup.empty()) return x.dot(t.Q * x) - t.q.dot(x) - t.c;
    RVec xs(t.sup.size());
    for (size_t i = 0; i < t.sup.size(); ++i) xs(i) = x(t.sup[i]);
    return xs.dot(t.Q * xs) - t.q.dot(xs) - t.c;
}

// grad over the term's own coordinates (support order, or full when dense)
RVec term_grad(const Term& t, const RVec& x) {
    if (t.sup.empty()) return 2.0 * (t.Q * x) - t.q;
    RVec xs(t.sup.size());
    for (size_t i = 0; i < t.sup.size(); ++i) xs(i) = x(t.sup[i]);
    return 2.0 * (t.Q * xs) - t.q;
}

struct BarrierProblem {
    int n = 0;
    RMat Q; // minimization objective x^T Q x - q^T x
    RVec q;
    std::vector<Term> cons;
    RVec lb, ub; // length n, +-inf allowed

    int barrier_count() const {
        int m = static_cast<int>(cons.size());
        for (int i = 0; i < n; ++i) {
            if (lb(i) > -kInf) ++m;
            if (ub(i) < kInf) ++m;
        }
        return m;
    }

    bool strictly_feasible(const RVec& x, double margin) const {
        for (const auto& t : cons)
            if (term_value(t, x) > -margin) return false;
        for (int i = 0; i < n; ++i)
            if (x(i) <= lb(i) + 0.0 || x(i) >= ub(i) - 0.0) return false;
        return true;
    }

    double f0(const RVec& x) const { return x.dot(Q * x) - q.dot(x); }

    /// t*f0 + barrier; +inf outside the domain.
    double merit(double t, const RVec& x) const {
        double v = t * f0(x);
        for (const auto& con : cons) {
            const double h = term_value(con, x);
            if (h >= 0.0) return kInf;
            v -= std::log(-h);
        }
        for (int i = 0; i < n; ++i) {
            if (lb(i) > -kInf) {
                if (x(i) <= lb(i)) return kInf;
                v -= std::log(x(i) - lb(i));
            }
            if (ub(i) < kInf) {
                if (x(i) >= ub(i)) return kInf;
                v -= std::log(ub(i) - x(i));
            }
        }
        return v;
    }
};

/// Damped Newton centering for min t*f0(x) + barrier(x); x must start strictly
/// feasible. Returns the final gradient norm of the centered objective.
double center(const BarrierProblem& p, double t, RVec& x, int max_newton = 60) {
    RVec g(p.n);
    RMat H(p.n, p.n);
    double gnorm = kInf;
    for (int it = 0; it < max_newton; ++it) {
        g = t * (2.0 * (p.Q * x) - p.q);
        H = 2.0 * t * p.Q;
        for (const auto& con : p.cons) {
            const double h = term_value(con, x);
            const RVec gs = term_grad(con, x);
            const double inv = 1.0 / (-h);
            if (con.sup.empty()) {
                g += inv * gs;
                H += (2.0 * inv) * con.Q;
                H.noalias() += (inv * inv) * (gs * gs.transpose());
            } else {
                const int ns = static_cast<int>(con.sup.size());
                for (int a = 0; a < ns; ++a) {
                    g(con.sup[a]) += inv * gs(a);
                    for (int b = 0; b < ns; ++b)
                        H(con.sup[a], con.sup[b]) +=
                            2.0 * inv * con.Q(a, b) + inv * inv * gs(a) * gs(b);
                }
            }
        }
        for (int i = 0; i < p.n; ++i) {
            if (p.lb(i) > -kInf) {
                const double d = x(i) - p.lb(i);
                g(i) -= 1.0 / d;
                H(i, i) += 1.0 / (d * d);
            }
            if (p.ub(i) < kInf) {
                const double d = p.ub(i) - x(i);
                g(i) += 1.0 / d;
                H(i, i) += 1.0 / (d * d);
            }
        }
        gnorm = g.norm();

        Eigen::LDLT<RMat> ldlt(H);
        RVec step = -ldlt.solve(g);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            H.diagonal().array() += 1e-8 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
            step = -RMat(H).ldlt().solve(g);
            if (!step.allFinite()) return gnorm;
        }
        const double decrement = -g.dot(step);
        if (decrement <= 0.0) return gnorm;
        if (decrement * 0.5 <= 1e-10) {
            // Converged; one last cheap refinement of the gradient report.
            return gnorm;
        }
        const double base = p.merit(t, x);
        double alpha = 1.0;
        RVec cand = x + step;
        int backtracks = 0;
        while (p.merit(t, cand) > base - 1e-4 * alpha * decrement && backtracks < 60) {
            alpha *= 0.5;
            cand = x + alpha * step;
            ++backtracks;
        }
        if (backtracks >= 60) return gnorm;
        x = cand;
    }
    return gnorm;
}

struct BarrierOutcome {
    RVec x;
    double stationarity = kInf;
    bool converged = false;
};

BarrierOutcome barrier_solve(const BarrierProblem& p, RVec x) {
    const int m = std::max(1, p.barrier_count());
    double t = 1.0;
    const double mu = 40.0;
    double gnorm = kInf;
    while (m / t > 1e-9) {
        gnorm = center(p, t, x);
        t *= mu;
    }
    gnorm = center(p, t / mu, x); // final polish at the last barrier weight
    BarrierOutcome out;
    out.x = std::move(x);
    out.stationarity = gnorm / (t / mu);
    out.converged = true;
    return out;
}

/// Phase-1: min s subject to h_i(x) <= s and the original box; succeeds when a
/// strictly feasible x (s < 0) is found.
bool phase1(const BarrierProblem& p, RVec& x) {
    BarrierProblem ext;
    ext.n = p.n + 1;
    ext.Q = RMat::Zero(ext.n, ext.n);
    ext.q = RVec::Zero(ext.n);
    ext.q(p.n) = -1.0; // f0 = -q^T x = +s
    ext.lb = RVec::Constant(ext.n, -kInf);
    ext.ub = RVec::Constant(ext.n, kInf);
    ext.lb.head(p.n) = p.lb;
    ext.ub.head(p.n) = p.ub;
    ext.cons.reserve(p.cons.size());
    for (const auto& con : p.cons) {
        Term t = con;
        if (t.sup.empty()) {
            RMat Q2 = RMat::Zero(ext.n, ext.n);
            Q2.topLeftCorner(p.n, p.n) = t.Q;
            t.Q = std::move(Q2);
            t.q.conservativeResize(ext.n);
            t.q(p.n) = 1.0; // h - s <= 0
        } else {
            t.sup.push_back(p.n);
            const int ns = static_cast<int>(t.sup.size());
            RMat Q2 = RMat::Zero(ns, ns);
            Q2.topLeftCorner(ns - 1, ns - 1) = t.Q;
            t.Q = std::move(Q2);
            t.q.conservativeResize(ns);
            t.q(ns - 1) = 1.0;
        }
        ext.cons.push_back(std::move(t));
    }

    // Interior start for the box; s strictly above the worst violation.
    RVec xe(ext.n);
    xe.head(p.n) = x;
    for (int i = 0; i < p.n; ++i) {
        double lo = p.lb(i) > -kInf ? p.lb(i) : -1.0;
        double hi = p.ub(i) < kInf ? p.ub(i) : 1.0;
        if (p.lb(i) > -kInf && p.ub(i) < kInf) {
            const double pad = 0.25 * (hi - lo);
            xe(i) = std::min(std::max(xe(i), lo + pad * 1e-3), hi - pad * 1e-3);
        } else if (p.lb(i) > -kInf) {
            xe(i) = std::max(xe(i), lo + 1e-6);
        } else if (p.ub(i) < kInf) {
            xe(i) = std::min(xe(i), hi - 1e-6);
        }
    }
    double worst = -kInf;
    for (const auto& con : p.cons) worst = std::max(worst, term_value(con, RVec(xe.head(p.n))));
    xe(p.n) = worst + std::max(1e-3, 0.1 * std::abs(worst));

    const int m = std::max(1, static_cast<int>(ext.cons.size()));
    double t = 1.0;
    while (m / t > 1e-10) {
        center(ext, t, xe);
        if (xe(p.n) < -1e-9) {
            x = xe.head(p.n);
            return true;
        }
        t *= 25.0;
    }
    if (xe(p.n) < 0.0) {
        x = xe.head(p.n);
        return true;
    }
    return false;
}

} // namespace

RealSolveResult solve(const ConvexQcqp& problem, const RVec* warm_start) {
    const int n = problem.n;
    RealSolveResult res;
    res.x = RVec::Zero(n);
    if (n == 0) {
        res.status = SolveStatus::Optimal;
        res.objective_value = problem.objective.c;
        res.kkt_residual = 0.0;
        return res;
    }

    BarrierProblem p;
    p.n = n;
    p.lb = problem.lb.size() ? problem.lb : RVec::Constant(n, -kInf);
    p.ub = problem.ub.size() ? problem.ub : RVec::Constant(n, kInf);

    // Normalize the objective: physical magnitudes here can be ~1e-11, which
    // would wreck the barrier balance.
    const auto& obj = problem.objective;
    double s0 = 1.0;
    if (obj.Q.size()) s0 = std::max(s0 * 0.0, obj.Q.cwiseAbs().maxCoeff());
    if (obj.q.size()) s0 = std::max(s0, obj.q.cwiseAbs().maxCoeff());
    if (s0 <= 0.0) s0 = 1.0;
    p.Q = RMat::Zero(n, n);
    if (obj.Q.size()) {
        if (!obj.support.empty()) {
            for (size_t a = 0; a < obj.support.size(); ++a)
                for (size_t b = 0; b < obj.support.size(); ++b)
                    p.Q(obj.support[a], obj.support[b]) = obj.Q(a, b) / s0;
        } else {
            p.Q = obj.Q / s0;
        }
    }
    p.q = RVec::Zero(n);
    if (obj.q.size()) {
        if (!obj.support.empty()) {
            for (size_t a = 0; a < obj.support.size(); ++a)
                p.q(obj.support[a]) = obj.q(a) / s0;
        } else {
            p.q = obj.q / s0;
        }
    }
    // Deterministic tie-break among optima: minimum-norm optimizer.
    p.Q.diagonal().array() += 1e-9;

    for (const auto& con : problem.constraints) {
        Term t;
        double si = 0.0;
        if (con.Q.size()) si = std::max(si, con.Q.cwiseAbs().maxCoeff());
        if (con.q.size()) si = std::max(si, con.q.cwiseAbs().maxCoeff());
        si = std::max(si, std::abs(con.c));
        if (si <= 0.0) si = 1.0;
        t.Q = con.Q.size() ? RMat(con.Q / si) : RMat();
        t.q = con.q.size() ? RVec(con.q / si) : RVec();
        t.c = con.c / si;
        t.sup = con.support;
        if (!t.sup.empty()) {
            if (t.Q.size() == 0) t.Q = RMat::Zero(t.sup.size(), t.sup.size());
            if (t.q.size() == 0) t.q = RVec::Zero(t.sup.size());
        } else {
            if (t.Q.size() == 0) t.Q = RMat::Zero(n, n);
            if (t.q.size() == 0) t.q = RVec::Zero(n);
        }
        p.cons.push_back(std::move(t));
    }

    // Pick a strictly feasible start: warm start, then box midpoint, then phase-1.
    RVec x0 = RVec::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (p.lb(i) > -kInf && p.ub(i) < kInf) x0(i) = 0.5 * (p.lb(i) + p.ub(i));
        else if (p.lb(i) > -kInf) x0(i) = p.lb(i) + 1.0;
        else if (p.ub(i) < kInf) x0(i) = p.ub(i) - 1.0;
    }
    RVec x = x0;
    bool feasible = p.strictly_feasible(x, 1e-9);
    if (warm_start && warm_start->size() == n) {
        if (p.strictly_feasible(*warm_start, 1e-9)) {
            x = *warm_start;
            feasible = true;
        }
    }
    if (!feasible) {
        if (warm_start && warm_start->size() == n) x = *warm_start;
        if (!phase1(p, x)) {
            res.status = SolveStatus::Infeasible;
            return res;
        }
    }

    BarrierOutcome out = barrier_solve(p, std::move(x));
    res.x = out.x;
    res.objective_value = problem.objective.value(res.x);
    res.kkt_residual = out.stationarity / std::max(1.0, (2.0 * (p.Q * res.x) - p.q).norm());
    res.status = (out.converged && res.kkt_residual <= 1e-6) ? SolveStatus::Optimal
                                                             : SolveStatus::MaxIter;
    return res;
}

RVec lift_vec(const CVec& x) {
    RVec r(2 * x.size());
    r.head(x.size()) = x.real();
    r.tail(x.size()) = x.imag();
    return r;
}

CVec unlift_vec(const RVec& x) {
    const int n = static_cast<int>(x.size()) / 2;
    CVec c(n);
    c.real() = x.head(n);
    c.imag() = x.tail(n);
    return c;
}

RealQuadratic lift_form(const QuadraticForm& f) {
    const int n = static_cast<int>(f.Q.rows());
    RealQuadratic r;
    r.Q = RMat::Zero(2 * n, 2 * n);
    r.Q.topLeftCorner(n, n) = f.Q.real();
    r.Q.bottomRightCorner(n, n) = f.Q.real();
    r.Q.topRightCorner(n, n) = -f.Q.imag();
    r.Q.bottomLeftCorner(n, n) = f.Q.imag();
    r.q = RVec(2 * n);
    r.q.head(n) = 2.0 * f.l.real().transpose();
    r.q.tail(n) = -2.0 * f.l.imag().transpose();
    r.c = f.c;
    return r;
}

SolveResult solve(const ComplexQcqp& problem, const CVec* warm_start) {
    ConvexQcqp rp;
    rp.n = 2 * problem.n;
    rp.objective = lift_form(problem.objective);
    rp.constraints.reserve(problem.constraints.size());
    for (const auto& con : problem.constraints) rp.constraints.push_back(lift_form(con));
    RVec warm;
    const RVec* warm_ptr = nullptr;
    if (warm_start) {
        warm = lift_vec(*warm_start);
        warm_ptr = &warm;
    }
    RealSolveResult rr = solve(rp, warm_ptr);
    SolveResult res;
    res.x_star = unlift_vec(rr.x);
    res.objective_value = rr.objective_value;
    res.status = rr.status;
    res.kkt_residual = rr.kkt_residual;
    return res;
}

AdmmResult admm_generic(const std::function<RVec(const RVec&)>& f_prox,
                        const std::function<RVec(const RVec&)>& g_prox, const RMat& A,
                        const RMat& B, const RVec& c, double rho, const RVec& x0,
                        const RVec& z0, int max_iters, double tol) {
    AdmmResult r;
    r.x = x0;
    r.z = z0;
    RVec u = RVec::Zero(c.size()); // scaled dual y / rho
    for (r.iters = 0; r.iters < max_iters; ++r.iters) {
        r.x = f_prox(B * r.z - c + u);
        const RVec z_old = r.z;
        r.z = g_prox(A * r.x - c + u);
        const RVec resid = A * r.x + B * r.z - c;
        u += resid;
        r.primal_residual = resid.norm();
        r.dual_residual = rho * (A.transpose() * (B * (r.z - z_old))).norm();
        if (r.primal_residual <= tol && r.dual_residual <= tol) {
            r.status = SolveStatus::Optimal;
            ++r.iters;
            break;
        }
    }
    r.y = rho * u;
    return r;
}

} // namespace dstar

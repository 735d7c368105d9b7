#pragma once

#include "dstar/transforms.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace dstar {

enum class SolveStatus { Optimal, MaxIter, Infeasible };
const char* to_string(SolveStatus s);

/// Real quadratic expression value(x) = -x^T Q x + q^T x + c. When `support`
/// is non-empty, Q and q live on that coordinate subset only (used for the
/// many small per-element constraints of the phase sub-problem).
struct RealQuadratic {
    RMat Q; // symmetric PSD
    RVec q;
    double c = 0.0;
    std::vector<int> support;

    int dim() const { return static_cast<int>(q.size()); }
    double value(const RVec& x) const;
};

/// Concave maximization with convex quadratic inequality constraints
/// (each constraint demands value(x) >= 0) and optional box bounds.
struct ConvexQcqp {
    int n = 0;
    RealQuadratic objective;
    std::vector<RealQuadratic> constraints;
    RVec lb, ub; // empty => unbounded; entries may be +-infinity

    void check() const; // PSD within 1e-9 + dimension sanity, throws
};

struct RealSolveResult {
    RVec x;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    double kkt_residual = std::numeric_limits<double>::infinity();
};

/// Log-barrier interior-point solve of the (normalized) problem; phase-1 is
/// used to find a strictly feasible start when the warm start is not one.
RealSolveResult solve(const ConvexQcqp& problem, const RVec* warm_start = nullptr);

/// Complex-variable problem; solved through the standard [Re; Im] lifting.
struct ComplexQcqp {
    int n = 0;
    QuadraticForm objective;
    std::vector<QuadraticForm> constraints; // value(x) >= 0
};

struct SolveResult {
    CVec x_star;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    double kkt_residual = std::numeric_limits<double>::infinity();
};

SolveResult solve(const ComplexQcqp& problem, const CVec* warm_start = nullptr);

// Lifting helpers (exposed for tests and for problems mixing real and
// complex blocks).
RVec lift_vec(const CVec& x);
CVec unlift_vec(const RVec& x);
RealQuadratic lift_form(const QuadraticForm& f);

/// Scaled-dual ADMM on  min f(x) + g(z)  s.t.  A x + B z = c.
/// f_prox(v) must return argmin_x f(x) + rho/2 ||A x + v||^2 and g_prox(v)
/// argmin_z g(z) + rho/2 ||B z + v||^2.
struct AdmmResult {
    RVec x, z, y; // y is the unscaled dual of the coupling constraint
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iters = 0;
    SolveStatus status = SolveStatus::MaxIter;
};

AdmmResult admm_generic(const std::function<RVec(const RVec&)>& f_prox,
                        const std::function<RVec(const RVec&)>& g_prox, const RMat& A,
                        const RMat& B, const RVec& c, double rho, const RVec& x0,
                        const RVec& z0, int max_iters = 1000, double tol = 1e-6);

} // namespace dstar

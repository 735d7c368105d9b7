#pragma once

#include "dstar/linalg.hpp"

#include <stdexcept>

namespace dstar {

/// Fractional-programming auxiliaries, one entry per DL user.
struct AuxState {
    RVec gamma_pd, gamma_sd;   // Lagrangian-dual auxiliaries (SINR fixed points)
    RVec lambda_pd, lambda_sd; // Dinkelbach ratios A / (A + B)
    int iter = 0;
};

/// Hermitian quadratic expression value(x) = -x^H Q x + 2 Re{l x} + c.
struct QuadraticForm {
    CMat Q;
    CRow l;
    double c = 0.0;

    double value(const CVec& x) const {
        return -(x.adjoint() * Q * x)(0).real() + 2.0 * (l * x)(0).real() + c;
    }
    void assert_hermitian(double tol = 1e-12) const {
        if ((Q - Q.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("QuadraticForm: Q is not Hermitian");
    }
};

/// Dual auxiliary fixed point gamma = A / B (the point where the extra dual
/// term of the transformed rate vanishes).
double update_gamma(double numerator, double denominator);

/// Dinkelbach ratio lambda = A / C with C = A + B; at the fixed point the
/// affine surrogate A - lambda C is exactly zero.
double update_lambda(double numerator, double denominator);

/// First-order minorant of the convex term f(x) = x^H P x + 2 Re{l x} + c at
/// x0 (in this routine the quadratic coefficient enters with a POSITIVE sign;
/// the returned form has zero quadratic part and touches f at x0).
QuadraticForm sca_linearize(const CMat& P, const CRow& l, double c, const CVec& x0);
inline QuadraticForm sca_linearize(const QuadraticForm& convex_part, const CVec& x0) {
    return sca_linearize(convex_part.Q, convex_part.l, convex_part.c, x0);
}

/// Aggregate-SINR threshold t = 2^R_th - 1 implied by log2(1 + sum gamma) >= R_th.
double jensen_ul_threshold(double rate_threshold_bpshz);

} // namespace dstar

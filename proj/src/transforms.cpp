#include "dstar/transforms.hpp"

namespace dstar {

double update_gamma(double numerator, double denominator) {
    if (denominator <= 0.0)
        throw std::invalid_argument("update_gamma: non-positive denominator");
    if (numerator < 0.0) throw std::invalid_argument("update_gamma: negative numerator");
    return numerator / denominator;
}

double update_lambda(double numerator, double denominator) {
    if (denominator <= 0.0)
        throw std::invalid_argument("update_lambda: non-positive denominator");
    if (numerator < 0.0) throw std::invalid_argument("update_lambda: negative numerator");
    return numerator / denominator;
}

QuadraticForm sca_linearize(const CMat& P, const CRow& l, double c, const CVec& x0) {
    QuadraticForm out;
    out.Q = CMat::Zero(P.rows(), P.cols());
    out.l = x0.adjoint() * P + l;
    out.c = c - (x0.adjoint() * P * x0)(0).real();
    return out;
}

double jensen_ul_threshold(double rate_threshold_bpshz) {
    if (rate_threshold_bpshz < 0.0)
        throw std::invalid_argument("jensen_ul_threshold: negative rate threshold");
    return std::exp2(rate_threshold_bpshz) - 1.0;
}

} // namespace dstar

#include "dstar/cascade.hpp"

#include <stdexcept>

namespace dstar {

CRow cascade_vector(const CVec& d, const CMat& Dm, const CVec& w) {
    if (Dm.rows() != d.size() || Dm.cols() != w.size())
        throw std::invalid_argument("cascade_vector: dimension mismatch");
    // d^H diag(phi) Dm w = w^T [rep(d^H) .* Dm^T] phi; the bracket collapses to
    // a single row once w is applied: c_i = conj(d_i) * (Dm w)_i.
    const CVec dw = Dm * w;
    return d.conjugate().cwiseProduct(dw).transpose();
}

CMat cascade_matrix(const CMat& Um, const CMat& Dm, const CVec& w) {
    if (Um.cols() != Dm.rows() || Dm.cols() != w.size())
        throw std::invalid_argument("cascade_matrix: dimension mismatch");
    // One independent diagonal block per row of Um: row n equals the
    // cascade_vector construction applied to Um(n,:).
    const CVec dw = Dm * w;
    CMat c(Um.rows(), Um.cols());
    for (int n = 0; n < Um.rows(); ++n)
        c.row(n) = Um.row(n).cwiseProduct(dw.transpose());
    return c;
}

} // namespace dstar

#pragma once

#include "dstar/linalg.hpp"

namespace dstar {

/// Row c with c * phi == d^H diag(phi) Dm w for every phi (rep-stacking plus
/// Hadamard product construction).
CRow cascade_vector(const CVec& d, const CMat& Dm, const CVec& w);

/// Matrix C with C * phi == Um diag(phi) Dm w for every phi; row n is
/// cascade_vector of the n-th row of Um (block-diagonal Kronecker form).
CMat cascade_matrix(const CMat& Um, const CMat& Dm, const CVec& w);

} // namespace dstar

#pragma once

#include "dstar/linalg.hpp"

#include <array>
#include <random>

namespace dstar {

/// The four operating sides of the surface pair.
enum class Side { PR = 0, PT = 1, SR = 2, ST = 3 };
inline constexpr std::array<Side, 4> kSides{Side::PR, Side::PT, Side::SR, Side::ST};
inline constexpr int side_index(Side s) { return static_cast<int>(s); }
const char* to_string(Side s);

/// Amplitude/phase configuration of both surfaces. Amplitudes are real in
/// [0,1] with the reflect/transmit pair of each element sharing unit energy;
/// phases are unit-modulus complex numbers.
struct StarProfile {
    std::array<RVec, 4> beta;  // indexed by Side
    std::array<CVec, 4> theta; // unit modulus

    static StarProfile uniform(int m_elems, double beta_pr = M_SQRT1_2,
                               double beta_sr = M_SQRT1_2);

    /// Random phases, balanced energy split. Deterministic under `rng`.
    static StarProfile random(int m_elems, std::mt19937_64& rng);

    int elems() const { return static_cast<int>(beta[0].size()); }

    const RVec& b(Side s) const { return beta[side_index(s)]; }
    RVec& b(Side s) { return beta[side_index(s)]; }
    const CVec& t(Side s) const { return theta[side_index(s)]; }
    CVec& t(Side s) { return theta[side_index(s)]; }

    /// Element-wise product beta .* theta for one side.
    CVec phi(Side s) const { return t(s).cwiseProduct(b(s).cast<Complex>()); }

    /// Squared change versus another profile, summed over all sides.
    double delta_sq(const StarProfile& other) const;

    /// Squared change of the amplitude (resp. phase) block alone; the
    /// convergence rule treats beta and theta as separate variable blocks.
    double amp_delta_sq(const StarProfile& other) const;
    double phase_delta_sq(const StarProfile& other) const;
};

} // namespace dstar

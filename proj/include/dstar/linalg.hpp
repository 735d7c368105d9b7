#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <cstdint>

namespace dstar {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using RRow = Eigen::RowVectorXd;

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

/// SplitMix64 step, used for deterministic sub-seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Mixes a sequence of integers into one 64-bit seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = 0x6a09e667f3bcc908ull;
    for (auto p : parts) {
        s ^= p;
        (void)splitmix64(s);
    }
    return s;
}

} // namespace dstar

#pragma once

#include "dstar/linalg.hpp"

namespace dstar {

/// Downlink beamforming vectors, one column per served user.
struct BeamformerSet {
    CMat w_pd; // n_tx x k_pd
    CMat w_sd; // n_tx x k_sd

    static BeamformerSet zero(int n_tx, int k_pd, int k_sd) {
        return {CMat::Zero(n_tx, k_pd), CMat::Zero(n_tx, k_sd)};
    }

    double total_power() const { return w_pd.squaredNorm() + w_sd.squaredNorm(); }

    int n_tx() const { return static_cast<int>(w_pd.rows()); }
    int slots() const { return static_cast<int>(w_pd.cols() + w_sd.cols()); }

    /// Beam of DL slot i in the fixed [w_pd | w_sd] column order.
    CVec slot(int i) const {
        return i < w_pd.cols() ? CVec(w_pd.col(i)) : CVec(w_sd.col(i - w_pd.cols()));
    }

    /// Stacked column-major vector [vec(w_pd); vec(w_sd)].
    CVec stacked() const;
    static BeamformerSet from_stacked(const CVec& x, int n_tx, int k_pd, int k_sd);
};

inline CVec BeamformerSet::stacked() const {
    CVec x(w_pd.size() + w_sd.size());
    x.head(w_pd.size()) = Eigen::Map<const CVec>(w_pd.data(), w_pd.size());
    x.tail(w_sd.size()) = Eigen::Map<const CVec>(w_sd.data(), w_sd.size());
    return x;
}

inline BeamformerSet BeamformerSet::from_stacked(const CVec& x, int n_tx, int k_pd, int k_sd) {
    BeamformerSet b = zero(n_tx, k_pd, k_sd);
    Eigen::Map<CVec>(b.w_pd.data(), b.w_pd.size()) = x.head(n_tx * k_pd);
    Eigen::Map<CVec>(b.w_sd.data(), b.w_sd.size()) = x.tail(n_tx * k_sd);
    return b;
}

} // namespace dstar

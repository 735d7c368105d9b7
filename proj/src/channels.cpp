#include "dstar/channels.hpp"

#include <random>
#include <stdexcept>

namespace dstar {

namespace {

/// Portable complex Gaussian source: Box-Muller on top of mt19937_64 so the
/// generated sequence does not depend on the standard library's
/// normal_distribution implementation.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

    Complex draw(double variance) {
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1) * variance); // E|h|^2 = variance
        const double ang = 2.0 * M_PI * u2;
        return {r * std::cos(ang), r * std::sin(ang)};
    }

private:
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform_open() {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return u;
    }
    std::mt19937_64 eng_;
};

// Per-entry variance callbacks receive (row, col) of the matrix being filled.
template <typename GainFn>
CMat draw_matrix(GaussianSource& g, int rows, int cols, GainFn gain) {
    CMat m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = g.draw(gain(r, c));
    return m;
}

} // namespace

void ChannelSet::check_dims(const ScenarioConfig& sc) const {
    auto ok = [](const CMat& m, int r, int c) { return m.rows() == r && m.cols() == c; };
    const int m = sc.m_elems;
    if (!ok(d, sc.n_tx, sc.k_pd) || !ok(d1, m, sc.n_tx) || !ok(d2, m, sc.k_pd) ||
        !ok(d3, m, sc.k_sd) || !ok(u, sc.n_rx, sc.k_pu) || !ok(u1, m, sc.k_pu) ||
        !ok(u2, sc.n_rx, m) || !ok(h1, m, sc.k_su) || !ok(h2, m, sc.k_sd) ||
        !ok(h3, sc.n_rx, m) || !ok(h4, m, sc.k_pd) || !ok(s, sc.n_rx, sc.n_tx) ||
        !ok(v_p, sc.k_pu, sc.k_pd) || !ok(v_s, sc.k_su, sc.k_sd) ||
        !ok(d_sd, sc.n_tx, sc.k_sd) || !ok(u_su, sc.n_rx, sc.k_su))
        throw std::invalid_argument("channel set dimensions do not match scenario");
}

ChannelSet gen_channels(const ScenarioConfig& sc, std::uint64_t seed) {
    sc.validate();
    const Geometry& geo = sc.geometry;
    const PathLossModel& pl = sc.pathloss;

    GaussianSource g(mix_seed({seed, 0xc4a11e75u}));
    ChannelSet ch;
    ch.ul_power_watt = sc.user_power_watt();

    // Surface-side gains are evaluated per element so panel splits see their
    // own distances.
    auto elem_gain_p = [&](const Vec2& other) {
        return [&, other](int elem, int) {
            return pl.surface_gain(distance(sc.element_position(geo.star_p, elem), other));
        };
    };
    auto elem_gain_s = [&](const Vec2& other) {
        return [&, other](int elem, int) {
            return pl.surface_gain(distance(sc.element_position(geo.star_s, elem), other));
        };
    };

    const double g_bs_pd = pl.direct_gain(distance(geo.bs, geo.pd));
    const double g_bs_pu = pl.direct_gain(distance(geo.bs, geo.pu));
    const double g_pu_pd = pl.direct_gain(distance(geo.pu, geo.pd));
    const double g_su_sd = pl.direct_gain(distance(geo.su, geo.sd));
    const double g_si = db_to_lin(-pl.si_attenuation_db);

    ch.d = draw_matrix(g, sc.n_tx, sc.k_pd, [&](int, int) { return g_bs_pd; });
    ch.d1 = draw_matrix(g, sc.m_elems, sc.n_tx, elem_gain_p(geo.bs));
    ch.d2 = draw_matrix(g, sc.m_elems, sc.k_pd, elem_gain_p(geo.pd));
    ch.d3 = draw_matrix(g, sc.m_elems, sc.k_sd, elem_gain_p(geo.sd));
    ch.u = draw_matrix(g, sc.n_rx, sc.k_pu, [&](int, int) { return g_bs_pu; });
    ch.u1 = draw_matrix(g, sc.m_elems, sc.k_pu, elem_gain_p(geo.pu));
    ch.u2 = draw_matrix(g, sc.n_rx, sc.m_elems,
                        [&](int, int elem) {
                            return pl.surface_gain(
                                distance(sc.element_position(geo.star_p, elem), geo.bs));
                        });
    ch.h1 = draw_matrix(g, sc.m_elems, sc.k_su, elem_gain_s(geo.su));
    ch.h2 = draw_matrix(g, sc.m_elems, sc.k_sd, elem_gain_s(geo.sd));
    ch.h3 = draw_matrix(g, sc.n_rx, sc.m_elems,
                        [&](int, int elem) {
                            return pl.surface_gain(
                                distance(sc.element_position(geo.star_s, elem), geo.bs));
                        });
    ch.h4 = draw_matrix(g, sc.m_elems, sc.k_pd, elem_gain_s(geo.pd));
    ch.s = draw_matrix(g, sc.n_rx, sc.n_tx, [&](int, int) { return g_si; });
    ch.v_p = draw_matrix(g, sc.k_pu, sc.k_pd, [&](int, int) { return g_pu_pd; });
    ch.v_s = draw_matrix(g, sc.k_su, sc.k_sd, [&](int, int) { return g_su_sd; });

    // Blocked S-region direct links: always consume the same random draws so
    // the rest of the channel set is architecture-invariant per seed.
    const double extra = db_to_lin(-pl.blockage_db);
    const double g_bs_sd = pl.direct_gain(distance(geo.bs, geo.sd)) * extra;
    const double g_su_bs = pl.direct_gain(distance(geo.su, geo.bs)) * extra;
    ch.d_sd = draw_matrix(g, sc.n_tx, sc.k_sd, [&](int, int) { return g_bs_sd; });
    ch.u_su = draw_matrix(g, sc.n_rx, sc.k_su, [&](int, int) { return g_su_bs; });
    if (sc.architecture != Architecture::DoubleRis) {
        ch.d_sd.setZero();
        ch.u_su.setZero();
    }
    return ch;
}

} // namespace dstar

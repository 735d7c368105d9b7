#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dstar/cascade.hpp"
#include "dstar/channels.hpp"
#include "dstar/sinr.hpp"

#include <random>

using namespace dstar;

namespace {

std::mt19937_64 rng(12345);

Complex randc() {
    std::normal_distribution<double> n(0.0, 1.0);
    return Complex(n(rng), n(rng));
}

CMat randm(int r, int c) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = randc();
    return m;
}

CVec randv(int n) { return CVec(randm(n, 1)); }

StarProfile random_star(int m) {
    return StarProfile::random(m, rng);
}

// Straight-from-the-printed-model SINR evaluator, coded independently of the
// library implementation: loops over users and re-derives every term from the
// received-signal expressions. Used as the equivalence oracle.
struct OracleOut {
    RVec pd, sd, pu, su;
};

OracleOut oracle_sinr(const ChannelSet& ch, const StarProfile& star,
                      const BeamformerSet& bm, const ScenarioConfig& sc) {
    const double s2 = sc.noise_watt();
    const double p = ch.ul_power_watt;
    auto theta = [&](Side s) { return CMat(star.phi(s).asDiagonal()); };
    const CMat th_pr = theta(Side::PR), th_pt = theta(Side::PT);
    const CMat th_sr = theta(Side::SR), th_st = theta(Side::ST);

    OracleOut o;
    o.pd.resize(sc.k_pd);
    for (int k = 0; k < sc.k_pd; ++k) {
        CRow row = ch.d2.col(k).adjoint() * th_pr * ch.d1 + ch.d.col(k).adjoint();
        double num = std::norm((row * bm.w_pd.col(k))(0));
        double den = s2;
        for (int j = 0; j < sc.k_pd; ++j)
            if (j != k) den += std::norm((row * bm.w_pd.col(j))(0));
        for (int j = 0; j < sc.k_sd; ++j) den += std::norm((row * bm.w_sd.col(j))(0));
        for (int j = 0; j < sc.k_pu; ++j)
            den += p * std::norm((ch.d2.col(k).adjoint() * th_pr * ch.u1.col(j))(0) +
                                 ch.v_p(j, k));
        for (int j = 0; j < sc.k_su; ++j)
            den += p * std::norm((ch.h4.col(k).adjoint() * th_st * ch.h1.col(j))(0));
        o.pd(k) = num / den;
    }

    o.sd.resize(sc.k_sd);
    for (int k = 0; k < sc.k_sd; ++k) {
        CRow row = ch.d3.col(k).adjoint() * th_pt * ch.d1 + ch.d_sd.col(k).adjoint();
        double num = std::norm((row * bm.w_sd.col(k))(0));
        double den = s2;
        for (int j = 0; j < sc.k_sd; ++j)
            if (j != k) den += std::norm((row * bm.w_sd.col(j))(0));
        for (int j = 0; j < sc.k_pd; ++j) den += std::norm((row * bm.w_pd.col(j))(0));
        for (int j = 0; j < sc.k_pu; ++j)
            den += p * std::norm((ch.d3.col(k).adjoint() * th_pt * ch.u1.col(j))(0));
        for (int j = 0; j < sc.k_su; ++j)
            den += p * std::norm((ch.h2.col(k).adjoint() * th_sr * ch.h1.col(j))(0) +
                                 ch.v_s(j, k));
        o.sd(k) = num / den;
    }

    CMat s_t = ch.s + ch.u2 * th_pr * ch.d1;
    double si = s2;
    for (int j = 0; j < sc.k_pd; ++j) si += (s_t * bm.w_pd.col(j)).squaredNorm();
    for (int j = 0; j < sc.k_sd; ++j) si += (s_t * bm.w_sd.col(j)).squaredNorm();
    o.pu.resize(sc.k_pu);
    for (int k = 0; k < sc.k_pu; ++k)
        o.pu(k) = p * (ch.u2 * th_pr * ch.u1.col(k) + ch.u.col(k)).squaredNorm() / si;
    o.su.resize(sc.k_su);
    for (int k = 0; k < sc.k_su; ++k)
        o.su(k) = p * (ch.h3 * th_st * ch.h1.col(k) + ch.u_su.col(k)).squaredNorm() / si;
    return o;
}

ScenarioConfig tiny_scenario() {
    std::uniform_int_distribution<int> d13(1, 3);
    ScenarioConfig sc;
    sc.n_tx = d13(rng);
    sc.n_rx = d13(rng);
    sc.k_pd = d13(rng);
    sc.k_sd = d13(rng);
    sc.k_pu = d13(rng);
    sc.k_su = d13(rng);
    sc.m_elems = d13(rng);
    sc.seed = rng();
    return sc;
}

} // namespace

TEST_CASE("channel generation is deterministic") {
    ScenarioConfig sc;
    ChannelSet a = gen_channels(sc, 42);
    ChannelSet b = gen_channels(sc, 42);
    CHECK(a.d1 == b.d1);
    CHECK(a.u2 == b.u2);
    CHECK(a.h3 == b.h3);
    CHECK(a.s == b.s);
    CHECK(a.v_p == b.v_p);
    ChannelSet c = gen_channels(sc, 43);
    CHECK(a.d1 != c.d1);
}

TEST_CASE("blocked direct links are zero outside the double-RIS layout") {
    ScenarioConfig sc;
    ChannelSet ch = gen_channels(sc, 7);
    CHECK(ch.d_sd.cwiseAbs().maxCoeff() == 0.0);
    CHECK(ch.u_su.cwiseAbs().maxCoeff() == 0.0);

    sc.architecture = Architecture::DoubleRis;
    ChannelSet dr = gen_channels(sc, 7);
    CHECK(dr.d_sd.cwiseAbs().maxCoeff() > 0.0);
    CHECK(dr.u_su.cwiseAbs().maxCoeff() > 0.0);
    // all shared links identical across architectures for the same seed
    CHECK(dr.d1 == ch.d1);
    CHECK(dr.h1 == ch.h1);
}

TEST_CASE("empirical channel variance matches the configured link gain") {
    ScenarioConfig sc;
    const double d = distance(sc.geometry.bs, sc.geometry.star_p);
    CHECK(d == doctest::Approx(100.0));
    const double gain = sc.pathloss.surface_gain(d);
    double acc = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        ChannelSet ch = gen_channels(sc, 1000 + i);
        acc += std::norm(ch.d1(0, 0));
    }
    CHECK(acc / n == doctest::Approx(gain).epsilon(0.05));
}

TEST_CASE("cascade_vector all-ones case") {
    CVec d = CVec::Ones(3), w = CVec::Ones(2);
    CMat Dm = CMat::Ones(3, 2);
    CRow c = cascade_vector(d, Dm, w);
    CVec phi = CVec::Ones(3);
    CHECK(std::abs((c * phi)(0) - Complex(6.0)) < 1e-12);
    CHECK(std::abs((c * CVec(CVec::Zero(3)))(0)) == 0.0);
}

TEST_CASE("cascade_vector matches direct evaluation on random instances") {
    std::uniform_int_distribution<int> d16(1, 6);
    for (int it = 0; it < 1000; ++it) {
        const int n1 = d16(rng), n2 = d16(rng);
        CVec d = randv(n1), w = randv(n2), phi = randv(n1);
        CMat Dm = randm(n1, n2);
        CRow c = cascade_vector(d, Dm, w);
        Complex direct = (d.adjoint() * phi.asDiagonal() * Dm * w)(0);
        CHECK(std::abs((c * phi)(0) - direct) <= 1e-10);
    }
}

TEST_CASE("cascade_matrix single-row case reduces to cascade_vector") {
    CMat Um = randm(1, 4), Dm = randm(4, 3);
    CVec w = randv(3);
    CMat C = cascade_matrix(Um, Dm, w);
    CRow c = cascade_vector(Um.row(0).adjoint(), Dm, w);
    CHECK((C.row(0) - c).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(cascade_matrix(Um, CMat::Zero(4, 3), w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cascade_matrix matches direct evaluation on random instances") {
    std::uniform_int_distribution<int> d15(1, 5);
    for (int it = 0; it < 1000; ++it) {
        const int n1 = d15(rng), n2 = d15(rng), n3 = d15(rng);
        CMat Um = randm(n3, n1), Dm = randm(n1, n2);
        CVec w = randv(n2), phi = randv(n1);
        CMat C = cascade_matrix(Um, Dm, w);
        CVec direct = Um * phi.asDiagonal() * Dm * w;
        CHECK((C * phi - direct).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("interference-free single-user reduction") {
    ScenarioConfig sc;
    sc.n_tx = 2;
    sc.n_rx = 2;
    sc.k_pd = 1;
    sc.k_sd = 1;
    sc.k_pu = 1;
    sc.k_su = 1;
    sc.m_elems = 2;
    ChannelSet ch = gen_channels(sc, 5);
    ch.ul_power_watt = 0.0; // silence the UL users
    StarProfile star = StarProfile::uniform(2);
    for (auto s : kSides) star.b(s).setZero(); // direct channel only
    BeamformerSet bm = BeamformerSet::zero(2, 1, 1);
    bm.w_pd.col(0) = randv(2);

    SinrReport rep = sinr_all(ch, star, bm, sc);
    const double expect =
        std::norm((ch.d.col(0).adjoint() * bm.w_pd.col(0))(0)) / sc.noise_watt();
    CHECK(rep.gamma_pd(0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("one-interferer reduction") {
    ScenarioConfig sc;
    sc.n_tx = 2;
    sc.n_rx = 2;
    sc.k_pd = 2;
    sc.k_sd = 1;
    sc.k_pu = 1;
    sc.k_su = 1;
    sc.m_elems = 2;
    ChannelSet ch = gen_channels(sc, 6);
    ch.ul_power_watt = 0.0;
    StarProfile star = StarProfile::uniform(2);
    for (auto s : kSides) star.b(s).setZero();

    // Both beams aligned with user 1's direct channel at power P: gamma of
    // user 1 becomes P / (P + sigma^2) with P the received signal power.
    CVec dir = ch.d.col(0).conjugate();
    dir /= dir.norm();
    BeamformerSet bm = BeamformerSet::zero(2, 2, 1);
    bm.w_pd.col(0) = dir;
    bm.w_pd.col(1) = dir;
    SinrReport rep = sinr_all(ch, star, bm, sc);
    const double p_rx = std::norm((ch.d.col(0).adjoint() * dir)(0));
    CHECK(rep.gamma_pd(0) == doctest::Approx(p_rx / (p_rx + sc.noise_watt())).epsilon(1e-12));
}

TEST_CASE("sinr_all matches the independent oracle on random tiny scenarios") {
    for (int it = 0; it < 100; ++it) {
        ScenarioConfig sc = tiny_scenario();
        ChannelSet ch = gen_channels(sc, sc.seed);
        StarProfile star = random_star(sc.m_elems);
        BeamformerSet bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
        bm.w_pd = randm(sc.n_tx, sc.k_pd);
        bm.w_sd = randm(sc.n_tx, sc.k_sd);
        SinrReport rep = sinr_all(ch, star, bm, sc);
        OracleOut o = oracle_sinr(ch, star, bm, sc);
        CHECK((rep.gamma_pd - o.pd).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((rep.gamma_sd - o.sd).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((rep.gamma_pu - o.pu).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((rep.gamma_su - o.su).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(rep.gamma_pd.minCoeff() >= 0.0);

        // rate additivity
        double r = 0;
        for (int k = 0; k < sc.k_pd; ++k) r += std::log2(1.0 + rep.gamma_pd(k));
        CHECK(rep.r_pd == doctest::Approx(r).epsilon(1e-14));
    }
}

TEST_CASE("zero secondary transmission amplitudes kill the SU numerator") {
    ScenarioConfig sc = tiny_scenario();
    ChannelSet ch = gen_channels(sc, sc.seed);
    StarProfile star = random_star(sc.m_elems);
    star.b(Side::ST).setZero();
    BeamformerSet bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
    bm.w_pd = randm(sc.n_tx, sc.k_pd);
    SinrReport rep = sinr_all(ch, star, bm, sc);
    CHECK(rep.gamma_su.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("global unit-phase beam rotation leaves every SINR unchanged") {
    ScenarioConfig sc = tiny_scenario();
    ChannelSet ch = gen_channels(sc, sc.seed);
    StarProfile star = random_star(sc.m_elems);
    BeamformerSet bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
    bm.w_pd = randm(sc.n_tx, sc.k_pd);
    bm.w_sd = randm(sc.n_tx, sc.k_sd);
    SinrReport before = sinr_all(ch, star, bm, sc);

    BeamformerSet rot = bm;
    const Complex r = std::polar(1.0, 0.7331);
    rot.w_pd *= r;
    rot.w_sd *= r;
    SinrReport after = sinr_all(ch, star, rot, sc);
    auto close = [](const RVec& a, const RVec& b) {
        return (a - b).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + b.cwiseAbs().maxCoeff());
    };
    CHECK(close(after.gamma_pd, before.gamma_pd));
    CHECK(close(after.gamma_sd, before.gamma_sd));
    CHECK(close(after.gamma_pu, before.gamma_pu));
    CHECK(close(after.gamma_su, before.gamma_su));
}

TEST_CASE("feasibility corner cases") {
    ScenarioConfig sc;
    ChannelSet ch = gen_channels(sc, 3);
    StarProfile star = StarProfile::uniform(sc.m_elems);
    BeamformerSet bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
    SinrReport rep = sinr_all(ch, star, bm, sc);
    FeasibilityReport f = check_feasibility(star, bm, rep, sc);
    CHECK(f.power);
    CHECK(f.power_slack == doctest::Approx(sc.budget_watt()));
    CHECK(f.energy_split);
    CHECK(f.unit_modulus);

    star.b(Side::PR).setOnes();
    star.b(Side::PT).setOnes();
    f = check_feasibility(star, bm, rep, sc);
    CHECK_FALSE(f.energy_split);
}

// End-to-end acceptance checks for the D-STAR joint uplink/downlink
// simulator. Each check prints exactly one PASS/FAIL line; the process exit
// code is the number of failed checks. Monte Carlo groups are shared between
// checks so the full suite stays within a desk-scale time budget.

#include "dstar/bench.hpp"
#include "dstar/cascade.hpp"
#include "dstar/qcqp.hpp"
#include "dstar/star_opt.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace dstar;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %02d [%s]: %s (%s)\n", id, name, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double now_s() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::mt19937_64 grng(20240817);

Complex randc(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return Complex(n(rng), n(rng));
}

CMat randm(int r, int c, std::mt19937_64& rng) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = randc(rng);
    return m;
}

CVec randv(int n, std::mt19937_64& rng) { return CVec(randm(n, 1, rng)); }

// ---------------------------------------------------------------------------
// Monte Carlo run groups (shared across checks)

struct Cell {
    ScenarioConfig sc;
    DbapResult res;
    SinrReport rep;
    double rate = 0.0;
    bool ok = false;
    std::string error;
};

constexpr int kSeeds = 20;

std::vector<Cell> run_group(const ScenarioConfig& base, Architecture arch,
                            const char* label) {
    std::vector<Cell> cells(kSeeds);
    const double t0 = now_s();
    for (int s = 0; s < kSeeds; ++s) {
        Cell& c = cells[s];
        c.sc = base;
        c.sc.architecture = arch;
        c.sc.seed = cell_seed(base, s, 0.0);
        try {
            const ChannelSet ch = gen_channels(c.sc, c.sc.seed);
            c.res = run_dbap(c.sc, ch);
            c.rep = evaluate_solution(c.res.beams, c.res.star, ch, c.sc);
            c.rate = c.rep.dl_sum_rate();
            c.ok = true;
        } catch (const std::exception& e) {
            c.error = e.what();
        }
    }
    std::fprintf(stderr, "  group %-16s %5.1f s\n", label, now_s() - t0);
    return cells;
}

double group_mean(const std::vector<Cell>& g) {
    double sum = 0.0;
    for (const Cell& c : g) sum += c.rate;
    return sum / g.size();
}

double group_var(const std::vector<Cell>& g) {
    const double m = group_mean(g);
    double acc = 0.0;
    for (const Cell& c : g) acc += (c.rate - m) * (c.rate - m);
    return acc / (g.size() - 1);
}

// ---------------------------------------------------------------------------
// 1. cascaded-channel vectorization identities

void check_vectorization() {
    const double t0 = now_s();
    double max_err = 0.0;
    std::uniform_int_distribution<int> d16(1, 6);
    for (int it = 0; it < 1000; ++it) {
        const int n1 = d16(grng), n2 = d16(grng), n3 = d16(grng);
        {
            CVec d = randv(n1, grng), w = randv(n2, grng), phi = randv(n1, grng);
            CMat Dm = randm(n1, n2, grng);
            CRow c = cascade_vector(d, Dm, w);
            const Complex direct = (d.adjoint() * phi.asDiagonal() * Dm * w)(0);
            max_err = std::max(max_err, std::abs((c * phi)(0) - direct));
        }
        {
            CMat Um = randm(n3, n1, grng), Dm = randm(n1, n2, grng);
            CVec w = randv(n2, grng), phi = randv(n1, grng);
            CMat C = cascade_matrix(Um, Dm, w);
            const CVec direct = Um * phi.asDiagonal() * Dm * w;
            max_err = std::max(max_err, (C * phi - direct).cwiseAbs().maxCoeff());
        }
    }
    const double dt = now_s() - t0;
    report(1, "vectorization identities", max_err <= 1e-10 && dt < 5.0,
           fmt("max err %.2e over 2000 instances, %.2f s", max_err, dt));
}

// ---------------------------------------------------------------------------
// 2. auxiliary-variable transform identities

void check_transforms() {
    std::uniform_real_distribution<double> u(1e-6, 10.0);
    double max_dual = 0.0, max_fp = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const double a = u(grng), b = u(grng);
        const double gamma = update_gamma(a, b);
        max_dual = std::max(
            max_dual, std::abs(-gamma + (1.0 + gamma) * a / (a + b)) / (1.0 + gamma));
        const double c = a + u(grng);
        const double lam = update_lambda(a, c);
        max_fp = std::max(max_fp, std::abs(a - lam * c) / c);
    }
    report(2, "transform identities", max_dual <= 1e-12 && max_fp <= 1e-12,
           fmt("cancellation %.2e, fixed point %.2e over 1000 pairs", max_dual, max_fp));
}

// ---------------------------------------------------------------------------
// 3. SINR oracle equivalence (independent from-the-model evaluator)

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

void check_sinr_oracle() {
    std::uniform_int_distribution<int> d13(1, 3);
    double max_err = 0.0;
    for (int it = 0; it < 100; ++it) {
        ScenarioConfig sc;
        sc.n_tx = d13(grng);
        sc.n_rx = d13(grng);
        sc.k_pd = d13(grng);
        sc.k_sd = d13(grng);
        sc.k_pu = d13(grng);
        sc.k_su = d13(grng);
        sc.m_elems = d13(grng);
        sc.seed = grng();
        const ChannelSet ch = gen_channels(sc, sc.seed);
        const StarProfile star = StarProfile::random(sc.m_elems, grng);
        BeamformerSet bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
        bm.w_pd = randm(sc.n_tx, sc.k_pd, grng);
        bm.w_sd = randm(sc.n_tx, sc.k_sd, grng);
        const SinrReport rep = sinr_all(ch, star, bm, sc);
        const OracleOut o = oracle_sinr(ch, star, bm, sc);
        max_err = std::max({max_err, (rep.gamma_pd - o.pd).cwiseAbs().maxCoeff(),
                            (rep.gamma_sd - o.sd).cwiseAbs().maxCoeff(),
                            (rep.gamma_pu - o.pu).cwiseAbs().maxCoeff(),
                            (rep.gamma_su - o.su).cwiseAbs().maxCoeff()});
    }
    report(3, "sinr oracle equivalence", max_err <= 1e-10,
           fmt("max err %.2e over 100 tiny scenarios", max_err));
}

// ---------------------------------------------------------------------------
// 4. feasibility of every returned default-scenario solution

void check_feasibility_group(const std::vector<Cell>& def, double t_start) {
    double split = 0.0, modulus = 0.0, power = 0.0;
    double min_pu = 1e300, min_su = 1e300;
    int ok_runs = 0;
    for (const Cell& c : def) {
        if (!c.ok) continue;
        ++ok_runs;
        const StarProfile& st = c.res.star;
        for (auto [r, t] : {std::pair{Side::PR, Side::PT}, std::pair{Side::SR, Side::ST}})
            split = std::max(split, (st.b(r).array().square() + st.b(t).array().square() - 1.0)
                                        .abs()
                                        .maxCoeff());
        for (auto s : kSides)
            for (int i = 0; i < st.elems(); ++i)
                modulus = std::max(modulus, std::abs(std::abs(st.t(s)(i)) - 1.0));
        power = std::max(power,
                         c.res.beams.stacked().squaredNorm() - c.sc.budget_watt());
        min_pu = std::min(min_pu, c.rep.r_pu);
        min_su = std::min(min_su, c.rep.r_su);
    }
    const double dt = now_s() - t_start;
    const bool ok = ok_runs == kSeeds && split <= 1e-3 && modulus <= 1e-12 &&
                    power <= 1e-6 && min_pu >= 1.0 - 1e-3 && min_su >= 1.0 - 1e-3 &&
                    dt < 600.0;
    report(4, "feasibility at convergence", ok,
           fmt("%d/%d runs, split %.1e, |theta| err %.1e, power slack %.1e, "
               "min R_PU %.3f, min R_SU %.3f, %.0f s",
               ok_runs, kSeeds, split, modulus, power, min_pu, min_su, dt));
}

// ---------------------------------------------------------------------------
// 5. ascent behavior of the best-iterate sequence

void check_ascent(const std::vector<Cell>& def) {
    bool monotone = true;
    int improved = 0;
    for (const Cell& c : def) {
        if (!c.ok) {
            monotone = false;
            continue;
        }
        // running max over feasible recorded iterates; the returned solution
        // must dominate every one of them
        double best = -1.0;
        for (const IterRecord& rec : c.res.trace.iters)
            if (rec.feasible) best = std::max(best, rec.dl_sum_rate);
        if (c.rate + 1e-9 < best) monotone = false;
        if (c.rate >= 1.25 * c.res.trace.init_rate) ++improved;
    }
    report(5, "ascent behavior", monotone && improved >= 16,
           fmt("best-iterate monotone %s, >=25%% improvement in %d/%d seeds",
               monotone ? "yes" : "no", improved, kSeeds));
}

// ---------------------------------------------------------------------------
// 6. small-instance optimality gap against a brute-force oracle

double oracle_best_rate(const ScenarioConfig& sc, const ChannelSet& ch,
                        std::mt19937_64& rng) {
    const double budget = sc.budget_watt();
    const double th_pu = sc.pu_threshold(), th_su = sc.su_threshold();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> uph(0.0, 2.0 * M_PI);

    auto feasible_rate = [&](const StarProfile& st, const BeamformerSet& bm) {
        const SinrReport rep = sinr_all(ch, st, bm, sc);
        if (rep.r_pu < th_pu || rep.r_su < th_su) return -1.0;
        return rep.dl_sum_rate();
    };

    double best = -1.0;
    StarProfile best_star = StarProfile::uniform(sc.m_elems);
    BeamformerSet best_bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
    for (int it = 0; it < 100000; ++it) {
        StarProfile st = StarProfile::uniform(sc.m_elems);
        for (int i = 0; i < sc.m_elems; ++i) {
            const double bp = std::sqrt(u01(rng));
            st.b(Side::PR)(i) = bp;
            st.b(Side::PT)(i) = std::sqrt(1.0 - bp * bp);
            const double bs = std::sqrt(u01(rng));
            st.b(Side::SR)(i) = bs;
            st.b(Side::ST)(i) = std::sqrt(1.0 - bs * bs);
            for (auto s : kSides) st.t(s)(i) = std::polar(1.0, uph(rng));
        }
        BeamformerSet bm = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
        bm.w_pd = randm(sc.n_tx, sc.k_pd, rng);
        bm.w_sd = randm(sc.n_tx, sc.k_sd, rng);
        const double scale = std::sqrt(u01(rng) * budget / bm.stacked().squaredNorm());
        bm.w_pd *= scale;
        bm.w_sd *= scale;
        const double r = feasible_rate(st, bm);
        if (r > best) {
            best = r;
            best_star = st;
            best_bm = bm;
        }
    }
    if (best < 0.0) return 0.0;

    // coordinate phase-grid ascent on the best sample (feasibility preserved)
    const int grid = 32;
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (auto s : kSides) {
            for (int i = 0; i < sc.m_elems; ++i) {
                Complex best_phase = best_star.t(s)(i);
                for (int g = 0; g < grid; ++g) {
                    StarProfile st = best_star;
                    st.t(s)(i) = std::polar(1.0, 2.0 * M_PI * (g + 1) / grid);
                    const double r = feasible_rate(st, best_bm);
                    if (r > best) {
                        best = r;
                        best_phase = st.t(s)(i);
                    }
                }
                best_star.t(s)(i) = best_phase;
            }
        }
    }
    return best;
}

void check_small_instance_gap() {
    ScenarioConfig base;
    base.n_tx = 2;
    base.n_rx = 2;
    base.k_pd = base.k_sd = base.k_pu = base.k_su = 1;
    base.m_elems = 2;
    base.ul_rate_threshold_bpshz = 0.25; // two elements leave little cascade gain
    int hit = 0;
    double worst_ratio = 1e300;
    for (int s = 0; s < kSeeds; ++s) {
        ScenarioConfig sc = base;
        sc.seed = cell_seed(base, s, 0.0);
        const ChannelSet ch = gen_channels(sc, sc.seed);
        double got = 0.0;
        try {
            const DbapResult res = run_dbap(sc, ch);
            got = evaluate_solution(res.beams, res.star, ch, sc).dl_sum_rate();
        } catch (const InfeasibleError&) {
        }
        std::mt19937_64 rng(sc.seed ^ 0x9e3779b97f4a7c15ull);
        const double oracle = oracle_best_rate(sc, ch, rng);
        const double ratio = oracle > 0.0 ? got / oracle : 1.0;
        worst_ratio = std::min(worst_ratio, ratio);
        if (ratio >= 0.9) ++hit;
    }
    report(6, "small-instance optimality gap", hit >= 16,
           fmt(">=90%% of oracle in %d/%d seeds, worst ratio %.3f", hit, kSeeds,
               worst_ratio));
}

// ---------------------------------------------------------------------------
// 7/8/9/10/11/12: Monte Carlo trend checks

void check_distance_trend(const std::vector<Cell>& at100) {
    ScenarioConfig base;
    auto at = [&](double d) {
        ScenarioConfig sc = base;
        apply_scenario_key(sc, "inter_dstar_m", std::to_string(d));
        return run_group(sc, Architecture::Dstar, "distance");
    };
    const double m40 = group_mean(at(40.0));
    const double m100 = group_mean(at100);
    const double m160 = group_mean(at(160.0));
    report(7, "surface-spacing sweet spot", m100 > m40 && m100 > m160,
           fmt("mean rate %.2f @40m, %.2f @100m, %.2f @160m", m40, m100, m160));
}

void check_partition_trend() {
    ScenarioConfig base;
    base.m_elems = 48;
    auto at = [&](int panels) {
        ScenarioConfig sc = base;
        sc.n_panels = panels;
        return run_group(sc, Architecture::Dstar, "partition");
    };
    const double m1 = group_mean(at(1));
    const double m8 = group_mean(at(8));
    const double m16 = group_mean(at(16));
    report(8, "partition sweet spot", m8 >= m1 && m8 >= m16,
           fmt("mean rate %.2f @1, %.2f @8, %.2f @16 panels", m1, m8, m16));
}

void check_double_ris_gap(const std::vector<Cell>& def,
                          const std::vector<Cell>& dris) {
    int positive = 0;
    for (int s = 0; s < kSeeds; ++s)
        if (def[s].rate > dris[s].rate) ++positive;
    const double md = group_mean(def), mr = group_mean(dris);
    report(9, "dual-surface gain over reflect-only", md > mr && positive >= 18,
           fmt("mean %.2f vs %.2f, positive gain in %d/%d paired seeds", md, mr,
               positive, kSeeds));
}

void check_quantization_asymmetry(const std::vector<Cell>& def) {
    double loss_phase = 0.0, loss_amp = 0.0; // coarse phase vs coarse amplitude
    for (const Cell& c : def) {
        if (!c.ok) continue;
        const ChannelSet ch = gen_channels(c.sc, c.sc.seed);
        const double coarse_p =
            evaluate_solution(c.res.beams, quantize_profile(c.res.star, 10, 1), ch, c.sc)
                .dl_sum_rate();
        const double coarse_a =
            evaluate_solution(c.res.beams, quantize_profile(c.res.star, 1, 10), ch, c.sc)
                .dl_sum_rate();
        loss_phase += c.rate - coarse_p;
        loss_amp += c.rate - coarse_a;
    }
    report(10, "quantization asymmetry", loss_phase > loss_amp,
           fmt("mean loss %.3f with 1 phase bit vs %.3f with 1 amplitude bit",
               loss_phase / kSeeds, loss_amp / kSeeds));
}

void check_coupled(const std::vector<Cell>& def, const std::vector<Cell>& cpl) {
    double max_cos = 0.0;
    int ok_runs = 0;
    for (const Cell& c : cpl) {
        if (!c.ok) continue;
        ++ok_runs;
        const StarProfile& st = c.res.star;
        // cos of the phase difference via the unit phasors themselves
        for (auto [r, t] : {std::pair{Side::PR, Side::PT}, std::pair{Side::SR, Side::ST}})
            for (int i = 0; i < st.elems(); ++i)
                max_cos = std::max(
                    max_cos, std::abs((st.t(t)(i) * std::conj(st.t(r)(i))).real()));
    }
    const double md = group_mean(def), mc = group_mean(cpl);
    const bool ok = ok_runs == kSeeds && max_cos <= 1e-12 && mc >= 0.85 * md;
    report(11, "coupled-phase feasibility and gap", ok,
           fmt("%d/%d runs, max |cos| %.1e, mean %.2f vs unconstrained %.2f", ok_runs,
               kSeeds, max_cos, mc, md));
}

bool monotone_with_se(const std::vector<std::vector<Cell>>& groups) {
    for (size_t i = 0; i + 1 < groups.size(); ++i) {
        const double lo = group_mean(groups[i]), hi = group_mean(groups[i + 1]);
        const double se = std::sqrt((group_var(groups[i]) + group_var(groups[i + 1])) /
                                    groups[i].size());
        if (hi < lo - se) return false;
    }
    return true;
}

void check_monotone_trends(const std::vector<Cell>& def) {
    ScenarioConfig base;
    auto at_power = [&](double dbm) {
        ScenarioConfig sc = base;
        sc.max_power_dbm = dbm;
        return run_group(sc, Architecture::Dstar, "power");
    };
    auto at_elems = [&](int m) {
        ScenarioConfig sc = base;
        sc.m_elems = m;
        return run_group(sc, Architecture::Dstar, "elements");
    };
    // default operating point doubles as the top power cell and the M=8 cell
    const std::vector<std::vector<Cell>> pt = {at_power(20.0), at_power(30.0), def};
    const std::vector<std::vector<Cell>> em = {def, at_elems(16), at_elems(24)};
    const bool ok = monotone_with_se(pt) && monotone_with_se(em);
    report(12, "monotone power/element trends", ok,
           fmt("power means %.2f/%.2f/%.2f, element means %.2f/%.2f/%.2f",
               group_mean(pt[0]), group_mean(pt[1]), group_mean(pt[2]),
               group_mean(em[0]), group_mean(em[1]), group_mean(em[2])));
}

// ---------------------------------------------------------------------------
// 13. splitting-solver residuals on convex test problems

void check_admm_residuals() {
    double max_primal = 0.0, max_dual = 0.0;
    bool all_opt = true;
    for (int it = 0; it < 20; ++it) {
        const int n = 4;
        RVec a(n), b(n);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            a(i) = g(grng);
            b(i) = g(grng);
        }
        const double rho = 1.0;
        // consensus split of min 1/2||x-a||^2 + 1/2||z-b||^2  s.t.  x - z = 0
        auto f_prox = [&](const RVec& v) { return RVec((a - rho * v) / (1.0 + rho)); };
        auto g_prox = [&](const RVec& v) { return RVec((b + rho * v) / (1.0 + rho)); };
        AdmmResult res =
            admm_generic(f_prox, g_prox, RMat::Identity(n, n), -RMat::Identity(n, n),
                         RVec::Zero(n), rho, RVec::Zero(n), RVec::Zero(n), 2000, 1e-7);
        max_primal = std::max(max_primal, res.primal_residual);
        max_dual = std::max(max_dual, res.dual_residual);
        all_opt = all_opt && res.status == SolveStatus::Optimal;
        // the consensus optimum is the midpoint; sanity-check it
        if ((res.x - RVec((a + b) / 2.0)).cwiseAbs().maxCoeff() > 1e-5) all_opt = false;
    }
    report(13, "splitting-solver residuals",
           all_opt && max_primal <= 1e-6 && max_dual <= 1e-5,
           fmt("max primal %.1e, max dual %.1e over 20 problems", max_primal, max_dual));
}

} // namespace

int main() {
    check_vectorization();
    check_transforms();
    check_sinr_oracle();

    const double t_def = now_s();
    ScenarioConfig base;
    const std::vector<Cell> def = run_group(base, Architecture::Dstar, "default");
    check_feasibility_group(def, t_def);
    check_ascent(def);
    check_small_instance_gap();
    check_distance_trend(def);
    check_partition_trend();
    const std::vector<Cell> dris = run_group(base, Architecture::DoubleRis, "double_ris");
    check_double_ris_gap(def, dris);
    check_quantization_asymmetry(def);
    const std::vector<Cell> cpl = run_group(base, Architecture::DstarCoupled, "coupled");
    check_coupled(def, cpl);
    check_monotone_trends(def);
    check_admm_residuals();

    std::printf("%s: %d/13 checks passed\n", failures == 0 ? "OK" : "FAILED",
                13 - failures);
    return failures;
}

#include "dstar/bench.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace dstar {

namespace {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt_value(double v) { // lossless round-trip for scenario overrides
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int worker_count() {
    if (const char* env = std::getenv("DSTAR_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct RunOutcome {
    DbapResult result;
    SinrReport report;
    std::string status;
};

/// Runs the optimizer, falling back to a zero threshold for an UL group whose
/// rate requirement is unattainable with this architecture's hardware (e.g.
/// reflect-only surfaces cannot serve the far UL group). The fallback is
/// recorded in the status so such cells are identifiable.
RunOutcome run_with_fallback(ScenarioConfig sc, const ChannelSet& ch) {
    std::string suffix;
    for (int attempt = 0; attempt < 3; ++attempt) {
        try {
            RunOutcome out;
            out.result = run_dbap(sc, ch);
            out.report = evaluate_solution(out.result.beams, out.result.star, ch, sc);
            out.status = std::string(to_string(out.result.trace.status)) + suffix;
            return out;
        } catch (const InfeasibleError& e) {
            if (e.group == "su" && sc.su_threshold() > 0.0)
                sc.su_rate_threshold_bpshz = 0.0;
            else if (e.group == "pu" && sc.pu_threshold() > 0.0)
                sc.pu_rate_threshold_bpshz = 0.0;
            else
                throw;
            suffix += "_best_effort_" + e.group;
        }
    }
    throw InfeasibleError("pu+su");
}

ResultRow hdx_run(const ScenarioConfig& sc, const ChannelSet& ch, ResultRow row) {
    // DL half-slot: no simultaneous UL, so no UL constraints, UL interference
    // or self-interference.
    ScenarioConfig dl = sc;
    dl.architecture = Architecture::Dstar;
    dl.ul_rate_threshold_bpshz = 0.0;
    dl.pu_rate_threshold_bpshz = dl.su_rate_threshold_bpshz = -1.0;
    ChannelSet ch_dl = ch;
    ch_dl.ul_power_watt = 0.0;
    RunOutcome out = run_with_fallback(dl, ch_dl);

    // UL half-slot: the BS does not transmit; users send through the surface
    // configuration obtained in the DL slot.
    const BeamformerSet quiet = BeamformerSet::zero(sc.n_tx, sc.k_pd, sc.k_sd);
    const SinrReport ul = evaluate_solution(quiet, out.result.star, ch, dl);

    row.dl_sum_rate = 0.5 * out.report.dl_sum_rate();
    row.r_pu = 0.5 * ul.r_pu;
    row.r_su = 0.5 * ul.r_su;
    row.iterations = static_cast<int>(out.result.trace.iters.size());
    row.status = out.status;
    return row;
}

} // namespace

std::uint64_t cell_seed(const ScenarioConfig& base, int seed_index, double value) {
    return mix_seed({base.seed, static_cast<std::uint64_t>(seed_index),
                     std::bit_cast<std::uint64_t>(value)});
}

ResultRow run_baseline(Architecture arch, const ScenarioConfig& base, int seed_index,
                       std::uint64_t seed) {
    ResultRow row;
    row.arch = arch;
    row.seed = seed_index;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ScenarioConfig sc = base;
        sc.architecture = arch;
        sc.seed = seed;
        sc.validate();
        const ChannelSet ch = gen_channels(sc, seed);
        if (arch == Architecture::HdxDstar) {
            row = hdx_run(sc, ch, row);
        } else {
            RunOutcome out = run_with_fallback(sc, ch);
            row.dl_sum_rate = out.report.dl_sum_rate();
            row.r_pu = out.report.r_pu;
            row.r_su = out.report.r_su;
            row.iterations = static_cast<int>(out.result.trace.iters.size());
            row.status = out.status;
        }
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

Table run_sweep(const SweepSpec& spec) {
    if (spec.values.empty() || spec.architectures.empty() || spec.seeds < 1)
        throw std::invalid_argument("run_sweep: empty value/architecture list or seeds < 1");

    struct Cell {
        Architecture arch;
        double value;
        int seed_index;
    };
    std::vector<Cell> cells;
    for (auto arch : spec.architectures)
        for (double v : spec.values)
            for (int s = 0; s < spec.seeds; ++s) cells.push_back({arch, v, s});

    std::vector<ResultRow> rows(cells.size());
    parallel_for(static_cast<int>(cells.size()), [&](int i) {
        const Cell& c = cells[i];
        ScenarioConfig sc = spec.base;
        if (!spec.param.empty()) apply_scenario_key(sc, spec.param, fmt_value(c.value));
        ResultRow r = run_baseline(c.arch, sc, c.seed_index, cell_seed(spec.base, c.seed_index, c.value));
        r.value = c.value;
        rows[i] = r;
    });

    Table t;
    t.columns = {"architecture", "param", "value",      "seed",  "dl_sum_rate",
                 "dl_std",       "r_pu",  "r_su",       "iterations", "status"};
    const std::string param_name = spec.param.empty() ? "none" : spec.param;
    size_t idx = 0;
    for (auto arch : spec.architectures) {
        for (double v : spec.values) {
            double sum = 0, sum_sq = 0, sum_pu = 0, sum_su = 0, sum_it = 0;
            for (int s = 0; s < spec.seeds; ++s, ++idx) {
                const ResultRow& r = rows[idx];
                t.rows.push_back({to_string(arch), param_name, fmt9(v),
                                  std::to_string(r.seed), fmt9(r.dl_sum_rate), "",
                                  fmt9(r.r_pu), fmt9(r.r_su), std::to_string(r.iterations),
                                  r.status});
                sum += r.dl_sum_rate;
                sum_sq += r.dl_sum_rate * r.dl_sum_rate;
                sum_pu += r.r_pu;
                sum_su += r.r_su;
                sum_it += r.iterations;
            }
            const double n = spec.seeds;
            const double mean = sum / n;
            const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
            t.rows.push_back({to_string(arch), param_name, fmt9(v), "", fmt9(mean),
                              fmt9(std::sqrt(var)), fmt9(sum_pu / n), fmt9(sum_su / n),
                              fmt9(sum_it / n), "mean"});
        }
    }
    return t;
}

Table run_quantization(const ScenarioConfig& base, int seeds) {
    if (seeds < 1) throw std::invalid_argument("run_quantization: seeds < 1");

    struct SeedRun {
        DbapResult result;
        ChannelSet ch;
        ScenarioConfig sc;
        bool ok = false;
        std::string error;
    };
    std::vector<SeedRun> runs(seeds);
    parallel_for(seeds, [&](int s) {
        SeedRun& run = runs[s];
        run.sc = base;
        run.sc.seed = cell_seed(base, s, 0.0);
        try {
            run.ch = gen_channels(run.sc, run.sc.seed);
            run.result = run_dbap(run.sc, run.ch);
            run.ok = true;
        } catch (const std::exception& e) {
            run.error = e.what();
        }
    });

    Table t;
    t.columns = {"n_amp", "n_phase", "seed", "dl_sum_rate", "r_pu", "r_su", "status"};
    auto emit_pair = [&](int na, int np) {
        double sum = 0;
        int n_ok = 0;
        for (int s = 0; s < seeds; ++s) {
            const SeedRun& run = runs[s];
            if (!run.ok) {
                t.rows.push_back({std::to_string(na), std::to_string(np), std::to_string(s),
                                  "0", "0", "0", "error: " + run.error});
                continue;
            }
            const StarProfile star =
                (na == 0) ? run.result.star : quantize_profile(run.result.star, na, np);
            const SinrReport rep =
                evaluate_solution(run.result.beams, star, run.ch, run.sc);
            t.rows.push_back({std::to_string(na), std::to_string(np), std::to_string(s),
                              fmt9(rep.dl_sum_rate()), fmt9(rep.r_pu), fmt9(rep.r_su),
                              na == 0 ? "reference" : "quantized"});
            sum += rep.dl_sum_rate();
            ++n_ok;
        }
        t.rows.push_back({std::to_string(na), std::to_string(np), "",
                          fmt9(n_ok ? sum / n_ok : 0.0), "0", "0", "mean"});
    };
    emit_pair(0, 0); // unquantized reference
    for (int na = 1; na <= 10; ++na)
        for (int np = 1; np <= 10; ++np) emit_pair(na, np);
    return t;
}

void emit_csv(const Table& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    auto quote = [](const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char c : cell) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    };
    auto write_row = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) f << ',';
            f << quote(cells[i]);
        }
        f << '\n';
    };
    write_row(table.columns);
    for (const auto& row : table.rows) write_row(row);
    if (!f) throw std::runtime_error("write failure: " + path);
}

} // namespace dstar

#pragma once

#include "dstar/dbap.hpp"

#include <string>
#include <vector>

namespace dstar {

/// One Monte Carlo experiment family: a swept scenario key, the architectures
/// to compare and the per-cell seed count.
struct SweepSpec {
    std::string param;          // scenario key; empty = single operating point
    std::vector<double> values; // one entry required even when param is empty
    std::vector<Architecture> architectures{Architecture::Dstar};
    int seeds = 20;
    ScenarioConfig base;
};

struct ResultRow {
    Architecture arch = Architecture::Dstar;
    double value = 0.0;
    int seed = 0; // seed index within the sweep
    double dl_sum_rate = 0.0;
    double r_pu = 0.0, r_su = 0.0;
    int iterations = 0;
    std::string status;
    double wall_time_s = 0.0; // not serialized: non-reproducible across hosts
};

/// Pre-formatted CSV table (header + stringified cells).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Derives the channel/init seed of one sweep cell. Deliberately independent
/// of the architecture so that baselines are compared on identical channel
/// draws (paired seeds).
std::uint64_t cell_seed(const ScenarioConfig& base, int seed_index, double value);

/// Runs one architecture on one channel realization, including the
/// architecture-specific protocol (half-duplex slot split, mode switching,
/// best-effort fallback when an UL group is unattainable by construction).
/// Never throws on per-cell failures; they are encoded in `status`.
ResultRow run_baseline(Architecture arch, const ScenarioConfig& sc, int seed_index,
                       std::uint64_t seed);

/// Full Monte Carlo sweep; appends one mean/std summary row per (architecture,
/// value) group. Cells run concurrently (thread count from DSTAR_THREADS).
Table run_sweep(const SweepSpec& spec);

/// Amplitude/phase quantization surface: converges the default optimizer once
/// per seed, then re-evaluates the quantized profile for every bit pair in
/// [1,10] x [1,10] (0/0 rows carry the unquantized reference).
Table run_quantization(const ScenarioConfig& base, int seeds);

void emit_csv(const Table& table, const std::string& path);

} // namespace dstar

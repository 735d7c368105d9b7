// Command-line front end for the joint uplink/downlink dual-surface simulator.
//
// Subcommands:
//   run    one scenario point, one architecture, N seeds
//   sweep  Monte Carlo sweep over one scenario key and several architectures
//   quant  amplitude/phase quantization surface
//
// All results are CSV (to --out or stdout). Exit code 0 on success; any
// failure prints a single "error: ..." line on stderr and exits nonzero.

#include "dstar/bench.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace dstar;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<Architecture> parse_archs(const std::string& csv) {
    std::vector<Architecture> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(architecture_from_string(item));
    }
    return out;
}

void write_table(const Table& table, const std::string& out_path) {
    if (!out_path.empty()) {
        emit_csv(table, out_path);
        return;
    }
    auto quote = [](const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string q = "\"";
        for (char c : cell) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            std::cout << (i ? "," : "") << quote(cells[i]);
        std::cout << '\n';
    };
    line(table.columns);
    for (const auto& row : table.rows) line(row);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"D-STAR joint uplink/downlink network simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, arch_csv = "dstar", param_spec;
    int seeds = 20;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario file (key = value lines)");
        cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
        cmd->add_option("--seeds", seeds, "Monte Carlo seeds per cell");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "single-point run");
    add_common(run_cmd);
    run_cmd->add_option("--arch", arch_csv, "architecture");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--arch", arch_csv, "comma-separated architectures");
    sweep_cmd->add_option("--param", param_spec, "swept key, e.g. inter_dstar_m=40,100,160")
        ->required();

    CLI::App* quant_cmd = app.add_subcommand("quant", "quantization surface");
    add_common(quant_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        ScenarioConfig base;
        if (!scenario_path.empty()) base = load_scenario(scenario_path);
        base.validate();

        Table table;
        if (run_cmd->parsed()) {
            SweepSpec spec;
            spec.base = base;
            spec.values = {0.0};
            spec.architectures = parse_archs(arch_csv);
            spec.seeds = seeds;
            table = run_sweep(spec);
        } else if (sweep_cmd->parsed()) {
            const auto eq = param_spec.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--param expects key=v1,v2,...");
            SweepSpec spec;
            spec.base = base;
            spec.param = param_spec.substr(0, eq);
            spec.values = parse_values(param_spec.substr(eq + 1));
            spec.architectures = parse_archs(arch_csv);
            spec.seeds = seeds;
            table = run_sweep(spec);
        } else {
            table = run_quantization(base, seeds);
        }
        write_table(table, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

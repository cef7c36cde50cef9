#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ness/harness.hpp"

namespace {

namespace fs = std::filesystem;

void print_criteria() {
    std::cout <<
        "Acceptance criteria (see tests/acceptance.cpp):\n"
        "  1  fluctuation_relation      closed-form symmetry of F(lambda, nu)\n"
        "  2  derivative_identities     dF matches shifted one-point functions\n"
        "  3  cumulant_table            series cumulants vs closed forms\n"
        "  4  c_star_reduction          constrained F collapses to energy-only form\n"
        "  5  lattice_energy_current    chain vs band integral vs low-T closed form\n"
        "  6  determinant_ground_truth  FCS determinant vs small-system Fock sums\n"
        "  7  fcs_pipeline              determinant rates vs band FCS vs closed form\n"
        "  8  chiral_factorization      decorrelation of opposite movers\n"
        "  9  light_cone_front          ballistic arrival, flat before and after\n"
        " 10  characters_leg            modular residual and finite-size one-points\n"
        " 11  protocol_gap              steady-start asymptote differs from F\n";
}

void ensure_writable(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path probe = dir / ".write_probe";
    std::ofstream test(probe);
    if (!test)
        throw std::runtime_error("output directory is not writable: " + dir.string());
    test.close();
    fs::remove(probe, ec);
}

int run_experiment(const std::string& kind_name, const std::string& config_path,
                   const std::string& out_dir, int workers,
                   const std::string& profile) {
    ness::ExperimentConfig cfg = ness::load_config(config_path, profile);
    if (ness::to_string(cfg.kind) != kind_name)
        throw std::runtime_error("config kind '" + ness::to_string(cfg.kind)
                                 + "' does not match subcommand '" + kind_name + "'");
    cfg.workers = workers;
    cfg.out_dir = out_dir;
    ensure_writable(cfg.out_dir);

    const ness::RunReport report = ness::run(cfg);
    const fs::path csv = cfg.out_dir / (kind_name + "_report.csv");
    const fs::path jsonl = cfg.out_dir / (kind_name + "_report.jsonl");
    ness::emit_csv(report, csv);
    ness::emit_jsonl(report, jsonl);

    int n_pass = 0, n_fail = 0, n_error = 0, n_info = 0;
    for (const auto& row : report.rows) {
        if (row.verdict == "pass") ++n_pass;
        else if (row.verdict == "fail") ++n_fail;
        else if (row.verdict == "error") ++n_error;
        else ++n_info;
        if (row.verdict == "fail" || row.verdict == "error")
            std::cout << "  [" << row.verdict << "] point " << row.point_index
                      << " " << row.quantity << (row.note.empty() ? "" : ": ")
                      << row.note << "\n";
    }
    std::cout << kind_name << ": " << n_pass << " pass, " << n_fail << " fail, "
              << n_error << " error, " << n_info << " informational ("
              << ness::format_double(report.wall_seconds) << " s)\n"
              << "wrote " << csv.string() << " and " << jsonl.string() << "\n";
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state transport toolkit: closed-form predictions, "
                 "lattice simulation, counting statistics, and cross-checks"};
    app.require_subcommand(0, 1);

    bool list_criteria = false;
    app.add_flag("--list-criteria", list_criteria,
                 "Print the acceptance-suite mapping and exit");

    struct Opts {
        std::string config;
        std::string out = "out";
        int workers = 1;
        std::string profile = "default";
    };
    std::map<std::string, Opts> opts;
    for (const std::string name :
         {"predict", "simulate", "fcs", "landauer", "characters", "compare"}) {
        auto& o = opts[name];
        CLI::App* sub = app.add_subcommand(name, name + " experiment sweep");
        sub->add_option("--config", o.config, "Config file (JSON)")->required();
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--workers", o.workers, "Concurrent grid points")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tolerance-profile", o.profile,
                        "Tolerance profile: strict or default")
            ->check(CLI::IsMember({"strict", "default"}));
    }

    CLI11_PARSE(app, argc, argv);

    if (list_criteria) {
        print_criteria();
        return 0;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::cout << app.help();
        return 1;
    }
    const std::string name = subs.front()->get_name();
    const Opts& o = opts[name];
    try {
        return run_experiment(name, o.config, o.out, o.workers, o.profile);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

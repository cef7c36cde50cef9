#include "ness/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ness/fcs.hpp"
#include "ness/ldf.hpp"
#include "ness/qseries.hpp"

namespace ness {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

double rel_error(double value, double reference, double scale_floor = 1e-12) {
    return std::abs(value - reference) / std::max(std::abs(reference), scale_floor);
}

ReportRow output_row(int idx, std::string quantity, std::string source, double v) {
    ReportRow row;
    row.point_index = idx;
    row.quantity = std::move(quantity);
    row.source = std::move(source);
    row.value = v;
    row.verdict = "n/a";
    return row;
}

ReportRow compare_row(int idx, std::string quantity, std::string source, double v,
                      std::string ref_source, double ref, double tol,
                      double scale_floor = 1e-12) {
    ReportRow row;
    row.point_index = idx;
    row.quantity = std::move(quantity);
    row.source = std::move(source);
    row.value = v;
    row.reference_source = std::move(ref_source);
    row.reference_value = ref;
    row.rel_error = rel_error(v, ref, scale_floor);
    row.tolerance = tol;
    row.verdict = row.rel_error <= tol ? "pass" : "fail";
    return row;
}

ReportRow error_row(int idx, const std::string& quantity, const std::string& what) {
    ReportRow row;
    row.point_index = idx;
    row.quantity = quantity;
    row.source = "none";
    row.verdict = "error";
    row.note = what;
    return row;
}

double tol_of(const ExperimentConfig& cfg, const std::string& key) {
    const auto it = cfg.tolerances.find(key);
    if (it == cfg.tolerances.end())
        throw std::invalid_argument("missing tolerance key: " + key);
    return it->second;
}

// Mid-chain currents averaged over the steady time window.
Currents lattice_window_average(const ChainSpec& spec, double lo, double hi,
                                int samples) {
    const auto sp = single_particle_hamiltonians(spec);
    const EvolutionKernel kernel(sp.h_full, partitioned_state(spec));
    const int bond = spec.mid_bond();
    const int site = spec.n_sites / 2;
    Currents acc;
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
        acc.charge += charge_current_at(kernel, spec, bond, t);
        acc.energy += energy_current_at(kernel, spec, site, t);
    }
    acc.charge /= samples;
    acc.energy /= samples;
    return acc;
}

std::vector<ReportRow> run_predict(const ExperimentConfig& cfg, int idx) {
    const ThermoPoint& tp = cfg.thermo_points[static_cast<size_t>(idx)];
    tp.validate();
    const Currents j = mean_currents(tp);
    std::vector<ReportRow> rows;
    rows.push_back(output_row(idx, "energy_current", "closed_form", j.energy));
    rows.push_back(output_row(idx, "charge_current", "closed_form", j.charge));
    rows.push_back(output_row(idx, "one_point_h_left", "closed_form",
                              one_point_h(tp.beta_l, tp.mu_l, tp.c).real()));
    rows.push_back(output_row(idx, "one_point_j_left", "closed_form",
                              one_point_j(tp.beta_l, tp.mu_l).real()));
    return rows;
}

std::vector<ReportRow> run_simulate(const ExperimentConfig& cfg, int idx) {
    const ChainSpec& spec = cfg.chains[static_cast<size_t>(idx)];
    const Currents lat = lattice_window_average(spec, cfg.time_window_lo,
                                                cfg.time_window_hi, cfg.time_samples);
    const ReservoirPair rp{spec.beta_l, spec.mu_l, spec.beta_r, spec.mu_r};
    const Currents band = steady_currents(BandSpec{spec.hopping}, rp);
    const double tol = tol_of(cfg, "current_vs_band");
    std::vector<ReportRow> rows;
    rows.push_back(compare_row(idx, "energy_current", "lattice", lat.energy,
                               "band_integral", band.energy, tol));
    rows.push_back(compare_row(idx, "charge_current", "lattice", lat.charge,
                               "band_integral", band.charge, tol));
    return rows;
}

std::vector<ReportRow> run_fcs(const ExperimentConfig& cfg, int idx) {
    const ChainSpec& spec = cfg.chains[static_cast<size_t>(idx)];
    const auto sp = single_particle_hamiltonians(spec);
    const auto report = cumulant_rates(partitioned_state(spec), sp.h_full,
                                       charge_half_difference(spec), cfg.t_grid,
                                       cfg.n_max);
    const ReservoirPair rp{spec.beta_l, spec.mu_l, spec.beta_r, spec.mu_r};
    const auto band =
        fcs_cumulants(BandSpec{spec.hopping}, rp, TransferKind::charge, cfg.n_max);
    const double tol = tol_of(cfg, "fcs_vs_band");
    std::vector<ReportRow> rows;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const size_t i = static_cast<size_t>(n - 1);
        ReportRow row = compare_row(idx, "charge_cumulant_rate_" + std::to_string(n),
                                    "determinant", report.rates[i], "band_integral",
                                    band[i], tol);
        if (report.flagged[i]) {
            row.verdict = "fail";
            row.note = "non-linear cumulant growth, fit residual "
                       + format_double(report.fit_residuals[i]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ReportRow> run_landauer(const ExperimentConfig& cfg, int idx) {
    const ReservoirPair& rp = cfg.reservoirs[static_cast<size_t>(idx)];
    const BandSpec band;
    const Currents j = steady_currents(band, rp);
    const double tol = tol_of(cfg, "landauer_consistency");
    std::vector<ReportRow> rows;
    rows.push_back(output_row(idx, "energy_current", "band_integral", j.energy));
    rows.push_back(output_row(idx, "charge_current", "band_integral", j.charge));
    const double c1_q = fcs_cumulants(band, rp, TransferKind::charge, 1)[0];
    const double c1_e = fcs_cumulants(band, rp, TransferKind::energy, 1)[0];
    // Consistency between two evaluations of the same band integral: the
    // natural scale is the unit-bandwidth current, so vanishing currents
    // compare absolutely rather than against roundoff.
    rows.push_back(compare_row(idx, "charge_rate_1", "band_fcs", c1_q,
                               "band_integral", j.charge, tol, 1.0));
    rows.push_back(compare_row(idx, "energy_rate_1", "band_fcs", c1_e,
                               "band_integral", j.energy, tol, 1.0));
    return rows;
}

std::vector<ReportRow> run_characters(const ExperimentConfig& cfg, int idx) {
    const CharacterPoint& cp = cfg.character_points[static_cast<size_t>(idx)];
    std::vector<ReportRow> rows;
    const double res = modular_covariance_residual(cp.level_k, 0, cplx{0.0, 1.0},
                                                   cplx{0.1, 0.05}, 40);
    ReportRow mod = compare_row(idx, "modular_residual", "q_series", res,
                                "exact_symmetry", 0.0, 1.0);
    mod.rel_error = res;  // absolute residual against an exact zero
    mod.tolerance = tol_of(cfg, "modular_residual");
    mod.verdict = res <= mod.tolerance ? "pass" : "fail";
    rows.push_back(std::move(mod));

    const double tol = tol_of(cfg, "one_point_rel");
    const double q_est = finite_R_one_point(cp.beta, cp.mu, cp.big_r,
                                            OnePointKind::charge, cp.level_k, cp.order);
    const double e_est = finite_R_one_point(cp.beta, cp.mu, cp.big_r,
                                            OnePointKind::energy, cp.level_k, cp.order);
    const double e_target = kPi / (12.0 * cp.beta * cp.beta)
                            + kPi * cp.mu * cp.mu / 2.0;
    if (cp.mu != 0.0)
        rows.push_back(compare_row(idx, "one_point_charge", "character", q_est,
                                   "closed_form", kPi * cp.mu, tol));
    else
        rows.push_back(output_row(idx, "one_point_charge", "character", q_est));
    rows.push_back(compare_row(idx, "one_point_energy", "character", e_est,
                               "closed_form", e_target, tol));
    return rows;
}

std::vector<ReportRow> run_compare(const ExperimentConfig& cfg, int idx) {
    const ChainSpec& spec = cfg.chains[static_cast<size_t>(idx)];
    const Currents lat = lattice_window_average(spec, cfg.time_window_lo,
                                                cfg.time_window_hi, cfg.time_samples);
    const double t_l = 1.0 / spec.beta_l;
    const double t_r = 1.0 / spec.beta_r;
    const double cft = kPi / 12.0 * (t_l * t_l - t_r * t_r);
    std::vector<ReportRow> rows;
    rows.push_back(compare_row(idx, "energy_current", "lattice", lat.energy,
                               "closed_form", cft, tol_of(cfg, "current_vs_cft")));
    return rows;
}

std::vector<ReportRow> run_point(const ExperimentConfig& cfg, int idx) {
    switch (cfg.kind) {
        case ExperimentKind::predict: return run_predict(cfg, idx);
        case ExperimentKind::simulate: return run_simulate(cfg, idx);
        case ExperimentKind::fcs: return run_fcs(cfg, idx);
        case ExperimentKind::landauer: return run_landauer(cfg, idx);
        case ExperimentKind::characters: return run_characters(cfg, idx);
        case ExperimentKind::compare: return run_compare(cfg, idx);
    }
    throw std::logic_error("run_point: unknown kind");
}

int grid_size(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::predict: return static_cast<int>(cfg.thermo_points.size());
        case ExperimentKind::simulate:
        case ExperimentKind::fcs:
        case ExperimentKind::compare: return static_cast<int>(cfg.chains.size());
        case ExperimentKind::landauer: return static_cast<int>(cfg.reservoirs.size());
        case ExperimentKind::characters:
            return static_cast<int>(cfg.character_points.size());
    }
    return 0;
}

std::string fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["kind"] = to_string(cfg.kind);
    j["seed"] = cfg.seed;
    for (const auto& tp : cfg.thermo_points)
        j["thermo_points"].push_back({{"beta_l", tp.beta_l},
                                      {"beta_r", tp.beta_r},
                                      {"mu_l", tp.mu_l},
                                      {"mu_r", tp.mu_r},
                                      {"c", tp.c}});
    for (const auto& ch : cfg.chains)
        j["chains"].push_back({{"n_sites", ch.n_sites},
                               {"hopping", ch.hopping},
                               {"beta_l", ch.beta_l},
                               {"mu_l", ch.mu_l},
                               {"beta_r", ch.beta_r},
                               {"mu_r", ch.mu_r}});
    for (const auto& rp : cfg.reservoirs)
        j["reservoirs"].push_back({{"beta_l", rp.beta_l},
                                   {"mu_l", rp.mu_l},
                                   {"beta_r", rp.beta_r},
                                   {"mu_r", rp.mu_r}});
    for (const auto& cp : cfg.character_points)
        j["character_points"].push_back({{"level_k", cp.level_k},
                                         {"beta", cp.beta},
                                         {"mu", cp.mu},
                                         {"R", cp.big_r},
                                         {"order", cp.order}});
    j["time_window"] = {cfg.time_window_lo, cfg.time_window_hi};
    j["time_samples"] = cfg.time_samples;
    j["t_grid"] = cfg.t_grid;
    j["n_max"] = cfg.n_max;
    j["tolerances"] = cfg.tolerances;
    return j;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::predict: return "predict";
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::fcs: return "fcs";
        case ExperimentKind::landauer: return "landauer";
        case ExperimentKind::characters: return "characters";
        case ExperimentKind::compare: return "compare";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "predict") return ExperimentKind::predict;
    if (name == "simulate") return ExperimentKind::simulate;
    if (name == "fcs") return ExperimentKind::fcs;
    if (name == "landauer") return ExperimentKind::landauer;
    if (name == "characters") return ExperimentKind::characters;
    if (name == "compare") return ExperimentKind::compare;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

void ExperimentConfig::validate() const {
    if (schema_version != 1)
        throw std::invalid_argument("config: unsupported schema_version "
                                    + std::to_string(schema_version));
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (grid_size(*this) == 0)
        throw std::invalid_argument("config: empty parameter grid for kind "
                                    + to_string(kind));
    for (const auto& [key, value] : tolerances)
        if (!(value > 0.0))
            throw std::invalid_argument("config: tolerance " + key
                                        + " must be positive");
    if (kind == ExperimentKind::fcs) {
        if (t_grid.size() < 2)
            throw std::invalid_argument("config: fcs needs a t_grid of >= 2 times");
        if (n_max < 1 || n_max > 4)
            throw std::invalid_argument("config: n_max must be in [1, 4]");
    }
    if ((kind == ExperimentKind::simulate || kind == ExperimentKind::compare)
        && !(time_window_hi > time_window_lo && time_window_lo > 0.0
             && time_samples >= 1))
        throw std::invalid_argument("config: invalid steady time window");
    for (const auto& ch : chains) ch.validate();
    for (const auto& tp : thermo_points) tp.validate();
}

std::map<std::string, double> default_tolerances(const std::string& profile) {
    std::map<std::string, double> tol = {
        {"current_vs_band", 1e-2},   {"current_vs_cft", 5e-2},
        {"fcs_vs_band", 2e-2},       {"landauer_consistency", 1e-8},
        {"modular_residual", 1e-8},  {"one_point_rel", 2e-2},
    };
    if (profile == "strict") {
        for (auto& [key, value] : tol) value /= 10.0;
    } else if (profile != "default") {
        throw std::invalid_argument("unknown tolerance profile: " + profile);
    }
    return tol;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::string& tolerance_profile) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("config parse error in " + path.string() + ": "
                                 + e.what());
    }
    ExperimentConfig cfg;
    cfg.schema_version = j.value("schema_version", 0);
    cfg.kind = experiment_kind_from_string(j.value("kind", std::string{}));
    cfg.seed = j.value("seed", 0L);
    cfg.tolerances = default_tolerances(tolerance_profile);
    for (const auto& tj : j.value("thermo_points", json::array())) {
        ThermoPoint tp;
        tp.beta_l = tj.value("beta_l", 1.0);
        tp.beta_r = tj.value("beta_r", 1.0);
        tp.mu_l = tj.value("mu_l", 0.0);
        tp.mu_r = tj.value("mu_r", 0.0);
        tp.c = tj.value("c", 1.0);
        cfg.thermo_points.push_back(tp);
    }
    for (const auto& cj : j.value("chains", json::array())) {
        ChainSpec ch;
        ch.n_sites = cj.value("n_sites", 1200);
        ch.hopping = cj.value("hopping", 1.0);
        ch.beta_l = cj.value("beta_l", 20.0);
        ch.mu_l = cj.value("mu_l", 0.0);
        ch.beta_r = cj.value("beta_r", 40.0);
        ch.mu_r = cj.value("mu_r", 0.0);
        cfg.chains.push_back(ch);
    }
    for (const auto& rj : j.value("reservoirs", json::array())) {
        ReservoirPair rp;
        rp.beta_l = rj.value("beta_l", 1.0);
        rp.mu_l = rj.value("mu_l", 0.0);
        rp.beta_r = rj.value("beta_r", 1.0);
        rp.mu_r = rj.value("mu_r", 0.0);
        cfg.reservoirs.push_back(rp);
    }
    for (const auto& pj : j.value("character_points", json::array())) {
        CharacterPoint cp;
        cp.level_k = pj.value("level_k", 1);
        cp.beta = pj.value("beta", 1.0);
        cp.mu = pj.value("mu", 0.0);
        cp.big_r = pj.value("R", 80.0);
        cp.order = pj.value("order", 2400);
        cfg.character_points.push_back(cp);
    }
    if (j.contains("time_window")) {
        cfg.time_window_lo = j["time_window"].at(0).get<double>();
        cfg.time_window_hi = j["time_window"].at(1).get<double>();
    }
    cfg.time_samples = j.value("time_samples", 16);
    cfg.t_grid = j.value("t_grid", std::vector<double>{});
    cfg.n_max = j.value("n_max", 2);
    const json tol_overrides = j.value("tolerances", json::object());
    for (const auto& [key, value] : tol_overrides.items())
        cfg.tolerances[key] = value.get<double>();
    cfg.validate();
    return cfg;
}

bool RunReport::all_pass() const {
    for (const auto& row : rows)
        if (row.verdict == "fail" || row.verdict == "error") return false;
    return true;
}

RunReport run(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const int n = grid_size(config);
    std::vector<std::vector<ReportRow>> slots(static_cast<size_t>(n));

    auto work = [&](int idx) {
        try {
            slots[static_cast<size_t>(idx)] = run_point(config, idx);
        } catch (const std::exception& e) {
            slots[static_cast<size_t>(idx)] = {error_row(idx, "point", e.what())};
        }
    };

    if (config.workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        const int n_threads = std::min(config.workers, n);
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
            });
        for (auto& th : pool) th.join();
    }

    RunReport report;
    report.kind = config.kind;
    report.version = kVersion;
    report.config_hash = fnv1a(config_to_json(config).dump());
    for (auto& rows : slots)
        for (auto& row : rows) report.rows.push_back(std::move(row));

    // Single-writer stage: compare sweeps with successive temperature
    // halvings additionally report the deviation scaling factor.
    if (config.kind == ExperimentKind::compare) {
        for (size_t i = 0; i + 1 < config.chains.size(); ++i) {
            const auto& a = config.chains[i];
            const auto& b = config.chains[i + 1];
            const bool halved = std::abs(b.beta_l - 2.0 * a.beta_l) < 1e-9
                                && std::abs(b.beta_r - 2.0 * a.beta_r) < 1e-9;
            if (!halved) continue;
            const ReportRow* ra = nullptr;
            const ReportRow* rb = nullptr;
            for (const auto& row : report.rows) {
                if (row.quantity != "energy_current") continue;
                if (row.point_index == static_cast<int>(i)) ra = &row;
                if (row.point_index == static_cast<int>(i + 1)) rb = &row;
            }
            if (!ra || !rb || ra->verdict == "error" || rb->verdict == "error")
                continue;
            const double dev_a = std::abs(ra->value - ra->reference_value);
            const double dev_b = std::abs(rb->value - rb->reference_value);
            ReportRow row;
            row.point_index = static_cast<int>(i);
            row.quantity = "t2_scaling_factor";
            row.source = "lattice";
            row.value = dev_a / std::max(dev_b, 1e-300);
            row.reference_source = "expected_range";
            row.reference_value = 4.0;
            row.tolerance = 0.0;
            row.verdict = row.value >= 2.5 && row.value <= 6.0 ? "pass" : "fail";
            row.note = "deviation ratio under temperature halving, expected in [2.5, 6]";
            report.rows.push_back(std::move(row));
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file for writing: "
                                 + path.string());
    return out;
}

}  // namespace

void emit_csv(const RunReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# kind=" << to_string(report.kind) << "\n";
    out << "# config_hash=" << report.config_hash << "\n";
    out << "# version=" << report.version << "\n";
    out << "# wall_seconds=" << format_double(report.wall_seconds) << "\n";
    out << "point,quantity,source,value,ref_source,ref_value,rel_error,tolerance,"
           "verdict,note\n";
    for (const auto& row : report.rows) {
        out << row.point_index << ',' << csv_escape(row.quantity) << ','
            << csv_escape(row.source) << ',' << format_double(row.value) << ','
            << csv_escape(row.reference_source) << ','
            << format_double(row.reference_value) << ','
            << format_double(row.rel_error) << ',' << format_double(row.tolerance)
            << ',' << row.verdict << ',' << csv_escape(row.note) << '\n';
    }
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

void emit_jsonl(const RunReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    json meta = {{"meta", true},
                 {"kind", to_string(report.kind)},
                 {"config_hash", report.config_hash},
                 {"version", report.version},
                 {"wall_seconds", report.wall_seconds}};
    out << meta.dump() << '\n';
    for (const auto& row : report.rows) {
        json rj = {{"point", row.point_index},
                   {"quantity", row.quantity},
                   {"source", row.source},
                   {"value", row.value},
                   {"ref_source", row.reference_source},
                   {"ref_value", row.reference_value},
                   {"rel_error", row.rel_error},
                   {"tolerance", row.tolerance},
                   {"verdict", row.verdict},
                   {"note", row.note}};
        out << rj.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

std::vector<ReportRow> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open json-lines file: " + path.string());
    std::vector<ReportRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rj = json::parse(line);
        if (rj.value("meta", false)) continue;
        ReportRow row;
        row.point_index = rj.at("point").get<int>();
        row.quantity = rj.at("quantity").get<std::string>();
        row.source = rj.at("source").get<std::string>();
        row.value = rj.at("value").get<double>();
        row.reference_source = rj.at("ref_source").get<std::string>();
        row.reference_value = rj.at("ref_value").get<double>();
        row.rel_error = rj.at("rel_error").get<double>();
        row.tolerance = rj.at("tolerance").get<double>();
        row.verdict = rj.at("verdict").get<std::string>();
        row.note = rj.at("note").get<std::string>();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ness

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "winfree/csv.hpp"
#include "winfree/reports.hpp"
#include "winfree/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
    std::string out_dir = ".";
    int workers = 0;  // 0 = one per hardware thread
    bool quiet = false;

    [[nodiscard]] int worker_count() const {
        return workers > 0 ? workers : omp_get_max_threads();
    }
};

// ---------------------------------------------------------------------------
// Fail-closed JSON config parsing: unknown keys are rejected with their path
// before any computation starts.
// ---------------------------------------------------------------------------

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw winfree::config_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw winfree::config_error(std::string("malformed JSON in '") + path + "': " + e.what());
    }
}

void check_keys(const json& object, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = object.begin(); it != object.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw winfree::config_error("unknown key '" + path + "/" + it.key() + "'");
        }
    }
}

const json& require_field(const json& object, const std::string& path, const char* key) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw winfree::config_error("missing key '" + path + "/" + key + "'");
    }
    return *it;
}

double as_real(const json& value, const std::string& path) {
    if (!value.is_number()) throw winfree::config_error("'" + path + "' must be a number");
    return value.get<double>();
}

long long as_integer(const json& value, const std::string& path) {
    if (!value.is_number_integer()) {
        throw winfree::config_error("'" + path + "' must be an integer");
    }
    return value.get<long long>();
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) throw winfree::config_error("'" + path + "' must be a string");
    return value.get<std::string>();
}

std::vector<double> as_real_array(const json& value, const std::string& path) {
    if (!value.is_array() || value.empty()) {
        throw winfree::config_error("'" + path + "' must be a non-empty array of numbers");
    }
    std::vector<double> out;
    out.reserve(value.size());
    for (const json& element : value) out.push_back(as_real(element, path));
    return out;
}

std::vector<double> parse_frequencies(const json& model, const std::string& path) {
    const bool has_list = model.contains("frequencies");
    const bool has_identical = model.contains("identical_nu") || model.contains("size");
    if (has_list == has_identical) {
        throw winfree::config_error("'" + path +
                                    "' needs either frequencies or identical_nu+size");
    }
    if (has_list) return as_real_array(model["frequencies"], path + "/frequencies");
    const double nu = as_real(require_field(model, path, "identical_nu"), path + "/identical_nu");
    const long long size = as_integer(require_field(model, path, "size"), path + "/size");
    if (size < 1) throw winfree::config_error("'" + path + "/size' must be >= 1");
    return std::vector<double>(static_cast<std::size_t>(size), nu);
}

winfree::SimOptions parse_sim(const json& sim, const std::string& path) {
    check_keys(sim, path, {"dt", "t_end", "record_stride", "integrator"});
    winfree::SimOptions options;
    if (sim.contains("dt")) options.dt = as_real(sim["dt"], path + "/dt");
    if (sim.contains("t_end")) options.t_end = as_real(sim["t_end"], path + "/t_end");
    if (sim.contains("record_stride")) {
        options.stride = static_cast<int>(as_integer(sim["record_stride"], path + "/record_stride"));
    }
    if (sim.contains("integrator")) {
        const std::string name = as_string(sim["integrator"], path + "/integrator");
        if (name == "euler") {
            options.method = winfree::Integrator::euler;
        } else if (name == "rk4") {
            options.method = winfree::Integrator::rk4;
        } else {
            throw winfree::config_error("'" + path + "/integrator' must be euler or rk4");
        }
    }
    return options;
}

struct RunConfig {
    winfree::ModelConfig model;
    std::vector<double> initial_phases;  // empty when drawing from the box
    double ic_alpha = 0.0;
    std::uint64_t ic_seed = 1;
    winfree::SimOptions sim;
    std::string trace_path = "trace.csv";
    std::string report_path = "summary.json";
};

RunConfig parse_run_config(const json& root) {
    check_keys(root, "", {"model", "initial", "sim", "outputs"});
    RunConfig config;

    const json& model = require_field(root, "", "model");
    check_keys(model, "model", {"n", "kappa", "frequencies", "identical_nu", "size"});
    config.model.order = static_cast<int>(as_integer(require_field(model, "model", "n"), "model/n"));
    config.model.kappa = as_real(require_field(model, "model", "kappa"), "model/kappa");
    config.model.frequencies = parse_frequencies(model, "model");

    const json& initial = require_field(root, "", "initial");
    check_keys(initial, "initial", {"phases", "uniform_box"});
    if (initial.contains("phases") == initial.contains("uniform_box")) {
        throw winfree::config_error("'initial' needs either phases or uniform_box");
    }
    if (initial.contains("phases")) {
        config.initial_phases = as_real_array(initial["phases"], "initial/phases");
        if (config.initial_phases.size() != config.model.frequencies.size()) {
            throw winfree::config_error("'initial/phases' must match the ensemble size");
        }
    } else {
        const json& box = initial["uniform_box"];
        check_keys(box, "initial/uniform_box", {"alpha", "seed"});
        config.ic_alpha = as_real(require_field(box, "initial/uniform_box", "alpha"),
                                  "initial/uniform_box/alpha");
        if (!(config.ic_alpha > 0.0)) {
            throw winfree::config_error("'initial/uniform_box/alpha' must be positive");
        }
        if (box.contains("seed")) {
            config.ic_seed = static_cast<std::uint64_t>(
                as_integer(box["seed"], "initial/uniform_box/seed"));
        }
    }

    if (root.contains("sim")) config.sim = parse_sim(root["sim"], "sim");

    if (root.contains("outputs")) {
        const json& outputs = root["outputs"];
        check_keys(outputs, "outputs", {"trace_path", "report_path"});
        if (outputs.contains("trace_path")) {
            config.trace_path = as_string(outputs["trace_path"], "outputs/trace_path");
        }
        if (outputs.contains("report_path")) {
            config.report_path = as_string(outputs["report_path"], "outputs/report_path");
        }
    }
    return config;
}

winfree::SweepSpec parse_sweep_spec(const json& root) {
    check_keys(root, "",
               {"n_values", "kappa", "frequencies", "initial", "seeds", "sim",
                "discard_fraction"});
    winfree::SweepSpec spec;

    const json& n_values = require_field(root, "", "n_values");
    if (!n_values.is_array() || n_values.empty()) {
        throw winfree::config_error("'n_values' must be a non-empty array of integers");
    }
    for (const json& value : n_values) {
        spec.n_values.push_back(static_cast<int>(as_integer(value, "n_values")));
    }

    const json& kappa = require_field(root, "", "kappa");
    check_keys(kappa, "kappa", {"min", "max", "step"});
    spec.kappa_min = as_real(require_field(kappa, "kappa", "min"), "kappa/min");
    spec.kappa_max = as_real(require_field(kappa, "kappa", "max"), "kappa/max");
    spec.kappa_step = as_real(require_field(kappa, "kappa", "step"), "kappa/step");

    const json& frequencies = require_field(root, "", "frequencies");
    check_keys(frequencies, "frequencies", {"values", "identical_nu", "size"});
    const bool has_values = frequencies.contains("values");
    const bool has_identical =
        frequencies.contains("identical_nu") || frequencies.contains("size");
    if (has_values == has_identical) {
        throw winfree::config_error("'frequencies' needs either values or identical_nu+size");
    }
    if (has_values) {
        spec.frequencies = as_real_array(frequencies["values"], "frequencies/values");
    } else {
        const double nu = as_real(require_field(frequencies, "frequencies", "identical_nu"),
                                  "frequencies/identical_nu");
        const long long size = as_integer(require_field(frequencies, "frequencies", "size"),
                                          "frequencies/size");
        if (size < 1) throw winfree::config_error("'frequencies/size' must be >= 1");
        spec.frequencies.assign(static_cast<std::size_t>(size), nu);
    }

    const json& initial = require_field(root, "", "initial");
    check_keys(initial, "initial", {"phases", "uniform_box"});
    if (initial.contains("phases") == initial.contains("uniform_box")) {
        throw winfree::config_error("'initial' needs either phases or uniform_box");
    }
    if (initial.contains("phases")) {
        spec.ic_phases = as_real_array(initial["phases"], "initial/phases");
    } else {
        const json& box = initial["uniform_box"];
        check_keys(box, "initial/uniform_box", {"alpha"});
        spec.ic_alpha = as_real(require_field(box, "initial/uniform_box", "alpha"),
                                "initial/uniform_box/alpha");
    }

    if (root.contains("seeds")) {
        const json& seeds = root["seeds"];
        if (!seeds.is_array() || seeds.empty()) {
            throw winfree::config_error("'seeds' must be a non-empty array of integers");
        }
        spec.seeds.clear();
        for (const json& value : seeds) {
            spec.seeds.push_back(static_cast<std::uint64_t>(as_integer(value, "seeds")));
        }
    }
    if (root.contains("sim")) spec.sim = parse_sim(root["sim"], "sim");
    if (root.contains("discard_fraction")) {
        spec.discard_fraction = as_real(root["discard_fraction"], "discard_fraction");
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fs::path resolved_output(const GlobalOptions& global, const std::string& name) {
    fs::path path(name);
    if (path.is_relative()) path = fs::path(global.out_dir) / path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw winfree::config_error("cannot write '" + path.string() + "'");
    out << text;
}

int cmd_simulate(const GlobalOptions& global, const std::string& config_path) {
    const RunConfig config = parse_run_config(load_json_file(config_path));
    const winfree::Model model(config.model);

    std::vector<double> initial = config.initial_phases;
    if (initial.empty()) {
        winfree::SplitMix64 rng(config.ic_seed);
        initial.resize(config.model.frequencies.size());
        for (double& theta : initial) theta = rng.uniform_open(-config.ic_alpha, config.ic_alpha);
    }

    const fs::path trace_path = resolved_output(global, config.trace_path);
    winfree::Trace partial;
    winfree::Trace trace;
    try {
        trace = winfree::simulate(model, std::move(initial), config.sim, &partial);
    } catch (const winfree::divergence_error& e) {
        if (partial.samples() > 0) {
            std::ofstream out(trace_path);
            winfree::write_trace_csv(out, partial, model);
        }
        std::fprintf(stderr, "simulate: diverged at t=%.6g; partial trace in %s\n", e.time,
                     trace_path.string().c_str());
        return 3;
    }

    {
        std::ofstream out(trace_path);
        if (!out) throw winfree::config_error("cannot write '" + trace_path.string() + "'");
        winfree::write_trace_csv(out, trace, model);
    }

    const winfree::ClassificationResult result = winfree::classify(
        winfree::rotation_numbers(trace, 0.5), config.model.frequencies);
    const fs::path report_path = resolved_output(global, config.report_path);
    write_text_file(report_path,
                    winfree::simulation_summary_json(trace, model, result).dump(2) + "\n");

    if (!global.quiet) {
        std::printf("label %s\ntrace %s\nsummary %s\n", winfree::to_string(result.label),
                    trace_path.string().c_str(), report_path.string().c_str());
    }
    return 0;
}

int cmd_single(double nu, int order, double kappa, double t_end, double dt) {
    winfree::ModelConfig config;
    config.order = order;
    config.kappa = kappa;
    config.frequencies = {nu};
    const winfree::Model model(config);

    winfree::SimOptions options;
    options.dt = dt;
    options.t_end = t_end;

    std::printf("integrator rho rho_minus_nu\n");
    double rho[2] = {0.0, 0.0};
    const winfree::Integrator methods[2] = {winfree::Integrator::euler,
                                            winfree::Integrator::rk4};
    const char* names[2] = {"euler", "rk4"};
    for (int m = 0; m < 2; ++m) {
        options.method = methods[m];
        const winfree::Trace trace = winfree::simulate(model, {0.0}, options);
        rho[m] = winfree::rotation_numbers(trace, 0.5).rho.front();
        std::printf("%s %.10g %.10g\n", names[m], rho[m], rho[m] - nu);
    }
    std::printf("integrator_gap %.3g\n", std::fabs(rho[0] - rho[1]));
    return 0;
}

int cmd_classify(const std::string& trace_path, const std::vector<double>& frequencies,
                 double discard, double eps_zero, double eps_equal) {
    std::ifstream in(trace_path);
    if (!in) throw winfree::config_error("cannot open '" + trace_path + "'");
    const winfree::Trace trace = winfree::read_trace_csv(in);
    if (static_cast<int>(frequencies.size()) != trace.size) {
        throw winfree::config_error("--frequencies must match the trace's phase columns");
    }
    const winfree::ClassificationResult result = winfree::classify(
        winfree::rotation_numbers(trace, discard), frequencies, eps_zero, eps_equal);
    std::printf("%s\n", winfree::classification_json(result).dump(2).c_str());
    return 0;
}

int cmd_thresholds(const GlobalOptions& global, int order, double alpha,
                   const std::vector<double>& frequencies, double kappa, int p,
                   const std::string& out_name) {
    winfree::ModelConfig config;
    config.order = order;
    config.kappa = kappa;
    config.frequencies = frequencies;
    const winfree::ThresholdReport report = winfree::thresholds(config, alpha, p);
    const std::string text = winfree::threshold_json(report).dump(2) + "\n";
    if (!out_name.empty()) {
        const fs::path path = resolved_output(global, out_name);
        write_text_file(path, text);
        if (!global.quiet) std::printf("thresholds %s\n", path.string().c_str());
    } else {
        std::fputs(text.c_str(), stdout);
    }
    return 0;
}

int cmd_sweep(const GlobalOptions& global, const std::string& spec_path, bool timings) {
    const winfree::SweepSpec spec = parse_sweep_spec(load_json_file(spec_path));
    const int workers = global.worker_count();
    const std::vector<winfree::SweepCell> cells = winfree::run_sweep(spec, workers);
    const winfree::CriticalCurves curves = winfree::critical_curves(cells);

    const fs::path cells_path = resolved_output(global, "cells.csv");
    {
        std::ofstream out(cells_path);
        winfree::write_cells_csv(out, cells, timings);
    }
    const fs::path curves_path = resolved_output(global, "curves.csv");
    {
        std::ofstream out(curves_path);
        winfree::write_curves_csv(out, curves);
    }
    const fs::path curves_json_path = resolved_output(global, "curves.json");
    write_text_file(curves_json_path, winfree::curves_json(curves).dump(2) + "\n");

    if (!global.quiet) {
        std::printf("cells %zu workers %d\n%s\n%s\n%s\n", cells.size(), workers,
                    cells_path.string().c_str(), curves_path.string().c_str(),
                    curves_json_path.string().c_str());
    }
    return 0;
}

int cmd_verify(const GlobalOptions& global, int n_max, int grid_points) {
    const std::vector<winfree::VerifyItem> items = winfree::verify_invariants(n_max, grid_points);
    const winfree::VerifyItem* first_failure = nullptr;
    for (const winfree::VerifyItem& item : items) {
        if (!item.ok && first_failure == nullptr) first_failure = &item;
        if (!global.quiet) {
            std::printf("%-24s n=%-4d %s slack=%.3e\n", item.check.c_str(), item.order,
                        item.ok ? "pass" : "FAIL", item.slack);
        }
    }
    if (first_failure != nullptr) {
        std::fprintf(stderr, "verify: FAILED %s at n=%d (slack %.6e)\n",
                     first_failure->check.c_str(), first_failure->order, first_failure->slack);
        return 1;
    }
    if (!global.quiet) std::printf("verify: all %zu checks passed\n", items.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Winfree oscillator toolkit: simulation, thresholds, sweeps"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--out-dir", global.out_dir, "Directory for output files");
    app.add_option("--workers", global.workers, "Sweep worker threads (0 = hardware)")
        ->envname("WINFREE_WORKERS");
    app.add_flag("--quiet", global.quiet, "Suppress informational output");

    std::string config_path;
    CLI::App* simulate = app.add_subcommand("simulate", "Integrate one configuration");
    simulate->add_option("config", config_path, "JSON run configuration")->required();
    simulate->fallthrough();

    double single_nu = 5.0;
    int single_n = 1;
    double single_kappa = 1.0;
    double single_t_end = 1000.0;
    double single_dt = 1e-2;
    CLI::App* single = app.add_subcommand("single", "One oscillator, both integrators");
    single->add_option("--nu", single_nu, "Natural frequency")->required();
    single->add_option("--n", single_n, "Coupling order")->required();
    single->add_option("--kappa", single_kappa, "Coupling strength")->required();
    single->add_option("--t-end", single_t_end, "Integration horizon");
    single->add_option("--dt", single_dt, "Time step");
    single->fallthrough();

    std::string classify_trace;
    std::vector<double> classify_frequencies;
    double classify_discard = 0.5;
    double classify_eps_zero = 1e-3;
    double classify_eps_equal = 1e-3;
    CLI::App* classify = app.add_subcommand("classify", "Classify a stored trace");
    classify->add_option("--trace", classify_trace, "Trace CSV path")->required();
    classify->add_option("--frequencies", classify_frequencies, "Natural frequencies")
        ->required()
        ->delimiter(',');
    classify->add_option("--discard", classify_discard, "Transient fraction to drop");
    classify->add_option("--eps-zero", classify_eps_zero, "Zero tolerance");
    classify->add_option("--eps-equal", classify_eps_equal, "Equality tolerance");
    classify->fallthrough();

    int thresholds_n = 1;
    double thresholds_alpha = 0.0;
    std::vector<double> thresholds_frequencies;
    double thresholds_kappa = 0.0;
    int thresholds_p = 2;
    std::string thresholds_out;
    CLI::App* thresholds = app.add_subcommand("thresholds", "Closed-form critical couplings");
    thresholds->add_option("--n", thresholds_n, "Coupling order")->required();
    thresholds->add_option("--alpha", thresholds_alpha, "Box half-width")->required();
    thresholds->add_option("--frequencies", thresholds_frequencies, "Natural frequencies")
        ->required()
        ->delimiter(',');
    thresholds->add_option("--kappa", thresholds_kappa, "Coupling used for omega_m");
    thresholds->add_option("--p", thresholds_p, "Partial-death subset size");
    thresholds->add_option("--out", thresholds_out, "Write JSON here instead of stdout");
    thresholds->fallthrough();

    std::string sweep_spec_path;
    bool sweep_timings = false;
    CLI::App* sweep = app.add_subcommand("sweep", "Parallel (n, kappa) phase diagram");
    sweep->add_option("spec", sweep_spec_path, "JSON file describing the sweep grid")->required();
    sweep->add_flag("--timings", sweep_timings, "Record wall times (breaks byte-stability)");
    sweep->fallthrough();

    int verify_n_max = 30;
    int verify_grid = 1000001;
    CLI::App* verify = app.add_subcommand("verify", "Kernel and quadrature invariant suite");
    verify->add_option("--n-max", verify_n_max, "Highest order to certify");
    verify->add_option("--grid", verify_grid, "Grid points for the sup oracles");
    verify->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(global, config_path);
        if (single->parsed()) {
            return cmd_single(single_nu, single_n, single_kappa, single_t_end, single_dt);
        }
        if (classify->parsed()) {
            return cmd_classify(classify_trace, classify_frequencies, classify_discard,
                                classify_eps_zero, classify_eps_equal);
        }
        if (thresholds->parsed()) {
            return cmd_thresholds(global, thresholds_n, thresholds_alpha,
                                  thresholds_frequencies, thresholds_kappa, thresholds_p,
                                  thresholds_out);
        }
        if (sweep->parsed()) return cmd_sweep(global, sweep_spec_path, sweep_timings);
        if (verify->parsed()) return cmd_verify(global, verify_n_max, verify_grid);
    } catch (const winfree::divergence_error& e) {
        std::fprintf(stderr, "error: diverged at t=%.6g\n", e.time);
        return 3;
    } catch (const winfree::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

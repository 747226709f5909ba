// Command-line front end: reproducible sweeps in, CSV/JSON out.
//
// `simulate` writes a sweep CSV plus a JSON run manifest, `analyze` fits an
// existing CSV and prints a JSON report, `reproduce-figures` runs the four
// canonical scenarios at the documented defaults. All numeric work happens
// in the library; this file only parses flags and routes bytes.

#include "biphoton/biphoton.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Output-directory override: relative output paths land under
// BIPHOTON_OUT_DIR when it is set, absolute paths are honored as given.
fs::path resolve_output(const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) {
        return p;
    }
    if (const char* dir = std::getenv("BIPHOTON_OUT_DIR")) {
        return fs::path(dir) / p;
    }
    return p;
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

struct SimulateArgs {
    std::string scenario = "entangled";
    std::optional<double> delta_lambda;
    std::optional<double> z;
    std::optional<double> b;
    std::optional<double> s_uev;
    double tau_ns = 1.0;
    std::optional<double> start_nm;
    std::optional<double> end_nm;
    std::optional<int> points;
    std::optional<double> pairs;
    std::optional<double> jitter;
    std::optional<int> sweeps;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda_bar;
    std::string out;
    std::string manifest;
};

biphoton::Scenario build_scenario(const SimulateArgs& args) {
    using namespace biphoton;
    Scenario scenario = Scenario::make(parse_scenario_kind(args.scenario));
    if (args.delta_lambda) {
        scenario.source.delta_rad = 2.0 * std::numbers::pi * *args.delta_lambda;
    }
    if (args.s_uev) {
        scenario.source.s_ueV = *args.s_uev;
        scenario.source.z = splitting_to_coherence(*args.s_uev, args.tau_ns);
    }
    if (args.z) {
        // explicit coherence wins over the splitting-derived value
        scenario.source.z = *args.z;
    }
    if (args.b) {
        scenario.source.b = *args.b;
    }
    if (args.start_nm) scenario.sweep.d_start_nm = *args.start_nm;
    if (args.end_nm) scenario.sweep.d_end_nm = *args.end_nm;
    if (args.points) scenario.sweep.n_points = *args.points;
    if (args.pairs) scenario.sweep.pairs_per_point = *args.pairs;
    if (args.jitter) scenario.sweep.jitter_lambda = *args.jitter;
    if (args.sweeps) scenario.sweep.n_sweeps = *args.sweeps;
    if (args.seed) scenario.sweep.seed = *args.seed;
    if (args.lambda_bar) scenario.sweep.lambda_bar_nm = *args.lambda_bar;
    return scenario;
}

int run_simulate(const SimulateArgs& args) {
    using namespace biphoton;
    Scenario scenario = build_scenario(args);
    scenario.validate();

    const SweepResult sweep = run_scenario(scenario);

    const std::string out_name =
        args.out.empty() ? std::string(scenario_kind_name(scenario.kind)) + ".csv" : args.out;
    const std::string manifest_name =
        args.manifest.empty()
            ? std::string(scenario_kind_name(scenario.kind)) + "_manifest.json"
            : args.manifest;

    const fs::path csv_path = resolve_output(out_name);
    if (csv_path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(csv_path.parent_path(), ec);
    }
    write_sweep_csv(csv_path.string(), sweep);
    write_text_file(resolve_output(manifest_name), run_manifest(scenario).dump(2) + "\n");
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
}

struct AnalyzeArgs {
    std::string input;
    std::string model = "sinusoid";
    std::string weight = "inverse-sigma";
    double lambda_bar = 885.0;
    std::string mixed_reference;
    std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
    using namespace biphoton;
    const FitModelKind kind = args.model == "classical-pure" ? FitModelKind::classical_pure
                                                             : FitModelKind::sinusoid;
    const WeightMode weight =
        args.weight == "uniform" ? WeightMode::uniform : WeightMode::inverse_sigma;

    const SweepResult sweep = read_sweep_csv(args.input);
    const FitResult result = fit(sweep, kind, weight);

    std::optional<double> mixed_amplitude;
    if (!args.mixed_reference.empty()) {
        const SweepResult mixed = read_sweep_csv(args.mixed_reference);
        const FitResult mixed_fit = fit(mixed, FitModelKind::sinusoid, weight);
        mixed_amplitude = fringe_amplitude(mixed_fit);
    }

    json report = analysis_report(result, args.lambda_bar, mixed_amplitude);
    report["input"] = args.input;
    const std::string text = report.dump(2) + "\n";
    if (args.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(resolve_output(args.out), text);
    }
    return 0;
}

// Documented figure defaults: b = 0.37, lambda_bar = 885 nm, jitter 0.03.
int run_reproduce_figures(const std::string& out_dir_flag) {
    using namespace biphoton;

    const fs::path out_dir =
        out_dir_flag.empty() ? resolve_output("figures") : resolve_output(out_dir_flag);

    struct Entry {
        ScenarioKind kind;
        std::uint64_t seed;
        FitModelKind fit_kind;
    };
    const Entry entries[] = {
        {ScenarioKind::entangled, 1, FitModelKind::sinusoid},
        {ScenarioKind::single_photon, 2, FitModelKind::sinusoid},
        {ScenarioKind::mixed_classical, 3, FitModelKind::sinusoid},
        {ScenarioKind::pure_classical_product, 4, FitModelKind::classical_pure},
    };

    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["rng"] = kRngId;
    manifest["defaults"] = {{"b", 0.37}, {"lambda_bar_nm", 885.0}, {"jitter_lambda", 0.03}};
    json files = json::array();

    for (const Entry& entry : entries) {
        Scenario scenario = Scenario::make(entry.kind);
        scenario.source.b = 0.37;
        scenario.sweep.seed = entry.seed;

        const SweepResult sweep = run_scenario(scenario);
        const FitResult fit_result = fit(sweep, entry.fit_kind, WeightMode::inverse_sigma);

        const std::string base = scenario_kind_name(entry.kind);
        const fs::path data_path = out_dir / (base + "_data.csv");
        const fs::path fit_path = out_dir / (base + "_fit.csv");
        const fs::path report_path = out_dir / (base + "_report.json");

        std::error_code ec;
        fs::create_directories(out_dir, ec);
        write_sweep_csv(data_path.string(), sweep);

        std::string fit_csv = "retardation_nm,intensity_fit\n";
        for (const auto& [d, y] : sample_model_curve(
                 fit_result.model, scenario.sweep.d_start_nm, scenario.sweep.d_end_nm, 500)) {
            char line[64];
            std::snprintf(line, sizeof(line), "%.15g,%.15g\n", d, y);
            fit_csv += line;
        }
        write_text_file(fit_path, fit_csv);

        json report = analysis_report(fit_result, scenario.sweep.lambda_bar_nm);
        report["scenario"] = base;
        report["manifest"] = run_manifest(scenario);
        write_text_file(report_path, report.dump(2) + "\n");

        files.push_back({{"scenario", base},
                         {"data", data_path.filename().string()},
                         {"fit", fit_path.filename().string()},
                         {"report", report_path.filename().string()}});
    }

    manifest["files"] = files;
    write_text_file(out_dir / "figures_manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote figure set to " << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biphoton interferometry simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Run a sweep and write CSV + manifest");
    simulate->add_option("--scenario", sim.scenario, "Scenario name")
        ->check(CLI::IsMember(
            {"entangled", "mixed_classical", "pure_classical_product", "single_photon"}));
    simulate->add_option("--delta-lambda", sim.delta_lambda,
                         "Source phase delta in wavelength fractions");
    simulate->add_option("--z", sim.z, "Coherence z in [0,1]");
    simulate->add_option("--b", sim.b, "Uncorrelated background fraction in [0,1]");
    simulate->add_option("--s-uev", sim.s_uev, "Fine-structure splitting in ueV");
    simulate->add_option("--tau-ns", sim.tau_ns, "Exciton lifetime in ns (with --s-uev)");
    simulate->add_option("--start", sim.start_nm, "Sweep start retardation in nm");
    simulate->add_option("--end", sim.end_nm, "Sweep end retardation in nm");
    simulate->add_option("--points", sim.points, "Number of sweep points");
    simulate->add_option("--pairs", sim.pairs, "Expected pairs per point");
    simulate->add_option("--jitter", sim.jitter, "Phase-setting jitter in wavelength fractions");
    simulate->add_option("--sweeps", sim.sweeps, "Number of repeated sweeps to average");
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--lambda-bar", sim.lambda_bar, "Center wavelength in nm");
    simulate->add_option("--out", sim.out, "Output CSV path");
    simulate->add_option("--manifest", sim.manifest, "Output manifest JSON path");

    AnalyzeArgs ana;
    CLI::App* analyze = app.add_subcommand("analyze", "Fit a sweep CSV and report JSON");
    analyze->add_option("--input", ana.input, "Input sweep CSV")->required();
    analyze->add_option("--model", ana.model, "Fit model")
        ->check(CLI::IsMember({"sinusoid", "classical-pure"}));
    analyze->add_option("--weight", ana.weight, "Weighting mode")
        ->check(CLI::IsMember({"uniform", "inverse-sigma"}));
    analyze->add_option("--lambda-bar", ana.lambda_bar, "Center wavelength in nm");
    analyze->add_option("--mixed-reference", ana.mixed_reference,
                        "Mixed-scenario sweep CSV for background inference");
    analyze->add_option("--out", ana.out, "Report path (stdout when omitted)");

    std::string fig_out_dir;
    CLI::App* figures =
        app.add_subcommand("reproduce-figures", "Run the canonical scenarios and emit plot CSVs");
    figures->add_option("--out-dir", fig_out_dir, "Output directory (default: figures)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return run_simulate(sim);
        }
        if (analyze->parsed()) {
            return run_analyze(ana);
        }
        return run_reproduce_figures(fig_out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

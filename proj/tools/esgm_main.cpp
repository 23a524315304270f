#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "esgm/errors.hpp"
#include "esgm/log.hpp"
#include "esgm/pipeline.hpp"
#include "esgm/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const fs::path& config_path, bool has_seed, std::uint64_t seed, int jobs,
            const std::string& risk_kind) {
    esgm::RunConfig config = esgm::load_run_config(config_path);
    if (has_seed) config.optimizer.seed = seed;
    if (jobs > 0) config.jobs = jobs;
    if (!risk_kind.empty()) {
        if (risk_kind == "all") {
            config.risk_kinds = {esgm::RiskKind::vvrisk, esgm::RiskKind::var, esgm::RiskKind::vol};
        } else {
            config.risk_kinds = {esgm::risk_kind_from_string(risk_kind)};
        }
        if (std::find(config.risk_kinds.begin(), config.risk_kinds.end(), config.rating_kind) ==
            config.risk_kinds.end()) {
            config.rating_kind = config.risk_kinds.front();
        }
    }
    const esgm::ReportBundle bundle = esgm::run_pipeline(config);
    std::cout << "run complete: " << bundle.counts.accepted << " records scored, "
              << bundle.weights.size() << " weight sets, reports in " << config.output_dir.string()
              << '\n';
    return 0;
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir, bool has_seed, std::uint64_t seed) {
    esgm::SyntheticSpec spec = esgm::load_synthetic_spec(spec_path);
    if (has_seed) spec.seed = seed;
    const auto [panel, prices] = esgm::generate_synthetic_panel(spec);
    fs::create_directories(out_dir);
    esgm::save_asset_panel(panel, out_dir / "assets.csv");
    esgm::save_price_history(prices, out_dir / "prices.csv");
    std::cout << "synth complete: " << panel.records.size() << " records, "
              << prices.series.size() << " price series in " << out_dir.string() << '\n';
    return 0;
}

int cmd_report(const fs::path& bundle_dir) {
    const auto written = esgm::rebuild_reports(bundle_dir);
    std::cout << "report complete: rewrote " << written.size() << " files in " << bundle_dir.string()
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ESG(M) scoring, weight optimization and risk dependence reports"};
    app.require_subcommand(1);

    std::string config_path, spec_path, out_dir, bundle_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string risk_kind;

    CLI::App* run = app.add_subcommand("run", "Run the full pipeline from a JSON config");
    run->add_option("--config", config_path, "JSON run configuration")->required();
    CLI::Option* run_seed = run->add_option("--seed", seed, "Override the optimizer seed");
    run->add_option("--jobs", jobs, "Worker threads for weight optimization")
        ->check(CLI::PositiveNumber);
    run->add_option("--risk-kind", risk_kind, "Restrict to one risk kind")
        ->check(CLI::IsMember({"vvrisk", "var", "vol", "all"}));

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic panel and price history");
    synth->add_option("--spec", spec_path, "JSON synthetic panel spec")->required();
    synth->add_option("--out", out_dir, "Directory for assets.csv and prices.csv")->required();
    CLI::Option* synth_seed = synth->add_option("--seed", seed, "Override the spec seed");

    CLI::App* report = app.add_subcommand("report", "Rebuild report files from run artifacts");
    report->add_option("--bundle", bundle_dir, "Directory holding a previous run's artifacts")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, run_seed->count() > 0, seed, jobs, risk_kind);
        if (synth->parsed()) return cmd_synth(spec_path, out_dir, synth_seed->count() > 0, seed);
        if (report->parsed()) return cmd_report(bundle_dir);
    } catch (const std::exception& e) {
        std::cerr << "esgm: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

// Command-line front end: simulate | process | analyze | reproduce.
//
// Option precedence: command-line flag, then environment variable
// (AWSALM_SEED, AWSALM_THREADS, AWSALM_OUT), then the config file, then the
// built-in default.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "awsalm/config.hpp"
#include "awsalm/experiment.hpp"
#include "awsalm/scenarios.hpp"
#include "awsalm/threads.hpp"

namespace {

std::optional<std::string> env_value(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config file");
    if (config_required) c->required();
    cmd->add_option("--seed", [&opts](const CLI::results_t& r) {
        opts.seed = std::stoull(r[0]);
        return true;
    }, "override the config seed");
    cmd->add_option("--threads", [&opts](const CLI::results_t& r) {
        opts.threads = std::stoi(r[0]);
        return true;
    }, "worker threads (0 = all cores)");
    cmd->add_option("--out", [&opts](const CLI::results_t& r) {
        opts.out = r[0];
        return true;
    }, "output directory");
}

awsalm::cli::ExperimentConfig resolve(const CommonOpts& opts) {
    awsalm::cli::ExperimentConfig cfg;
    if (!opts.config_path.empty())
        cfg = awsalm::cli::ExperimentConfig::load(opts.config_path);
    if (const auto v = env_value("AWSALM_SEED")) cfg.seed = std::stoull(*v);
    if (const auto v = env_value("AWSALM_THREADS")) cfg.threads = std::stoi(*v);
    if (const auto v = env_value("AWSALM_OUT")) cfg.output.dir = *v;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads) cfg.threads = *opts.threads;
    if (opts.out) cfg.output.dir = *opts.out;
    awsalm::set_worker_threads(cfg.threads);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sono-switched nanodroplet super-localization simulator"};
    app.require_subcommand(1);

    CommonOpts sim_opts, proc_opts, ana_opts, rep_opts;
    std::string stack_path, tracks_path, figure_id;
    double gate_t0 = 0.0, gate_t1 = 0.0;
    std::vector<double> profile_line;

    auto* sim_cmd = app.add_subcommand("simulate", "synthesize a frame stack");
    add_common(sim_cmd, sim_opts, true);

    auto* proc_cmd = app.add_subcommand("process", "run the localization chain");
    add_common(proc_cmd, proc_opts, true);
    proc_cmd->add_option("--stack", stack_path, "input stack (.stk)")->required();

    auto* ana_cmd = app.add_subcommand("analyze", "maps and profiles from tracks");
    add_common(ana_cmd, ana_opts, true);
    ana_cmd->add_option("--tracks", tracks_path, "track table (.csv)")->required();
    ana_cmd->add_option("--gate-start", gate_t0, "time gate start [s]");
    ana_cmd->add_option("--gate-end", gate_t1, "time gate end [s]");
    ana_cmd->add_option("--profile", profile_line,
                        "line profile endpoints: z0 x0 z1 x1 [mm]")
        ->expected(4);

    auto* rep_cmd = app.add_subcommand("reproduce", "run a packaged experiment");
    add_common(rep_cmd, rep_opts, false);
    rep_cmd->add_option("figure", figure_id, "fig2k | fig5 | fig6 | fig7 | fig8")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) {
            const auto cfg = resolve(sim_opts);
            awsalm::cli::run_simulate(cfg, cfg.output.dir);
            std::cout << "wrote " << cfg.output.dir << "/stack.stk\n";
            return 0;
        }
        if (proc_cmd->parsed()) {
            const auto cfg = resolve(proc_opts);
            const auto art = awsalm::cli::run_process(stack_path, cfg, cfg.output.dir);
            std::cout << "events: " << art.result.event_count()
                      << ", tracks: " << art.result.tracking.tracks.size() << "\n";
            for (const auto& [stage, seconds] : art.result.stage_seconds)
                std::cout << "  " << stage << ": " << seconds << " s\n";
            return 0;
        }
        if (ana_cmd->parsed()) {
            const auto cfg = resolve(ana_opts);
            awsalm::cli::AnalyzeOptions opts;
            opts.gate_t0 = gate_t0;
            opts.gate_t1 = gate_t1;
            if (profile_line.size() == 4) {
                opts.has_profile = true;
                opts.profile_a = {profile_line[0], profile_line[1]};
                opts.profile_b = {profile_line[2], profile_line[3]};
            }
            return awsalm::cli::run_analyze(tracks_path, cfg, opts, cfg.output.dir);
        }
        if (rep_cmd->parsed()) {
            auto cfg = resolve(rep_opts);
            if (cfg.output.dir == "out") cfg.output.dir = "out/" + figure_id;
            return awsalm::scenarios::reproduce(figure_id, cfg.seed, cfg.output.dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

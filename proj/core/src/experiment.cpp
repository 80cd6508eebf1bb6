#include "awsalm/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "awsalm/io.hpp"

namespace awsalm::cli {

namespace fs = std::filesystem;

namespace {

class StageTimer {
public:
    explicit StageTimer(std::vector<std::pair<std::string, double>>& sink)
        : sink_(sink) {}

    template <typename F>
    void run(const std::string& name, F&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        sink_.emplace_back(name, std::chrono::duration<double>(t1 - t0).count());
    }

private:
    std::vector<std::pair<std::string, double>>& sink_;
};

}  // namespace

std::size_t ProcessResult::event_count() const {
    std::size_t n = 0;
    for (const auto& f : events) n += f.size();
    return n;
}

ProcessResult process_stack(FrameStack& stack, const ProcessingConfig& cfg,
                            const std::vector<std::pair<int, int>>& blocks) {
    ProcessResult result;
    StageTimer timer(result.stage_seconds);
    if (stack.n_frames == 0) {
        result.psf_used = cfg.psf;
        result.sr.grid = maps::make_sr_grid(stack.grid, cfg.sr_pitch_um);
        const std::size_t n = result.sr.grid.pixels();
        result.sr.counts.assign(n, 0);
        result.sr.density.assign(n, 0.0f);
        result.sr.velocity.assign(n, 0.0f);
        result.sr.dir_cos.assign(n, 0.0f);
        result.sr.dir_sin.assign(n, 0.0f);
        result.sr.direction.assign(n, 0.0f);
        return result;
    }

    if (cfg.motion_enabled) {
        timer.run("motion", [&] {
            const int ref = cfg.motion_reference >= 0 ? cfg.motion_reference
                                                      : stack.n_frames / 2;
            pipeline::motion_compensate(stack, ref, cfg.motion);
        });
    }
    if (cfg.tgc_enabled) {
        timer.run("tgc", [&] { pipeline::tgc_correct(stack, cfg.tgc_max_gain); });
    }
    if (cfg.svd_enabled && stack.n_frames >= 2) {
        timer.run("svd", [&] {
            if (blocks.size() > 1) {
                pipeline::svd_clutter_filter_blocks(stack, blocks, cfg.svd_low_frac,
                                                    cfg.svd_high_frac);
            } else {
                const auto [low, high] = pipeline::svd_rank_band(
                    stack.n_frames, cfg.svd_low_frac, cfg.svd_high_frac);
                pipeline::svd_clutter_filter(stack, low, high);
            }
        });
    }
    if (cfg.wiener_enabled) {
        timer.run("wiener", [&] { pipeline::wiener_axial_temporal(stack, cfg.wiener); });
    }
    timer.run("lowpass", [&] { pipeline::lowpass_3d(stack, cfg.lowpass); });

    result.psf_used = cfg.psf;
    if (cfg.psf_source == ProcessingConfig::PsfSource::estimate) {
        timer.run("psf", [&] {
            const auto est = pipeline::estimate_psf(
                stack, cfg.psf_samples,
                (cfg.psf.fwhm_lateral_um + cfg.psf.fwhm_axial_um) / 2.0);
            result.psf_used = est.psf;
        });
    }

    timer.run("localize", [&] {
        result.events = pipeline::localize_stack(stack, result.psf_used, cfg.localize);
    });
    timer.run("track", [&] {
        result.tracking = pipeline::track(result.events, stack.frame_times, cfg.tracker);
    });
    timer.run("maps", [&] {
        result.sr = maps::accumulate_maps(result.tracking.tracks,
                                          maps::make_sr_grid(stack.grid, cfg.sr_pitch_um));
    });
    return result;
}

std::vector<std::pair<int, int>> blocks_from_sidecar(
    const std::map<std::string, std::string>& meta) {
    std::vector<std::pair<int, int>> blocks;
    const auto it = meta.find("blocks");
    if (it == meta.end()) return blocks;
    std::istringstream in(it->second);
    int a, b;
    char dash;
    while (in >> a >> dash >> b) blocks.emplace_back(a, b);
    return blocks;
}

namespace {

std::string blocks_to_string(const std::vector<std::pair<int, int>>& blocks) {
    std::ostringstream out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) out << ' ';
        out << blocks[i].first << '-' << blocks[i].second;
    }
    return out.str();
}

}  // namespace

SimulateArtifacts run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    SimulateArtifacts art;
    art.stack_path = (fs::path(out_dir) / "stack.stk").string();

    std::map<std::string, std::string> sidecar;
    sidecar["sequence"] = cfg.scenario.sequence.mode_name();
    sidecar["imaging_mi"] = std::to_string(cfg.scenario.sequence.imaging_mi);
    sidecar["compounding"] = std::to_string(cfg.scenario.sequence.compounding);
    sidecar["gas"] = cfg.scenario.gas.name;
    sidecar["seed"] = std::to_string(cfg.seed);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    sidecar["config_hash"] = hash;
    if (cfg.scenario.sequence.mode == acoustics::PulseSequence::Mode::awsalm)
        sidecar["blocks"] = blocks_to_string(cfg.scenario.sequence.imaging_blocks);

    FrameStackWriter writer(art.stack_path, cfg.scenario.render.grid);
    sim::SimSinks sinks;
    sinks.writer = &writer;
    sinks.keep_stack = false;
    art.result = sim::run_simulation(cfg.scenario, cfg.seed, sinks);
    writer.finalize(sidecar);

    if (cfg.output.write_ground_truth) {
        art.gt_events_path = (fs::path(out_dir) / "gt_events.csv").string();
        art.gt_active_path = (fs::path(out_dir) / "gt_active.csv").string();
        io::write_ground_truth_events_csv(art.gt_events_path, art.result.events);
        io::write_ground_truth_active_csv(art.gt_active_path, art.result.active);
    }
    write_manifest(out_dir, cfg, "simulate");
    return art;
}

ProcessArtifacts run_process(const std::string& stack_path,
                             const ExperimentConfig& cfg,
                             const std::string& out_dir) {
    fs::create_directories(out_dir);
    FrameStack stack = load_stack(stack_path);
    const auto meta = load_sidecar(stack_path);
    const auto blocks = blocks_from_sidecar(meta);

    ProcessArtifacts art;
    art.result = process_stack(stack, cfg.processing, blocks);

    art.localizations_path = (fs::path(out_dir) / "localizations.csv").string();
    art.tracks_path = (fs::path(out_dir) / "tracks.csv").string();
    io::write_localizations_csv(art.localizations_path, art.result.events,
                                art.result.tracking.tracks);
    io::write_tracks_csv(art.tracks_path, art.result.tracking.tracks);

    if (cfg.output.write_maps_pgm) {
        io::write_pgm((fs::path(out_dir) / "density.pgm").string(),
                      art.result.sr.density, art.result.sr.grid);
        io::write_pgm((fs::path(out_dir) / "velocity.pgm").string(),
                      art.result.sr.velocity, art.result.sr.grid);
        io::write_direction_ppm((fs::path(out_dir) / "direction.ppm").string(),
                                art.result.sr);
    }
    if (cfg.output.write_maps_csv) {
        io::write_matrix_csv((fs::path(out_dir) / "density.csv").string(),
                             art.result.sr.density, art.result.sr.grid);
        io::write_matrix_csv((fs::path(out_dir) / "velocity.csv").string(),
                             art.result.sr.velocity, art.result.sr.grid);
    }

    std::ofstream log((fs::path(out_dir) / "stage_timings.txt").string());
    for (const auto& [name, seconds] : art.result.stage_seconds)
        log << name << " " << seconds << "\n";
    write_manifest(out_dir, cfg, "process", {{"stack", stack_path}});
    return art;
}

int run_analyze(const std::string& tracks_path, const ExperimentConfig& cfg,
                const AnalyzeOptions& opts, const std::string& out_dir) {
    fs::create_directories(out_dir);
    auto tracks = io::read_tracks_csv(tracks_path);
    if (opts.gate_t1 > opts.gate_t0) {
        tracks = maps::time_gate(tracks, opts.gate_t0, opts.gate_t1,
                                 cfg.processing.tracker.min_track_length);
    }
    const auto sr = maps::accumulate_maps(
        tracks, maps::make_sr_grid(cfg.scenario.render.grid, cfg.processing.sr_pitch_um));
    io::write_pgm((fs::path(out_dir) / "density.pgm").string(), sr.density, sr.grid);
    io::write_pgm((fs::path(out_dir) / "velocity.pgm").string(), sr.velocity, sr.grid);
    io::write_direction_ppm((fs::path(out_dir) / "direction.ppm").string(), sr);
    if (cfg.output.write_maps_csv) {
        io::write_matrix_csv((fs::path(out_dir) / "density.csv").string(), sr.density,
                             sr.grid);
    }
    if (opts.has_profile) {
        const auto prof = maps::profile_fwhm(sr.density, sr.grid, opts.profile_a,
                                             opts.profile_b, 0.2);
        io::write_profile_csv((fs::path(out_dir) / "profile.csv").string(), prof);
    }
    write_manifest(out_dir, cfg, "analyze", {{"tracks", tracks_path}});
    return 0;
}

void write_manifest(const std::string& out_dir, const ExperimentConfig& cfg,
                    const std::string& command,
                    const std::map<std::string, std::string>& extra) {
    fs::create_directories(out_dir);
    {
        std::ofstream snap((fs::path(out_dir) / "config.snapshot").string());
        snap << cfg.raw_text;
    }
    std::ofstream out((fs::path(out_dir) / "manifest.txt").string());
    out << "command = " << command << "\n";
    out << "version = " << version_string() << "\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    out << "config_hash = " << hash << "\n";
    out << "seed = " << cfg.seed << "\n";
    for (const auto& [k, v] : extra) out << k << " = " << v << "\n";
}

std::string version_string() { return "awsalm 0.1.0"; }

}  // namespace awsalm::cli

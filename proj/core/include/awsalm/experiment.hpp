#pragma once

#include <map>
#include <string>
#include <vector>

#include "awsalm/config.hpp"
#include "awsalm/maps.hpp"
#include "awsalm/pipeline.hpp"
#include "awsalm/simulation.hpp"

namespace awsalm::cli {

// Full processing chain over a stack: motion compensation, TGC, SVD clutter
// suppression (per imaging block when block ranges are given, whole-stack
// otherwise), Wiener, 3-D low-pass, localization, tracking.
struct ProcessResult {
    std::vector<std::vector<pipeline::LocalizationEvent>> events;
    pipeline::TrackingResult tracking;
    maps::SRMaps sr;
    acoustics::PSFModel psf_used;
    std::vector<std::pair<std::string, double>> stage_seconds;

    std::size_t event_count() const;
};

ProcessResult process_stack(FrameStack& stack, const ProcessingConfig& cfg,
                            const std::vector<std::pair<int, int>>& blocks = {});

// ---- command-level runners (used by the CLI and by tests) ---------------------

struct SimulateArtifacts {
    std::string stack_path;
    std::string gt_events_path;
    std::string gt_active_path;
    sim::SimResult result;  // stack omitted when streamed to disk
};

SimulateArtifacts run_simulate(const ExperimentConfig& cfg,
                               const std::string& out_dir);

struct ProcessArtifacts {
    std::string localizations_path;
    std::string tracks_path;
    ProcessResult result;
};

ProcessArtifacts run_process(const std::string& stack_path,
                             const ExperimentConfig& cfg,
                             const std::string& out_dir);

// Rebuilds maps (optionally time-gated) from a track table and writes map
// images plus an optional line profile.
struct AnalyzeOptions {
    double gate_t0 = 0.0, gate_t1 = 0.0;  // active when gate_t1 > gate_t0
    bool has_profile = false;
    Vec2 profile_a, profile_b;
};

int run_analyze(const std::string& tracks_path, const ExperimentConfig& cfg,
                const AnalyzeOptions& opts, const std::string& out_dir);

// Imaging block ranges for a stack's sidecar ("blocks" key), empty if absent.
std::vector<std::pair<int, int>> blocks_from_sidecar(
    const std::map<std::string, std::string>& meta);

void write_manifest(const std::string& out_dir, const ExperimentConfig& cfg,
                    const std::string& command,
                    const std::map<std::string, std::string>& extra = {});

std::string version_string();

}  // namespace awsalm::cli

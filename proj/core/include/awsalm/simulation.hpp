#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "awsalm/acoustics.hpp"
#include "awsalm/frame_stack.hpp"
#include "awsalm/kinetics.hpp"
#include "awsalm/phantom.hpp"
#include "awsalm/render.hpp"

namespace awsalm::sim {

struct RenderOptions {
    GridSpec grid;
    acoustics::PSFModel psf;
    acoustics::NoiseParams noise;
    acoustics::ClutterDrift drift;
    bool enabled = true;
};

struct Scenario {
    phantom::Phantom vessels;
    phantom::Pulsatility pulsatility;
    phantom::FlowProfile flow_profile = phantom::FlowProfile::plug;
    double concentration_per_mm = 50.0;
    kinetics::GasSpecies gas;
    kinetics::SwitchingParams switching;
    acoustics::PulseSequence sequence;
    RenderOptions render;
};

enum class EventType : char { vaporized = 'V', destroyed = 'D' };

struct GroundTruthEvent {
    double time_s = 0.0;
    int frame = -1;  // output frame of the transmission, -1 during activation
    std::uint64_t droplet_id = 0;
    int segment = 0;
    Vec2 pos;
    EventType type = EventType::vaporized;
};

struct ActiveBubbleRecord {
    int frame = 0;
    std::uint64_t droplet_id = 0;
    int segment = 0;
    Vec2 pos;
    double amplitude = 0.0;
};

struct SimResult {
    std::optional<FrameStack> stack;  // absent when streaming to a writer
    std::vector<double> frame_times;
    std::vector<GroundTruthEvent> events;
    std::vector<ActiveBubbleRecord> active;  // per-frame bubble snapshots
    std::size_t final_population = 0;

    std::size_t vaporization_count() const;
};

struct SimSinks {
    FrameStackWriter* writer = nullptr;  // stream frames here when set
    bool keep_stack = true;              // hold the stack in memory
    bool record_active = true;
};

// Runs the scenario: transport and switching advance sequentially per
// transmission; frames are then rendered in parallel from per-frame bubble
// snapshots. Bit-reproducible for fixed seed, independent of thread count.
SimResult run_simulation(const Scenario& scenario, std::uint64_t seed,
                         const SimSinks& sinks = {});

}  // namespace awsalm::sim

#include <numeric>

#include "awsalm/kinetics.hpp"
#include "awsalm/maps.hpp"
#include "awsalm/simulation.hpp"

namespace awsalm::kinetics {

namespace {

// Crossed-tube dose-response bench: fixed geometry, flow and imaging chain so
// acquisitions differ only in gas and MI.
constexpr double kDoseFrameRateHz = 1000.0;

sim::Scenario dose_scenario(const GasSpecies& gas, double mi, int frames) {
    sim::Scenario s;
    s.vessels = phantom::build_crossed_tube_phantom(200.0, 15.0, 30.0, 30.0, 16.0);
    s.concentration_per_mm = 50.0;
    s.gas = gas;

    acoustics::PulseSequence seq;
    seq.mode = acoustics::PulseSequence::Mode::fast_awsalm;
    seq.imaging_frame_rate_hz = kDoseFrameRateHz;
    seq.compounding = 1;
    seq.imaging_mi = mi;
    const double dt = 1.0 / kDoseFrameRateHz;
    for (int f = 0; f < frames; ++f) {
        acoustics::TransmitEvent e;
        e.kind = acoustics::TransmitEvent::Kind::plane_wave;
        e.timestamp_s = f * dt;
        e.surface_mi = mi;
        e.frame_index = f;
        seq.events.push_back(e);
        seq.frame_times.push_back(e.timestamp_s);
    }
    seq.n_frames = frames;
    seq.imaging_blocks.emplace_back(0, frames);
    s.sequence = seq;

    s.render.grid.pitch_um = 100.0;
    s.render.grid.origin = {9.0, -12.0};
    s.render.grid.n_ax = 121;
    s.render.grid.n_lat = 241;
    s.render.psf = acoustics::fast_awsalm_psf();
    s.render.noise.gaussian_sigma = 0.005;
    s.render.noise.clutter_amplitude = 0.4;
    return s;
}

}  // namespace

ActivationCurve net_activation_intensity(const GasSpecies& gas, double mi,
                                         int frames, std::uint64_t rng_seed) {
    require(frames >= 1, "need at least one frame");
    require(mi > 0.0, "MI must be positive");
    const sim::Scenario scenario = dose_scenario(gas, mi, frames);
    sim::SimSinks sinks;
    sinks.record_active = false;
    const auto result = sim::run_simulation(scenario, rng_seed, sinks);

    const auto mask =
        maps::rasterize_vessels(scenario.render.grid, scenario.vessels, 0.2);
    ActivationCurve curve;
    curve.per_frame = maps::roi_intensity_curve(*result.stack, mask);
    curve.time_average =
        std::accumulate(curve.per_frame.begin(), curve.per_frame.end(), 0.0) /
        static_cast<double>(curve.per_frame.size());
    return curve;
}

}  // namespace awsalm::kinetics

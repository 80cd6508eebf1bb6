#include "awsalm/simulation.hpp"

#include <algorithm>

#include "internal_util.hpp"

namespace awsalm::sim {

namespace {
constexpr std::uint64_t kTagAdvect = 0xadu;
constexpr std::uint64_t kTagSwitch = 0x51u;
}  // namespace

std::size_t SimResult::vaporization_count() const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const GroundTruthEvent& e) {
            return e.type == EventType::vaporized;
        }));
}

SimResult run_simulation(const Scenario& scenario, std::uint64_t seed,
                         const SimSinks& sinks) {
    const auto& seq = scenario.sequence;
    seq.validate();
    scenario.gas.validate();
    scenario.switching.validate();

    auto pop = phantom::seed_droplets(scenario.vessels, scenario.concentration_per_mm,
                                      seed);
    phantom::FlowField flow = phantom::FlowField::from_phantom(scenario.vessels);
    flow.pulsatility = scenario.pulsatility;
    flow.profile = scenario.flow_profile;

    Rng advect_rng = Rng::stream(seed, kTagAdvect);

    SimResult result;
    result.frame_times = seq.frame_times;

    // Per-frame bubble snapshots taken after the last transmission of each
    // output frame; rendering consumes them afterwards.
    std::vector<std::vector<acoustics::BubbleEcho>> snapshots(seq.n_frames);

    double t_prev = seq.events.empty() ? 0.0 : seq.events.front().timestamp_s;
    for (std::size_t ei = 0; ei < seq.events.size(); ++ei) {
        const auto& ev = seq.events[ei];
        const double dt = ev.timestamp_s - t_prev;
        if (dt > 0.0) {
            phantom::advect_step(pop, scenario.vessels, flow, dt, t_prev, advect_rng);
        }
        t_prev = ev.timestamp_s;

        const acoustics::MiField field = ev.field();
        const auto field_fn = [&field](const Vec2& p) {
            return acoustics::mi_at(field, p);
        };
        const auto kind = ev.kind == acoustics::TransmitEvent::Kind::focused
                              ? kinetics::PulseKind::focused
                              : kinetics::PulseKind::plane;
        Rng switch_rng = Rng::stream(seed, kTagSwitch, ei);
        const auto switched =
            kinetics::step_switching(pop, scenario.vessels, field_fn, kind,
                                     scenario.gas, scenario.switching,
                                     ev.frame_index, dt, switch_rng);

        for (const auto& r : switched.vaporized) {
            result.events.push_back({ev.timestamp_s, ev.frame_index, r.id, r.segment,
                                     r.pos, EventType::vaporized});
        }
        for (const auto& r : switched.destroyed) {
            result.events.push_back({ev.timestamp_s, ev.frame_index, r.id, r.segment,
                                     r.pos, EventType::destroyed});
        }

        // Snapshot at the close of each output frame's transmit group.
        const bool closes_frame =
            ev.frame_index >= 0 &&
            (ei + 1 == seq.events.size() ||
             seq.events[ei + 1].frame_index != ev.frame_index);
        if (closes_frame) {
            auto& snap = snapshots[ev.frame_index];
            for (const auto& d : pop.droplets) {
                if (d.state != phantom::DropletState::active) continue;
                const Vec2 pos = phantom::droplet_position(scenario.vessels, d);
                const double mi = field_fn(pos);
                snap.push_back({pos, d.amplitude * mi});
                if (sinks.record_active) {
                    result.active.push_back(
                        {ev.frame_index, d.id, d.segment, pos, d.amplitude * mi});
                }
            }
        }
    }
    result.final_population = pop.droplets.size();

    if (!scenario.render.enabled) return result;

    const GridSpec& grid = scenario.render.grid;
    acoustics::FrameRenderer renderer(grid, scenario.render.psf,
                                      scenario.render.noise, scenario.render.drift,
                                      seed);
    acoustics::PlaneWaveField imaging_field;
    imaging_field.nominal_mi = seq.imaging_mi;
    // All imaging transmissions share the sequence's center frequency.
    imaging_field.freq_mhz = seq.events.front().center_frequency_mhz;

    if (sinks.keep_stack && sinks.writer == nullptr) {
        FrameStack stack(grid, seq.n_frames);
        stack.frame_times = seq.frame_times;
        detail::parallel_for(seq.n_frames, [&](std::int64_t f) {
            renderer.render(snapshots[f], imaging_field, seq.frame_times[f],
                            static_cast<std::uint64_t>(f), stack.frame(static_cast<int>(f)));
        });
        result.stack = std::move(stack);
    } else if (sinks.writer != nullptr) {
        // Stream in fixed-size blocks: render a block in parallel, append in
        // frame order.
        constexpr int kBlock = 32;
        std::vector<float> buffer(grid.pixels() * kBlock);
        for (int f0 = 0; f0 < seq.n_frames; f0 += kBlock) {
            const int nb = std::min(kBlock, seq.n_frames - f0);
            detail::parallel_for(nb, [&](std::int64_t k) {
                std::span<float> slot(buffer.data() + k * grid.pixels(), grid.pixels());
                renderer.render(snapshots[f0 + k], imaging_field,
                                seq.frame_times[f0 + k],
                                static_cast<std::uint64_t>(f0 + k), slot);
            });
            for (int k = 0; k < nb; ++k) {
                sinks.writer->append(
                    std::span<const float>(buffer.data() + k * grid.pixels(),
                                           grid.pixels()),
                    seq.frame_times[f0 + k]);
            }
        }
    }
    return result;
}

}  // namespace awsalm::sim

#include "awsalm/kinetics.hpp"

#include <array>
#include <cmath>

namespace awsalm::kinetics {

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

const std::array<GasSpecies, 3> kGasTable = {{
    // name, onset, peak, planewave, spontaneous/s, mi_half
    {"C3F8", 0.11, 0.17, true, 5e-4, 0.24},
    {"MIX", 0.17, 0.28, true, 0.0, 0.35},
    {"C4F10", 1.10, 1.50, false, 0.0, 2.60},
}};

}  // namespace

void GasSpecies::validate() const {
    require(mi_onset > 0.0 && mi_onset < mi_peak && mi_peak <= 1.5,
            "gas landmarks must satisfy 0 < mi_onset < mi_peak <= 1.5");
    require(spontaneous_rate_per_s >= 0.0, "spontaneous rate must be non-negative");
    require(mi_half > 0.0, "vaporization midpoint must be positive");
}

void SwitchingParams::validate() const {
    require(dest_onset > 0.0, "destruction onset must be positive");
    require(vap_slope > 0.0 && dest_slope > 0.0, "logistic slopes must be positive");
    require(survival_halflife_frames >= 1.0, "survival halflife must be >= 1 frame");
    require(focused_threshold_factor > 0.0 && focused_threshold_factor <= 1.0,
            "focused threshold factor must be in (0, 1]");
}

const GasSpecies& gas_defaults(const std::string& name) {
    for (const auto& g : kGasTable)
        if (g.name == name) return g;
    throw DomainError("unknown gas species '" + name + "' (expected C3F8, MIX or C4F10)");
}

std::vector<std::string> known_gases() {
    std::vector<std::string> out;
    for (const auto& g : kGasTable) out.push_back(g.name);
    return out;
}

double vaporization_probability(const GasSpecies& gas, double mi_local,
                                PulseKind kind, const SwitchingParams& p) {
    require(mi_local >= 0.0, "mechanical index must be non-negative");
    if (kind == PulseKind::plane && !gas.planewave_vaporizable) return 0.0;
    const double midpoint = (kind == PulseKind::focused)
                                ? gas.mi_half * p.focused_threshold_factor
                                : gas.mi_half;
    return logistic((mi_local - midpoint) / p.vap_slope);
}

double destruction_probability(double mi_local, const SwitchingParams& p) {
    require(mi_local >= 0.0, "mechanical index must be non-negative");
    return logistic((mi_local - p.dest_onset) / p.dest_slope);
}

SwitchingEvents step_switching(phantom::DropletPopulation& pop,
                               const phantom::Phantom& ph,
                               const MiFieldFn& mi_field, PulseKind kind,
                               const GasSpecies& gas, const SwitchingParams& params,
                               std::int64_t frame_index, double dt_s, Rng& rng) {
    SwitchingEvents events;
    const double p_spont =
        gas.spontaneous_rate_per_s > 0.0 && dt_s > 0.0
            ? -std::expm1(-gas.spontaneous_rate_per_s * dt_s)
            : 0.0;

    for (auto& d : pop.droplets) {
        if (d.state == phantom::DropletState::dormant) {
            const Vec2 pos = droplet_position(ph, d);
            const double p_ac = vaporization_probability(gas, mi_field(pos), kind, params);
            const double p = p_ac + p_spont - p_ac * p_spont;
            if (p > 0.0 && rng.uniform() < p) {
                d.state = phantom::DropletState::active;
                d.activation_frame = frame_index;
                events.vaporized.push_back({d.id, d.segment, pos});
            }
        } else if (d.state == phantom::DropletState::active) {
            const Vec2 pos = droplet_position(ph, d);
            if (rng.uniform() < destruction_probability(mi_field(pos), params)) {
                d.state = phantom::DropletState::destroyed;
                events.destroyed.push_back({d.id, d.segment, pos});
            }
        }
    }
    return events;
}

}  // namespace awsalm::kinetics

#include "awsalm/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace awsalm::maps {

std::size_t SRMaps::occupied_cells() const {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(),
                      [](std::uint32_t c) { return c > 0; }));
}

std::uint64_t SRMaps::total_count() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
}

GridSpec make_sr_grid(const GridSpec& source, double sr_pitch_um) {
    require(sr_pitch_um > 0.0, "SR pitch must be positive");
    require(sr_pitch_um <= source.pitch_um / 2.0,
            "SR pitch must be at most half the source pixel pitch");
    GridSpec g;
    g.pitch_um = sr_pitch_um;
    g.origin = source.origin;
    const double extent_z = (source.n_ax - 1) * source.pitch_mm();
    const double extent_x = (source.n_lat - 1) * source.pitch_mm();
    g.n_ax = static_cast<int>(std::floor(extent_z / g.pitch_mm())) + 1;
    g.n_lat = static_cast<int>(std::floor(extent_x / g.pitch_mm())) + 1;
    return g;
}

SRMaps accumulate_maps(const std::vector<pipeline::Track>& tracks,
                       const GridSpec& sr_grid) {
    SRMaps maps;
    maps.grid = sr_grid;
    const std::size_t n = sr_grid.pixels();
    maps.counts.assign(n, 0);
    maps.density.assign(n, 0.0f);
    maps.velocity.assign(n, 0.0f);
    maps.dir_cos.assign(n, 0.0f);
    maps.dir_sin.assign(n, 0.0f);
    maps.direction.assign(n, std::numeric_limits<float>::quiet_NaN());

    std::vector<double> vel_sum(n, 0.0);
    for (const auto& t : tracks) {
        const double speed = t.mean_speed_mm_s;
        const bool has_heading = speed > 0.0;
        // Heading angle convention: 0 rad along +lateral, pi/2 along +depth.
        const double h_cos = has_heading ? t.mean_velocity.x / speed : 0.0;
        const double h_sin = has_heading ? t.mean_velocity.z / speed : 0.0;
        for (const auto& p : t.points) {
            const int iz = static_cast<int>(std::lround(sr_grid.iz_of(p.pos.z)));
            const int ix = static_cast<int>(std::lround(sr_grid.ix_of(p.pos.x)));
            if (iz < 0 || iz >= sr_grid.n_ax || ix < 0 || ix >= sr_grid.n_lat)
                continue;
            const std::size_t i = static_cast<std::size_t>(ix) * sr_grid.n_ax + iz;
            maps.counts[i] += 1;
            vel_sum[i] += speed;
            if (has_heading) {
                maps.dir_cos[i] += static_cast<float>(h_cos);
                maps.dir_sin[i] += static_cast<float>(h_sin);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (maps.counts[i] == 0) continue;
        maps.density[i] = std::sqrt(static_cast<float>(maps.counts[i]));
        maps.velocity[i] = static_cast<float>(vel_sum[i] / maps.counts[i]);
        if (maps.counts[i] >= 2)
            maps.direction[i] = std::atan2(maps.dir_sin[i], maps.dir_cos[i]);
    }
    return maps;
}

std::vector<pipeline::Track> time_gate(const std::vector<pipeline::Track>& tracks,
                                       double t0, double t1,
                                       int min_track_length) {
    require(t0 < t1, "time gate needs t0 < t1");
    std::vector<pipeline::Track> gated;
    for (const auto& t : tracks) {
        pipeline::Track g;
        g.id = t.id;
        for (const auto& p : t.points)
            if (p.t_s >= t0 && p.t_s < t1) g.points.push_back(p);
        if (static_cast<int>(g.points.size()) >= std::max(1, min_track_length)) {
            pipeline::refresh_track_summary(g);
            gated.push_back(std::move(g));
        }
    }
    return gated;
}

ResolutionGain resolution_gain(double measured_fwhm_um,
                               const acoustics::PSFModel& psf) {
    require(measured_fwhm_um > 0.0, "measured FWHM must be positive");
    return {psf.fwhm_lateral_um / measured_fwhm_um,
            psf.fwhm_axial_um / measured_fwhm_um};
}

std::map<DoseKey, double> normalize_dose_response(
    const std::map<DoseKey, double>& mean_intensity) {
    const DoseKey* ref_key = nullptr;
    for (const auto& [key, value] : mean_intensity) {
        if (key.first == "C4F10" && std::abs(key.second - 0.06) < 1e-9) {
            ref_key = &key;
            break;
        }
    }
    require(ref_key != nullptr,
            "dose-response normalization needs the (C4F10, MI=0.06) reference");
    const double ref = mean_intensity.at(*ref_key) / 0.06;
    require(ref > 0.0, "reference acquisition has zero intensity");
    std::map<DoseKey, double> out;
    for (const auto& [key, value] : mean_intensity)
        out[key] = (value / key.second) / ref;
    return out;
}

LateralTimeImage spatiotemporal_projection(const FrameStack& stack, double z0_mm,
                                           double z1_mm) {
    require(z0_mm <= z1_mm, "depth band must have z0 <= z1");
    const int iz0 = std::clamp(static_cast<int>(std::ceil(stack.grid.iz_of(z0_mm))),
                               0, stack.grid.n_ax - 1);
    const int iz1 = std::clamp(static_cast<int>(std::floor(stack.grid.iz_of(z1_mm))),
                               0, stack.grid.n_ax - 1);
    require(iz1 >= iz0, "depth band does not intersect the stack");

    LateralTimeImage img;
    img.n_lat = stack.grid.n_lat;
    img.n_frames = stack.n_frames;
    img.data.assign(static_cast<std::size_t>(img.n_lat) * img.n_frames, 0.0f);
    for (int f = 0; f < stack.n_frames; ++f) {
        auto frame = stack.frame(f);
        for (int ix = 0; ix < img.n_lat; ++ix) {
            const float* col = frame.data() + static_cast<std::size_t>(ix) * stack.grid.n_ax;
            float m = col[iz0];
            for (int iz = iz0 + 1; iz <= iz1; ++iz) m = std::max(m, col[iz]);
            img.data[static_cast<std::size_t>(f) * img.n_lat + ix] = m;
        }
    }
    return img;
}

}  // namespace awsalm::maps

#include <algorithm>
#include <cmath>

#include "awsalm/maps.hpp"

namespace awsalm::maps {

namespace {

double bilinear(std::span<const float> map, const GridSpec& g, const Vec2& p) {
    const double fz = std::clamp(g.iz_of(p.z), 0.0, g.n_ax - 1.0);
    const double fx = std::clamp(g.ix_of(p.x), 0.0, g.n_lat - 1.0);
    const int z0 = std::min(static_cast<int>(fz), g.n_ax - 2);
    const int x0 = std::min(static_cast<int>(fx), g.n_lat - 2);
    const double az = fz - z0, ax = fx - x0;
    const auto at = [&](int z, int x) {
        return static_cast<double>(map[static_cast<std::size_t>(x) * g.n_ax + z]);
    };
    return (1 - ax) * ((1 - az) * at(z0, x0) + az * at(z0 + 1, x0)) +
           ax * ((1 - az) * at(z0, x0 + 1) + az * at(z0 + 1, x0 + 1));
}

// Linear-interpolated crossing of `level` walking from index i toward dir.
double half_crossing(const std::vector<double>& v, int i, int dir, double level) {
    int j = i;
    while (j + dir >= 0 && j + dir < static_cast<int>(v.size())) {
        const int k = j + dir;
        if (v[k] <= level) {
            const double frac = (v[j] - level) / (v[j] - v[k]);
            return j + dir * frac;
        }
        j = k;
    }
    return -1.0;
}

}  // namespace

bool Polygon::contains(const Vec2& p) const {
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[j];
        if ((a.x > p.x) != (b.x > p.x)) {
            const double z_cross = a.z + (p.x - a.x) / (b.x - a.x) * (b.z - a.z);
            if (p.z < z_cross) inside = !inside;
        }
    }
    return inside;
}

ProfileMeasurement profile_fwhm(std::span<const float> map, const GridSpec& grid,
                                const Vec2& a, const Vec2& b,
                                double min_peak_height) {
    require(map.size() == grid.pixels(), "map size mismatch");
    require(grid.contains(a) && grid.contains(b), "profile line must lie within the map");
    require(min_peak_height > 0.0 && min_peak_height < 1.0,
            "min peak height is a fraction of the profile maximum");

    ProfileMeasurement prof;
    prof.a = a;
    prof.b = b;
    const double length = (b - a).norm();
    require(length > 0.0, "profile endpoints coincide");
    const double step_mm = grid.pitch_mm() / 2.0;
    const int n = std::max(2, static_cast<int>(std::ceil(length / step_mm)) + 1);
    prof.distance_mm.resize(n);
    prof.value.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = length * i / (n - 1);
        const Vec2 p = a + (b - a) * (s / length);
        prof.distance_mm[i] = s;
        prof.value[i] = bilinear(map, grid, p);
    }

    const double vmax = *std::max_element(prof.value.begin(), prof.value.end());
    if (vmax <= 0.0) return prof;
    const double floor = min_peak_height * vmax;

    struct RawPeak {
        int index;
        double center_idx, height, fwhm_idx;
    };
    std::vector<RawPeak> raw;
    for (int i = 1; i + 1 < n; ++i) {
        const double v = prof.value[i];
        if (v < floor) continue;
        if (v > prof.value[i - 1] && v >= prof.value[i + 1]) {
            // parabolic center refinement
            const double denom = prof.value[i - 1] - 2 * v + prof.value[i + 1];
            const double off = denom < 0.0
                                   ? 0.5 * (prof.value[i - 1] - prof.value[i + 1]) / denom
                                   : 0.0;
            const double left = half_crossing(prof.value, i, -1, v / 2.0);
            const double right = half_crossing(prof.value, i, +1, v / 2.0);
            const double fwhm = (left >= 0.0 && right >= 0.0) ? right - left : 0.0;
            raw.push_back({i, i + std::clamp(off, -0.5, 0.5), v, fwhm});
        }
    }

    const double idx_to_mm = length / (n - 1);
    for (const auto& r : raw) {
        ProfilePeak p;
        p.center_mm = r.center_idx * idx_to_mm;
        p.height = r.height;
        p.fwhm_um = r.fwhm_idx * idx_to_mm * 1e3;
        prof.peaks.push_back(p);
    }
    // Adjacent peaks are resolved when the valley drops below half the lower
    // of the two.
    for (std::size_t k = 0; k + 1 < raw.size(); ++k) {
        const double lower = std::min(raw[k].height, raw[k + 1].height);
        double valley = lower;
        for (int i = raw[k].index; i <= raw[k + 1].index; ++i)
            valley = std::min(valley, prof.value[i]);
        if (valley < 0.5 * lower) {
            prof.separations_um.push_back(
                (prof.peaks[k + 1].center_mm - prof.peaks[k].center_mm) * 1e3);
        }
    }
    return prof;
}

}  // namespace awsalm::maps

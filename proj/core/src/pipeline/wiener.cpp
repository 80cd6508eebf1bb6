#include <algorithm>
#include <cmath>
#include <vector>

#include "awsalm/pipeline.hpp"
#include "../internal_util.hpp"

namespace awsalm::pipeline {

namespace {

// Box sums with clamped (shrinking) windows, via a double integral image over
// one (axial, time) plane laid out axial-fastest.
struct PlaneStats {
    int n_ax, n_fr, ra, rt;
    std::vector<double> integral, integral_sq;

    PlaneStats(const std::vector<double>& plane, int ax, int fr, int wa, int wt)
        : n_ax(ax), n_fr(fr), ra(wa / 2), rt(wt / 2),
          integral((ax + 1) * static_cast<std::size_t>(fr + 1), 0.0),
          integral_sq((ax + 1) * static_cast<std::size_t>(fr + 1), 0.0) {
        for (int f = 0; f < fr; ++f) {
            for (int z = 0; z < ax; ++z) {
                const double v = plane[static_cast<std::size_t>(f) * ax + z];
                const std::size_t i = idx(z + 1, f + 1);
                integral[i] = v + integral[idx(z, f + 1)] + integral[idx(z + 1, f)] -
                              integral[idx(z, f)];
                integral_sq[i] = v * v + integral_sq[idx(z, f + 1)] +
                                 integral_sq[idx(z + 1, f)] - integral_sq[idx(z, f)];
            }
        }
    }

    std::size_t idx(int z, int f) const {
        return static_cast<std::size_t>(f) * (n_ax + 1) + z;
    }

    void window(int z, int f, double& mean, double& var) const {
        const int z0 = std::max(0, z - ra), z1 = std::min(n_ax - 1, z + ra);
        const int f0 = std::max(0, f - rt), f1 = std::min(n_fr - 1, f + rt);
        const double n = static_cast<double>(z1 - z0 + 1) * (f1 - f0 + 1);
        const double s = integral[idx(z1 + 1, f1 + 1)] - integral[idx(z0, f1 + 1)] -
                         integral[idx(z1 + 1, f0)] + integral[idx(z0, f0)];
        const double s2 = integral_sq[idx(z1 + 1, f1 + 1)] -
                          integral_sq[idx(z0, f1 + 1)] -
                          integral_sq[idx(z1 + 1, f0)] + integral_sq[idx(z0, f0)];
        mean = s / n;
        var = std::max(0.0, s2 / n - mean * mean);
    }
};

}  // namespace

void wiener_axial_temporal(FrameStack& stack, const WienerParams& params) {
    require(stack.n_frames > 0, "Wiener filter needs a non-empty stack");
    require(params.window_axial_px >= 3 && params.window_frames >= 3,
            "Wiener window must be at least 3 x 3");
    require(params.window_axial_px <= stack.grid.n_ax &&
                params.window_frames <= stack.n_frames,
            "Wiener window larger than the (axial, time) plane");

    const int n_ax = stack.grid.n_ax;
    const int n_lat = stack.grid.n_lat;
    const int n_fr = stack.n_frames;
    const std::size_t px = stack.grid.pixels();

    detail::parallel_for(n_lat, [&](std::int64_t ix) {
        // Gather the (axial, time) plane for this lateral line.
        std::vector<double> plane(static_cast<std::size_t>(n_ax) * n_fr);
        for (int f = 0; f < n_fr; ++f) {
            const float* col =
                stack.data.data() + static_cast<std::size_t>(f) * px +
                static_cast<std::size_t>(ix) * n_ax;
            for (int z = 0; z < n_ax; ++z)
                plane[static_cast<std::size_t>(f) * n_ax + z] = col[z];
        }
        PlaneStats stats(plane, n_ax, n_fr, params.window_axial_px,
                         params.window_frames);

        double noise;
        if (params.noise_power) {
            noise = *params.noise_power;
        } else {
            // Auto estimate: median of the local variances in this plane.
            std::vector<double> vars(plane.size());
            for (int f = 0; f < n_fr; ++f)
                for (int z = 0; z < n_ax; ++z) {
                    double m, v;
                    stats.window(z, f, m, v);
                    vars[static_cast<std::size_t>(f) * n_ax + z] = v;
                }
            auto mid = vars.begin() + vars.size() / 2;
            std::nth_element(vars.begin(), mid, vars.end());
            noise = *mid;
        }

        for (int f = 0; f < n_fr; ++f) {
            float* col = stack.data.data() + static_cast<std::size_t>(f) * px +
                         static_cast<std::size_t>(ix) * n_ax;
            for (int z = 0; z < n_ax; ++z) {
                double mean, var;
                stats.window(z, f, mean, var);
                const double x = plane[static_cast<std::size_t>(f) * n_ax + z];
                const double gain = var > noise ? (var - noise) / var : 0.0;
                col[z] = static_cast<float>(mean + gain * (x - mean));
            }
        }
    });
}

}  // namespace awsalm::pipeline

#include <algorithm>
#include <vector>

#include "awsalm/pipeline.hpp"
#include "../internal_util.hpp"

namespace awsalm::pipeline {

std::vector<double> tgc_correct(FrameStack& stack, double max_gain) {
    require(stack.n_frames > 0, "TGC needs a non-empty stack");
    require(max_gain >= 1.0, "gain cap must be >= 1");
    const int n_ax = stack.grid.n_ax, n_lat = stack.grid.n_lat;

    // Temporal-mean depth profile: per-frame partial sums, combined in frame
    // order so the result is independent of threading.
    std::vector<std::vector<double>> partial(stack.n_frames,
                                             std::vector<double>(n_ax, 0.0));
    detail::parallel_for(stack.n_frames, [&](std::int64_t f) {
        auto frame = stack.frame(static_cast<int>(f));
        auto& row = partial[f];
        for (int ix = 0; ix < n_lat; ++ix) {
            const float* col = frame.data() + static_cast<std::size_t>(ix) * n_ax;
            for (int iz = 0; iz < n_ax; ++iz) row[iz] += col[iz];
        }
    });
    std::vector<double> row_mean(n_ax, 0.0);
    for (const auto& p : partial)
        for (int iz = 0; iz < n_ax; ++iz) row_mean[iz] += p[iz];
    const double denom = static_cast<double>(n_lat) * stack.n_frames;
    double global = 0.0;
    for (int iz = 0; iz < n_ax; ++iz) {
        row_mean[iz] /= denom;
        global += row_mean[iz];
    }
    global /= n_ax;

    std::vector<double> gain(n_ax, 1.0);
    for (int iz = 0; iz < n_ax; ++iz) {
        gain[iz] = row_mean[iz] > 0.0 ? std::min(global / row_mean[iz], max_gain)
                                      : max_gain;
    }

    detail::parallel_for(stack.n_frames, [&](std::int64_t f) {
        auto frame = stack.frame(static_cast<int>(f));
        for (int ix = 0; ix < n_lat; ++ix) {
            float* col = frame.data() + static_cast<std::size_t>(ix) * n_ax;
            for (int iz = 0; iz < n_ax; ++iz)
                col[iz] = static_cast<float>(col[iz] * gain[iz]);
        }
    });
    return gain;
}

}  // namespace awsalm::pipeline

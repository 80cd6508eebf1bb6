#include <algorithm>
#include <vector>

#include "awsalm/pipeline.hpp"
#include "../internal_util.hpp"

namespace awsalm::pipeline {

namespace {

// Replicate-boundary convolution along one axis of the stack.
void convolve_axis(FrameStack& stack, const std::vector<double>& kernel, int axis) {
    if (kernel.size() <= 1) return;
    const int radius = static_cast<int>(kernel.size() / 2);
    const int n_ax = stack.grid.n_ax, n_lat = stack.grid.n_lat, n_fr = stack.n_frames;
    const std::size_t px = stack.grid.pixels();

    if (axis == 0) {  // axial: contiguous lines
        detail::parallel_for(static_cast<std::int64_t>(n_fr) * n_lat, [&](std::int64_t k) {
            float* line = stack.data.data() + static_cast<std::size_t>(k) * n_ax;
            std::vector<float> src(line, line + n_ax);
            for (int i = 0; i < n_ax; ++i) {
                double acc = 0.0;
                for (int t = -radius; t <= radius; ++t)
                    acc += kernel[t + radius] * src[std::clamp(i + t, 0, n_ax - 1)];
                line[i] = static_cast<float>(acc);
            }
        });
    } else if (axis == 1) {  // lateral: stride n_ax within a frame
        detail::parallel_for(static_cast<std::int64_t>(n_fr) * n_ax, [&](std::int64_t k) {
            const int f = static_cast<int>(k / n_ax);
            const int iz = static_cast<int>(k % n_ax);
            float* base = stack.data.data() + static_cast<std::size_t>(f) * px + iz;
            std::vector<float> src(n_lat);
            for (int i = 0; i < n_lat; ++i) src[i] = base[static_cast<std::size_t>(i) * n_ax];
            for (int i = 0; i < n_lat; ++i) {
                double acc = 0.0;
                for (int t = -radius; t <= radius; ++t)
                    acc += kernel[t + radius] * src[std::clamp(i + t, 0, n_lat - 1)];
                base[static_cast<std::size_t>(i) * n_ax] = static_cast<float>(acc);
            }
        });
    } else {  // temporal: gather fixed pixel blocks to keep reads sequential
        constexpr std::int64_t kBlock = 512;
        const std::int64_t n_blocks = (static_cast<std::int64_t>(px) + kBlock - 1) / kBlock;
        detail::parallel_for(n_blocks, [&](std::int64_t b) {
            const std::size_t p0 = static_cast<std::size_t>(b) * kBlock;
            const std::size_t np = std::min<std::size_t>(kBlock, px - p0);
            std::vector<float> lines(np * n_fr);  // pixel-major time lines
            for (int f = 0; f < n_fr; ++f) {
                const float* src = stack.data.data() + static_cast<std::size_t>(f) * px + p0;
                for (std::size_t p = 0; p < np; ++p)
                    lines[p * n_fr + f] = src[p];
            }
            std::vector<float> out(n_fr);
            for (std::size_t p = 0; p < np; ++p) {
                float* line = lines.data() + p * n_fr;
                for (int i = 0; i < n_fr; ++i) {
                    double acc = 0.0;
                    for (int t = -radius; t <= radius; ++t)
                        acc += kernel[t + radius] * line[std::clamp(i + t, 0, n_fr - 1)];
                    out[i] = static_cast<float>(acc);
                }
                std::copy(out.begin(), out.end(), line);
            }
            for (int f = 0; f < n_fr; ++f) {
                float* dst = stack.data.data() + static_cast<std::size_t>(f) * px + p0;
                for (std::size_t p = 0; p < np; ++p)
                    dst[p] = lines[p * n_fr + f];
            }
        });
    }
}

}  // namespace

void lowpass_3d(FrameStack& stack, const LowpassSigma& sigma) {
    require(stack.n_frames > 0, "low-pass filter needs a non-empty stack");
    require(sigma.axial_px >= 0.0 && sigma.lateral_px >= 0.0 &&
                sigma.temporal_frames >= 0.0,
            "low-pass sigmas must be non-negative");
    convolve_axis(stack, detail::gaussian_kernel(sigma.axial_px), 0);
    convolve_axis(stack, detail::gaussian_kernel(sigma.lateral_px), 1);
    convolve_axis(stack, detail::gaussian_kernel(sigma.temporal_frames), 2);
}

}  // namespace awsalm::pipeline

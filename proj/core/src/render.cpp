#include "awsalm/render.hpp"

#include <algorithm>
#include <cmath>

#include "awsalm/rng.hpp"
#include "internal_util.hpp"

namespace awsalm::acoustics {

namespace {
constexpr std::uint64_t kTagClutter = 0xc1u;
constexpr std::uint64_t kTagNoise = 0x9015eu;
}  // namespace

void add_gaussian_blob(std::span<float> img, const GridSpec& grid, const Vec2& pos,
                       double amplitude, double sigma_ax_um, double sigma_lat_um) {
    const double sz = sigma_ax_um / grid.pitch_um;   // in pixels
    const double sx = sigma_lat_um / grid.pitch_um;
    const double cz = grid.iz_of(pos.z);
    const double cx = grid.ix_of(pos.x);
    const int z0 = std::max(0, static_cast<int>(std::floor(cz - 4.0 * sz)));
    const int z1 = std::min(grid.n_ax - 1, static_cast<int>(std::ceil(cz + 4.0 * sz)));
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - 4.0 * sx)));
    const int x1 = std::min(grid.n_lat - 1, static_cast<int>(std::ceil(cx + 4.0 * sx)));
    for (int ix = x0; ix <= x1; ++ix) {
        const double ex = (ix - cx) / sx;
        const double wx = std::exp(-0.5 * ex * ex);
        float* col = img.data() + static_cast<std::size_t>(ix) * grid.n_ax;
        for (int iz = z0; iz <= z1; ++iz) {
            const double ez = (iz - cz) / sz;
            col[iz] += static_cast<float>(amplitude * wx * std::exp(-0.5 * ez * ez));
        }
    }
}

FrameRenderer::FrameRenderer(const GridSpec& grid, const PSFModel& psf,
                             const NoiseParams& noise, const ClutterDrift& drift,
                             std::uint64_t seed)
    : grid_(grid), psf_(psf), noise_(noise), drift_(drift), seed_(seed) {
    psf_.validate();
    require(grid_.n_ax > 0 && grid_.n_lat > 0, "empty render grid");
    require(grid_.pitch_um <= psf_.fwhm_lateral_um / 4.0,
            "grid undersampled: pixel pitch must be <= lateral FWHM / 4");

    // Speckle-like texture: magnitude of two independent smoothed Gaussian
    // fields, normalized to unit mean.
    clutter_base_.assign(grid_.pixels(), 0.0f);
    if (noise_.clutter_amplitude > 0.0) {
        Rng rng = Rng::stream(seed_, kTagClutter);
        std::vector<float> re(grid_.pixels()), im(grid_.pixels());
        for (auto& v : re) v = static_cast<float>(rng.normal());
        for (auto& v : im) v = static_cast<float>(rng.normal());
        const double sigma_px = noise_.clutter_smooth_um / grid_.pitch_um;
        detail::blur_2d_replicate(re, grid_.n_ax, grid_.n_lat, sigma_px, sigma_px);
        detail::blur_2d_replicate(im, grid_.n_ax, grid_.n_lat, sigma_px, sigma_px);
        double sum = 0.0;
        for (std::size_t i = 0; i < clutter_base_.size(); ++i) {
            clutter_base_[i] = std::hypot(re[i], im[i]);
            sum += clutter_base_[i];
        }
        const double mean = sum / static_cast<double>(clutter_base_.size());
        if (mean > 0.0)
            for (auto& v : clutter_base_) v = static_cast<float>(v / mean);
    }
}

void FrameRenderer::render(std::span<const BubbleEcho> bubbles,
                           const PlaneWaveField& field, double t_s,
                           std::uint64_t frame_index, std::span<float> out) const {
    require(out.size() == grid_.pixels(), "render buffer size mismatch");

    std::vector<double> depth_gain(grid_.n_ax);
    for (int iz = 0; iz < grid_.n_ax; ++iz)
        depth_gain[iz] = field.at_depth(grid_.z_at(iz)) * noise_.clutter_amplitude;

    const bool drifting =
        drift_.amplitude_ax_px != 0.0 || drift_.amplitude_lat_px != 0.0;
    if (noise_.clutter_amplitude <= 0.0) {
        std::fill(out.begin(), out.end(), 0.0f);
    } else if (!drifting) {
        for (int ix = 0; ix < grid_.n_lat; ++ix) {
            const float* src = clutter_base_.data() + static_cast<std::size_t>(ix) * grid_.n_ax;
            float* dst = out.data() + static_cast<std::size_t>(ix) * grid_.n_ax;
            for (int iz = 0; iz < grid_.n_ax; ++iz)
                dst[iz] = static_cast<float>(src[iz] * depth_gain[iz]);
        }
    } else {
        const double phase = std::sin(2.0 * kPi * t_s / drift_.period_s);
        const double sz = drift_.amplitude_ax_px * phase;
        const double sx = drift_.amplitude_lat_px * phase;
        for (int ix = 0; ix < grid_.n_lat; ++ix) {
            const double fx = std::clamp(ix - sx, 0.0, grid_.n_lat - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, grid_.n_lat - 1);
            const double ax = fx - x0;
            float* dst = out.data() + static_cast<std::size_t>(ix) * grid_.n_ax;
            const float* c0 = clutter_base_.data() + static_cast<std::size_t>(x0) * grid_.n_ax;
            const float* c1 = clutter_base_.data() + static_cast<std::size_t>(x1) * grid_.n_ax;
            for (int iz = 0; iz < grid_.n_ax; ++iz) {
                const double fz = std::clamp(iz - sz, 0.0, grid_.n_ax - 1.0);
                const int z0 = static_cast<int>(fz);
                const int z1 = std::min(z0 + 1, grid_.n_ax - 1);
                const double az = fz - z0;
                const double v00 = c0[z0], v01 = c0[z1], v10 = c1[z0], v11 = c1[z1];
                const double v = (1 - ax) * ((1 - az) * v00 + az * v01) +
                                 ax * ((1 - az) * v10 + az * v11);
                dst[iz] = static_cast<float>(v * depth_gain[iz]);
            }
        }
    }

    for (const auto& b : bubbles) {
        add_gaussian_blob(out, grid_, b.pos, b.amplitude,
                          psf_.sigma_axial_um(), psf_.sigma_lateral_um());
    }

    if (noise_.gaussian_sigma > 0.0) {
        Rng rng = Rng::stream(seed_, kTagNoise, frame_index);
        for (auto& v : out) {
            v += static_cast<float>(noise_.gaussian_sigma * rng.normal());
            if (v < 0.0f) v = 0.0f;
        }
    }
}

}  // namespace awsalm::acoustics

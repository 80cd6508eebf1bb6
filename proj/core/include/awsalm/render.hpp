#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "awsalm/acoustics.hpp"
#include "awsalm/common.hpp"
#include "awsalm/frame_stack.hpp"

namespace awsalm::acoustics {

struct NoiseParams {
    double gaussian_sigma = 0.005;      // additive electronic noise, absolute
    double clutter_amplitude = 0.4;     // mean tissue echogenicity (times MI)
    double clutter_smooth_um = 600.0;   // correlation length of the texture
};

// Rigid sinusoidal translation of the tissue field, in pixels.
struct ClutterDrift {
    double amplitude_ax_px = 0.0;
    double amplitude_lat_px = 0.0;
    double period_s = 1.0;
};

struct BubbleEcho {
    Vec2 pos;
    double amplitude = 1.0;  // includes droplet jitter and local MI scaling
};

// Image-domain forward model: static speckle-textured tissue field (scaled by
// the transmit field, optionally drifting), PSF-shaped bubble echoes, and
// additive white noise clamped to non-negative intensity.
class FrameRenderer {
public:
    FrameRenderer(const GridSpec& grid, const PSFModel& psf,
                  const NoiseParams& noise, const ClutterDrift& drift,
                  std::uint64_t seed);

    // Deterministic per (seed, frame_index); safe to call concurrently for
    // different frames with separate output buffers.
    void render(std::span<const BubbleEcho> bubbles, const PlaneWaveField& field,
                double t_s, std::uint64_t frame_index,
                std::span<float> out) const;

    const GridSpec& grid() const { return grid_; }
    const std::vector<float>& clutter_base() const { return clutter_base_; }

private:
    GridSpec grid_;
    PSFModel psf_;
    NoiseParams noise_;
    ClutterDrift drift_;
    std::uint64_t seed_;
    std::vector<float> clutter_base_;  // mean-1 texture, unscaled
};

// Stamps one PSF-shaped blob; exposed for tests and map rendering.
void add_gaussian_blob(std::span<float> img, const GridSpec& grid, const Vec2& pos,
                       double amplitude, double sigma_ax_um, double sigma_lat_um);

}  // namespace awsalm::acoustics

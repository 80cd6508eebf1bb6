#pragma once

#include <span>
#include <vector>

#include "awsalm/acoustics.hpp"
#include "awsalm/common.hpp"
#include "awsalm/frame_stack.hpp"

namespace awsalm::acoustics {

// Linear array along x at z = 0.
struct ArrayGeometry {
    int n_elements = 128;
    double pitch_mm = 0.3;
    double center_x_mm = 0.0;

    double element_x(int i) const {
        return center_x_mm + (i - 0.5 * (n_elements - 1)) * pitch_mm;
    }
    double aperture_mm() const { return (n_elements - 1) * pitch_mm; }
};

struct Scatterer {
    Vec2 pos;
    double amplitude = 1.0;
};

struct ChannelData {
    int n_elements = 0;
    double fs_hz = 16e6;
    double t0_s = 0.0;
    int n_samples = 0;
    std::vector<float> samples;  // element-major: trace(e) contiguous

    std::span<float> trace(int e) {
        return {samples.data() + static_cast<std::size_t>(e) * n_samples,
                static_cast<std::size_t>(n_samples)};
    }
    std::span<const float> trace(int e) const {
        return {samples.data() + static_cast<std::size_t>(e) * n_samples,
                static_cast<std::size_t>(n_samples)};
    }
};

// Point-scatterer forward model for plane-wave transmissions: each element
// records a Gaussian-windowed tone delayed by the transmit + receive path,
// with 1/r spreading on receive. Desk-scale only (few elements/scatterers).
ChannelData synthesize_channel_data(std::span<const Scatterer> scatterers,
                                    const TransmitEvent& event,
                                    const ArrayGeometry& array,
                                    double fs_hz = 16e6,
                                    double max_depth_mm = 40.0);

// Delay-and-sum reconstruction onto the grid, followed by an axial Hilbert
// envelope. Returns one frame in grid storage order.
std::vector<float> das_beamform(const ChannelData& data, const TransmitEvent& event,
                                const ArrayGeometry& array, const GridSpec& grid);

// Mean of compounded angle frames.
std::vector<float> compound(const std::vector<std::vector<float>>& frames);

}  // namespace awsalm::acoustics

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "awsalm/common.hpp"
#include "awsalm/frame_stack.hpp"
#include "awsalm/phantom.hpp"
#include "awsalm/pipeline.hpp"

namespace awsalm::maps {

// Super-resolution accumulator grid. Direction cells hold unit-heading vector
// sums (the sufficient statistic for the circular mean); direction values are
// reported only for cells with at least two events.
struct SRMaps {
    GridSpec grid;
    std::vector<std::uint32_t> counts;
    std::vector<float> density;    // sqrt(count)
    std::vector<float> velocity;   // mean contributing track speed, mm/s
    std::vector<float> dir_cos, dir_sin;
    std::vector<float> direction;  // circular mean heading, rad; NaN if < 2 events

    std::size_t occupied_cells() const;
    std::uint64_t total_count() const;
};

// SR grid covering the same extent as `source`; the SR pitch must be at most
// half the source pitch.
GridSpec make_sr_grid(const GridSpec& source, double sr_pitch_um = 12.5);

SRMaps accumulate_maps(const std::vector<pipeline::Track>& tracks,
                       const GridSpec& sr_grid);

// Events with t in [t0, t1); tracks are trimmed and the length filter
// re-applied.
std::vector<pipeline::Track> time_gate(const std::vector<pipeline::Track>& tracks,
                                       double t0, double t1,
                                       int min_track_length = 3);

// ---- profiles -----------------------------------------------------------------

struct ProfilePeak {
    double center_mm = 0.0;  // distance along the line
    double height = 0.0;
    double fwhm_um = 0.0;
};

struct ProfileMeasurement {
    Vec2 a, b;
    std::vector<double> distance_mm;
    std::vector<double> value;
    std::vector<ProfilePeak> peaks;
    // Center separations of adjacent peak pairs whose inter-peak minimum
    // falls below 50% of the lower peak.
    std::vector<double> separations_um;
};

ProfileMeasurement profile_fwhm(std::span<const float> map, const GridSpec& grid,
                                const Vec2& a, const Vec2& b,
                                double min_peak_height = 0.2);

struct ResolutionGain {
    double lateral = 0.0;
    double axial = 0.0;
};

ResolutionGain resolution_gain(double measured_fwhm_um,
                               const acoustics::PSFModel& psf);

// ---- ROI intensity ------------------------------------------------------------

struct Polygon {
    std::vector<Vec2> vertices;
    bool contains(const Vec2& p) const;  // even-odd rule
};

std::vector<std::uint8_t> rasterize_polygon(const GridSpec& grid, const Polygon& roi);

// Mask of all pixels within `dilation_mm` of any vessel lumen.
std::vector<std::uint8_t> rasterize_vessels(const GridSpec& grid,
                                            const phantom::Phantom& ph,
                                            double dilation_mm);

std::vector<double> roi_intensity_curve(const FrameStack& stack,
                                        std::span<const std::uint8_t> mask);
std::vector<double> roi_intensity_curve(const FrameStack& stack, const Polygon& roi);

// ---- dose response ------------------------------------------------------------

using DoseKey = std::pair<std::string, double>;  // (gas, MI)

// Divides each mean intensity by its MI, then by the (C4F10, 0.06) reference
// acquisition's MI-normalized value. Throws if the reference key is missing.
std::map<DoseKey, double> normalize_dose_response(
    const std::map<DoseKey, double>& mean_intensity);

// ---- spatiotemporal projection --------------------------------------------------

struct LateralTimeImage {
    int n_lat = 0;
    int n_frames = 0;
    std::vector<float> data;  // lateral-fastest

    float at(int ix, int f) const {
        return data[static_cast<std::size_t>(f) * n_lat + ix];
    }
};

// Per-frame maximum over the depth band [z0, z1] mm.
LateralTimeImage spatiotemporal_projection(const FrameStack& stack, double z0_mm,
                                           double z1_mm);

}  // namespace awsalm::maps

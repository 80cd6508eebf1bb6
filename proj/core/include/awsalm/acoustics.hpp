#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "awsalm/common.hpp"
#include "awsalm/frame_stack.hpp"

namespace awsalm::acoustics {

// MI derating with the soft-tissue attenuation convention, 0.5 dB/(MHz*cm).
double derate_mi(double surface_mi, double depth_mm, double freq_mhz);

// Axial MI profile of an unfocused plane-wave transmission. The natural-focus
// envelope and the derating are combined such that the profile peaks exactly
// at `peak_depth_mm` with value `nominal_mi` (the sequence's MI is the in-situ
// peak value by convention).
struct PlaneWaveField {
    double nominal_mi = 0.1;
    double peak_depth_mm = 14.0;
    double envelope_sigma_mm = 8.0;
    double freq_mhz = 4.0;

    double at_depth(double z_mm) const;
    double operator()(const Vec2& p) const { return at_depth(p.z); }
};

// Anisotropic Gaussian focal region; the beam is elongated axially.
struct FocusedField {
    Vec2 focus;
    double peak_mi = 1.5;
    double sigma_lateral_mm = 0.33;
    double sigma_axial_mm = 2.31;

    double operator()(const Vec2& p) const;
};

constexpr double kFocusAxialElongation = 7.0;

FocusedField make_focused_field(const Vec2& focus, double f_number,
                                double nominal_mi, double freq_mhz = 4.0);

// Field values sampled over a pixel grid; the focus must lie on the grid.
std::vector<float> focused_mi_field(const GridSpec& grid, const Vec2& focus,
                                    double f_number, double nominal_mi,
                                    double freq_mhz = 4.0);

using MiField = std::variant<PlaneWaveField, FocusedField>;

double mi_at(const MiField& field, const Vec2& p);

struct TransmitEvent {
    enum class Kind { plane_wave, focused };
    Kind kind = Kind::plane_wave;
    double timestamp_s = 0.0;
    double surface_mi = 0.1;  // in-situ peak MI by the derated-peak convention
    double center_frequency_mhz = 4.0;
    // plane-wave fields
    double angle_deg = 0.0;
    // focused fields
    Vec2 focus;
    double f_number = 2.0;
    int cycles = 1;
    // Rendered output frame this transmission contributes to, or -1 for
    // activation transmissions that are not imaged.
    int frame_index = -1;

    MiField field() const;
};

struct PulseSequence {
    enum class Mode { awsalm, fast_awsalm };
    Mode mode = Mode::fast_awsalm;
    std::vector<TransmitEvent> events;
    double imaging_frame_rate_hz = 1000.0;
    int compounding = 1;
    double imaging_mi = 0.1;

    int n_frames = 0;
    std::vector<double> frame_times;               // one entry per output frame
    std::vector<std::pair<int, int>> imaging_blocks;  // [first, last) frame ranges

    double duration_s() const;
    double imaging_time_s() const;
    double activation_time_s() const;
    void validate() const;
    std::string mode_name() const;
};

struct AwsalmConfig {
    std::vector<Vec2> focal_points = {{25.0, 0.0}};  // cycled over activation events
    // When set, activation events sweep laterally across this range (mm),
    // overriding the focal points' lateral coordinates.
    std::optional<std::pair<double, double>> lateral_sweep;
    double f_number = 2.0;
    int cycles_activation = 20;
    int n_cycles = 20;  // activation/imaging block pairs
    double imaging_mi = 0.1;
    double activation_mi = 1.5;
    double frame_rate_hz = 500.0;  // compounded imaging rate
    int compounding = 5;
    int frames_per_block = 85;
    int activations_per_block = 2;
    double activation_prf_hz = 50.0;
    double center_frequency_mhz = 4.0;
};

// Alternating focused-activation / plane-wave-imaging schedule.
PulseSequence build_awsalm_sequence(const AwsalmConfig& cfg);

struct FastAwsalmConfig {
    double mi = 0.22;              // 0.06 .. 0.65
    double frame_rate_hz = 5000.0; // 1000 .. 10000
    double duration_s = 1.0;       // 0.1 .. 2
    double center_frequency_mhz = 4.0;
};

// Uniform plane-wave schedule; every transmission both switches and images.
PulseSequence build_fast_awsalm_sequence(const FastAwsalmConfig& cfg);

// Imaging-system response to a point target, modeled as a separable Gaussian.
struct PSFModel {
    double fwhm_lateral_um = 543.0;
    double fwhm_axial_um = 530.0;
    double amplitude = 1.0;

    double sigma_lateral_um() const { return fwhm_lateral_um / 2.3548200450309493; }
    double sigma_axial_um() const { return fwhm_axial_um / 2.3548200450309493; }
    void validate() const;
};

inline PSFModel awsalm_psf() { return {543.0, 530.0, 1.0}; }
inline PSFModel fast_awsalm_psf() { return {487.0, 574.0, 1.0}; }

}  // namespace awsalm::acoustics

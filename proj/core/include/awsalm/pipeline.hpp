#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "awsalm/acoustics.hpp"
#include "awsalm/common.hpp"
#include "awsalm/frame_stack.hpp"

namespace awsalm::pipeline {

// ---- motion compensation -----------------------------------------------------

struct MotionShift {
    int dz_px = 0;
    int dx_px = 0;
    double score = 0.0;   // normalized correlation against the reference
    bool low_confidence = false;
};

struct MotionParams {
    int max_shift_px = 32;
    double confidence_floor = 0.2;
};

// Rigid integer-pixel registration of every frame against the reference frame
// via normalized cross-correlation; frames are translated in place.
std::vector<MotionShift> motion_compensate(FrameStack& stack, int reference,
                                           const MotionParams& params = {});

// ---- time gain compensation --------------------------------------------------

// Equalizes the temporal-mean intensity profile across depth to its global
// mean. Row gains are capped at max_gain (zero-mean rows stay finite).
std::vector<double> tgc_correct(FrameStack& stack, double max_gain = 20.0);

// ---- SVD clutter suppression ---------------------------------------------------

// Casorati-domain rank-band filter: keeps singular components with 1-based
// ranks in [low_cut, high_cut]. low_cut=1, high_cut=n_frames is the identity.
void svd_clutter_filter(FrameStack& stack, int low_cut, int high_cut);

// Per-block variant: the filter is applied independently to each frame range
// [first, last); rank cutoffs are fractions of the block length.
void svd_clutter_filter_blocks(FrameStack& stack,
                               std::span<const std::pair<int, int>> blocks,
                               double low_frac, double high_frac);

// Rank cutoffs from fractional defaults for an n-frame stack/block.
std::pair<int, int> svd_rank_band(int n_frames, double low_frac, double high_frac);

// ---- Wiener noise filter -------------------------------------------------------

struct WienerParams {
    int window_axial_px = 5;
    int window_frames = 5;
    // Noise power; auto-estimated (median local variance, per lateral plane)
    // when unset.
    std::optional<double> noise_power;
};

// Local-statistics Wiener shrinkage applied to each (axial, time) plane.
void wiener_axial_temporal(FrameStack& stack, const WienerParams& params = {});

// ---- 3-D low-pass --------------------------------------------------------------

struct LowpassSigma {
    double axial_px = 0.6;
    double lateral_px = 0.6;
    double temporal_frames = 0.6;
};

// Separable Gaussian over (axial, lateral, frame), edge-replicated.
void lowpass_3d(FrameStack& stack, const LowpassSigma& sigma);

// ---- PSF estimation ------------------------------------------------------------

struct PsfEstimate {
    acoustics::PSFModel psf;
    int samples_used = 0;
    bool short_of_samples = false;  // fewer isolated blobs than requested
};

// Averages windows around the n brightest isolated maxima of the stack and
// fits per-axis FWHMs. Isolation: no competing maximum within two expected
// FWHMs.
PsfEstimate estimate_psf(const FrameStack& stack, int n_samples,
                         double expected_fwhm_um = 550.0);

// ---- localization --------------------------------------------------------------

struct LocalizationEvent {
    Vec2 pos;                    // mm, sub-pixel
    int frame = 0;
    double t_s = 0.0;
    double correlation_score = 0.0;
    double amplitude = 0.0;
};

enum class SubpixelMethod { parabolic, centroid };

struct LocalizeParams {
    double threshold = 0.6;             // normalized correlation acceptance
    double min_separation_fwhm = 1.0;   // between accepted peaks
    SubpixelMethod subpixel = SubpixelMethod::parabolic;
};

// Normalized cross-correlation of the frame with the PSF template, local
// maxima above threshold, sub-pixel refinement.
std::vector<LocalizationEvent> localize(std::span<const float> frame,
                                        const GridSpec& grid,
                                        const acoustics::PSFModel& psf,
                                        const LocalizeParams& params);

// Per-frame localization over a whole stack; parallel across frames.
std::vector<std::vector<LocalizationEvent>> localize_stack(
    const FrameStack& stack, const acoustics::PSFModel& psf,
    const LocalizeParams& params);

// ---- tracking ------------------------------------------------------------------

struct TrackPoint {
    int frame = 0;
    double t_s = 0.0;
    Vec2 pos;        // measured (sub-pixel) position
    Vec2 vel;        // filtered velocity estimate, mm/s
    int event_index = -1;  // index into the frame's localization list
};

struct Track {
    int id = 0;
    std::vector<TrackPoint> points;
    Vec2 mean_velocity;          // least-squares fit over the track
    double mean_speed_mm_s = 0.0;

    int first_frame() const { return points.front().frame; }
    int last_frame() const { return points.back().frame; }
    double duration_s() const { return points.back().t_s - points.front().t_s; }
};

struct TrackerParams {
    int max_gap = 2;               // consecutive imaged-frame misses before a track dies
    double gate_radius_mm = 0.5;
    int min_track_length = 3;
    double measurement_noise_mm = 0.015;
    double accel_g = 2.0;          // process-noise acceleration allowance
    int greedy_fallback_events = 500;
};

struct TrackingResult {
    std::vector<Track> tracks;
    bool used_greedy_fallback = false;
};

// Constant-velocity Kalman prediction with gated global-nearest-neighbour
// assignment (Hungarian; greedy above greedy_fallback_events). Time gaps in
// frame_times (e.g. activation blocks) are spanned by prediction and do not
// count as misses.
TrackingResult track(const std::vector<std::vector<LocalizationEvent>>& events,
                     const std::vector<double>& frame_times,
                     const TrackerParams& params);

// Recomputes the least-squares velocity summary (used after time gating).
void refresh_track_summary(Track& t);

}  // namespace awsalm::pipeline

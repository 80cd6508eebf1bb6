#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "awsalm/experiment.hpp"
#include "awsalm/maps.hpp"
#include "awsalm/simulation.hpp"

namespace awsalm::scenarios {

// Shared MI grid of the dose-response experiments.
const std::vector<double>& dose_mi_grid();

struct DoseResponseResult {
    std::map<maps::DoseKey, double> raw;         // mean ROI intensity
    std::map<maps::DoseKey, double> normalized;  // per-MI, reference-normalized
    std::map<std::string, double> peak_mi;       // argmax per gas

    double at(const std::string& gas, double mi) const;
};

DoseResponseResult run_dose_response(std::uint64_t seed, int frames = 1000);

struct CrossedTubeResult {
    GridSpec grid;
    maps::SRMaps sr;
    std::vector<float> density_smoothed;  // kernel-density rendering of counts
    std::vector<float> bmode;          // mean of the raw frames
    maps::ProfileMeasurement sr_profile;
    maps::ProfileMeasurement bmode_profile;
    double target_separation_um = 250.0;
    double profile_x_mm = 0.0;
    bool sr_resolved = false;
    bool bmode_resolved = false;
    std::size_t n_events = 0;
    std::size_t n_tracks = 0;
};

// 1 s fast sequence at 1000 Hz over 200 um tubes crossing at 15 mm; the
// diagnostic profile runs axially where the tube centers sit 250 um apart.
CrossedTubeResult run_crossed_tube_sr(std::uint64_t seed);

struct VesselResolutionResult {
    double fwhm_um = 0.0;       // median over cross profiles
    double gain_lateral = 0.0;  // vs the 543 um lateral PSF
    std::size_t n_tracks = 0;
};

// 100 um vessel, end-to-end reconstruction.
VesselResolutionResult run_vessel_resolution(std::uint64_t seed);

struct VelocityResult {
    double configured_mm_s = 0.0;  // plug-flow ground truth
    double median_speed_mm_s = 0.0;
    std::size_t n_tracks = 0;
};

// Straight 200 um tube at the requested mean flow velocity.
VelocityResult run_velocity_recovery(std::uint64_t seed, double target_mm_s);

enum class ActivationMode { left_focus, full_plane, right_focus };

struct SelectiveActivationResult {
    double left_fraction = 0.0;   // events in the left child's subtree
    double right_fraction = 0.0;
    std::size_t n_events = 0;
    maps::SRMaps sr;
};

// Three-level tree; focused AWSALM activation of one first-generation branch
// vs whole-plane fast activation.
SelectiveActivationResult run_selective_activation(std::uint64_t seed,
                                                   ActivationMode mode);

struct TimeGatingResult {
    std::size_t systole_leaf_cells = 0;
    std::size_t diastole_leaf_cells = 0;
    std::size_t total_events = 0;
    std::size_t quarter_gate_event_sum = 0;  // over a 4-gate partition of [0,1)
    bool partition_exact = false;
    maps::SRMaps sr_full, sr_systole, sr_diastole;
};

// Pulsatile tree, 1 s fast acquisition, 0.25 s systolic/diastolic gates.
TimeGatingResult run_time_gating(std::uint64_t seed);

struct LifetimeResult {
    std::vector<int> lifetimes_frames;  // completed bubbles only
    double p_destruction = 0.0;         // per-transmission, at the scenario MI
    double chi2_p_value = 0.0;          // GOF vs the implied geometric law

    double percentile(double q) const;  // q in [0,1]
};

// Static droplet bath at the plane-wave peak depth, MI 0.22, 5000 Hz.
LifetimeResult run_lifetime_statistics(std::uint64_t seed);

// Upper-tail p-value helpers for the goodness-of-fit test.
double chi_square_p_value(double chi2, int dof);

// Figure-style report runners: fig2k, fig5, fig6, fig7, fig8.
std::vector<std::string> reproduce_ids();
int reproduce(const std::string& figure_id, std::uint64_t seed,
              const std::string& out_dir);

}  // namespace awsalm::scenarios

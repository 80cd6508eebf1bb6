#include "awsalm/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "awsalm/kinetics.hpp"
#include "awsalm/rng.hpp"

namespace awsalm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

IniConfig IniConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

IniConfig IniConfig::parse_string(const std::string& text, const std::string& name) {
    IniConfig cfg;
    cfg.name_ = name;
    cfg.raw_ = text;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', name + ":" + std::to_string(line_no) +
                                            ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, name + ":" + std::to_string(line_no) +
                                             ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        require(!key.empty(), name + ":" + std::to_string(line_no) + ": empty key");
        cfg.sections_[section][key] = Entry{trim(line.substr(eq + 1)), line_no, false};
    }
    return cfg;
}

const IniConfig::Entry* IniConfig::find(const std::string& section,
                                        const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
}

void IniConfig::fail(const std::string& section, const std::string& key,
                     const Entry* e, const std::string& what) const {
    std::string where = name_;
    if (e != nullptr) where += ":" + std::to_string(e->line);
    throw DomainError(where + ": bad value for " +
                      (section.empty() ? key : section + "." + key) + ": " + what);
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string IniConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e != nullptr ? e->value : fallback;
}

double IniConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(e->value, &pos);
        if (pos != e->value.size()) fail(section, key, e, "trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(section, key, e, "expected a number, got '" + e->value + "'");
    }
}

int IniConfig::get_int(const std::string& section, const std::string& key,
                       int fallback) const {
    const double v = get_double(section, key, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        const Entry* e = find(section, key);
        fail(section, key, e, "expected an integer");
    }
    return i;
}

std::uint64_t IniConfig::get_u64(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    try {
        return std::stoull(e->value);
    } catch (const std::exception&) {
        fail(section, key, e, "expected a non-negative integer");
    }
}

bool IniConfig::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    const std::string v = lower(e->value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(section, key, e, "expected true/false");
}

void IniConfig::reject_unused() const {
    std::vector<std::string> unknown;
    for (const auto& [sec, entries] : sections_) {
        for (const auto& [key, e] : entries) {
            if (!e.used) {
                unknown.push_back((sec.empty() ? key : sec + "." + key) + " (line " +
                                  std::to_string(e.line) + ")");
            }
        }
    }
    if (!unknown.empty()) {
        std::string msg = name_ + ": unknown config key(s): ";
        for (std::size_t i = 0; i < unknown.size(); ++i) {
            if (i) msg += ", ";
            msg += unknown[i];
        }
        throw DomainError(msg);
    }
}

std::uint64_t IniConfig::content_hash() const {
    return fnv1a_hash(raw_.data(), raw_.size());
}

namespace {

phantom::Phantom load_phantom(const IniConfig& ini) {
    const std::string kind = ini.get_string("phantom", "kind", "crossed_tubes");
    if (kind == "crossed_tubes") {
        return phantom::build_crossed_tube_phantom(
            ini.get_double("phantom", "diameter_um", 200.0),
            ini.get_double("phantom", "crossing_depth_mm", 15.0),
            ini.get_double("phantom", "crossing_angle_deg", 30.0),
            ini.get_double("phantom", "flow_ul_min", 30.0),
            ini.get_double("phantom", "half_span_mm", 16.0));
    }
    if (kind == "branching_tree") {
        phantom::TreeLayout layout;
        layout.root_start = {ini.get_double("phantom", "root_z_mm", 6.0),
                             ini.get_double("phantom", "root_x_mm", 0.0)};
        layout.root_length_mm = ini.get_double("phantom", "root_length_mm", 5.0);
        layout.length_ratio = ini.get_double("phantom", "length_ratio", 0.8);
        layout.spread_deg = ini.get_double("phantom", "spread_deg", 35.0);
        layout.root_flow_ul_min = ini.get_double("phantom", "flow_ul_min", 40.0);
        return phantom::build_branching_tree_phantom(
            ini.get_int("phantom", "levels", 3),
            ini.get_double("phantom", "root_diameter_um", 400.0),
            ini.get_double("phantom", "split_ratio", 0.7), layout);
    }
    if (kind == "single_tube") {
        return phantom::build_single_tube_phantom(
            ini.get_double("phantom", "diameter_um", 200.0),
            {ini.get_double("phantom", "start_z_mm", 14.0),
             ini.get_double("phantom", "start_x_mm", -15.0)},
            {ini.get_double("phantom", "end_z_mm", 14.0),
             ini.get_double("phantom", "end_x_mm", 15.0)},
            ini.get_double("phantom", "flow_ul_min", 30.0));
    }
    throw DomainError("phantom.kind: unknown phantom '" + kind +
                      "' (expected crossed_tubes, branching_tree or single_tube)");
}

acoustics::PulseSequence load_sequence(const IniConfig& ini) {
    const std::string kind = ini.get_string("sequence", "kind", "fast_awsalm");
    if (kind == "fast_awsalm") {
        acoustics::FastAwsalmConfig cfg;
        cfg.mi = ini.get_double("sequence", "mi", cfg.mi);
        cfg.frame_rate_hz = ini.get_double("sequence", "frame_rate_hz", cfg.frame_rate_hz);
        cfg.duration_s = ini.get_double("sequence", "duration_s", cfg.duration_s);
        cfg.center_frequency_mhz =
            ini.get_double("sequence", "center_frequency_mhz", cfg.center_frequency_mhz);
        return acoustics::build_fast_awsalm_sequence(cfg);
    }
    if (kind == "awsalm") {
        acoustics::AwsalmConfig cfg;
        cfg.focal_points.clear();
        std::istringstream depths(
            ini.get_string("sequence", "focal_depths_mm", "25"));
        std::istringstream laterals(
            ini.get_string("sequence", "focal_lateral_mm", "0"));
        double z, x;
        std::vector<double> zs, xs;
        while (depths >> z) zs.push_back(z);
        while (laterals >> x) xs.push_back(x);
        require(!zs.empty(), "sequence.focal_depths_mm: need at least one depth");
        for (std::size_t i = 0; i < zs.size(); ++i)
            cfg.focal_points.push_back({zs[i], i < xs.size() ? xs[i] : xs.back()});
        if (ini.has("sequence", "sweep_lateral_from_mm")) {
            cfg.lateral_sweep = {
                ini.get_double("sequence", "sweep_lateral_from_mm", -5.0),
                ini.get_double("sequence", "sweep_lateral_to_mm", 5.0)};
        }
        cfg.f_number = ini.get_double("sequence", "f_number", cfg.f_number);
        cfg.n_cycles = ini.get_int("sequence", "n_cycles", cfg.n_cycles);
        cfg.cycles_activation =
            ini.get_int("sequence", "cycles_activation", cfg.cycles_activation);
        cfg.imaging_mi = ini.get_double("sequence", "imaging_mi", cfg.imaging_mi);
        cfg.activation_mi = ini.get_double("sequence", "activation_mi", cfg.activation_mi);
        cfg.frame_rate_hz = ini.get_double("sequence", "frame_rate_hz", cfg.frame_rate_hz);
        cfg.compounding = ini.get_int("sequence", "compounding", cfg.compounding);
        cfg.frames_per_block = ini.get_int("sequence", "frames_per_block", cfg.frames_per_block);
        cfg.activations_per_block =
            ini.get_int("sequence", "activations_per_block", cfg.activations_per_block);
        cfg.activation_prf_hz =
            ini.get_double("sequence", "activation_prf_hz", cfg.activation_prf_hz);
        cfg.center_frequency_mhz =
            ini.get_double("sequence", "center_frequency_mhz", cfg.center_frequency_mhz);
        return acoustics::build_awsalm_sequence(cfg);
    }
    throw DomainError("sequence.kind: unknown sequence '" + kind +
                      "' (expected fast_awsalm or awsalm)");
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    return from_ini(IniConfig::parse_file(path));
}

ExperimentConfig ExperimentConfig::from_ini(const IniConfig& ini) {
    ExperimentConfig cfg;
    cfg.seed = ini.get_u64("", "seed", 1);
    cfg.threads = ini.get_int("", "threads", 0);

    auto& sc = cfg.scenario;
    sc.vessels = load_phantom(ini);
    sc.pulsatility.amplitude = ini.get_double("phantom", "pulsatility_amplitude", 0.0);
    sc.pulsatility.period_s = ini.get_double("phantom", "pulsatility_period_s", 1.0);
    sc.pulsatility.phase_rad = ini.get_double("phantom", "pulsatility_phase_rad", 0.0);
    require(sc.pulsatility.amplitude >= 0.0 && sc.pulsatility.amplitude <= 1.0,
            "phantom.pulsatility_amplitude must lie in [0, 1]");
    const std::string profile = ini.get_string("phantom", "flow_profile", "plug");
    if (profile == "plug") {
        sc.flow_profile = phantom::FlowProfile::plug;
    } else if (profile == "parabolic") {
        sc.flow_profile = phantom::FlowProfile::parabolic;
    } else {
        throw DomainError("phantom.flow_profile: expected plug or parabolic");
    }
    sc.concentration_per_mm = ini.get_double("phantom", "concentration_per_mm", 50.0);

    sc.gas = kinetics::gas_defaults(ini.get_string("kinetics", "gas", "C3F8"));
    sc.gas.spontaneous_rate_per_s =
        ini.get_double("kinetics", "spontaneous_rate_per_s", sc.gas.spontaneous_rate_per_s);
    sc.switching.vap_slope = ini.get_double("kinetics", "vap_slope", sc.switching.vap_slope);
    sc.switching.dest_onset = ini.get_double("kinetics", "dest_onset", sc.switching.dest_onset);
    sc.switching.dest_slope = ini.get_double("kinetics", "dest_slope", sc.switching.dest_slope);
    sc.switching.focused_threshold_factor =
        ini.get_double("kinetics", "focused_threshold_factor",
                       sc.switching.focused_threshold_factor);

    sc.sequence = load_sequence(ini);

    auto& grid = sc.render.grid;
    grid.n_ax = ini.get_int("grid", "n_ax", 400);
    grid.n_lat = ini.get_int("grid", "n_lat", 600);
    grid.pitch_um = ini.get_double("grid", "pitch_um", 50.0);
    grid.origin = {ini.get_double("grid", "origin_z_mm", 5.0),
                   ini.get_double("grid", "origin_x_mm", -15.0)};

    sc.render.psf.fwhm_lateral_um = ini.get_double("render", "psf_fwhm_lateral_um", 543.0);
    sc.render.psf.fwhm_axial_um = ini.get_double("render", "psf_fwhm_axial_um", 530.0);
    sc.render.noise.gaussian_sigma = ini.get_double("render", "noise_sigma", 0.005);
    sc.render.noise.clutter_amplitude = ini.get_double("render", "clutter_amplitude", 0.4);
    sc.render.noise.clutter_smooth_um =
        ini.get_double("render", "clutter_smooth_um", 600.0);
    sc.render.drift.amplitude_ax_px = ini.get_double("render", "drift_ax_px", 0.0);
    sc.render.drift.amplitude_lat_px = ini.get_double("render", "drift_lat_px", 0.0);
    sc.render.drift.period_s = ini.get_double("render", "drift_period_s", 1.0);

    auto& p = cfg.processing;
    p.motion_enabled = ini.get_bool("pipeline", "motion", true);
    p.motion_reference = ini.get_int("pipeline", "motion_reference", -1);
    p.tgc_enabled = ini.get_bool("pipeline", "tgc", true);
    p.tgc_max_gain = ini.get_double("pipeline", "tgc_max_gain", 20.0);
    p.svd_enabled = ini.get_bool("pipeline", "svd", true);
    p.svd_low_frac = ini.get_double("pipeline", "svd_low_frac", 0.05);
    p.svd_high_frac = ini.get_double("pipeline", "svd_high_frac", 0.95);
    p.wiener_enabled = ini.get_bool("pipeline", "wiener", true);
    p.wiener.window_axial_px = ini.get_int("pipeline", "wiener_axial_px", 5);
    p.wiener.window_frames = ini.get_int("pipeline", "wiener_frames", 5);
    const std::string noise = ini.get_string("pipeline", "wiener_noise", "auto");
    if (noise != "auto") p.wiener.noise_power = std::stod(noise);
    p.lowpass.axial_px = ini.get_double("pipeline", "lowpass_axial_px", 0.6);
    p.lowpass.lateral_px = ini.get_double("pipeline", "lowpass_lateral_px", 0.6);
    p.lowpass.temporal_frames = ini.get_double("pipeline", "lowpass_temporal_frames", 0.6);
    const std::string psf_source = ini.get_string("pipeline", "psf_source", "fixed");
    if (psf_source == "fixed") {
        p.psf_source = ProcessingConfig::PsfSource::fixed;
    } else if (psf_source == "estimate") {
        p.psf_source = ProcessingConfig::PsfSource::estimate;
    } else {
        throw DomainError("pipeline.psf_source: expected fixed or estimate");
    }
    p.psf.fwhm_lateral_um =
        ini.get_double("pipeline", "psf_fwhm_lateral_um", sc.render.psf.fwhm_lateral_um);
    p.psf.fwhm_axial_um =
        ini.get_double("pipeline", "psf_fwhm_axial_um", sc.render.psf.fwhm_axial_um);
    p.psf_samples = ini.get_int("pipeline", "psf_samples", 20);
    p.localize.threshold = ini.get_double("pipeline", "localize_threshold", 0.6);
    p.localize.min_separation_fwhm =
        ini.get_double("pipeline", "localize_min_separation_fwhm", 1.0);
    const std::string subpixel = ini.get_string("pipeline", "subpixel", "parabolic");
    if (subpixel == "parabolic") {
        p.localize.subpixel = pipeline::SubpixelMethod::parabolic;
    } else if (subpixel == "centroid") {
        p.localize.subpixel = pipeline::SubpixelMethod::centroid;
    } else {
        throw DomainError("pipeline.subpixel: expected parabolic or centroid");
    }
    p.tracker.max_gap = ini.get_int("pipeline", "track_max_gap", 2);
    p.tracker.gate_radius_mm = ini.get_double("pipeline", "track_gate_radius_mm", 0.5);
    p.tracker.min_track_length = ini.get_int("pipeline", "track_min_length", 3);
    p.tracker.measurement_noise_mm =
        ini.get_double("pipeline", "track_measurement_noise_mm", 0.015);
    p.tracker.accel_g = ini.get_double("pipeline", "track_accel_g", 2.0);
    p.tracker.greedy_fallback_events =
        ini.get_int("pipeline", "track_greedy_fallback_events", 500);
    p.sr_pitch_um = ini.get_double("maps", "sr_pitch_um", 12.5);

    cfg.output.dir = ini.get_string("output", "dir", "out");
    cfg.output.write_stack = ini.get_bool("output", "write_stack", true);
    cfg.output.write_ground_truth = ini.get_bool("output", "write_ground_truth", true);
    cfg.output.write_maps_pgm = ini.get_bool("output", "write_maps_pgm", true);
    cfg.output.write_maps_csv = ini.get_bool("output", "write_maps_csv", false);

    ini.reject_unused();
    cfg.raw_text = ini.raw_text();
    cfg.config_hash = ini.content_hash();
    return cfg;
}

}  // namespace awsalm::cli

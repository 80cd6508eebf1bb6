#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awsalm/acoustics.hpp"
#include "awsalm/pipeline.hpp"
#include "awsalm/render.hpp"
#include "awsalm/simulation.hpp"

namespace awsalm::cli {

// "key = value" sections, '#' or ';' comments. Errors cite section.key and
// the line number; unrecognized keys are rejected after typed loading.
class IniConfig {
public:
    static IniConfig parse_file(const std::string& path);
    static IniConfig parse_string(const std::string& text, const std::string& name = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;

    // Throws listing every key never touched by a getter, with line numbers.
    void reject_unused() const;

    const std::string& raw_text() const { return raw_; }
    std::uint64_t content_hash() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    std::string name_;
    std::string raw_;
    std::map<std::string, std::map<std::string, Entry>> sections_;

    const Entry* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const Entry* e, const std::string& what) const;
};

// Full experiment description: simulation scenario plus processing and
// output choices.
struct ProcessingConfig {
    bool motion_enabled = true;
    int motion_reference = -1;  // -1: middle frame
    pipeline::MotionParams motion;

    bool tgc_enabled = true;
    double tgc_max_gain = 20.0;

    bool svd_enabled = true;
    double svd_low_frac = 0.05;
    double svd_high_frac = 0.95;

    bool wiener_enabled = true;
    pipeline::WienerParams wiener;

    pipeline::LowpassSigma lowpass;

    enum class PsfSource { fixed, estimate };
    PsfSource psf_source = PsfSource::fixed;
    acoustics::PSFModel psf;
    int psf_samples = 20;

    pipeline::LocalizeParams localize;
    pipeline::TrackerParams tracker;
    double sr_pitch_um = 12.5;
};

struct OutputConfig {
    std::string dir = "out";
    bool write_stack = true;
    bool write_ground_truth = true;
    bool write_maps_pgm = true;
    bool write_maps_csv = false;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    int threads = 0;  // 0: all cores
    sim::Scenario scenario;
    ProcessingConfig processing;
    OutputConfig output;
    std::string raw_text;
    std::uint64_t config_hash = 0;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_ini(const IniConfig& ini);
};

}  // namespace awsalm::cli

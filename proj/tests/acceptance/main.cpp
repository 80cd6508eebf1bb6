// Acceptance suite: one criterion per numeric argument (1..9), all when run
// with no arguments. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any requested criterion failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "awsalm/acoustics.hpp"
#include "awsalm/beamform.hpp"
#include "awsalm/config.hpp"
#include "awsalm/experiment.hpp"
#include "awsalm/io.hpp"
#include "awsalm/pipeline.hpp"
#include "awsalm/render.hpp"
#include "awsalm/scenarios.hpp"
#include "awsalm/simulation.hpp"
#include "awsalm/threads.hpp"

namespace fs = std::filesystem;
using namespace awsalm;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) ok = false;
        detail += (cond ? "  ok: " : "  FAILED: ") + what + "\n";
    }
};

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---- criterion 1: dose-response shape -----------------------------------------

Check criterion1() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = scenarios::run_dose_response(11);

    c.expect(std::abs(r.peak_mi.at("C3F8") - 0.17) < 0.06,
             "C3F8 peak at MI " + fmt(r.peak_mi.at("C3F8")) +
                 " (target 0.17 +- one grid step)");
    c.expect(r.peak_mi.at("MIX") >= 0.22 - 1e-9 && r.peak_mi.at("MIX") <= 0.34 + 1e-9,
             "MIX peak at MI " + fmt(r.peak_mi.at("MIX")) +
                 " (target 0.28 +- one grid step)");
    double c4_max_dev = 0.0;
    for (double mi : scenarios::dose_mi_grid())
        c4_max_dev = std::max(c4_max_dev, std::abs(r.at("C4F10", mi) - 1.0));
    c.expect(c4_max_dev <= 0.10, "C4F10 within +-10% of baseline (max dev " +
                                     fmt(c4_max_dev) + ")");
    for (const auto& gas : {"C3F8", "MIX", "C4F10"}) {
        const double v = r.at(gas, 0.06);
        c.expect(std::abs(v - 1.0) <= 0.10,
                 std::string(gas) + " at MI 0.06 near baseline (" + fmt(v) + ")");
    }
    const double dt = elapsed_s(t0);
    c.expect(dt < 300.0, "runtime " + fmt(dt) + " s < 300 s");
    return c;
}

// ---- criterion 2: crossed-tube super-resolution --------------------------------

Check criterion2() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = scenarios::run_crossed_tube_sr(21);

    c.expect(r.n_events > 1000, "localization events " + std::to_string(r.n_events));
    c.expect(r.sr_resolved,
             "SR density profile resolves the tubes at 250 um separation (" +
                 std::to_string(r.sr_profile.separations_um.size()) +
                 " resolved pairs)");
    c.expect(!r.bmode_resolved, "summed B-mode fails the same criterion");
    const double dt = elapsed_s(t0);
    c.expect(dt < 600.0, "runtime " + fmt(dt) + " s < 600 s");
    return c;
}

// ---- criterion 3: resolution gain ----------------------------------------------

Check criterion3() {
    Check c;
    std::vector<double> widths;
    for (std::uint64_t seed : {31, 32, 33, 34, 35}) {
        const auto r = scenarios::run_vessel_resolution(seed);
        widths.push_back(r.fwhm_um);
        c.detail += "  seed " + std::to_string(seed) + ": FWHM " + fmt(r.fwhm_um) +
                    " um\n";
    }
    std::sort(widths.begin(), widths.end());
    const double median = widths[widths.size() / 2];
    const double gain = maps::resolution_gain(median, acoustics::awsalm_psf()).lateral;
    c.expect(median <= 150.0, "5-seed median SR FWHM " + fmt(median) + " um <= 150 um");
    c.expect(gain >= 3.5, "resolution gain " + fmt(gain) + " >= 3.5");
    return c;
}

// ---- criterion 4: velocity recovery --------------------------------------------

Check criterion4() {
    Check c;
    {
        const auto r = scenarios::run_velocity_recovery(41, 16.0);
        const double rel = std::abs(r.median_speed_mm_s - r.configured_mm_s) /
                           r.configured_mm_s;
        c.expect(rel <= 0.15, "16 mm/s tube: median " + fmt(r.median_speed_mm_s) +
                                  " vs " + fmt(r.configured_mm_s) + " (" +
                                  fmt(100 * rel) + "%, n=" +
                                  std::to_string(r.n_tracks) + ")");
    }
    {
        const auto r = scenarios::run_velocity_recovery(42, 60.0);
        const double rel = std::abs(r.median_speed_mm_s - r.configured_mm_s) /
                           r.configured_mm_s;
        c.expect(rel <= 0.20, "60 mm/s tube: median " + fmt(r.median_speed_mm_s) +
                                  " vs " + fmt(r.configured_mm_s) + " (" +
                                  fmt(100 * rel) + "%, n=" +
                                  std::to_string(r.n_tracks) + ")");
    }
    return c;
}

// ---- criterion 5: pipeline oracles ----------------------------------------------

Check criterion5() {
    Check c;
    // (a) SVD static-scene nulling.
    {
        GridSpec grid{64, 64, 50.0, {10.0, -1.6}};
        FrameStack stack(grid, 50);
        Rng rng(7);
        std::vector<float> pattern(grid.pixels());
        for (auto& v : pattern) v = static_cast<float>(rng.uniform(0.5, 1.5));
        for (int f = 0; f < stack.n_frames; ++f)
            std::copy(pattern.begin(), pattern.end(), stack.frame(f).begin());
        double before = 0.0;
        for (float v : stack.data) before += static_cast<double>(v) * v;
        pipeline::svd_clutter_filter(stack, 2, stack.n_frames);
        double after = 0.0;
        for (float v : stack.data) after += static_cast<double>(v) * v;
        const double residual = std::sqrt(after / before);
        c.expect(residual < 1e-10,
                 "SVD static nulling relative residual " + fmt(residual));
    }
    // (b) localization error over a 10x10 sub-pixel offset grid.
    {
        GridSpec grid{128, 128, 50.0, {10.0, -3.2}};
        acoustics::PSFModel psf = acoustics::awsalm_psf();
        acoustics::NoiseParams noiseless;
        noiseless.gaussian_sigma = 0.0;
        noiseless.clutter_amplitude = 0.0;
        acoustics::FrameRenderer renderer(grid, psf, noiseless, {}, 1);
        acoustics::PlaneWaveField field;
        field.nominal_mi = 1.0;
        double worst = 0.0;
        int localized = 0;
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                const Vec2 pos{grid.z_at(60) + (i / 10.0) * grid.pitch_mm(),
                               grid.x_at(60) + (j / 10.0) * grid.pitch_mm()};
                std::vector<float> frame(grid.pixels());
                const acoustics::BubbleEcho echo{pos, 1.0};
                renderer.render({&echo, 1}, field, 0.0, 0, frame);
                const auto events = pipeline::localize(frame, grid, psf, {});
                if (events.size() == 1) {
                    ++localized;
                    worst = std::max(worst, (events[0].pos - pos).norm());
                }
            }
        }
        c.expect(localized == 100, "all 100 offset blobs localized");
        c.expect(worst < 0.005, "max sub-pixel error " + fmt(worst * 1e3) +
                                    " um < 5 um (pitch/10)");
    }
    // (c) no identity swaps across 100 seeds.
    {
        int swaps = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed + 500);
            const double lane_gap = 1.2 + rng.uniform(0.0, 0.5);  // > gate radius
            const double v1 = rng.uniform(8.0, 24.0), v2 = rng.uniform(8.0, 24.0);
            std::vector<std::vector<pipeline::LocalizationEvent>> events(60);
            std::vector<double> times(60);
            for (int f = 0; f < 60; ++f) {
                times[f] = f * 1e-3;
                pipeline::LocalizationEvent a, b;
                a.pos = {12.0, -8.0 + v1 * times[f] + rng.normal(0.0, 0.01)};
                a.frame = f;
                a.t_s = times[f];
                b.pos = {12.0 + lane_gap, -8.0 + v2 * times[f] + rng.normal(0.0, 0.01)};
                b.frame = f;
                b.t_s = times[f];
                events[f] = {a, b};
            }
            const auto result = pipeline::track(events, times, {});
            if (result.tracks.size() != 2) {
                ++swaps;
                continue;
            }
            for (const auto& t : result.tracks) {
                const double z0 = t.points.front().pos.z;
                for (const auto& p : t.points)
                    if (std::abs(p.pos.z - z0) > lane_gap / 2) ++swaps;
            }
        }
        c.expect(swaps == 0, "identity swaps over 100 seeds: " + std::to_string(swaps));
    }
    // (d) DAS round trip on a 5x5 position grid.
    {
        acoustics::ArrayGeometry array;
        array.n_elements = 64;
        GridSpec grid{160, 160, 50.0, {11.0, -4.0}};
        acoustics::TransmitEvent tx;
        tx.kind = acoustics::TransmitEvent::Kind::plane_wave;
        tx.surface_mi = 0.1;
        int within = 0;
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const Vec2 pos{12.0 + i * 1.2, -3.0 + j * 1.5};
                const acoustics::Scatterer s{pos, 1.0};
                const auto data = acoustics::synthesize_channel_data({&s, 1}, tx, array);
                const auto frame = acoustics::das_beamform(data, tx, array, grid);
                const auto it = std::max_element(frame.begin(), frame.end());
                const auto idx = static_cast<std::size_t>(it - frame.begin());
                const int iz = static_cast<int>(idx % grid.n_ax);
                const int ix = static_cast<int>(idx / grid.n_ax);
                const double dz = std::abs(grid.z_at(iz) - pos.z);
                const double dx = std::abs(grid.x_at(ix) - pos.x);
                if (dz <= grid.pitch_mm() + 1e-9 && dx <= grid.pitch_mm() + 1e-9)
                    ++within;
            }
        }
        c.expect(within == 25, "DAS peak within one pixel for " +
                                   std::to_string(within) + "/25 positions");
    }
    return c;
}

// ---- criterion 6: selective activation ------------------------------------------

Check criterion6() {
    Check c;
    {
        const auto r = scenarios::run_selective_activation(
            61, scenarios::ActivationMode::left_focus);
        c.expect(r.left_fraction > 0.9,
                 "left focus: " + fmt(100 * r.left_fraction) + "% of " +
                     std::to_string(r.n_events) + " events in the left subtree");
    }
    {
        const auto r = scenarios::run_selective_activation(
            62, scenarios::ActivationMode::right_focus);
        c.expect(r.right_fraction > 0.9,
                 "right focus: " + fmt(100 * r.right_fraction) + "% of " +
                     std::to_string(r.n_events) + " events in the right subtree");
    }
    {
        const auto r = scenarios::run_selective_activation(
            63, scenarios::ActivationMode::full_plane);
        c.expect(r.left_fraction >= 0.3 && r.right_fraction >= 0.3,
                 "full plane: left " + fmt(100 * r.left_fraction) + "%, right " +
                     fmt(100 * r.right_fraction) + "% (both >= 30%)");
    }
    return c;
}

// ---- criterion 7: time gating ----------------------------------------------------

Check criterion7() {
    Check c;
    const auto r = scenarios::run_time_gating(71);
    c.expect(r.systole_leaf_cells > 0,
             "systolic gate occupies " + std::to_string(r.systole_leaf_cells) +
                 " small-vessel cells");
    c.expect(r.diastole_leaf_cells <=
                 static_cast<std::size_t>(0.8 * r.systole_leaf_cells),
             "diastolic gate occupies >= 20% fewer small-vessel cells (" +
                 std::to_string(r.diastole_leaf_cells) + " vs " +
                 std::to_string(r.systole_leaf_cells) + ")");
    c.expect(r.partition_exact, "quarter gates partition all " +
                                    std::to_string(r.total_events) + " events");
    return c;
}

// ---- criterion 8: lifetime statistics --------------------------------------------

Check criterion8() {
    Check c;
    const auto r = scenarios::run_lifetime_statistics(81);
    const double p5 = r.percentile(0.05), p95 = r.percentile(0.95);
    c.expect(p5 >= 2.0 && p95 <= 100.0,
             "lifetime 5th-95th percentile [" + fmt(p5) + ", " + fmt(p95) +
                 "] within [2, 100] transmissions (n=" +
                 std::to_string(r.lifetimes_frames.size()) + ")");
    c.expect(r.chi2_p_value > 0.01,
             "geometric goodness-of-fit p = " + fmt(r.chi2_p_value) + " > 0.01");
    return c;
}

// ---- criterion 9: determinism & performance ---------------------------------------

std::string cli_path() { return AWSALM_CLI_PATH; }

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

const char* kDefaultConfig = R"(
seed = 9
[phantom]
kind = crossed_tubes
concentration_per_mm = 60
[sequence]
kind = fast_awsalm
mi = 0.15
frame_rate_hz = 5000
duration_s = 0.25
[grid]
n_ax = 600
n_lat = 600
pitch_um = 50
origin_z_mm = 5
origin_x_mm = -15
[render]
psf_fwhm_lateral_um = 487
psf_fwhm_axial_um = 574
)";

Check criterion9() {
    Check c;
    const fs::path base = fs::temp_directory_path() / "awsalm_c9";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string cfg_path = (base / "exp.cfg").string();
    {
        std::ofstream out(cfg_path);
        out << kDefaultConfig;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int rc = run_cli("simulate --config " + cfg_path + " --out " + (base / "a").string());
    c.expect(rc == 0, "simulate exit code 0");
    rc = run_cli("process --config " + cfg_path + " --stack " +
                 (base / "a/stack.stk").string() + " --out " + (base / "a").string());
    c.expect(rc == 0, "process exit code 0");
    const double dt = elapsed_s(t0);
    c.expect(dt < 900.0,
             "simulate + process on 600x600x1250 took " + fmt(dt) + " s < 900 s");

    // Re-run with a different thread count; outputs must match bit for bit.
    rc = run_cli("simulate --config " + cfg_path + " --threads 1 --out " +
                 (base / "b").string());
    c.expect(rc == 0, "single-thread simulate exit code 0");
    rc = run_cli("process --config " + cfg_path + " --threads 1 --stack " +
                 (base / "b/stack.stk").string() + " --out " + (base / "b").string());
    c.expect(rc == 0, "single-thread process exit code 0");

    for (const auto& name : {"stack.stk", "gt_events.csv", "localizations.csv",
                             "tracks.csv", "density.pgm"}) {
        const auto da = io::file_digest((base / "a" / name).string());
        const auto db = io::file_digest((base / "b" / name).string());
        c.expect(da == db, std::string(name) + " digests match across runs and "
                                               "thread counts");
    }
    fs::remove_all(base);
    return c;
}

const char* kDescriptions[] = {
    "dose-response shape over the MI grid",
    "crossed-tube super-resolution at 250 um separation",
    "resolution gain on a 100 um vessel",
    "velocity recovery at 16 and 60 mm/s",
    "pipeline oracles (SVD nulling, localization, tracking, DAS)",
    "selective branch activation",
    "systole/diastole time gating",
    "bubble lifetime statistics",
    "determinism and runtime at desk scale",
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    int failures = 0;
    for (int k : which) {
        if (k < 1 || k > 9) {
            std::cerr << "unknown criterion " << k << "\n";
            return 2;
        }
        Check c;
        try {
            switch (k) {
                case 1: c = criterion1(); break;
                case 2: c = criterion2(); break;
                case 3: c = criterion3(); break;
                case 4: c = criterion4(); break;
                case 5: c = criterion5(); break;
                case 6: c = criterion6(); break;
                case 7: c = criterion7(); break;
                case 8: c = criterion8(); break;
                case 9: c = criterion9(); break;
            }
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail += std::string("  exception: ") + e.what() + "\n";
        }
        std::cout << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << k << ": "
                  << kDescriptions[k - 1] << "\n"
                  << c.detail;
        if (!c.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

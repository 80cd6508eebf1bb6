#include <algorithm>
#include <cmath>
#include <vector>

#include "awsalm/pipeline.hpp"

namespace awsalm::pipeline {

namespace {

struct Candidate {
    int frame, iz, ix;
    float value;
};

// FWHM of a 1-D profile around its maximum, by linear interpolation at half
// height. Returns 0 when a half crossing is missing on either side.
double profile_fwhm_px(const std::vector<double>& p) {
    const auto it = std::max_element(p.begin(), p.end());
    const int c = static_cast<int>(it - p.begin());
    const double half = *it / 2.0;
    double left = -1.0, right = -1.0;
    for (int i = c; i > 0; --i) {
        if (p[i - 1] <= half && p[i] > half) {
            left = (i - 1) + (half - p[i - 1]) / (p[i] - p[i - 1]);
            break;
        }
    }
    for (int i = c; i + 1 < static_cast<int>(p.size()); ++i) {
        if (p[i + 1] <= half && p[i] > half) {
            right = i + (p[i] - half) / (p[i] - p[i + 1]);
            break;
        }
    }
    if (left < 0.0 || right < 0.0) return 0.0;
    return right - left;
}

}  // namespace

PsfEstimate estimate_psf(const FrameStack& stack, int n_samples,
                         double expected_fwhm_um) {
    require(n_samples >= 1, "need at least one PSF sample");
    require(stack.n_frames > 0, "PSF estimation needs a non-empty stack");
    const int n_ax = stack.grid.n_ax, n_lat = stack.grid.n_lat;
    const double pitch = stack.grid.pitch_um;
    const int isolation_px =
        std::max(1, static_cast<int>(std::ceil(2.0 * expected_fwhm_um / pitch)));
    const int half_win =
        std::max(3, static_cast<int>(std::ceil(1.5 * expected_fwhm_um / pitch)));

    float global_max = 0.0f;
    for (float v : stack.data) global_max = std::max(global_max, v);
    const float floor = 0.1f * global_max;

    // Strict 3x3 local maxima per frame, clear of the borders.
    std::vector<std::vector<Candidate>> per_frame(stack.n_frames);
    std::vector<Candidate> all;
    for (int f = 0; f < stack.n_frames; ++f) {
        auto frame = stack.frame(f);
        for (int ix = half_win; ix < n_lat - half_win; ++ix) {
            for (int iz = half_win; iz < n_ax - half_win; ++iz) {
                const float v = frame[static_cast<std::size_t>(ix) * n_ax + iz];
                if (v <= floor) continue;
                bool is_max = true;
                for (int dx = -1; dx <= 1 && is_max; ++dx)
                    for (int dz = -1; dz <= 1; ++dz) {
                        if (dx == 0 && dz == 0) continue;
                        if (frame[static_cast<std::size_t>(ix + dx) * n_ax + iz + dz] >= v) {
                            is_max = false;
                            break;
                        }
                    }
                if (is_max) {
                    per_frame[f].push_back({f, iz, ix, v});
                    all.push_back({f, iz, ix, v});
                }
            }
        }
    }

    std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value > b.value;
        return std::tie(a.frame, a.iz, a.ix) < std::tie(b.frame, b.iz, b.ix);
    });

    const int win = 2 * half_win + 1;
    std::vector<double> accum(static_cast<std::size_t>(win) * win, 0.0);
    int used = 0;
    for (const auto& c : all) {
        if (used >= n_samples) break;
        // Isolation: no competing maximum within 2 expected FWHMs.
        bool isolated = true;
        for (const auto& other : per_frame[c.frame]) {
            if (other.iz == c.iz && other.ix == c.ix) continue;
            if (std::abs(other.iz - c.iz) <= isolation_px &&
                std::abs(other.ix - c.ix) <= isolation_px) {
                isolated = false;
                break;
            }
        }
        if (!isolated) continue;

        auto frame = stack.frame(c.frame);
        // Centroid within a half window, for sub-pixel alignment.
        double cz = 0.0, cx = 0.0, mass = 0.0;
        for (int dx = -half_win / 2; dx <= half_win / 2; ++dx)
            for (int dz = -half_win / 2; dz <= half_win / 2; ++dz) {
                const double v =
                    frame[static_cast<std::size_t>(c.ix + dx) * n_ax + c.iz + dz];
                cz += v * dz;
                cx += v * dx;
                mass += v;
            }
        const double off_z = mass > 0.0 ? cz / mass : 0.0;
        const double off_x = mass > 0.0 ? cx / mass : 0.0;

        // Bilinear resample centered on the centroid.
        for (int dx = -half_win; dx <= half_win; ++dx) {
            for (int dz = -half_win; dz <= half_win; ++dz) {
                const double sz = c.iz + off_z + dz;
                const double sx = c.ix + off_x + dx;
                const int z0 = std::clamp(static_cast<int>(std::floor(sz)), 0, n_ax - 2);
                const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, n_lat - 2);
                const double az = sz - z0, ax = sx - x0;
                const auto at = [&](int z, int x) {
                    return static_cast<double>(frame[static_cast<std::size_t>(x) * n_ax + z]);
                };
                const double v = (1 - ax) * ((1 - az) * at(z0, x0) + az * at(z0 + 1, x0)) +
                                 ax * ((1 - az) * at(z0, x0 + 1) + az * at(z0 + 1, x0 + 1));
                accum[static_cast<std::size_t>(dx + half_win) * win + dz + half_win] +=
                    v / c.value;
            }
        }
        ++used;
    }
    require(used > 0, "no isolated blobs found for PSF estimation");

    // Background-subtracted center profiles of the averaged blob.
    const double baseline = *std::min_element(accum.begin(), accum.end());
    std::vector<double> axial(win), lateral(win);
    for (int i = 0; i < win; ++i) {
        axial[i] = accum[static_cast<std::size_t>(half_win) * win + i] - baseline;
        lateral[i] = accum[static_cast<std::size_t>(i) * win + half_win] - baseline;
    }

    PsfEstimate est;
    est.psf.fwhm_axial_um = profile_fwhm_px(axial) * pitch;
    est.psf.fwhm_lateral_um = profile_fwhm_px(lateral) * pitch;
    est.psf.amplitude = 1.0;
    est.samples_used = used;
    est.short_of_samples = used < n_samples;
    require(est.psf.fwhm_axial_um > 0.0 && est.psf.fwhm_lateral_um > 0.0,
            "PSF fit failed: no half-maximum crossing");
    return est;
}

}  // namespace awsalm::pipeline

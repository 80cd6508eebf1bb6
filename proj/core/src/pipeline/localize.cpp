#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "awsalm/pipeline.hpp"
#include "../internal_util.hpp"

namespace awsalm::pipeline {

namespace {

// Zero-padded separable convolution / box sums over a column-major frame.
// Only interior pixels (a template half-window from the border) are used for
// peak picking, where padding has no effect.

void conv_axial(const float* in, float* out, int n_ax, int n_lat,
                const std::vector<float>& k) {
    const int r = static_cast<int>(k.size() / 2);
    for (int ix = 0; ix < n_lat; ++ix) {
        const float* src = in + static_cast<std::size_t>(ix) * n_ax;
        float* dst = out + static_cast<std::size_t>(ix) * n_ax;
        for (int iz = 0; iz < n_ax; ++iz) {
            double acc = 0.0;
            const int t0 = std::max(-r, -iz), t1 = std::min(r, n_ax - 1 - iz);
            for (int t = t0; t <= t1; ++t) acc += k[t + r] * src[iz + t];
            dst[iz] = static_cast<float>(acc);
        }
    }
}

void conv_lateral(const float* in, float* out, int n_ax, int n_lat,
                  const std::vector<float>& k) {
    const int r = static_cast<int>(k.size() / 2);
    for (int iz = 0; iz < n_ax; ++iz) {
        for (int ix = 0; ix < n_lat; ++ix) {
            double acc = 0.0;
            const int t0 = std::max(-r, -ix), t1 = std::min(r, n_lat - 1 - ix);
            for (int t = t0; t <= t1; ++t)
                acc += k[t + r] * in[static_cast<std::size_t>(ix + t) * n_ax + iz];
            out[static_cast<std::size_t>(ix) * n_ax + iz] = static_cast<float>(acc);
        }
    }
}

void boxsum_axial(const float* in, float* out, int n_ax, int n_lat, int r) {
    for (int ix = 0; ix < n_lat; ++ix) {
        const float* src = in + static_cast<std::size_t>(ix) * n_ax;
        float* dst = out + static_cast<std::size_t>(ix) * n_ax;
        for (int iz = 0; iz < n_ax; ++iz) {
            double acc = 0.0;
            const int a = std::max(0, iz - r), b = std::min(n_ax - 1, iz + r);
            for (int j = a; j <= b; ++j) acc += src[j];
            dst[iz] = static_cast<float>(acc);
        }
    }
}

void boxsum_lateral(const float* in, float* out, int n_ax, int n_lat, int r) {
    for (int iz = 0; iz < n_ax; ++iz) {
        for (int ix = 0; ix < n_lat; ++ix) {
            double acc = 0.0;
            const int a = std::max(0, ix - r), b = std::min(n_lat - 1, ix + r);
            for (int j = a; j <= b; ++j)
                acc += in[static_cast<std::size_t>(j) * n_ax + iz];
            out[static_cast<std::size_t>(ix) * n_ax + iz] = static_cast<float>(acc);
        }
    }
}

std::vector<float> gaussian_taps(double sigma_px, int radius) {
    std::vector<float> k(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
        k[i + radius] = static_cast<float>(std::exp(-0.5 * (i / sigma_px) * (i / sigma_px)));
    return k;
}

double parabolic_offset(double m, double c, double p) {
    const double denom = m - 2.0 * c + p;
    if (denom >= 0.0) return 0.0;  // not a proper maximum
    double d = 0.5 * (m - p) / denom;
    return std::clamp(d, -0.5, 0.5);
}

}  // namespace

std::vector<LocalizationEvent> localize(std::span<const float> frame,
                                        const GridSpec& grid,
                                        const acoustics::PSFModel& psf,
                                        const LocalizeParams& params) {
    require(params.threshold > 0.0 && params.threshold < 1.0,
            "correlation threshold must lie in (0, 1)");
    psf.validate();
    const int n_ax = grid.n_ax, n_lat = grid.n_lat;
    const std::size_t px = grid.pixels();
    require(frame.size() == px, "frame size mismatch");

    const double sz = psf.sigma_axial_um() / grid.pitch_um;
    const double sx = psf.sigma_lateral_um() / grid.pitch_um;
    const int rz = std::max(2, static_cast<int>(std::ceil(2.5 * sz)));
    const int rx = std::max(2, static_cast<int>(std::ceil(2.5 * sx)));
    const auto tz = gaussian_taps(sz, rz);
    const auto tx = gaussian_taps(sx, rx);

    // Template statistics for normalized correlation.
    double sum_tz = 0.0, sum_tz2 = 0.0, sum_tx = 0.0, sum_tx2 = 0.0;
    for (float v : tz) {
        sum_tz += v;
        sum_tz2 += static_cast<double>(v) * v;
    }
    for (float v : tx) {
        sum_tx += v;
        sum_tx2 += static_cast<double>(v) * v;
    }
    const double n_win = static_cast<double>(tz.size()) * tx.size();
    const double t_mean = sum_tz * sum_tx / n_win;
    const double t_ss = sum_tz2 * sum_tx2 - sum_tz * sum_tz * sum_tx * sum_tx / n_win;

    std::vector<float> tmp(px), corr(px), s1(px), s2(px), sq(px);
    conv_axial(frame.data(), tmp.data(), n_ax, n_lat, tz);
    conv_lateral(tmp.data(), corr.data(), n_ax, n_lat, tx);
    boxsum_axial(frame.data(), tmp.data(), n_ax, n_lat, rz);
    boxsum_lateral(tmp.data(), s1.data(), n_ax, n_lat, rx);
    for (std::size_t i = 0; i < px; ++i) sq[i] = frame[i] * frame[i];
    boxsum_axial(sq.data(), tmp.data(), n_ax, n_lat, rz);
    boxsum_lateral(tmp.data(), s2.data(), n_ax, n_lat, rx);

    std::vector<float> ncc(px, 0.0f);
    for (std::size_t i = 0; i < px; ++i) {
        const double num = corr[i] - t_mean * s1[i];
        const double f_ss = s2[i] - static_cast<double>(s1[i]) * s1[i] / n_win;
        const double denom = std::sqrt(std::max(f_ss, 1e-30) * t_ss);
        ncc[i] = static_cast<float>(std::clamp(num / denom, -1.0, 1.0));
    }

    struct Peak {
        int iz, ix;
        float score;
    };
    std::vector<Peak> peaks;
    for (int ix = rx; ix < n_lat - rx; ++ix) {
        for (int iz = rz; iz < n_ax - rz; ++iz) {
            const float v = ncc[static_cast<std::size_t>(ix) * n_ax + iz];
            if (v < params.threshold) continue;
            bool is_max = true;
            for (int dx = -1; dx <= 1 && is_max; ++dx)
                for (int dz = -1; dz <= 1; ++dz) {
                    if (dx == 0 && dz == 0) continue;
                    const float w = ncc[static_cast<std::size_t>(ix + dx) * n_ax + iz + dz];
                    if (w > v || (w == v && (dx < 0 || (dx == 0 && dz < 0)))) {
                        is_max = false;  // plateau ties go to the first pixel
                        break;
                    }
                }
            if (is_max) peaks.push_back({iz, ix, v});
        }
    }

    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.score != b.score) return a.score > b.score;
        return std::tie(a.iz, a.ix) < std::tie(b.iz, b.ix);
    });

    // Minimum separation: one PSF FWHM (elliptical metric).
    const double fz_px = psf.fwhm_axial_um / grid.pitch_um;
    const double fx_px = psf.fwhm_lateral_um / grid.pitch_um;
    std::vector<Peak> kept;
    for (const auto& p : peaks) {
        bool clear = true;
        for (const auto& q : kept) {
            const double ez = (p.iz - q.iz) / (params.min_separation_fwhm * fz_px);
            const double ex = (p.ix - q.ix) / (params.min_separation_fwhm * fx_px);
            if (ez * ez + ex * ex < 1.0) {
                clear = false;
                break;
            }
        }
        if (clear) kept.push_back(p);
    }

    std::vector<LocalizationEvent> events;
    events.reserve(kept.size());
    for (const auto& p : kept) {
        const auto at = [&](int z, int x) {
            return static_cast<double>(ncc[static_cast<std::size_t>(x) * n_ax + z]);
        };
        double dz = 0.0, dx = 0.0;
        if (params.subpixel == SubpixelMethod::parabolic) {
            dz = parabolic_offset(at(p.iz - 1, p.ix), at(p.iz, p.ix), at(p.iz + 1, p.ix));
            dx = parabolic_offset(at(p.iz, p.ix - 1), at(p.iz, p.ix), at(p.iz, p.ix + 1));
        } else {
            double mz = 0.0, mx = 0.0, mass = 0.0;
            for (int ddx = -1; ddx <= 1; ++ddx)
                for (int ddz = -1; ddz <= 1; ++ddz) {
                    const double v = std::max(
                        0.0, static_cast<double>(
                                 frame[static_cast<std::size_t>(p.ix + ddx) * n_ax +
                                       p.iz + ddz]));
                    mz += v * ddz;
                    mx += v * ddx;
                    mass += v;
                }
            if (mass > 0.0) {
                dz = mz / mass;
                dx = mx / mass;
            }
        }
        LocalizationEvent e;
        e.pos = {grid.z_at(p.iz) + dz * grid.pitch_mm(),
                 grid.x_at(p.ix) + dx * grid.pitch_mm()};
        e.correlation_score = p.score;
        e.amplitude = frame[static_cast<std::size_t>(p.ix) * n_ax + p.iz];
        events.push_back(e);
    }
    return events;
}

std::vector<std::vector<LocalizationEvent>> localize_stack(
    const FrameStack& stack, const acoustics::PSFModel& psf,
    const LocalizeParams& params) {
    std::vector<std::vector<LocalizationEvent>> per_frame(stack.n_frames);
    detail::parallel_for(stack.n_frames, [&](std::int64_t f) {
        auto events = localize(stack.frame(static_cast<int>(f)), stack.grid, psf, params);
        for (auto& e : events) {
            e.frame = static_cast<int>(f);
            e.t_s = stack.frame_times[f];
        }
        per_frame[f] = std::move(events);
    });
    return per_frame;
}

}  // namespace awsalm::pipeline

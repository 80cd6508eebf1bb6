#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <fftw3.h>

#include "awsalm/pipeline.hpp"
#include "../internal_util.hpp"

namespace awsalm::pipeline {

namespace {

// Shared FFT plans (FFTW_UNALIGNED so per-thread buffers need no special
// allocation; fftwf_execute_dft_* on distinct arrays is thread-safe).
struct XcorrPlans {
    int n_ax, n_lat, n_freq;
    fftwf_plan fwd, bwd;

    XcorrPlans(int ax, int lat) : n_ax(ax), n_lat(lat), n_freq(ax / 2 + 1) {
        std::vector<float> real(static_cast<std::size_t>(ax) * lat);
        std::vector<std::complex<float>> cplx(static_cast<std::size_t>(n_freq) * lat);
        // Column-major data => treat as (n_lat x n_ax) row-major for FFTW.
        fwd = fftwf_plan_dft_r2c_2d(lat, ax, real.data(),
                                    reinterpret_cast<fftwf_complex*>(cplx.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd = fftwf_plan_dft_c2r_2d(lat, ax,
                                    reinterpret_cast<fftwf_complex*>(cplx.data()),
                                    real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~XcorrPlans() {
        fftwf_destroy_plan(fwd);
        fftwf_destroy_plan(bwd);
    }
};

void translate_frame(std::span<float> frame, int n_ax, int n_lat, int dz, int dx) {
    if (dz == 0 && dx == 0) return;
    std::vector<float> src(frame.begin(), frame.end());
    std::fill(frame.begin(), frame.end(), 0.0f);
    for (int ix = 0; ix < n_lat; ++ix) {
        const int sx = ix - dx;
        if (sx < 0 || sx >= n_lat) continue;
        for (int iz = 0; iz < n_ax; ++iz) {
            const int sz = iz - dz;
            if (sz < 0 || sz >= n_ax) continue;
            frame[static_cast<std::size_t>(ix) * n_ax + iz] =
                src[static_cast<std::size_t>(sx) * n_ax + sz];
        }
    }
}

}  // namespace

std::vector<MotionShift> motion_compensate(FrameStack& stack, int reference,
                                           const MotionParams& params) {
    require(stack.n_frames > 0, "motion compensation needs a non-empty stack");
    require(reference >= 0 && reference < stack.n_frames,
            "reference frame out of range");
    const int n_ax = stack.grid.n_ax, n_lat = stack.grid.n_lat;
    const std::size_t px = stack.grid.pixels();

    XcorrPlans plans(n_ax, n_lat);
    const int nf = plans.n_freq;

    // Reference spectrum (mean removed).
    auto ref = stack.frame(reference);
    double ref_mean = 0.0;
    for (float v : ref) ref_mean += v;
    ref_mean /= static_cast<double>(px);
    double ref_energy = 0.0;
    std::vector<float> ref_centered(px);
    for (std::size_t i = 0; i < px; ++i) {
        ref_centered[i] = static_cast<float>(ref[i] - ref_mean);
        ref_energy += ref_centered[i] * ref_centered[i];
    }
    std::vector<std::complex<float>> ref_spec(static_cast<std::size_t>(nf) * n_lat);
    fftwf_execute_dft_r2c(plans.fwd, ref_centered.data(),
                          reinterpret_cast<fftwf_complex*>(ref_spec.data()));

    const bool ref_is_flat = ref_energy <= 0.0;
    std::vector<MotionShift> shifts(stack.n_frames);

    detail::parallel_for(stack.n_frames, [&](std::int64_t f) {
        auto frame = stack.frame(static_cast<int>(f));
        MotionShift out;
        double mean = 0.0;
        for (float v : frame) mean += v;
        mean /= static_cast<double>(px);
        std::vector<float> centered(px);
        double energy = 0.0;
        for (std::size_t i = 0; i < px; ++i) {
            centered[i] = static_cast<float>(frame[i] - mean);
            energy += centered[i] * centered[i];
        }
        if (energy <= 0.0 || ref_is_flat) {
            // All-flat frame: no information, keep zero shift but flag it.
            out.low_confidence = true;
            shifts[f] = out;
            return;
        }
        std::vector<std::complex<float>> spec(static_cast<std::size_t>(nf) * n_lat);
        fftwf_execute_dft_r2c(plans.fwd, centered.data(),
                              reinterpret_cast<fftwf_complex*>(spec.data()));
        for (std::size_t i = 0; i < spec.size(); ++i)
            spec[i] = ref_spec[i] * std::conj(spec[i]);
        std::vector<float> corr(px);
        fftwf_execute_dft_c2r(plans.bwd,
                              reinterpret_cast<fftwf_complex*>(spec.data()),
                              corr.data());

        // Correlation lag k satisfies ref[i + k] ~ frame[i]; a frame drifted
        // by d relative to the reference peaks at k = -d.
        const int ms = params.max_shift_px;
        double best = -1e300;
        int best_kz = 0, best_kx = 0;
        for (int kx = -ms; kx <= ms; ++kx) {
            const int wx = (kx % n_lat + n_lat) % n_lat;
            for (int kz = -ms; kz <= ms; ++kz) {
                const int wz = (kz % n_ax + n_ax) % n_ax;
                const double v = corr[static_cast<std::size_t>(wx) * n_ax + wz];
                if (v > best) {
                    best = v;
                    best_kz = kz;
                    best_kx = kx;
                }
            }
        }
        out.dz_px = -best_kz;
        out.dx_px = -best_kx;
        // FFTW's unnormalized round trip scales the correlation by px.
        out.score = best / static_cast<double>(px) /
                    std::sqrt(ref_energy * energy);
        out.low_confidence = out.score < params.confidence_floor;
        shifts[f] = out;
    });

    // Undo each frame's drift.
    detail::parallel_for(stack.n_frames, [&](std::int64_t f) {
        translate_frame(stack.frame(static_cast<int>(f)), n_ax, n_lat,
                        -shifts[f].dz_px, -shifts[f].dx_px);
    });
    return shifts;
}

}  // namespace awsalm::pipeline

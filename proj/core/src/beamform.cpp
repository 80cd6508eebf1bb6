#include "awsalm/beamform.hpp"

#include <cmath>
#include <complex>

#include <fftw3.h>

#include "internal_util.hpp"

namespace awsalm::acoustics {

namespace {

// Gaussian-windowed tone centered at t = 0; envelope FWHM = cycles / f0.
struct Pulse {
    double f0_hz;
    double sigma_s;

    double operator()(double t) const {
        return std::cos(2.0 * kPi * f0_hz * t) *
               std::exp(-0.5 * t * t / (sigma_s * sigma_s));
    }
    double half_support_s() const { return 4.0 * sigma_s; }
};

Pulse make_pulse(const TransmitEvent& event) {
    const double f0 = event.center_frequency_mhz * 1e6;
    const double cycles = std::max(1, event.cycles);
    return Pulse{f0, cycles / f0 / 2.3548200450309493};
}

// Transmit path length [mm] from the array plane to p for a steered plane wave.
double plane_tx_path_mm(const Vec2& p, double angle_deg) {
    const double a = angle_deg * kPi / 180.0;
    return p.z * std::cos(a) + p.x * std::sin(a);
}

}  // namespace

ChannelData synthesize_channel_data(std::span<const Scatterer> scatterers,
                                    const TransmitEvent& event,
                                    const ArrayGeometry& array, double fs_hz,
                                    double max_depth_mm) {
    require(event.kind == TransmitEvent::Kind::plane_wave,
            "channel synthesis supports plane-wave transmissions only");
    require(scatterers.size() <= 1000, "channel path is desk-scale: <= 1000 scatterers");
    const Pulse pulse = make_pulse(event);
    const double c = kSpeedOfSoundMmPerS;

    ChannelData data;
    data.n_elements = array.n_elements;
    data.fs_hz = fs_hz;
    data.t0_s = 0.0;
    const double t_max = 2.0 * max_depth_mm / c + 2.0 * pulse.half_support_s();
    data.n_samples = static_cast<int>(std::ceil(t_max * fs_hz));
    data.samples.assign(
        static_cast<std::size_t>(data.n_elements) * data.n_samples, 0.0f);

    detail::parallel_for(data.n_elements, [&](std::int64_t e) {
        auto trace = data.trace(static_cast<int>(e));
        const double ex = array.element_x(static_cast<int>(e));
        for (const auto& s : scatterers) {
            const double tx_mm = plane_tx_path_mm(s.pos, event.angle_deg);
            const double r_mm = std::hypot(s.pos.z, s.pos.x - ex);
            const double t_arrival = (tx_mm + r_mm) / c;
            const double amp = s.amplitude / std::max(r_mm, 1.0);
            const int i0 = std::max(
                0, static_cast<int>((t_arrival - pulse.half_support_s()) * fs_hz));
            const int i1 = std::min(
                data.n_samples - 1,
                static_cast<int>((t_arrival + pulse.half_support_s()) * fs_hz) + 1);
            for (int i = i0; i <= i1; ++i) {
                const double t = i / fs_hz - t_arrival;
                trace[i] += static_cast<float>(amp * pulse(t));
            }
        }
    });
    return data;
}

std::vector<float> das_beamform(const ChannelData& data, const TransmitEvent& event,
                                const ArrayGeometry& array, const GridSpec& grid) {
    require(event.kind == TransmitEvent::Kind::plane_wave,
            "beamforming supports plane-wave transmissions only");
    const double c = kSpeedOfSoundMmPerS;

    // Coherent per-pixel sum of linearly interpolated element samples.
    std::vector<float> rf(grid.pixels(), 0.0f);
    detail::parallel_for(grid.n_lat, [&](std::int64_t ix) {
        const double x = grid.x_at(static_cast<int>(ix));
        float* col = rf.data() + static_cast<std::size_t>(ix) * grid.n_ax;
        for (int iz = 0; iz < grid.n_ax; ++iz) {
            const Vec2 p{grid.z_at(iz), x};
            const double tx = plane_tx_path_mm(p, event.angle_deg) / c;
            double acc = 0.0;
            for (int e = 0; e < data.n_elements; ++e) {
                const double r = std::hypot(p.z, p.x - array.element_x(e));
                const double tau = (tx + r / c - data.t0_s) * data.fs_hz;
                const int i0 = static_cast<int>(tau);
                if (i0 < 0 || i0 + 1 >= data.n_samples) continue;
                const double frac = tau - i0;
                const auto trace = data.trace(e);
                acc += (1.0 - frac) * trace[i0] + frac * trace[i0 + 1];
            }
            col[iz] = static_cast<float>(acc);
        }
    });

    // Axial envelope via the analytic signal, column by column.
    const int n = grid.n_ax;
    std::vector<float> env(grid.pixels(), 0.0f);
    fftwf_complex* buf = fftwf_alloc_complex(n);
    fftwf_plan fwd = fftwf_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftwf_plan bwd = fftwf_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    for (int ix = 0; ix < grid.n_lat; ++ix) {
        const float* col = rf.data() + static_cast<std::size_t>(ix) * n;
        for (int i = 0; i < n; ++i) {
            buf[i][0] = col[i];
            buf[i][1] = 0.0f;
        }
        fftwf_execute(fwd);
        // Analytic signal: zero negative frequencies, double positive ones.
        for (int i = 1; i < (n + 1) / 2; ++i) {
            buf[i][0] *= 2.0f;
            buf[i][1] *= 2.0f;
        }
        for (int i = n / 2 + 1; i < n; ++i) {
            buf[i][0] = 0.0f;
            buf[i][1] = 0.0f;
        }
        fftwf_execute(bwd);
        float* out = env.data() + static_cast<std::size_t>(ix) * n;
        for (int i = 0; i < n; ++i)
            out[i] = std::hypot(buf[i][0], buf[i][1]) / static_cast<float>(n);
    }
    fftwf_destroy_plan(fwd);
    fftwf_destroy_plan(bwd);
    fftwf_free(buf);
    return env;
}

std::vector<float> compound(const std::vector<std::vector<float>>& frames) {
    require(!frames.empty(), "nothing to compound");
    std::vector<float> out(frames[0].size(), 0.0f);
    for (const auto& f : frames) {
        require(f.size() == out.size(), "compound frames must share dimensions");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
    }
    const float inv = 1.0f / static_cast<float>(frames.size());
    for (auto& v : out) v *= inv;
    return out;
}

}  // namespace awsalm::acoustics

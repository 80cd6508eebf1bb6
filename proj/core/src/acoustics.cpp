#include "awsalm/acoustics.hpp"

#include <cmath>

namespace awsalm::acoustics {

namespace {

constexpr double kAttenuationDbPerMhzCm = 0.5;
constexpr double kLn10 = 2.302585092994046;

// d(ln derate)/dz in 1/mm at frequency f: attenuation slope of the amplitude.
double derate_log_slope_per_mm(double freq_mhz) {
    return kAttenuationDbPerMhzCm * freq_mhz * kLn10 / (20.0 * 10.0);
}

}  // namespace

double derate_mi(double surface_mi, double depth_mm, double freq_mhz) {
    require(depth_mm >= 0.0, "depth must be non-negative");
    require(freq_mhz > 0.0, "frequency must be positive");
    const double depth_cm = depth_mm / 10.0;
    return surface_mi *
           std::pow(10.0, -kAttenuationDbPerMhzCm * freq_mhz * depth_cm / 20.0);
}

double PlaneWaveField::at_depth(double z_mm) const {
    if (z_mm < 0.0) return 0.0;
    // Envelope center sits deeper than the peak so that envelope * derating
    // has its maximum exactly at peak_depth_mm.
    const double beta = derate_log_slope_per_mm(freq_mhz);
    const double s2 = envelope_sigma_mm * envelope_sigma_mm;
    const double center = peak_depth_mm + beta * s2;
    const auto log_env = [&](double z) {
        return -(z - center) * (z - center) / (2.0 * s2) - beta * z;
    };
    return nominal_mi * std::exp(log_env(z_mm) - log_env(peak_depth_mm));
}

double FocusedField::operator()(const Vec2& p) const {
    const double dz = (p.z - focus.z) / sigma_axial_mm;
    const double dx = (p.x - focus.x) / sigma_lateral_mm;
    return peak_mi * std::exp(-0.5 * (dz * dz + dx * dx));
}

FocusedField make_focused_field(const Vec2& focus, double f_number,
                                double nominal_mi, double freq_mhz) {
    require(f_number > 0.0, "f-number must be positive");
    FocusedField f;
    f.focus = focus;
    f.peak_mi = nominal_mi;
    // FWHM of the focal beam ~ f_number * wavelength.
    f.sigma_lateral_mm = f_number * wavelength_mm(freq_mhz) / 2.3548200450309493;
    f.sigma_axial_mm = kFocusAxialElongation * f.sigma_lateral_mm;
    return f;
}

std::vector<float> focused_mi_field(const GridSpec& grid, const Vec2& focus,
                                    double f_number, double nominal_mi,
                                    double freq_mhz) {
    require(grid.contains(focus), "focus lies outside the grid");
    const FocusedField f = make_focused_field(focus, f_number, nominal_mi, freq_mhz);
    std::vector<float> field(grid.pixels());
    for (int ix = 0; ix < grid.n_lat; ++ix) {
        for (int iz = 0; iz < grid.n_ax; ++iz) {
            field[static_cast<std::size_t>(ix) * grid.n_ax + iz] =
                static_cast<float>(f({grid.z_at(iz), grid.x_at(ix)}));
        }
    }
    return field;
}

double mi_at(const MiField& field, const Vec2& p) {
    return std::visit([&](const auto& f) { return f(p); }, field);
}

MiField TransmitEvent::field() const {
    if (kind == Kind::plane_wave) {
        PlaneWaveField f;
        f.nominal_mi = surface_mi;
        f.freq_mhz = center_frequency_mhz;
        return f;
    }
    return make_focused_field(focus, f_number, surface_mi, center_frequency_mhz);
}

double PulseSequence::duration_s() const {
    if (events.empty()) return 0.0;
    return events.back().timestamp_s - events.front().timestamp_s +
           1.0 / (imaging_frame_rate_hz * compounding);
}

double PulseSequence::imaging_time_s() const {
    std::size_t imaged = 0;
    for (const auto& e : events)
        if (e.frame_index >= 0) ++imaged;
    return static_cast<double>(imaged) / (imaging_frame_rate_hz * compounding);
}

double PulseSequence::activation_time_s() const {
    return duration_s() - imaging_time_s();
}

std::string PulseSequence::mode_name() const {
    return mode == Mode::awsalm ? "awsalm" : "fast_awsalm";
}

void PulseSequence::validate() const {
    require(!events.empty(), "pulse sequence has no events");
    require(compounding >= 1, "compounding must be >= 1");
    for (std::size_t i = 1; i < events.size(); ++i)
        require(events[i].timestamp_s > events[i - 1].timestamp_s,
                "event timestamps must be strictly increasing");
    require(static_cast<int>(frame_times.size()) == n_frames,
            "frame time table size mismatch");
    for (const auto& e : events) {
        require(e.surface_mi > 0.0, "event MI must be positive");
        if (e.kind == TransmitEvent::Kind::focused)
            require(e.cycles >= 1, "focused events need at least one cycle");
    }
}

PulseSequence build_awsalm_sequence(const AwsalmConfig& cfg) {
    require(!cfg.focal_points.empty(), "at least one focal point required");
    for (const auto& fp : cfg.focal_points) {
        require(fp.z >= 5.0 && fp.z <= 30.0,
                "focal depth must lie in [5, 30] mm");
        require(fp.x >= -15.0 && fp.x <= 15.0,
                "lateral focus position must lie in [-15, 15] mm");
    }
    if (cfg.lateral_sweep) {
        require(cfg.lateral_sweep->first >= -15.0 && cfg.lateral_sweep->second <= 15.0,
                "lateral sweep must lie in [-15, 15] mm");
    }
    require(cfg.n_cycles >= 1, "need at least one activation/imaging cycle");
    require(cfg.frames_per_block >= 1 && cfg.activations_per_block >= 1,
            "block sizes must be positive");
    require(cfg.cycles_activation >= 1, "activation burst needs >= 1 cycle");

    PulseSequence seq;
    seq.mode = PulseSequence::Mode::awsalm;
    seq.imaging_frame_rate_hz = cfg.frame_rate_hz;
    seq.compounding = cfg.compounding;
    seq.imaging_mi = cfg.imaging_mi;

    const double dt_tx = 1.0 / (cfg.frame_rate_hz * cfg.compounding);
    const double dt_act = 1.0 / cfg.activation_prf_hz;
    const int total_activations = cfg.n_cycles * cfg.activations_per_block;

    double t = 0.0;
    int frame = 0;
    int activation_counter = 0;
    for (int cycle = 0; cycle < cfg.n_cycles; ++cycle) {
        // Activation block: focused transmissions at the activation PRF.
        for (int a = 0; a < cfg.activations_per_block; ++a) {
            TransmitEvent e;
            e.kind = TransmitEvent::Kind::focused;
            e.timestamp_s = t;
            e.surface_mi = cfg.activation_mi;
            e.center_frequency_mhz = cfg.center_frequency_mhz;
            e.f_number = cfg.f_number;
            e.cycles = cfg.cycles_activation;
            const auto& fp = cfg.focal_points[activation_counter % cfg.focal_points.size()];
            e.focus = fp;
            if (cfg.lateral_sweep && total_activations > 1) {
                const auto [x0, x1] = *cfg.lateral_sweep;
                e.focus.x = x0 + (x1 - x0) * activation_counter / (total_activations - 1);
            }
            seq.events.push_back(e);
            ++activation_counter;
            t += dt_act;
        }
        // Imaging block: compounded plane-wave frames.
        const int first_frame = frame;
        for (int f = 0; f < cfg.frames_per_block; ++f) {
            seq.frame_times.push_back(t);
            for (int c = 0; c < cfg.compounding; ++c) {
                TransmitEvent e;
                e.kind = TransmitEvent::Kind::plane_wave;
                e.timestamp_s = t;
                e.surface_mi = cfg.imaging_mi;
                e.center_frequency_mhz = cfg.center_frequency_mhz;
                // Symmetric compounding fan, e.g. -6..6 degrees for 5 angles.
                e.angle_deg = (cfg.compounding > 1)
                                  ? -6.0 + 12.0 * c / (cfg.compounding - 1)
                                  : 0.0;
                e.frame_index = frame;
                seq.events.push_back(e);
                t += dt_tx;
            }
            ++frame;
        }
        seq.imaging_blocks.emplace_back(first_frame, frame);
    }
    seq.n_frames = frame;
    seq.validate();
    return seq;
}

PulseSequence build_fast_awsalm_sequence(const FastAwsalmConfig& cfg) {
    require(cfg.mi >= 0.06 && cfg.mi <= 0.65,
            "fast sequence MI must lie in [0.06, 0.65]");
    require(cfg.frame_rate_hz >= 1000.0 && cfg.frame_rate_hz <= 10000.0,
            "fast sequence frame rate must lie in [1000, 10000] Hz");
    require(cfg.duration_s >= 0.1 && cfg.duration_s <= 2.0,
            "fast sequence duration must lie in [0.1, 2] s");

    PulseSequence seq;
    seq.mode = PulseSequence::Mode::fast_awsalm;
    seq.imaging_frame_rate_hz = cfg.frame_rate_hz;
    seq.compounding = 1;
    seq.imaging_mi = cfg.mi;

    const int n = static_cast<int>(std::llround(cfg.frame_rate_hz * cfg.duration_s));
    const double dt = 1.0 / cfg.frame_rate_hz;
    seq.events.reserve(n);
    for (int f = 0; f < n; ++f) {
        TransmitEvent e;
        e.kind = TransmitEvent::Kind::plane_wave;
        e.timestamp_s = f * dt;
        e.surface_mi = cfg.mi;
        e.center_frequency_mhz = cfg.center_frequency_mhz;
        e.frame_index = f;
        seq.events.push_back(e);
        seq.frame_times.push_back(e.timestamp_s);
    }
    seq.n_frames = n;
    seq.imaging_blocks.emplace_back(0, n);
    seq.validate();
    return seq;
}

void PSFModel::validate() const {
    require(fwhm_lateral_um > 0.0 && fwhm_axial_um > 0.0,
            "PSF widths must be positive");
}

}  // namespace awsalm::acoustics

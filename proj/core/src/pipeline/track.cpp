#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "awsalm/assignment.hpp"
#include "awsalm/pipeline.hpp"

namespace awsalm::pipeline {

namespace {

constexpr double kForbidden = 1e12;
constexpr double kG = 9.81e3;  // mm/s^2

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::Vector2d;
using Eigen::Vector4d;

// Constant-velocity Kalman filter, state (z, x, vz, vx).
struct Kalman {
    Vector4d x = Vector4d::Zero();
    Matrix4d P = Matrix4d::Zero();

    void init(const Vec2& pos, double r, double v0) {
        x << pos.z, pos.x, 0.0, 0.0;
        P.setZero();
        P(0, 0) = P(1, 1) = r * r;
        P(2, 2) = P(3, 3) = v0 * v0;
    }

    void predict(double dt, double sigma_a) {
        Matrix4d F = Matrix4d::Identity();
        F(0, 2) = dt;
        F(1, 3) = dt;
        const double q2 = sigma_a * sigma_a;
        Matrix4d Q = Matrix4d::Zero();
        const double dt2 = dt * dt;
        Q(0, 0) = Q(1, 1) = q2 * dt2 * dt2 / 4.0;
        Q(0, 2) = Q(2, 0) = q2 * dt2 * dt / 2.0;
        Q(1, 3) = Q(3, 1) = q2 * dt2 * dt / 2.0;
        Q(2, 2) = Q(3, 3) = q2 * dt2;
        x = F * x;
        P = F * P * F.transpose() + Q;
    }

    Vector2d innovation(const Vec2& meas) const {
        return Vector2d(meas.z - x(0), meas.x - x(1));
    }

    Matrix2d innovation_cov(double r) const {
        Matrix2d S = P.topLeftCorner<2, 2>();
        S(0, 0) += r * r;
        S(1, 1) += r * r;
        return S;
    }

    void update(const Vec2& meas, double r) {
        const Matrix2d S = innovation_cov(r);
        const Eigen::Matrix<double, 4, 2> K =
            P.leftCols<2>() * S.inverse();
        x += K * innovation(meas);
        Matrix4d IKH = Matrix4d::Identity();
        IKH.leftCols<2>() -= K;
        P = IKH * P;
    }
};

struct ActiveTrack {
    Kalman kf;
    Track track;
    int misses = 0;
    double last_t = 0.0;
};

}  // namespace

void refresh_track_summary(Track& t) {
    const auto n = t.points.size();
    if (n < 2) {
        t.mean_velocity = n == 1 ? t.points[0].vel : Vec2{};
        t.mean_speed_mm_s = t.mean_velocity.norm();
        return;
    }
    // Least-squares position-vs-time slopes.
    double tm = 0.0;
    for (const auto& p : t.points) tm += p.t_s;
    tm /= static_cast<double>(n);
    double szz = 0.0, szx = 0.0, stt = 0.0;
    double zm = 0.0, xm = 0.0;
    for (const auto& p : t.points) {
        zm += p.pos.z;
        xm += p.pos.x;
    }
    zm /= static_cast<double>(n);
    xm /= static_cast<double>(n);
    for (const auto& p : t.points) {
        const double dt = p.t_s - tm;
        stt += dt * dt;
        szz += dt * (p.pos.z - zm);
        szx += dt * (p.pos.x - xm);
    }
    if (stt > 0.0) {
        t.mean_velocity = {szz / stt, szx / stt};
    } else {
        t.mean_velocity = {};
    }
    t.mean_speed_mm_s = t.mean_velocity.norm();
}

TrackingResult track(const std::vector<std::vector<LocalizationEvent>>& events,
                     const std::vector<double>& frame_times,
                     const TrackerParams& params) {
    require(events.size() == frame_times.size(),
            "per-frame event list and frame time table differ in length");
    const int n_frames = static_cast<int>(events.size());
    TrackingResult result;
    if (n_frames == 0) return result;

    // Nominal imaged-frame interval: median of positive time steps. Used only
    // to initialize the velocity uncertainty of new tracks.
    std::vector<double> dts;
    for (int f = 1; f < n_frames; ++f) {
        const double dt = frame_times[f] - frame_times[f - 1];
        if (dt > 0.0) dts.push_back(dt);
    }
    double dt_nominal = 1e-3;
    if (!dts.empty()) {
        auto mid = dts.begin() + dts.size() / 2;
        std::nth_element(dts.begin(), mid, dts.end());
        dt_nominal = *mid;
    }
    const double v0 = params.gate_radius_mm / dt_nominal;
    const double sigma_a = params.accel_g * kG;
    const double r = params.measurement_noise_mm;

    std::vector<ActiveTrack> active;
    std::vector<Track> done;
    int next_id = 0;

    const auto finish = [&](ActiveTrack& at) {
        if (static_cast<int>(at.track.points.size()) >= params.min_track_length) {
            refresh_track_summary(at.track);
            done.push_back(std::move(at.track));
        }
    };

    for (int f = 0; f < n_frames; ++f) {
        const double t = frame_times[f];
        const auto& obs = events[f];
        const int n_tracks = static_cast<int>(active.size());
        const int n_obs = static_cast<int>(obs.size());

        for (auto& at : active) {
            const double dt = t - at.last_t;
            if (dt > 0.0) at.kf.predict(dt, sigma_a);
        }

        std::vector<int> assignment(n_tracks, -1);
        if (n_tracks > 0 && n_obs > 0) {
            std::vector<double> cost(static_cast<std::size_t>(n_tracks) * n_obs,
                                     kForbidden);
            for (int i = 0; i < n_tracks; ++i) {
                const Matrix2d S = active[i].kf.innovation_cov(r);
                const Matrix2d Sinv = S.inverse();
                for (int j = 0; j < n_obs; ++j) {
                    const Vector2d nu = active[i].kf.innovation(obs[j].pos);
                    if (nu.norm() > params.gate_radius_mm) continue;
                    cost[static_cast<std::size_t>(i) * n_obs + j] =
                        nu.dot(Sinv * nu);
                }
            }
            if (n_obs > params.greedy_fallback_events) {
                assignment = solve_assignment_greedy(cost, n_tracks, n_obs, kForbidden);
                result.used_greedy_fallback = true;
            } else {
                assignment = solve_assignment(cost, n_tracks, n_obs, kForbidden);
            }
        }

        std::vector<char> claimed(n_obs, 0);
        std::vector<ActiveTrack> still_active;
        still_active.reserve(active.size() + obs.size());
        for (int i = 0; i < n_tracks; ++i) {
            auto& at = active[i];
            const int j = assignment[i];
            if (j >= 0) {
                claimed[j] = 1;
                at.kf.update(obs[j].pos, r);
                at.track.points.push_back({f, t, obs[j].pos,
                                           {at.kf.x(2), at.kf.x(3)}, j});
                at.misses = 0;
                at.last_t = t;
                still_active.push_back(std::move(at));
            } else {
                ++at.misses;
                at.last_t = t;
                if (at.misses > params.max_gap) {
                    finish(at);
                } else {
                    still_active.push_back(std::move(at));
                }
            }
        }
        for (int j = 0; j < n_obs; ++j) {
            if (claimed[j]) continue;
            ActiveTrack at;
            at.kf.init(obs[j].pos, r, v0);
            at.track.id = next_id++;
            at.track.points.push_back({f, t, obs[j].pos, {0.0, 0.0}, j});
            at.misses = 0;
            at.last_t = t;
            still_active.push_back(std::move(at));
        }
        active = std::move(still_active);
    }
    for (auto& at : active) finish(at);

    std::sort(done.begin(), done.end(),
              [](const Track& a, const Track& b) { return a.id < b.id; });
    result.tracks = std::move(done);
    return result;
}

}  // namespace awsalm::pipeline

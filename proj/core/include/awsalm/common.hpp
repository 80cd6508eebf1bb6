#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace awsalm {

// Imaging-plane point. z = axial depth [mm], positive away from the
// transducer face; x = lateral position [mm], zero at array center.
struct Vec2 {
    double z = 0.0;
    double x = 0.0;

    Vec2() = default;
    Vec2(double z_, double x_) : z(z_), x(x_) {}

    Vec2 operator+(const Vec2& o) const { return {z + o.z, x + o.x}; }
    Vec2 operator-(const Vec2& o) const { return {z - o.z, x - o.x}; }
    Vec2 operator*(double s) const { return {z * s, x * s}; }
    Vec2& operator+=(const Vec2& o) { z += o.z; x += o.x; return *this; }

    double norm2() const { return z * z + x * x; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.z * b.z + a.x * b.x; }

// Distance from p to the segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 <= 0.0) return (p - a).norm();
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

constexpr double kSpeedOfSoundMmPerS = 1.540e6;   // 1540 m/s
constexpr double kPi = 3.14159265358979323846;

// Wavelength [mm] at center frequency f [MHz], c = 1540 m/s.
inline double wavelength_mm(double freq_mhz) {
    return kSpeedOfSoundMmPerS / (freq_mhz * 1e6);
}

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace awsalm

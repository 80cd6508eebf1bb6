#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "awsalm/common.hpp"

namespace awsalm {

// Pixel grid of the imaging plane. Pixel (0,0) is centered at `origin`;
// index 0 runs along the axial (depth) axis.
struct GridSpec {
    int n_ax = 0;
    int n_lat = 0;
    double pitch_um = 50.0;   // square pixels, both axes
    Vec2 origin;              // mm position of pixel (0,0) center

    double pitch_mm() const { return pitch_um * 1e-3; }
    double z_at(int iz) const { return origin.z + iz * pitch_mm(); }
    double x_at(int ix) const { return origin.x + ix * pitch_mm(); }
    // Fractional pixel coordinates of a point (may fall outside the grid).
    double iz_of(double z_mm) const { return (z_mm - origin.z) / pitch_mm(); }
    double ix_of(double x_mm) const { return (x_mm - origin.x) / pitch_mm(); }
    bool contains(const Vec2& p) const {
        const double iz = iz_of(p.z), ix = ix_of(p.x);
        return iz >= 0 && iz <= n_ax - 1 && ix >= 0 && ix <= n_lat - 1;
    }
    std::size_t pixels() const {
        return static_cast<std::size_t>(n_ax) * static_cast<std::size_t>(n_lat);
    }
};

// Image sequence in linear intensity (non-negative). Storage order: axial
// index fastest, then lateral, then frame, so each frame is a contiguous
// column-major slice.
struct FrameStack {
    GridSpec grid;
    int n_frames = 0;
    std::vector<double> frame_times;  // seconds, one per frame, strictly increasing
    std::vector<float> data;

    FrameStack() = default;
    FrameStack(const GridSpec& g, int frames);

    float& at(int iz, int ix, int f) { return data[index(iz, ix, f)]; }
    float at(int iz, int ix, int f) const { return data[index(iz, ix, f)]; }

    std::size_t index(int iz, int ix, int f) const {
        return (static_cast<std::size_t>(f) * grid.n_lat + ix) * grid.n_ax + iz;
    }

    std::span<float> frame(int f) {
        return {data.data() + static_cast<std::size_t>(f) * grid.pixels(), grid.pixels()};
    }
    std::span<const float> frame(int f) const {
        return {data.data() + static_cast<std::size_t>(f) * grid.pixels(), grid.pixels()};
    }

    double frame_rate_hz() const;
};

// --- on-disk format ----------------------------------------------------------
//
// <name>.stk : 64-byte text header, then little-endian float32 samples in
//              (axial, lateral, frame) order. Header fields, space separated:
//                  AWSTK1 <ax>x<lat>x<frames> p=<pitch_um> o=<z0_mm>,<x0_mm> r=<rate_hz>
//              padded with spaces to 64 bytes (last byte '\n').
// <name>.stk.meta : plain-text sidecar, "key = value" lines. Carries exact
//              frame times, the sequence description needed by the processing
//              stage (imaging block boundaries), and provenance keys.

void save_stack(const FrameStack& stack, const std::string& path,
                const std::map<std::string, std::string>& sidecar_extra = {});

FrameStack load_stack(const std::string& path);

// Sidecar key/value pairs for a stack path ("<path>.meta"). Returns an empty
// map when no sidecar exists.
std::map<std::string, std::string> load_sidecar(const std::string& path);

// Incremental writer: frames are appended as they are rendered so full stacks
// never need to sit in memory on the simulation side.
class FrameStackWriter {
public:
    FrameStackWriter(const std::string& path, const GridSpec& grid);
    ~FrameStackWriter();

    FrameStackWriter(const FrameStackWriter&) = delete;
    FrameStackWriter& operator=(const FrameStackWriter&) = delete;

    void append(std::span<const float> frame, double time_s);
    // Writes the final header and the sidecar. Must be called exactly once.
    void finalize(const std::map<std::string, std::string>& sidecar_extra = {});

    int frames_written() const { return n_frames_; }

private:
    std::string path_;
    GridSpec grid_;
    std::FILE* file_ = nullptr;
    int n_frames_ = 0;
    bool finalized_ = false;
    std::vector<double> frame_times_;
};

std::string format_stack_header(const GridSpec& grid, int n_frames, double rate_hz);

}  // namespace awsalm

#include "awsalm/frame_stack.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace awsalm {

namespace {

constexpr std::size_t kHeaderBytes = 64;

static_assert(std::endian::native == std::endian::little,
              "stack files are little-endian; byte swapping not implemented");

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

FrameStack::FrameStack(const GridSpec& g, int frames)
    : grid(g), n_frames(frames), frame_times(frames, 0.0),
      data(g.pixels() * static_cast<std::size_t>(frames), 0.0f) {}

double FrameStack::frame_rate_hz() const {
    if (frame_times.size() < 2) return 0.0;
    const double span = frame_times.back() - frame_times.front();
    return span > 0.0 ? (frame_times.size() - 1) / span : 0.0;
}

std::string format_stack_header(const GridSpec& grid, int n_frames, double rate_hz) {
    char buf[2 * kHeaderBytes];
    std::snprintf(buf, sizeof(buf), "AWSTK1 %dx%dx%d p=%.6g o=%.6g,%.6g r=%.6g",
                  grid.n_ax, grid.n_lat, n_frames, grid.pitch_um,
                  grid.origin.z, grid.origin.x, rate_hz);
    std::string header(buf);
    require(header.size() < kHeaderBytes, "stack header overflows 64 bytes");
    header.resize(kHeaderBytes, ' ');
    header[kHeaderBytes - 1] = '\n';
    return header;
}

namespace {

void parse_header(const std::string& header, GridSpec& grid, int& n_frames) {
    std::istringstream in(header);
    std::string magic, dims, p, o, r;
    in >> magic >> dims >> p >> o >> r;
    require(magic == "AWSTK1", "not a frame-stack file (bad magic)");
    int ax = 0, lat = 0, fr = 0;
    double pitch = 0, oz = 0, ox = 0;
    require(std::sscanf(dims.c_str(), "%dx%dx%d", &ax, &lat, &fr) == 3,
            "malformed stack dims");
    require(std::sscanf(p.c_str(), "p=%lf", &pitch) == 1, "malformed stack pitch");
    require(std::sscanf(o.c_str(), "o=%lf,%lf", &oz, &ox) == 2, "malformed stack origin");
    require(ax > 0 && lat > 0 && fr >= 0 && pitch > 0, "bad stack header values");
    grid.n_ax = ax;
    grid.n_lat = lat;
    grid.pitch_um = pitch;
    grid.origin = {oz, ox};
    n_frames = fr;
}

void write_sidecar(const std::string& stack_path, const GridSpec& grid,
                   const std::vector<double>& times,
                   const std::map<std::string, std::string>& extra) {
    std::ofstream out(stack_path + ".meta");
    require(out.good(), "cannot write sidecar for " + stack_path);
    out << "format = awsalm-stack-v1\n";
    out << "n_ax = " << grid.n_ax << "\n";
    out << "n_lat = " << grid.n_lat << "\n";
    out << "n_frames = " << times.size() << "\n";
    out << "pixel_pitch_um = " << grid.pitch_um << "\n";
    out << "origin_z_mm = " << grid.origin.z << "\n";
    out << "origin_x_mm = " << grid.origin.x << "\n";
    for (const auto& [k, v] : extra) out << k << " = " << v << "\n";
    out << "frame_times_s =";
    char buf[32];
    for (double t : times) {
        std::snprintf(buf, sizeof(buf), " %.9g", t);
        out << buf;
    }
    out << "\n";
}

}  // namespace

void save_stack(const FrameStack& stack, const std::string& path,
                const std::map<std::string, std::string>& sidecar_extra) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open " + path + " for writing");
    const std::string header =
        format_stack_header(stack.grid, stack.n_frames, stack.frame_rate_hz());
    out.write(header.data(), header.size());
    out.write(reinterpret_cast<const char*>(stack.data.data()),
              static_cast<std::streamsize>(stack.data.size() * sizeof(float)));
    require(out.good(), "write failed for " + path);
    out.close();
    write_sidecar(path, stack.grid, stack.frame_times, sidecar_extra);
}

FrameStack load_stack(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    std::string header(kHeaderBytes, '\0');
    in.read(header.data(), kHeaderBytes);
    require(in.gcount() == static_cast<std::streamsize>(kHeaderBytes),
            "truncated stack header in " + path);

    GridSpec grid;
    int n_frames = 0;
    parse_header(header, grid, n_frames);

    FrameStack stack(grid, n_frames);
    in.read(reinterpret_cast<char*>(stack.data.data()),
            static_cast<std::streamsize>(stack.data.size() * sizeof(float)));
    require(in.gcount() ==
                static_cast<std::streamsize>(stack.data.size() * sizeof(float)),
            "truncated stack data in " + path);

    // Default to a unit rate; the sidecar supplies exact times when present.
    for (int f = 0; f < n_frames; ++f) stack.frame_times[f] = f;
    const auto meta = load_sidecar(path);
    if (auto it = meta.find("frame_times_s"); it != meta.end()) {
        std::istringstream ts(it->second);
        double t;
        int f = 0;
        while (f < n_frames && ts >> t) stack.frame_times[f++] = t;
        require(f == n_frames, "sidecar frame_times_s count mismatch in " + path);
    }
    return stack;
}

std::map<std::string, std::string> load_sidecar(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path + ".meta");
    if (!in.good()) return kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

FrameStackWriter::FrameStackWriter(const std::string& path, const GridSpec& grid)
    : path_(path), grid_(grid) {
    file_ = std::fopen(path.c_str(), "wb");
    require(file_ != nullptr, "cannot open " + path + " for writing");
    // Placeholder header; finalize() rewrites it with the true frame count.
    const std::string header = format_stack_header(grid, 0, 0.0);
    std::fwrite(header.data(), 1, header.size(), file_);
}

FrameStackWriter::~FrameStackWriter() {
    if (file_ != nullptr) std::fclose(file_);
}

void FrameStackWriter::append(std::span<const float> frame, double time_s) {
    require(!finalized_, "append after finalize");
    require(frame.size() == grid_.pixels(), "frame size mismatch");
    const std::size_t n = std::fwrite(frame.data(), sizeof(float), frame.size(), file_);
    require(n == frame.size(), "write failed for " + path_);
    frame_times_.push_back(time_s);
    ++n_frames_;
}

void FrameStackWriter::finalize(const std::map<std::string, std::string>& extra) {
    require(!finalized_, "finalize called twice");
    finalized_ = true;
    double rate = 0.0;
    if (frame_times_.size() > 1) {
        const double span = frame_times_.back() - frame_times_.front();
        if (span > 0) rate = (frame_times_.size() - 1) / span;
    }
    const std::string header = format_stack_header(grid_, n_frames_, rate);
    std::fseek(file_, 0, SEEK_SET);
    std::fwrite(header.data(), 1, header.size(), file_);
    std::fclose(file_);
    file_ = nullptr;
    write_sidecar(path_, grid_, frame_times_, extra);
}

}  // namespace awsalm

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "awsalm/io.hpp"
#include "awsalm/rng.hpp"

namespace awsalm::io {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_localizations_csv(
    const std::string& path,
    const std::vector<std::vector<pipeline::LocalizationEvent>>& events,
    const std::vector<pipeline::Track>& tracks) {
    // (frame, event index) -> track id
    std::map<std::pair<int, int>, int> track_of;
    for (const auto& t : tracks)
        for (const auto& p : t.points)
            if (p.event_index >= 0) track_of[{p.frame, p.event_index}] = t.id;

    auto out = open_out(path);
    out << "frame,t_s,axial_mm,lateral_mm,score,amplitude,track_id\n";
    for (std::size_t f = 0; f < events.size(); ++f) {
        for (std::size_t j = 0; j < events[f].size(); ++j) {
            const auto& e = events[f][j];
            out << e.frame << ',' << num(e.t_s) << ',' << num(e.pos.z) << ','
                << num(e.pos.x) << ',' << num(e.correlation_score) << ','
                << num(e.amplitude) << ',';
            const auto it = track_of.find({static_cast<int>(f), static_cast<int>(j)});
            if (it != track_of.end()) out << it->second;
            out << '\n';
        }
    }
}

void write_tracks_csv(const std::string& path,
                      const std::vector<pipeline::Track>& tracks) {
    auto out = open_out(path);
    out << "track_id,frame,t_s,axial_mm,lateral_mm,v_axial_mm_s,v_lateral_mm_s\n";
    for (const auto& t : tracks) {
        for (const auto& p : t.points) {
            out << t.id << ',' << p.frame << ',' << num(p.t_s) << ',' << num(p.pos.z)
                << ',' << num(p.pos.x) << ',' << num(p.vel.z) << ',' << num(p.vel.x)
                << '\n';
        }
    }
}

std::vector<pipeline::Track> read_tracks_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "empty track table " + path);

    std::map<int, pipeline::Track> by_id;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        require(fields.size() >= 7,
                path + ":" + std::to_string(line_no) + ": short track row");
        pipeline::TrackPoint p;
        const int id = std::stoi(fields[0]);
        p.frame = std::stoi(fields[1]);
        p.t_s = std::stod(fields[2]);
        p.pos = {std::stod(fields[3]), std::stod(fields[4])};
        p.vel = {std::stod(fields[5]), std::stod(fields[6])};
        auto& t = by_id[id];
        t.id = id;
        t.points.push_back(p);
    }
    std::vector<pipeline::Track> tracks;
    tracks.reserve(by_id.size());
    for (auto& [id, t] : by_id) {
        pipeline::refresh_track_summary(t);
        tracks.push_back(std::move(t));
    }
    return tracks;
}

void write_ground_truth_events_csv(const std::string& path,
                                   const std::vector<sim::GroundTruthEvent>& events) {
    auto out = open_out(path);
    out << "t_s,frame,droplet_id,segment,axial_mm,lateral_mm,type\n";
    for (const auto& e : events) {
        out << num(e.time_s) << ',' << e.frame << ',' << e.droplet_id << ','
            << e.segment << ',' << num(e.pos.z) << ',' << num(e.pos.x) << ','
            << static_cast<char>(e.type) << '\n';
    }
}

void write_ground_truth_active_csv(const std::string& path,
                                   const std::vector<sim::ActiveBubbleRecord>& records) {
    auto out = open_out(path);
    out << "frame,droplet_id,segment,axial_mm,lateral_mm,amplitude\n";
    for (const auto& r : records) {
        out << r.frame << ',' << r.droplet_id << ',' << r.segment << ','
            << num(r.pos.z) << ',' << num(r.pos.x) << ',' << num(r.amplitude) << '\n';
    }
}

void write_profile_csv(const std::string& path, const maps::ProfileMeasurement& prof) {
    auto out = open_out(path);
    out << "distance_um,intensity\n";
    for (std::size_t i = 0; i < prof.distance_mm.size(); ++i)
        out << num(prof.distance_mm[i] * 1e3) << ',' << num(prof.value[i]) << '\n';
}

void write_curve_csv(const std::string& path, std::span<const double> times,
                     std::span<const double> values, const std::string& value_name) {
    require(times.size() == values.size(), "curve time/value size mismatch");
    auto out = open_out(path);
    out << "t_s," << value_name << "\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out << num(times[i]) << ',' << num(values[i]) << '\n';
}

void write_matrix_csv(const std::string& path, std::span<const float> map,
                      const GridSpec& grid) {
    require(map.size() == grid.pixels(), "matrix size mismatch");
    auto out = open_out(path);
    for (int iz = 0; iz < grid.n_ax; ++iz) {
        for (int ix = 0; ix < grid.n_lat; ++ix) {
            if (ix) out << ',';
            out << num(map[static_cast<std::size_t>(ix) * grid.n_ax + iz]);
        }
        out << '\n';
    }
}

std::uint64_t file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path + " for digest");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a_hash(buf, static_cast<std::size_t>(in.gcount()), h);
        if (in.eof()) break;
    }
    return h;
}

}  // namespace awsalm::io

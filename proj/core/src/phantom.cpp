#include "awsalm/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace awsalm::phantom {

Vec2 VesselSegment::direction() const {
    const Vec2 d = end - start;
    const double len = d.norm();
    require(len > 0.0, "degenerate vessel segment (coincident endpoints)");
    return d * (1.0 / len);
}

double VesselSegment::mean_velocity_mm_s() const {
    return flow_rate_to_mean_velocity(volumetric_flow_ul_min, inner_diameter_um);
}

double flow_rate_to_mean_velocity(double q_ul_min, double d_um) {
    require(d_um > 0.0, "vessel diameter must be positive");
    require(q_ul_min >= 0.0, "volumetric flow must be non-negative");
    const double q_mm3_s = q_ul_min / 60.0;            // 1 ul == 1 mm^3
    const double d_mm = d_um * 1e-3;
    const double area_mm2 = kPi * d_mm * d_mm / 4.0;
    return q_mm3_s / area_mm2;
}

std::vector<int> Phantom::inlets() const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(segments.size()); ++i)
        if (segments[i].parent < 0) ids.push_back(i);
    return ids;
}

std::vector<int> Phantom::children(int segment) const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(segments.size()); ++i)
        if (segments[i].parent == segment) ids.push_back(i);
    return ids;
}

std::vector<int> Phantom::subtree(int root) const {
    std::vector<int> out;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        out.push_back(s);
        for (int c : children(s)) queue.push_back(c);
    }
    return out;
}

double Phantom::total_length_mm() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.length_mm();
    return sum;
}

bool Phantom::inside_lumen(const Vec2& p, int segment, double slack_mm) const {
    const auto& s = segments[segment];
    return point_segment_distance(p, s.start, s.end) <= s.radius_mm() + slack_mm;
}

std::optional<int> Phantom::segment_containing(const Vec2& p, double slack_mm) const {
    std::optional<int> best;
    double best_dist = 0.0;
    for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
        const auto& s = segments[i];
        const double d = point_segment_distance(p, s.start, s.end);
        if (d <= s.radius_mm() + slack_mm && (!best || d < best_dist)) {
            best = i;
            best_dist = d;
        }
    }
    return best;
}

void Phantom::validate() const {
    require(!segments.empty(), "phantom has no segments");
    for (const auto& s : segments) {
        require(s.inner_diameter_um > 0.0, "segment diameter must be positive");
        require(s.volumetric_flow_ul_min >= 0.0, "segment flow must be non-negative");
        require(s.length_mm() > 0.0, "segment endpoints must be distinct");
    }
    // Reachability from the inlets.
    std::vector<bool> reached(segments.size(), false);
    std::deque<int> queue;
    for (int i : inlets()) {
        reached[i] = true;
        queue.push_back(i);
    }
    require(!queue.empty(), "phantom has no inlet segments");
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        for (int c : children(s)) {
            if (!reached[c]) {
                reached[c] = true;
                queue.push_back(c);
            }
        }
    }
    for (std::size_t i = 0; i < segments.size(); ++i)
        require(reached[i], "segment " + std::to_string(i) + " unreachable from inlets");
    // Flow conservation at every junction.
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto kids = children(static_cast<int>(i));
        if (kids.empty()) continue;
        double sum = 0.0;
        for (int c : kids) sum += segments[c].volumetric_flow_ul_min;
        require(std::abs(sum - segments[i].volumetric_flow_ul_min) <=
                    1e-9 * std::max(1.0, segments[i].volumetric_flow_ul_min),
                "junction at segment " + std::to_string(i) + " does not conserve flow");
    }
}

Phantom build_crossed_tube_phantom(double diameter_um, double crossing_depth_mm,
                                   double crossing_angle_deg, double flow_ul_min,
                                   double half_span_mm) {
    require(diameter_um > 0.0, "tube diameter must be positive");
    require(crossing_depth_mm > 0.0, "crossing depth must be positive");
    const double angle_rad = crossing_angle_deg * kPi / 180.0;
    require(std::abs(std::sin(angle_rad)) > 1e-6,
            "degenerate crossing angle (tubes would be parallel)");

    Phantom ph;
    ph.name = "crossed_tubes";
    const Vec2 center{crossing_depth_mm, 0.0};
    for (int k = 0; k < 2; ++k) {
        const double tilt = (k == 0 ? +0.5 : -0.5) * angle_rad;  // from lateral axis
        const Vec2 axis{std::sin(tilt), std::cos(tilt)};
        const Vec2 a = center - axis * half_span_mm;
        const Vec2 b = center + axis * half_span_mm;
        VesselSegment seg;
        // Inlet at the deeper end.
        seg.start = (a.z >= b.z) ? a : b;
        seg.end = (a.z >= b.z) ? b : a;
        seg.inner_diameter_um = diameter_um;
        seg.volumetric_flow_ul_min = flow_ul_min;
        seg.parent = -1;
        ph.segments.push_back(seg);
    }
    ph.validate();
    return ph;
}

Phantom build_branching_tree_phantom(int levels, double root_diameter_um,
                                     double split_ratio, const TreeLayout& layout) {
    require(levels >= 1, "tree needs at least one level");
    require(levels <= 10, "tree levels capped at 10 (population blowup guard)");
    require(root_diameter_um > 0.0, "root diameter must be positive");
    require(split_ratio > 0.0 && split_ratio <= 1.0, "split ratio must be in (0, 1]");

    Phantom ph;
    ph.name = "branching_tree";

    struct Pending {
        int parent;
        int generation;
        Vec2 start;
        double heading_rad;  // from the +z (depth) axis
        double length_mm;
        double diameter_um;
        double flow_ul_min;
    };
    std::deque<Pending> queue;
    queue.push_back({-1, 0, layout.root_start, 0.0, layout.root_length_mm,
                     root_diameter_um, layout.root_flow_ul_min});
    const double spread_rad = layout.spread_deg * kPi / 180.0;

    while (!queue.empty()) {
        const Pending p = queue.front();
        queue.pop_front();
        VesselSegment seg;
        seg.start = p.start;
        seg.end = p.start + Vec2{std::cos(p.heading_rad), std::sin(p.heading_rad)} *
                                p.length_mm;
        seg.inner_diameter_um = p.diameter_um;
        seg.volumetric_flow_ul_min = p.flow_ul_min;
        seg.parent = p.parent;
        seg.generation = p.generation;
        ph.segments.push_back(seg);
        const int id = static_cast<int>(ph.segments.size()) - 1;

        if (p.generation + 1 < levels) {
            for (int side : {-1, +1}) {
                queue.push_back({id, p.generation + 1, seg.end,
                                 p.heading_rad + side * spread_rad,
                                 p.length_mm * layout.length_ratio,
                                 p.diameter_um * split_ratio, p.flow_ul_min / 2.0});
            }
        }
    }
    ph.validate();
    return ph;
}

Phantom build_single_tube_phantom(double diameter_um, Vec2 start, Vec2 end,
                                  double flow_ul_min) {
    Phantom ph;
    ph.name = "single_tube";
    VesselSegment seg;
    seg.start = start;
    seg.end = end;
    seg.inner_diameter_um = diameter_um;
    seg.volumetric_flow_ul_min = flow_ul_min;
    ph.segments.push_back(seg);
    ph.validate();
    return ph;
}

Vec2 droplet_position(const Phantom& ph, const Droplet& d) {
    const auto& seg = ph.segments[d.segment];
    const Vec2 axis = seg.direction();
    const Vec2 normal{-axis.x, axis.z};
    return seg.start + axis * d.arc_mm + normal * (d.radial_frac * seg.radius_mm());
}

FlowField FlowField::from_phantom(const Phantom& ph) {
    FlowField f;
    f.mean_velocity_mm_s.reserve(ph.segments.size());
    for (const auto& s : ph.segments) f.mean_velocity_mm_s.push_back(s.mean_velocity_mm_s());
    return f;
}

double FlowField::modulation(double t_s) const {
    const auto& p = pulsatility;
    if (p.amplitude == 0.0) return 1.0;
    return 1.0 + p.amplitude *
                     std::sin(2.0 * kPi * t_s / p.period_s + p.phase_rad);
}

double FlowField::velocity(int segment, double radial_frac, double t_s) const {
    double v = mean_velocity_mm_s[segment] * modulation(t_s);
    if (profile == FlowProfile::parabolic)
        v *= 2.0 * (1.0 - radial_frac * radial_frac);
    return v;
}

std::size_t DropletPopulation::count(DropletState s) const {
    return static_cast<std::size_t>(
        std::count_if(droplets.begin(), droplets.end(),
                      [s](const Droplet& d) { return d.state == s; }));
}

namespace {

constexpr double kRadialSpan = 0.995;  // keep droplets strictly inside the lumen

Droplet make_droplet(std::uint64_t id, int segment, double arc_mm, Rng& rng) {
    Droplet d;
    d.id = id;
    d.segment = segment;
    d.arc_mm = arc_mm;
    d.radial_frac = rng.uniform(-kRadialSpan, kRadialSpan);
    d.amplitude = std::exp(rng.normal(0.0, 0.15));
    return d;
}

}  // namespace

DropletPopulation seed_droplets(const Phantom& ph, double concentration_per_mm,
                                std::uint64_t rng_seed) {
    require(concentration_per_mm > 0.0, "droplet concentration must be positive");
    ph.validate();
    DropletPopulation pop;
    pop.concentration_per_mm = concentration_per_mm;
    Rng rng = Rng::stream(rng_seed, /*tag=*/0x5eedu);
    for (int si = 0; si < static_cast<int>(ph.segments.size()); ++si) {
        const double len = ph.segments[si].length_mm();
        const std::uint64_t n = rng.poisson(concentration_per_mm * len);
        for (std::uint64_t k = 0; k < n; ++k) {
            pop.droplets.push_back(
                make_droplet(pop.next_id++, si, rng.uniform(0.0, len), rng));
        }
    }
    return pop;
}

void advect_step(DropletPopulation& pop, const Phantom& ph, const FlowField& flow,
                 double dt_s, double t_s, Rng& rng) {
    require(dt_s > 0.0, "advection step must be positive");

    std::vector<Droplet> survivors;
    survivors.reserve(pop.droplets.size());

    for (Droplet d : pop.droplets) {
        if (d.state == DropletState::destroyed) continue;
        double remaining_t = dt_s;
        bool alive = true;
        while (remaining_t > 0.0) {
            const double v = flow.velocity(d.segment, d.radial_frac, t_s);
            if (v <= 0.0) break;
            const double len = ph.segments[d.segment].length_mm();
            const double to_end = len - d.arc_mm;
            const double step = v * remaining_t;
            if (step < to_end) {
                d.arc_mm += step;
                break;
            }
            remaining_t -= to_end / v;
            const auto kids = ph.children(d.segment);
            if (kids.empty()) {
                alive = false;  // left through an outlet
                break;
            }
            // Flow-weighted routing into a child branch.
            double total = 0.0;
            for (int c : kids) total += ph.segments[c].volumetric_flow_ul_min;
            double pick = rng.uniform() * total;
            int chosen = kids.back();
            for (int c : kids) {
                pick -= ph.segments[c].volumetric_flow_ul_min;
                if (pick <= 0.0) {
                    chosen = c;
                    break;
                }
            }
            d.segment = chosen;
            d.arc_mm = 0.0;
        }
        if (alive) survivors.push_back(d);
    }

    // Inlet replenishment at concentration * inflow velocity.
    for (int inlet : ph.inlets()) {
        const double v = flow.velocity(inlet, 0.0, t_s);
        if (v <= 0.0) continue;
        const double inflow_mm = v * dt_s;
        const std::uint64_t n = rng.poisson(pop.concentration_per_mm * inflow_mm);
        for (std::uint64_t k = 0; k < n; ++k) {
            survivors.push_back(make_droplet(pop.next_id++, inlet,
                                             rng.uniform(0.0, inflow_mm), rng));
        }
    }

    pop.droplets = std::move(survivors);
}

}  // namespace awsalm::phantom

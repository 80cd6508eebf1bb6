#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "awsalm/common.hpp"
#include "awsalm/rng.hpp"

namespace awsalm::phantom {

// Straight vessel segment, modeled in-plane as a capsule of the given inner
// diameter. Flow runs from `start` (upstream) to `end` (downstream).
struct VesselSegment {
    Vec2 start;                      // mm
    Vec2 end;                        // mm
    double inner_diameter_um = 200.0;
    double volumetric_flow_ul_min = 30.0;
    int parent = -1;                 // -1: fed directly by an inlet
    int generation = 0;              // 0 at the root/inlet level

    double length_mm() const { return (end - start).norm(); }
    Vec2 direction() const;
    double radius_mm() const { return inner_diameter_um * 0.5e-3; }
    // mm/s mean velocity implied by flow and diameter
    double mean_velocity_mm_s() const;
};

struct Phantom {
    std::string name;
    std::vector<VesselSegment> segments;

    std::vector<int> inlets() const;
    std::vector<int> children(int segment) const;
    bool is_leaf(int segment) const { return children(segment).empty(); }
    // Segment ids of `root` and everything downstream of it.
    std::vector<int> subtree(int root) const;

    double total_length_mm() const;
    bool inside_lumen(const Vec2& p, int segment, double slack_mm = 0.0) const;
    // Nearest segment whose (slack-dilated) lumen contains p, or nullopt.
    std::optional<int> segment_containing(const Vec2& p, double slack_mm = 0.0) const;

    // Throws DomainError on inconsistent graphs: a segment unreachable from
    // an inlet, or junction flows that do not sum to the parent flow.
    void validate() const;
};

// Mean velocity [mm/s] of plug flow with volume rate q [ul/min] through a
// circular lumen of diameter d [um].
double flow_rate_to_mean_velocity(double q_ul_min, double d_um);

// Two straight tubes crossing at (crossing_depth, 0), opened by
// crossing_angle between their axes. Flow enters at the deep ends.
Phantom build_crossed_tube_phantom(double diameter_um, double crossing_depth_mm,
                                   double crossing_angle_deg,
                                   double flow_ul_min = 30.0,
                                   double half_span_mm = 16.0);

struct TreeLayout {
    Vec2 root_start{6.0, 0.0};       // mm; tree grows toward larger depth
    double root_length_mm = 5.0;
    double length_ratio = 0.8;       // child length / parent length
    double spread_deg = 35.0;        // half-angle between child and parent axis
    double root_flow_ul_min = 40.0;
};

// Symmetric binary tree: `levels` generations, child diameter = parent *
// split_ratio, child flow = parent / 2 (conserved at every junction).
Phantom build_branching_tree_phantom(int levels, double root_diameter_um,
                                     double split_ratio,
                                     const TreeLayout& layout = {});

// Single straight tube, for calibration-style scenes.
Phantom build_single_tube_phantom(double diameter_um, Vec2 start, Vec2 end,
                                  double flow_ul_min = 30.0);

enum class DropletState : std::uint8_t { dormant, active, destroyed };

// A droplet rides its segment axis: `arc_mm` is the distance traveled from
// the segment start, `radial_frac` the fixed cross-lumen offset in units of
// the local radius. Positions derived this way stay inside the lumen by
// construction; the capsule test is the independent check.
struct Droplet {
    std::uint64_t id = 0;
    int segment = 0;
    double arc_mm = 0.0;
    double radial_frac = 0.0;        // (-1, 1)
    DropletState state = DropletState::dormant;
    std::int64_t activation_frame = -1;
    double amplitude = 1.0;          // per-droplet echo strength jitter
};

Vec2 droplet_position(const Phantom& ph, const Droplet& d);

enum class FlowProfile { plug, parabolic };

struct Pulsatility {
    double amplitude = 0.0;          // fraction of the mean, in [0, 1]
    double period_s = 1.0;
    double phase_rad = 0.0;
};

struct FlowField {
    std::vector<double> mean_velocity_mm_s;  // per segment
    Pulsatility pulsatility;
    FlowProfile profile = FlowProfile::plug;

    static FlowField from_phantom(const Phantom& ph);

    // Raised-sinusoid modulation factor at time t.
    double modulation(double t_s) const;
    // Velocity of a droplet at (segment, radial_frac) at time t.
    double velocity(int segment, double radial_frac, double t_s) const;
};

struct DropletPopulation {
    std::vector<Droplet> droplets;
    double concentration_per_mm = 50.0;
    std::uint64_t next_id = 0;

    std::size_t count(DropletState s) const;
};

// Uniformly fills every lumen with dormant droplets; the per-segment count is
// Poisson with mean concentration * length. Deterministic for a fixed seed.
DropletPopulation seed_droplets(const Phantom& ph, double concentration_per_mm,
                                std::uint64_t rng_seed);

// Advances every droplet by v*dt along its segment axis, routes droplets
// across junctions (flow-weighted), removes droplets leaving an outlet,
// drops destroyed droplets, and injects fresh dormant droplets at the inlets
// at rate concentration * inflow velocity.
void advect_step(DropletPopulation& pop, const Phantom& ph, const FlowField& flow,
                 double dt_s, double t_s, Rng& rng);

}  // namespace awsalm::phantom

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "awsalm/frame_stack.hpp"
#include "awsalm/maps.hpp"
#include "awsalm/pipeline.hpp"
#include "awsalm/simulation.hpp"

namespace awsalm::io {

// Localization table: one row per event,
// frame,t_s,axial_mm,lateral_mm,score,amplitude,track_id (blank if untracked).
void write_localizations_csv(const std::string& path,
                             const std::vector<std::vector<pipeline::LocalizationEvent>>& events,
                             const std::vector<pipeline::Track>& tracks);

// Track table: track_id,frame,t_s,axial_mm,lateral_mm,v_axial_mm_s,v_lateral_mm_s.
void write_tracks_csv(const std::string& path,
                      const std::vector<pipeline::Track>& tracks);
std::vector<pipeline::Track> read_tracks_csv(const std::string& path);

void write_ground_truth_events_csv(const std::string& path,
                                   const std::vector<sim::GroundTruthEvent>& events);
void write_ground_truth_active_csv(const std::string& path,
                                   const std::vector<sim::ActiveBubbleRecord>& records);

void write_profile_csv(const std::string& path, const maps::ProfileMeasurement& prof);
void write_curve_csv(const std::string& path, std::span<const double> times,
                     std::span<const double> values,
                     const std::string& value_name = "intensity");
void write_matrix_csv(const std::string& path, std::span<const float> map,
                      const GridSpec& grid);

// 16-bit binary PGM, linearly scaled to the data maximum.
void write_pgm(const std::string& path, std::span<const float> map, const GridSpec& grid);
// Direction map as 8-bit PPM: hue = heading, brightness = density.
void write_direction_ppm(const std::string& path, const maps::SRMaps& maps);

std::uint64_t file_digest(const std::string& path);

}  // namespace awsalm::io

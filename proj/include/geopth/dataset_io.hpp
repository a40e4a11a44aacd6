#pragma once

#include <string>

#include "geopth/geometry.hpp"

namespace geopth {

/// Loads a trajectory CSV: traj_id,category,seq,x,y[,...]. An optional header
/// row is detected by a non-numeric seq column. Rows may appear in any order;
/// points are reordered by seq within each trajectory and trajectories keep
/// their order of first appearance. Throws InputError with the offending line
/// number on parse failures, duplicate (traj_id, seq) pairs, non-finite
/// coordinates or inconsistent column counts.
Dataset load_dataset(const std::string& path);

/// Writes the same CSV shape, seq = point position. Coordinates round-trip
/// exactly (shortest representation that restores the double).
void save_dataset(const Dataset& ds, const std::string& path);

}  // namespace geopth

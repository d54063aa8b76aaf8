#ifndef ROADLOC_IO_HPP
#define ROADLOC_IO_HPP

#include <filesystem>
#include <vector>

#include "roadloc/bev.hpp"

namespace roadloc {

/// CSV scan format: one `x,y,z` row per point, metres, no header.
std::vector<Point3> read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::vector<Point3>& points, const std::filesystem::path& path);

/// Binary scan format: consecutive little-endian float64 triplets
/// (x, y, z), 24 bytes per point, no header.
std::vector<Point3> read_points_binary(const std::filesystem::path& path);
void write_points_binary(const std::vector<Point3>& points, const std::filesystem::path& path);

}  // namespace roadloc

#endif  // ROADLOC_IO_HPP

#ifndef ROADLOC_WORLD_HPP
#define ROADLOC_WORLD_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "roadloc/geometry.hpp"

namespace roadloc {

/// Vehicle-like box blocking line of sight while its interval is active.
struct OcclusionEvent {
    Vec2 centre;          // world frame
    double length = 4.5;  // extent along the box yaw axis
    double width = 1.8;   // extent across
    double yaw = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;

    bool active_at(double t) const { return t >= t_start && t <= t_end; }
};

/// Axis-aligned world extent.
struct Bounds {
    double min_x = 0.0, min_y = 0.0;
    double max_x = 0.0, max_y = 0.0;

    bool contains(const Vec2& p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

struct WorldModel {
    std::vector<Vec2> centreline;                // drivable reference path
    std::vector<std::vector<Vec2>> boundaries;   // [0] left edge, [1] right edge
    std::vector<OcclusionEvent> occluders;
    Bounds bounds;
    double road_width_m = 7.0;
    std::uint64_t seed = 0;

    /// Checks the structural invariants, throws std::invalid_argument.
    void validate() const;
};

/// Occluders are drawn per window: a Poisson count at `density_per_km`
/// boxes, each active over [t_start, t_end]. Separate windows give the map
/// and live passes different traffic.
struct OccluderWindow {
    double density_per_km = 0.0;
    double t_start = 0.0;
    double t_end = 1e12;
};

struct WorldGenParams {
    double road_length_m = 240.0;
    double curvature_min = -0.02;  // 1/m, applied per arc segment
    double curvature_max = 0.02;
    double road_width_m = 7.0;     // boundary-to-boundary
    std::vector<OccluderWindow> occluder_windows;
    double occluder_length_m = 4.5;
    double occluder_width_m = 1.8;
    std::uint64_t seed = 1;
};

/// Deterministic synthetic world: an arc-spline centreline with the two
/// road edges offset at +-road_width/2, plus scheduled traffic occluders.
WorldModel generate_world(const WorldGenParams& params);

struct TrajectorySample {
    double timestamp = 0.0;
    Pose2 pose;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }

    /// Pose at an arbitrary timestamp inside the sampled span.
    Pose2 interpolate_at(double timestamp) const;
    double start_time() const;
    double end_time() const;

    /// Throws std::invalid_argument on non-increasing timestamps or steps
    /// exceeding the speed bound.
    void validate(double max_speed_mps = 20.0) const;
};

struct TrajectoryParams {
    double rate_hz = 10.0;
    double speed_mps = 6.0;
    double lateral_noise_sigma_m = 0.0;
    double noise_correlation_time_s = 2.0;  // AR(1) time constant
    double start_time_s = 0.0;
    double max_speed_mps = 20.0;
    std::uint64_t seed = 1;
};

/// Drives the centreline at constant speed with a smooth Gaussian lateral
/// offset; heading follows the centreline tangent.
Trajectory sample_trajectory(const WorldModel& world, const TrajectoryParams& params);

/// True boundary samples around one pose, vehicle frame, ROI-clipped.
struct RenderedBoundaries {
    std::vector<Vec2> visible;
    std::vector<Vec2> occluded;
};

/// Samples the boundary polylines at <= 0.025 m spacing, transforms them
/// into the vehicle frame and classifies each sample as occluded iff the
/// ray from the sensor origin is blocked by an occluder active at
/// `timestamp`.
RenderedBoundaries render_true_boundaries(const WorldModel& world, const Pose2& pose,
                                          double timestamp,
                                          const Vec2& sensor_origin = {0.0, 0.0});

/// True iff segment a-b touches the oriented occluder box.
bool segment_intersects_box(const Vec2& a, const Vec2& b, const OcclusionEvent& box);

/// Minimum distance from p to a polyline (used by tests and diagnostics).
double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& polyline);

/// World JSON document, format_version 1.
void save_world(const WorldModel& world, const std::filesystem::path& path);
WorldModel load_world(const std::filesystem::path& path);

/// Trajectory CSV: header `timestamp,x,y,yaw`, one sample per row.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

}  // namespace roadloc

#endif  // ROADLOC_WORLD_HPP

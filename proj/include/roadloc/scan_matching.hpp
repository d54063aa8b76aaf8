#ifndef ROADLOC_SCAN_MATCHING_HPP
#define ROADLOC_SCAN_MATCHING_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "roadloc/cloud.hpp"
#include "roadloc/geometry.hpp"

namespace roadloc {

struct IcpConfig {
    int max_iterations = 50;
    double translation_tolerance = 1e-4;        // metres, per increment
    double rotation_tolerance = 1e-5;           // radians, per increment
    double max_correspondence_distance = 2.0;   // metres
    double trim_fraction = 0.0;                 // 0 = plain ICP; 0.2 drops the worst 20%
    double occluded_weight = 1.0;               // weight of occluded live points

    void validate() const;
};

struct IcpResult {
    Transform2 transform;  // map_from_live
    int iterations = 0;
    double mean_residual = 0.0;  // mean correspondence distance over final inliers
    std::size_t inlier_count = 0;
    bool converged = false;
    std::vector<double> residual_history;  // mean distance at the start of each iteration
};

struct Correspondence {
    std::size_t query_index = 0;
    std::size_t target_index = 0;
    double distance = 0.0;
};

/// Nearest target point per query point, kept only within max_dist.
/// Backed by a kd-tree whose results match a brute-force scan exactly
/// (ties broken by the lowest target index). Throws on an empty target.
std::vector<Correspondence> nearest_neighbors(const BoundaryCloud& query,
                                              const BoundaryCloud& target,
                                              double max_dist);

/// Closed-form least-squares SE(2) fit: T minimising sum ||T*s_i - t_i||^2.
/// Throws std::invalid_argument for fewer than 2 pairs or an all-coincident
/// source.
Transform2 estimate_rigid_2d(const std::vector<std::pair<Vec2, Vec2>>& pairs);
Transform2 estimate_rigid_2d(const std::vector<std::pair<Vec2, Vec2>>& pairs,
                             const std::vector<double>& weights);

/// Point-to-point SE(2) ICP of a live cloud onto a map cloud, with optional
/// per-iteration worst-correspondence trimming. Throws NoOverlapError when
/// no correspondences survive.
IcpResult icp_align(const BoundaryCloud& live, const BoundaryCloud& map_cloud,
                    const Transform2& init, const IcpConfig& config);

}  // namespace roadloc

#endif  // ROADLOC_SCAN_MATCHING_HPP

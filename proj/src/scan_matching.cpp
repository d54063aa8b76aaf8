#include "roadloc/scan_matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roadloc/errors.hpp"
#include "roadloc/kdtree.hpp"

namespace roadloc {

void IcpConfig::validate() const {
    if (max_iterations < 1) {
        throw std::invalid_argument("icp: max_iterations must be >= 1");
    }
    if (!(translation_tolerance > 0.0) || !(rotation_tolerance > 0.0) ||
        !(max_correspondence_distance > 0.0)) {
        throw std::invalid_argument("icp: tolerances must be positive");
    }
    if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
        throw std::invalid_argument("icp: trim_fraction must be in [0, 1)");
    }
    if (occluded_weight < 0.0) {
        throw std::invalid_argument("icp: occluded_weight must be >= 0");
    }
}

std::vector<Correspondence> nearest_neighbors(const BoundaryCloud& query,
                                              const BoundaryCloud& target,
                                              double max_dist) {
    if (target.empty()) {
        throw std::domain_error("nearest_neighbors: empty target cloud");
    }
    const KdTree2 tree(target.points);
    std::vector<Correspondence> corrs;
    corrs.reserve(query.size());
    for (std::size_t i = 0; i < query.size(); ++i) {
        const auto hit = tree.nearest(query.points[i]);
        if (hit && hit->distance <= max_dist) {
            corrs.push_back({i, hit->index, hit->distance});
        }
    }
    return corrs;
}

Transform2 estimate_rigid_2d(const std::vector<std::pair<Vec2, Vec2>>& pairs) {
    return estimate_rigid_2d(pairs, std::vector<double>(pairs.size(), 1.0));
}

Transform2 estimate_rigid_2d(const std::vector<std::pair<Vec2, Vec2>>& pairs,
                             const std::vector<double>& weights) {
    if (pairs.size() < 2) {
        throw std::invalid_argument("estimate_rigid_2d: need at least 2 pairs");
    }
    if (weights.size() != pairs.size()) {
        throw std::invalid_argument("estimate_rigid_2d: weights/pairs size mismatch");
    }
    double weight_sum = 0.0;
    Vec2 src_centroid{0.0, 0.0};
    Vec2 dst_centroid{0.0, 0.0};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (weights[i] < 0.0) {
            throw std::invalid_argument("estimate_rigid_2d: negative weight");
        }
        weight_sum += weights[i];
        src_centroid = src_centroid + pairs[i].first * weights[i];
        dst_centroid = dst_centroid + pairs[i].second * weights[i];
    }
    if (!(weight_sum > 0.0)) {
        throw std::invalid_argument("estimate_rigid_2d: zero total weight");
    }
    src_centroid = src_centroid * (1.0 / weight_sum);
    dst_centroid = dst_centroid * (1.0 / weight_sum);

    // Cross-covariance terms of the centred pairs; the optimal rotation is
    // atan2 of the skew part over the trace part.
    double trace = 0.0;
    double skew = 0.0;
    double src_scatter = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Vec2 a = pairs[i].first - src_centroid;
        const Vec2 b = pairs[i].second - dst_centroid;
        trace += weights[i] * a.dot(b);
        skew += weights[i] * a.cross(b);
        src_scatter += weights[i] * a.squared_norm();
    }
    if (!(src_scatter > 1e-18)) {
        throw std::invalid_argument("estimate_rigid_2d: source points are coincident");
    }
    const double theta = std::atan2(skew, trace);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {dst_centroid.x - (c * src_centroid.x - s * src_centroid.y),
            dst_centroid.y - (s * src_centroid.x + c * src_centroid.y),
            theta};
}

IcpResult icp_align(const BoundaryCloud& live, const BoundaryCloud& map_cloud,
                    const Transform2& init, const IcpConfig& config) {
    config.validate();
    if (live.empty() || map_cloud.empty()) {
        throw std::domain_error("icp_align: empty cloud");
    }

    const KdTree2 tree(map_cloud.points);

    IcpResult result;
    result.transform = init;

    std::vector<Correspondence> corrs;
    std::vector<std::pair<Vec2, Vec2>> pairs;
    std::vector<double> weights;
    std::vector<Vec2> transformed(live.size());

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        for (std::size_t i = 0; i < live.size(); ++i) {
            transformed[i] = se2_apply(result.transform, live.points[i]);
        }

        corrs.clear();
        for (std::size_t i = 0; i < live.size(); ++i) {
            const auto hit = tree.nearest(transformed[i]);
            if (hit && hit->distance <= config.max_correspondence_distance) {
                corrs.push_back({i, hit->index, hit->distance});
            }
        }
        if (corrs.empty()) {
            throw NoOverlapError("icp_align: no correspondences within gate");
        }

        if (config.trim_fraction > 0.0) {
            const std::size_t drop = static_cast<std::size_t>(
                std::ceil(config.trim_fraction * static_cast<double>(corrs.size())));
            if (corrs.size() <= drop + 1) {
                throw NoOverlapError("icp_align: too few correspondences after trimming");
            }
            std::sort(corrs.begin(), corrs.end(),
                      [](const Correspondence& a, const Correspondence& b) {
                          if (a.distance != b.distance) {
                              return a.distance < b.distance;
                          }
                          return a.query_index < b.query_index;
                      });
            corrs.resize(corrs.size() - drop);
        }

        double dist_sum = 0.0;
        for (const Correspondence& c : corrs) {
            dist_sum += c.distance;
        }
        result.residual_history.push_back(dist_sum / static_cast<double>(corrs.size()));

        pairs.clear();
        weights.clear();
        for (const Correspondence& c : corrs) {
            pairs.emplace_back(transformed[c.query_index], map_cloud.points[c.target_index]);
            weights.push_back(live.labels[c.query_index] == PointLabel::kOccluded
                                  ? config.occluded_weight
                                  : 1.0);
        }
        const Transform2 delta = estimate_rigid_2d(pairs, weights);
        result.transform = se2_compose(delta, result.transform);
        result.iterations = iter;

        if (std::hypot(delta.tx, delta.ty) < config.translation_tolerance &&
            std::abs(delta.dtheta) < config.rotation_tolerance) {
            result.converged = true;
            break;
        }
    }

    double final_sum = 0.0;
    for (const Correspondence& c : corrs) {
        const Vec2 p = se2_apply(result.transform, live.points[c.query_index]);
        final_sum += (p - map_cloud.points[c.target_index]).norm();
    }
    result.inlier_count = corrs.size();
    result.mean_residual = final_sum / static_cast<double>(corrs.size());
    return result;
}

}  // namespace roadloc

#ifndef ROADLOC_CLOUD_HPP
#define ROADLOC_CLOUD_HPP

#include <cstddef>
#include <vector>

#include "roadloc/geometry.hpp"

namespace roadloc {

enum class PointLabel : unsigned char {
    kVisible,
    kOccluded,
};

/// 2D boundary point set in the vehicle frame, one label per point.
/// Points are expected to lie inside the 24x24 m region of interest.
struct BoundaryCloud {
    std::vector<Vec2> points;
    std::vector<PointLabel> labels;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    void push_back(const Vec2& p, PointLabel label) {
        points.push_back(p);
        labels.push_back(label);
    }

    /// Throws std::invalid_argument if labels and points disagree in length
    /// or any point falls outside the region of interest.
    void validate(double roi_half_m = 12.0) const;
};

}  // namespace roadloc

#endif  // ROADLOC_CLOUD_HPP

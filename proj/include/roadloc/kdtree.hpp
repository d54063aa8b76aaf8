#ifndef ROADLOC_KDTREE_HPP
#define ROADLOC_KDTREE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "roadloc/geometry.hpp"

namespace roadloc {

/// Static 2D kd-tree. Nearest-neighbour queries return exactly what a
/// brute-force scan would: the minimum squared distance, ties broken by
/// the lowest point index.
class KdTree2 {
public:
    struct Hit {
        std::size_t index = 0;
        double distance = 0.0;
    };

    explicit KdTree2(const std::vector<Vec2>& points);

    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }

    /// Nearest point to q; nullopt only for an empty tree.
    std::optional<Hit> nearest(const Vec2& q) const;

private:
    struct Node {
        std::size_t point = 0;
        int left = -1;
        int right = -1;
        int axis = 0;
    };

    int build(std::size_t begin, std::size_t end, int depth);
    void search(int node_id, const Vec2& q, double& best_d2, std::size_t& best_idx) const;

    std::vector<Vec2> points_;
    std::vector<std::size_t> order_;  // scratch during build
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace roadloc

#endif  // ROADLOC_KDTREE_HPP

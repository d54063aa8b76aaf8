#include "roadloc/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace roadloc {

KdTree2::KdTree2(const std::vector<Vec2>& points) : points_(points) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(points_.size());
    root_ = build(0, points_.size(), 0);
    order_.clear();
    order_.shrink_to_fit();
}

int KdTree2::build(std::size_t begin, std::size_t end, int depth) {
    if (begin >= end) {
        return -1;
    }
    const int axis = depth % 2;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                         const double va = axis == 0 ? points_[a].x : points_[a].y;
                         const double vb = axis == 0 ? points_[b].x : points_[b].y;
                         return va < vb;
                     });
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back({order_[mid], -1, -1, axis});
    // Children are built after the push; indices stay valid because the
    // vector only grows.
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid + 1, end, depth + 1);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

std::optional<KdTree2::Hit> KdTree2::nearest(const Vec2& q) const {
    if (points_.empty()) {
        return std::nullopt;
    }
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    search(root_, q, best_d2, best_idx);
    return Hit{best_idx, std::sqrt(best_d2)};
}

void KdTree2::search(int node_id, const Vec2& q, double& best_d2,
                     std::size_t& best_idx) const {
    if (node_id < 0) {
        return;
    }
    const Node& node = nodes_[node_id];
    const Vec2& p = points_[node.point];
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2 || (d2 == best_d2 && node.point < best_idx)) {
        best_d2 = d2;
        best_idx = node.point;
    }
    const double delta = node.axis == 0 ? dx : dy;
    const int near_child = delta < 0.0 ? node.left : node.right;
    const int far_child = delta < 0.0 ? node.right : node.left;
    search(near_child, q, best_d2, best_idx);
    // The far half-plane may hold an equally distant point with a lower
    // index, so only prune on a strict distance excess.
    if (delta * delta <= best_d2) {
        search(far_child, q, best_d2, best_idx);
    }
}

}  // namespace roadloc

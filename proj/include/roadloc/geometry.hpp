#ifndef ROADLOC_GEOMETRY_HPP
#define ROADLOC_GEOMETRY_HPP

#include <cmath>

namespace roadloc {

/// 2D point / vector in metres.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double squared_norm() const { return x * x + y * y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double k, const Vec2& v) { return {v.x * k, v.y * k}; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

/// Vehicle pose in some fixed frame: position plus heading.
/// yaw is counter-clockwise positive, wrapped to (-pi, pi].
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;

    Pose2() = default;
    Pose2(double x_, double y_, double yaw_) : x(x_), y(y_), yaw(wrap_angle(yaw_)) {}

    Vec2 position() const { return {x, y}; }
};

/// Rigid SE(2) transform: rotation by dtheta followed by translation (tx, ty).
struct Transform2 {
    double tx = 0.0;
    double ty = 0.0;
    double dtheta = 0.0;

    Transform2() = default;
    Transform2(double tx_, double ty_, double dtheta_)
        : tx(tx_), ty(ty_), dtheta(wrap_angle(dtheta_)) {}

    static Transform2 identity() { return {}; }
};

/// Returns the transform equivalent to applying b first, then a.
Transform2 se2_compose(const Transform2& a, const Transform2& b);

Transform2 se2_invert(const Transform2& t);

/// R(dtheta) * p + (tx, ty).
Vec2 se2_apply(const Transform2& t, const Vec2& p);

/// A pose is the transform taking vehicle-frame coordinates to its parent frame.
Transform2 pose_to_transform(const Pose2& p);
Pose2 transform_to_pose(const Transform2& t);

/// World pose of a child frame given its parent pose and the parent-from-child transform.
Pose2 compose(const Pose2& parent, const Transform2& parent_from_child);

/// Signed lateral offset of `estimated` expressed in the frame of `reference`
/// (positive = left of the reference heading).
double cross_track_error(const Pose2& estimated, const Pose2& reference);

/// wrap(estimated.yaw - reference.yaw).
double yaw_error(const Pose2& estimated, const Pose2& reference);

/// Linear interpolation on position, shortest-arc interpolation on yaw.
/// s must lie in [0, 1]; the endpoints are returned exactly.
Pose2 interpolate_pose(const Pose2& t0, const Pose2& t1, double s);

}  // namespace roadloc

#endif  // ROADLOC_GEOMETRY_HPP

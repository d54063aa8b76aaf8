#include "roadloc/geometry.hpp"

#include <numbers>
#include <stdexcept>

namespace roadloc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_angle(double radians) {
    double a = std::remainder(radians, kTwoPi);  // [-pi, pi]
    if (a <= -kPi) {
        a += kTwoPi;
    }
    return a;
}

Transform2 se2_compose(const Transform2& a, const Transform2& b) {
    const double c = std::cos(a.dtheta);
    const double s = std::sin(a.dtheta);
    return {a.tx + c * b.tx - s * b.ty,
            a.ty + s * b.tx + c * b.ty,
            wrap_angle(a.dtheta + b.dtheta)};
}

Transform2 se2_invert(const Transform2& t) {
    const double c = std::cos(t.dtheta);
    const double s = std::sin(t.dtheta);
    return {-c * t.tx - s * t.ty,
            s * t.tx - c * t.ty,
            wrap_angle(-t.dtheta)};
}

Vec2 se2_apply(const Transform2& t, const Vec2& p) {
    const double c = std::cos(t.dtheta);
    const double s = std::sin(t.dtheta);
    return {c * p.x - s * p.y + t.tx,
            s * p.x + c * p.y + t.ty};
}

Transform2 pose_to_transform(const Pose2& p) { return {p.x, p.y, p.yaw}; }

Pose2 transform_to_pose(const Transform2& t) { return {t.tx, t.ty, t.dtheta}; }

Pose2 compose(const Pose2& parent, const Transform2& parent_from_child) {
    const Transform2 w = se2_compose(pose_to_transform(parent), parent_from_child);
    return transform_to_pose(w);
}

double cross_track_error(const Pose2& estimated, const Pose2& reference) {
    const double dx = estimated.x - reference.x;
    const double dy = estimated.y - reference.y;
    const double c = std::cos(reference.yaw);
    const double s = std::sin(reference.yaw);
    return -s * dx + c * dy;
}

double yaw_error(const Pose2& estimated, const Pose2& reference) {
    return wrap_angle(estimated.yaw - reference.yaw);
}

Pose2 interpolate_pose(const Pose2& t0, const Pose2& t1, double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw std::domain_error("interpolate_pose: fraction outside [0, 1]");
    }
    if (s == 0.0) {
        return t0;
    }
    if (s == 1.0) {
        return t1;
    }
    const double arc = wrap_angle(t1.yaw - t0.yaw);
    return {t0.x + s * (t1.x - t0.x),
            t0.y + s * (t1.y - t0.y),
            wrap_angle(t0.yaw + s * arc)};
}

}  // namespace roadloc

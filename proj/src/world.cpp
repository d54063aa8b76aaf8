#include "roadloc/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roadloc/errors.hpp"

namespace roadloc {

namespace {

constexpr double kBoundarySampleSpacing = 0.025;  // half the grid resolution
constexpr double kCentrelineStep = 0.5;
constexpr double kRoiHalf = 12.0;

std::array<Vec2, 4> box_corners(const OcclusionEvent& box) {
    const double c = std::cos(box.yaw);
    const double s = std::sin(box.yaw);
    const double hl = 0.5 * box.length;
    const double hw = 0.5 * box.width;
    auto corner = [&](double lx, double ly) {
        return Vec2{box.centre.x + c * lx - s * ly, box.centre.y + s * lx + c * ly};
    };
    return {corner(hl, hw), corner(hl, -hw), corner(-hl, -hw), corner(-hl, hw)};
}

/// Arc-length lookup along a polyline.
class ArcSampler {
public:
    explicit ArcSampler(const std::vector<Vec2>& polyline) : points_(polyline) {
        cumulative_.resize(points_.size(), 0.0);
        for (std::size_t i = 1; i < points_.size(); ++i) {
            cumulative_[i] = cumulative_[i - 1] + (points_[i] - points_[i - 1]).norm();
        }
    }

    double total_length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    void sample(double s, Vec2& position, double& heading) const {
        s = std::clamp(s, 0.0, total_length());
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
        std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
        if (i == 0) {
            i = 1;
        }
        if (i >= points_.size()) {
            i = points_.size() - 1;
        }
        const Vec2 a = points_[i - 1];
        const Vec2 b = points_[i];
        const double seg_len = cumulative_[i] - cumulative_[i - 1];
        const double u = seg_len > 0.0 ? (s - cumulative_[i - 1]) / seg_len : 0.0;
        position = a + (b - a) * u;
        heading = std::atan2(b.y - a.y, b.x - a.x);
    }

private:
    std::vector<Vec2> points_;
    std::vector<double> cumulative_;
};

}  // namespace

void WorldModel::validate() const {
    if (!(road_width_m > 0.0)) {
        throw std::invalid_argument("world: road width must be positive");
    }
    auto check_polyline = [](const std::vector<Vec2>& line) {
        if (line.size() < 2) {
            throw std::invalid_argument("world: polyline needs at least 2 vertices");
        }
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i].x == line[i - 1].x && line[i].y == line[i - 1].y) {
                throw std::invalid_argument("world: repeated consecutive polyline vertex");
            }
        }
    };
    check_polyline(centreline);
    for (const auto& boundary : boundaries) {
        check_polyline(boundary);
    }
    for (const OcclusionEvent& box : occluders) {
        if (!(box.length > 0.0 && box.width > 0.0)) {
            throw std::invalid_argument("world: occluder extents must be positive");
        }
        if (!(box.t_start < box.t_end)) {
            throw std::invalid_argument("world: occluder interval must have t_start < t_end");
        }
        for (const Vec2& corner : box_corners(box)) {
            if (!bounds.contains(corner)) {
                throw std::invalid_argument("world: occluder outside world bounds");
            }
        }
    }
}

WorldModel generate_world(const WorldGenParams& params) {
    if (!(params.road_length_m > 0.0) || !(params.road_width_m > 0.0) ||
        !(params.occluder_length_m > 0.0) || !(params.occluder_width_m > 0.0) ||
        params.curvature_min > params.curvature_max) {
        throw std::domain_error("generate_world: degenerate parameters");
    }
    for (const OccluderWindow& w : params.occluder_windows) {
        if (w.density_per_km < 0.0 || !(w.t_start < w.t_end)) {
            throw std::domain_error("generate_world: bad occluder window");
        }
    }

    std::mt19937_64 rng(params.seed);

    WorldModel world;
    world.seed = params.seed;
    world.road_width_m = params.road_width_m;

    // Centreline: constant-curvature arcs of random length, integrated with
    // the exact arc update so zero curvature stays exactly straight.
    std::vector<double> headings;
    Vec2 pos{0.0, 0.0};
    double heading = 0.0;
    world.centreline.push_back(pos);
    headings.push_back(heading);
    std::uniform_real_distribution<double> arc_len_dist(20.0, 40.0);
    std::uniform_real_distribution<double> curvature_dist(params.curvature_min,
                                                          params.curvature_max);
    double travelled = 0.0;
    while (travelled < params.road_length_m) {
        const double arc_len =
            std::min(arc_len_dist(rng), params.road_length_m - travelled);
        const double curvature = curvature_dist(rng);
        double remaining = arc_len;
        while (remaining > 1e-12) {
            const double step = std::min(kCentrelineStep, remaining);
            if (curvature == 0.0) {
                pos = pos + Vec2{std::cos(heading), std::sin(heading)} * step;
            } else {
                const double next = heading + curvature * step;
                pos.x += (std::sin(next) - std::sin(heading)) / curvature;
                pos.y += (std::cos(heading) - std::cos(next)) / curvature;
                heading = next;
            }
            world.centreline.push_back(pos);
            headings.push_back(heading);
            remaining -= step;
        }
        travelled += arc_len;
    }

    // Road edges offset along the local normal.
    const double half_width = 0.5 * params.road_width_m;
    std::vector<Vec2> left, right;
    left.reserve(world.centreline.size());
    right.reserve(world.centreline.size());
    for (std::size_t i = 0; i < world.centreline.size(); ++i) {
        const Vec2 n{-std::sin(headings[i]), std::cos(headings[i])};
        left.push_back(world.centreline[i] + n * half_width);
        right.push_back(world.centreline[i] - n * half_width);
    }
    world.boundaries.push_back(std::move(left));
    world.boundaries.push_back(std::move(right));

    // Traffic boxes parked between the centreline and an edge, oriented
    // along the direction of travel.
    const ArcSampler centre_sampler(world.centreline);
    const double length_km = centre_sampler.total_length() / 1000.0;
    std::uniform_real_distribution<double> along_dist(0.0, centre_sampler.total_length());
    std::uniform_real_distribution<double> lat_frac_dist(0.45, 0.75);
    std::bernoulli_distribution side_dist(0.5);
    for (const OccluderWindow& window : params.occluder_windows) {
        std::poisson_distribution<int> count_dist(window.density_per_km * length_km);
        const int count = window.density_per_km > 0.0 ? count_dist(rng) : 0;
        for (int k = 0; k < count; ++k) {
            const double s = along_dist(rng);
            const double lateral = lat_frac_dist(rng) * half_width;
            const double side = side_dist(rng) ? 1.0 : -1.0;
            Vec2 at;
            double road_heading = 0.0;
            centre_sampler.sample(s, at, road_heading);
            OcclusionEvent box;
            box.centre = at + Vec2{-std::sin(road_heading), std::cos(road_heading)} *
                                  (side * lateral);
            box.length = params.occluder_length_m;
            box.width = params.occluder_width_m;
            box.yaw = wrap_angle(road_heading);
            box.t_start = window.t_start;
            box.t_end = window.t_end;
            world.occluders.push_back(box);
        }
    }

    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    for (const Vec2& p : world.centreline) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double margin = params.road_width_m + 20.0;
    world.bounds = {min_x - margin, min_y - margin, max_x + margin, max_y + margin};

    world.validate();
    return world;
}

Pose2 Trajectory::interpolate_at(double timestamp) const {
    if (samples.empty()) {
        throw std::domain_error("trajectory: empty");
    }
    if (timestamp < samples.front().timestamp || timestamp > samples.back().timestamp) {
        throw std::domain_error("trajectory: timestamp outside sampled span");
    }
    auto it = std::lower_bound(samples.begin(), samples.end(), timestamp,
                               [](const TrajectorySample& s, double t) { return s.timestamp < t; });
    if (it == samples.begin()) {
        return it->pose;
    }
    const TrajectorySample& hi = *it;
    const TrajectorySample& lo = *(it - 1);
    if (hi.timestamp == timestamp) {
        return hi.pose;
    }
    const double s = (timestamp - lo.timestamp) / (hi.timestamp - lo.timestamp);
    return interpolate_pose(lo.pose, hi.pose, s);
}

double Trajectory::start_time() const {
    if (samples.empty()) {
        throw std::domain_error("trajectory: empty");
    }
    return samples.front().timestamp;
}

double Trajectory::end_time() const {
    if (samples.empty()) {
        throw std::domain_error("trajectory: empty");
    }
    return samples.back().timestamp;
}

void Trajectory::validate(double max_speed_mps) const {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double dt = samples[i].timestamp - samples[i - 1].timestamp;
        if (!(dt > 0.0)) {
            throw std::invalid_argument("trajectory: timestamps must strictly increase");
        }
        const double dist =
            (samples[i].pose.position() - samples[i - 1].pose.position()).norm();
        if (dist / dt > max_speed_mps + 1e-9) {
            throw std::invalid_argument("trajectory: step exceeds speed bound");
        }
    }
}

Trajectory sample_trajectory(const WorldModel& world, const TrajectoryParams& params) {
    if (!(params.rate_hz > 0.0)) {
        throw std::domain_error("sample_trajectory: rate must be positive");
    }
    if (!(params.speed_mps > 0.0) || params.lateral_noise_sigma_m < 0.0) {
        throw std::domain_error("sample_trajectory: bad speed or noise");
    }

    const ArcSampler sampler(world.centreline);
    const double dt = 1.0 / params.rate_hz;
    const double rho = params.noise_correlation_time_s > 0.0
                           ? std::exp(-dt / params.noise_correlation_time_s)
                           : 0.0;
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Trajectory traj;
    const double sigma = params.lateral_noise_sigma_m;
    double offset = sigma > 0.0 ? sigma * gauss(rng) : 0.0;
    for (std::size_t k = 0;; ++k) {
        const double s = params.speed_mps * (static_cast<double>(k) * dt);
        if (s > sampler.total_length()) {
            break;
        }
        Vec2 at;
        double heading = 0.0;
        sampler.sample(s, at, heading);
        const Vec2 normal{-std::sin(heading), std::cos(heading)};
        TrajectorySample sample;
        sample.timestamp = params.start_time_s + static_cast<double>(k) * dt;
        sample.pose = Pose2(at.x + normal.x * offset, at.y + normal.y * offset, heading);
        traj.samples.push_back(sample);
        if (sigma > 0.0) {
            offset = rho * offset + sigma * std::sqrt(1.0 - rho * rho) * gauss(rng);
        }
    }
    traj.validate(params.max_speed_mps);
    return traj;
}

bool segment_intersects_box(const Vec2& a, const Vec2& b, const OcclusionEvent& box) {
    // Slab test in the box frame.
    const double c = std::cos(box.yaw);
    const double s = std::sin(box.yaw);
    auto to_box = [&](const Vec2& p) {
        const Vec2 d = p - box.centre;
        return Vec2{c * d.x + s * d.y, -s * d.x + c * d.y};
    };
    const Vec2 p0 = to_box(a);
    const Vec2 p1 = to_box(b);
    const double half[2] = {0.5 * box.length, 0.5 * box.width};
    const double start[2] = {p0.x, p0.y};
    const double delta[2] = {p1.x - p0.x, p1.y - p0.y};

    double t_min = 0.0;
    double t_max = 1.0;
    for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(delta[axis]) < 1e-15) {
            if (std::abs(start[axis]) > half[axis]) {
                return false;
            }
            continue;
        }
        double t1 = (-half[axis] - start[axis]) / delta[axis];
        double t2 = (half[axis] - start[axis]) / delta[axis];
        if (t1 > t2) {
            std::swap(t1, t2);
        }
        t_min = std::max(t_min, t1);
        t_max = std::min(t_max, t2);
        if (t_min > t_max) {
            return false;
        }
    }
    return true;
}

RenderedBoundaries render_true_boundaries(const WorldModel& world, const Pose2& pose,
                                          double timestamp, const Vec2& sensor_origin) {
    if (!world.bounds.contains(pose.position())) {
        throw std::domain_error("render_true_boundaries: pose outside world bounds");
    }

    const Transform2 world_from_vehicle = pose_to_transform(pose);
    const Transform2 vehicle_from_world = se2_invert(world_from_vehicle);
    const Vec2 sensor_world = se2_apply(world_from_vehicle, sensor_origin);

    std::vector<const OcclusionEvent*> active;
    for (const OcclusionEvent& box : world.occluders) {
        if (box.active_at(timestamp)) {
            active.push_back(&box);
        }
    }

    RenderedBoundaries out;
    for (const auto& boundary : world.boundaries) {
        for (std::size_t i = 0; i + 1 < boundary.size(); ++i) {
            const Vec2 a = boundary[i];
            const Vec2 b = boundary[i + 1];
            const double seg_len = (b - a).norm();
            const int n = std::max(1, static_cast<int>(std::ceil(seg_len / kBoundarySampleSpacing)));
            const int last = (i + 2 == boundary.size()) ? n : n - 1;
            for (int j = 0; j <= last; ++j) {
                const Vec2 sample_world = a + (b - a) * (static_cast<double>(j) / n);
                const Vec2 local = se2_apply(vehicle_from_world, sample_world);
                if (!(std::abs(local.x) < kRoiHalf && std::abs(local.y) < kRoiHalf)) {
                    continue;
                }
                bool occluded = false;
                for (const OcclusionEvent* box : active) {
                    if (segment_intersects_box(sensor_world, sample_world, *box)) {
                        occluded = true;
                        break;
                    }
                }
                (occluded ? out.occluded : out.visible).push_back(local);
            }
        }
    }
    return out;
}

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& polyline) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        const Vec2 a = polyline[i];
        const Vec2 b = polyline[i + 1];
        const Vec2 ab = b - a;
        const double len2 = ab.squared_norm();
        double u = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        best = std::min(best, (p - (a + ab * u)).norm());
    }
    return best;
}

namespace {

nlohmann::ordered_json point_to_json(const Vec2& p) {
    return nlohmann::ordered_json::array({p.x, p.y});
}

Vec2 point_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw FormatError("world: point must be a [x, y] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void save_world(const WorldModel& world, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["seed"] = world.seed;
    j["road_width_m"] = world.road_width_m;
    j["bounds"] = {{"min_x", world.bounds.min_x},
                   {"min_y", world.bounds.min_y},
                   {"max_x", world.bounds.max_x},
                   {"max_y", world.bounds.max_y}};
    auto polyline_to_json = [](const std::vector<Vec2>& line) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const Vec2& p : line) {
            arr.push_back(point_to_json(p));
        }
        return arr;
    };
    j["centreline"] = polyline_to_json(world.centreline);
    j["boundaries"] = nlohmann::ordered_json::array();
    for (const auto& boundary : world.boundaries) {
        j["boundaries"].push_back(polyline_to_json(boundary));
    }
    j["occluders"] = nlohmann::ordered_json::array();
    for (const OcclusionEvent& box : world.occluders) {
        j["occluders"].push_back({{"centre", point_to_json(box.centre)},
                                  {"length", box.length},
                                  {"width", box.width},
                                  {"yaw", box.yaw},
                                  {"t_start", box.t_start},
                                  {"t_end", box.t_end}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

WorldModel load_world(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad world file " + path.string() + ": " + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw FormatError("unsupported world format_version in " + path.string());
        }
        WorldModel world;
        world.seed = j.at("seed").get<std::uint64_t>();
        world.road_width_m = j.at("road_width_m").get<double>();
        const auto& b = j.at("bounds");
        world.bounds = {b.at("min_x").get<double>(), b.at("min_y").get<double>(),
                        b.at("max_x").get<double>(), b.at("max_y").get<double>()};
        for (const auto& p : j.at("centreline")) {
            world.centreline.push_back(point_from_json(p));
        }
        for (const auto& line : j.at("boundaries")) {
            std::vector<Vec2> boundary;
            for (const auto& p : line) {
                boundary.push_back(point_from_json(p));
            }
            world.boundaries.push_back(std::move(boundary));
        }
        for (const auto& o : j.at("occluders")) {
            OcclusionEvent box;
            box.centre = point_from_json(o.at("centre"));
            box.length = o.at("length").get<double>();
            box.width = o.at("width").get<double>();
            box.yaw = o.at("yaw").get<double>();
            box.t_start = o.at("t_start").get<double>();
            box.t_end = o.at("t_end").get<double>();
            world.occluders.push_back(box);
        }
        world.validate();
        return world;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad world file " + path.string() + ": " + e.what());
    }
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << "timestamp,x,y,yaw\n";
    char buf[160];
    for (const TrajectorySample& s : traj.samples) {
        std::snprintf(buf, sizeof(buf), "%.9f,%.9f,%.9f,%.9f\n", s.timestamp, s.pose.x,
                      s.pose.y, s.pose.yaw);
        out << buf;
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "timestamp,x,y,yaw") {
        throw FormatError(path.string() + ": missing `timestamp,x,y,yaw` header");
    }
    Trajectory traj;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        double t = 0.0, x = 0.0, y = 0.0, yaw = 0.0;
        char c1 = 0, c2 = 0, c3 = 0;
        std::istringstream row(line);
        if (!(row >> t >> c1 >> x >> c2 >> y >> c3 >> yaw) || c1 != ',' || c2 != ',' ||
            c3 != ',') {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected `timestamp,x,y,yaw` row");
        }
        traj.samples.push_back({t, Pose2(x, y, yaw)});
    }
    traj.validate(std::numeric_limits<double>::infinity());
    return traj;
}

}  // namespace roadloc

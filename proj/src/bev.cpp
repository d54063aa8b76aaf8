#include "roadloc/bev.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roadloc/errors.hpp"

namespace roadloc {

void BoundaryCloud::validate(double roi_half_m) const {
    if (points.size() != labels.size()) {
        throw std::invalid_argument("BoundaryCloud: labels and points differ in length");
    }
    for (const Vec2& p : points) {
        if (!(std::abs(p.x) <= roi_half_m && std::abs(p.y) <= roi_half_m)) {
            throw std::invalid_argument("BoundaryCloud: point outside region of interest");
        }
    }
}

HeightBand::HeightBand(double z_min_, double z_max_) : z_min(z_min_), z_max(z_max_) {
    if (!(z_min < z_max)) {
        throw std::invalid_argument("HeightBand: z_min must be below z_max");
    }
}

Point3 apply_extrinsics(const Extrinsics6& e, const Point3& p) {
    const Eigen::Matrix3d r(Eigen::AngleAxisd(e.yaw, Eigen::Vector3d::UnitZ()) *
                            Eigen::AngleAxisd(e.pitch, Eigen::Vector3d::UnitY()) *
                            Eigen::AngleAxisd(e.roll, Eigen::Vector3d::UnitX()));
    const Eigen::Vector3d q = r * Eigen::Vector3d(p.x, p.y, p.z) + Eigen::Vector3d(e.x, e.y, e.z);
    return {q.x(), q.y(), q.z()};
}

void BevGrid::set_label_at(double x, double y, CellLabel label) {
    if (!(std::abs(x) < kRoiHalf && std::abs(y) < kRoiHalf)) {
        return;
    }
    int row = static_cast<int>(std::floor((kRoiHalf - x) / kResolution));
    int col = static_cast<int>(std::floor((kRoiHalf - y) / kResolution));
    row = std::min(std::max(row, 0), kHeightPx - 1);
    col = std::min(std::max(col, 0), kWidthPx - 1);
    CellLabel& cell = cells_[index(row, col)];
    if (cell == CellLabel::kVisibleBoundary) {
        return;  // measured evidence outranks inference
    }
    cell = label;
}

Vec2 BevGrid::cell_centre(int row, int col) const {
    return {kRoiHalf - (row + 0.5) * kResolution,
            kRoiHalf - (col + 0.5) * kResolution};
}

std::size_t BevGrid::count(CellLabel label) const {
    std::size_t n = 0;
    for (CellLabel c : cells_) {
        if (c == label) {
            ++n;
        }
    }
    return n;
}

std::vector<Point3> trim_by_height(const std::vector<Point3>& points, const HeightBand& band) {
    std::vector<Point3> kept;
    kept.reserve(points.size());
    for (const Point3& p : points) {
        if (p.z >= band.z_min && p.z <= band.z_max) {
            kept.push_back(p);
        }
    }
    return kept;
}

BevGrid project_to_bev(const std::vector<Point3>& points, CellLabel label) {
    BevGrid grid;
    for (const Point3& p : points) {
        grid.set_label_at(p.x, p.y, label);
    }
    return grid;
}

BevGrid fuse_dual_sensor(const std::vector<Point3>& left, const std::vector<Point3>& right,
                         const Extrinsics6& left_ext, const Extrinsics6& right_ext,
                         const HeightBand& band, CellLabel label) {
    std::vector<Point3> merged;
    merged.reserve(left.size() + right.size());
    for (const Point3& p : left) {
        merged.push_back(apply_extrinsics(left_ext, p));
    }
    for (const Point3& p : right) {
        merged.push_back(apply_extrinsics(right_ext, p));
    }
    return project_to_bev(trim_by_height(merged, band), label);
}

BoundaryCloud grid_to_points(const BevGrid& grid, bool include_occluded) {
    BoundaryCloud cloud;
    for (int row = 0; row < BevGrid::kHeightPx; ++row) {
        for (int col = 0; col < BevGrid::kWidthPx; ++col) {
            const CellLabel label = grid.at(row, col);
            if (label == CellLabel::kVisibleBoundary) {
                cloud.push_back(grid.cell_centre(row, col), PointLabel::kVisible);
            } else if (label == CellLabel::kOccludedBoundary && include_occluded) {
                cloud.push_back(grid.cell_centre(row, col), PointLabel::kOccluded);
            }
        }
    }
    return cloud;
}

void write_pgm(const BevGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << "P5\n" << BevGrid::kWidthPx << " " << BevGrid::kHeightPx << "\n255\n";
    out.write(reinterpret_cast<const char*>(grid.cells().data()),
              static_cast<std::streamsize>(grid.cells().size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

BevGrid read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    std::string magic;
    int width = 0, height = 0, maxval = 0;
    in >> magic >> width >> height >> maxval;
    if (magic != "P5" || width != BevGrid::kWidthPx || height != BevGrid::kHeightPx ||
        maxval != 255) {
        throw FormatError("not a 480x480 8-bit P5 grid: " + path.string());
    }
    in.get();  // single whitespace after header
    BevGrid grid;
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw FormatError("truncated PGM payload: " + path.string());
    }
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            const std::uint8_t v = raw[static_cast<std::size_t>(row) * width + col];
            if (v != 0 && v != 128 && v != 255) {
                throw FormatError("unexpected cell value in " + path.string());
            }
            grid.set(row, col, static_cast<CellLabel>(v));
        }
    }
    return grid;
}

void write_grid_meta(const GridMeta& meta, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["resolution"] = meta.resolution;
    j["roi_m"] = meta.roi_m;
    j["width_px"] = meta.width_px;
    j["height_px"] = meta.height_px;
    j["timestamp"] = meta.timestamp;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << j.dump(2) << "\n";
}

GridMeta read_grid_meta(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad grid metadata in " + path.string() + ": " + e.what());
    }
    GridMeta meta;
    meta.resolution = j.at("resolution").get<double>();
    meta.roi_m = j.at("roi_m").get<double>();
    meta.width_px = j.at("width_px").get<int>();
    meta.height_px = j.at("height_px").get<int>();
    meta.timestamp = j.at("timestamp").get<double>();
    return meta;
}

}  // namespace roadloc

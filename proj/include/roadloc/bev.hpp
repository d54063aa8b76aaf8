#ifndef ROADLOC_BEV_HPP
#define ROADLOC_BEV_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roadloc/cloud.hpp"
#include "roadloc/geometry.hpp"

namespace roadloc {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Cell labels double as the PGM byte encoding.
enum class CellLabel : std::uint8_t {
    kEmpty = 0,
    kOccludedBoundary = 128,
    kVisibleBoundary = 255,
};

/// Vertical slab of points kept for projection, vehicle frame (ground ~ 0).
struct HeightBand {
    double z_min = -0.30;
    double z_max = 0.30;

    HeightBand() = default;
    HeightBand(double z_min_, double z_max_);
};

/// Sensor-to-vehicle mount offset. The rotation is applied as intrinsic
/// yaw, then pitch, then roll (R = Rz(yaw) * Ry(pitch) * Rx(roll)).
struct Extrinsics6 {
    double x = 0.0, y = 0.0, z = 0.0;
    double roll = 0.0, pitch = 0.0, yaw = 0.0;
};

Point3 apply_extrinsics(const Extrinsics6& e, const Point3& p);

/// Fixed-resolution bird's-eye-view raster, 480 x 480 cells at 5 cm,
/// covering a vehicle-centred 24 x 24 m region of interest.
///
/// Axis convention: +x (forward) is up in the image, +y (left) is the left
/// of the image. Cell row r covers x in (12 - 0.05*(r+1), 12 - 0.05*r],
/// i.e. row = floor((12 - x) / 0.05), col = floor((12 - y) / 0.05).
class BevGrid {
public:
    static constexpr int kWidthPx = 480;
    static constexpr int kHeightPx = 480;
    static constexpr double kResolution = 0.05;  // m per px
    static constexpr double kRoiHalf = 12.0;     // m

    BevGrid() : cells_(static_cast<std::size_t>(kWidthPx) * kHeightPx, CellLabel::kEmpty) {}

    CellLabel at(int row, int col) const { return cells_[index(row, col)]; }
    void set(int row, int col, CellLabel label) { cells_[index(row, col)] = label; }

    /// Labels the cell containing the metric coordinate (x, y). Points with
    /// |x| >= 12 or |y| >= 12 are dropped. A visible label always wins over
    /// an occluded one in the same cell.
    void set_label_at(double x, double y, CellLabel label);

    /// Metric centre of a cell.
    Vec2 cell_centre(int row, int col) const;

    std::size_t count(CellLabel label) const;
    const std::vector<CellLabel>& cells() const { return cells_; }

    bool operator==(const BevGrid& other) const { return cells_ == other.cells_; }

private:
    static std::size_t index(int row, int col) {
        return static_cast<std::size_t>(row) * kWidthPx + static_cast<std::size_t>(col);
    }

    std::vector<CellLabel> cells_;
};

/// Keeps exactly the points with z_min <= z <= z_max, preserving order.
std::vector<Point3> trim_by_height(const std::vector<Point3>& points, const HeightBand& band);

/// Rasterises height-trimmed vehicle-frame points into a BEV grid.
BevGrid project_to_bev(const std::vector<Point3>& points, CellLabel label);

/// Applies each sensor extrinsic, merges the clouds, trims by height and
/// projects the union into one grid.
BevGrid fuse_dual_sensor(const std::vector<Point3>& left, const std::vector<Point3>& right,
                         const Extrinsics6& left_ext, const Extrinsics6& right_ext,
                         const HeightBand& band,
                         CellLabel label = CellLabel::kVisibleBoundary);

/// Emits the metric centre of every visible cell (plus occluded cells when
/// requested) in row-major order.
BoundaryCloud grid_to_points(const BevGrid& grid, bool include_occluded);

/// Sidecar metadata stored next to each PGM grid file.
struct GridMeta {
    double resolution = BevGrid::kResolution;
    double roi_m = 2.0 * BevGrid::kRoiHalf;
    int width_px = BevGrid::kWidthPx;
    int height_px = BevGrid::kHeightPx;
    double timestamp = 0.0;
};

/// 8-bit binary PGM (P5): 0 = empty, 128 = occluded, 255 = visible.
void write_pgm(const BevGrid& grid, const std::filesystem::path& path);
BevGrid read_pgm(const std::filesystem::path& path);

void write_grid_meta(const GridMeta& meta, const std::filesystem::path& path);
GridMeta read_grid_meta(const std::filesystem::path& path);

}  // namespace roadloc

#endif  // ROADLOC_BEV_HPP

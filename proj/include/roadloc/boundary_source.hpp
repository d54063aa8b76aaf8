#ifndef ROADLOC_BOUNDARY_SOURCE_HPP
#define ROADLOC_BOUNDARY_SOURCE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "roadloc/bev.hpp"
#include "roadloc/geometry.hpp"
#include "roadloc/world.hpp"

namespace roadloc {

enum class ObservationMode {
    kVisibleOnly,
    kVisibleAndOccluded,
};

std::string to_string(ObservationMode mode);
ObservationMode observation_mode_from_string(const std::string& s);

enum class Provenance {
    kOracleVisible,
    kOracleFull,
    kFile,
};

/// One boundary detection frame: the BEV mask plus its timestamp.
struct BoundaryObservation {
    double timestamp = 0.0;
    BevGrid grid;
    Provenance provenance = Provenance::kOracleFull;
};

/// Produces boundary observations per frame. Stands in for the upstream
/// detector stack; implementations must be safe for concurrent observe().
class BoundarySource {
public:
    virtual ~BoundarySource() = default;
    virtual BoundaryObservation observe(const Pose2& pose, double timestamp,
                                        ObservationMode mode) const = 0;
};

/// Ideal detector backed by the synthetic world: visible cells are the
/// rasterised line-of-sight boundary samples; in kVisibleAndOccluded mode
/// the blocked true-boundary samples are added as occluded cells.
class OracleSource : public BoundarySource {
public:
    explicit OracleSource(WorldModel world, Vec2 sensor_origin = {0.0, 0.0})
        : world_(std::move(world)), sensor_origin_(sensor_origin) {}

    BoundaryObservation observe(const Pose2& pose, double timestamp,
                                ObservationMode mode) const override;

    const WorldModel& world() const { return world_; }

private:
    WorldModel world_;
    Vec2 sensor_origin_;
};

struct ManifestEntry {
    double timestamp = 0.0;
    std::string grid_file;  // relative to the manifest
    std::string meta_file;
};

/// Replays pre-computed observations from PGM grids listed in a JSON
/// manifest, looked up by timestamp (1e-6 s tolerance).
class FileSource : public BoundarySource {
public:
    explicit FileSource(const std::filesystem::path& manifest_path);

    BoundaryObservation observe(const Pose2& pose, double timestamp,
                                ObservationMode mode) const override;

    std::size_t frame_count() const { return entries_.size(); }
    const std::vector<ManifestEntry>& entries() const { return entries_; }

private:
    std::filesystem::path base_dir_;
    std::vector<ManifestEntry> entries_;
};

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

/// Detector imperfection model: drops each boundary cell with probability
/// `dropout` and displaces survivors by Gaussian jitter before
/// re-rasterising. Randomness is hashed per cell from the seed, so results
/// do not depend on which other cells are present.
BoundaryObservation degrade_detection(const BoundaryObservation& obs, double dropout,
                                      double jitter_sigma, std::uint64_t seed);

/// Sprinkles `count` spurious visible cells uniformly over the ROI
/// (false-detection clutter for robustness experiments).
BoundaryObservation add_clutter(const BoundaryObservation& obs, int count,
                                std::uint64_t seed);

struct DegradationParams {
    double dropout = 0.0;
    double jitter_sigma_m = 0.0;
    int clutter_cells = 0;
    std::uint64_t seed = 0;

    bool is_identity() const {
        return dropout == 0.0 && jitter_sigma_m == 0.0 && clutter_cells == 0;
    }
};

/// Applies degrade_detection and add_clutter to every observation of an
/// inner source, seeded per frame from the observation timestamp.
class DegradedSource : public BoundarySource {
public:
    DegradedSource(const BoundarySource& inner, DegradationParams params)
        : inner_(inner), params_(params) {}

    BoundaryObservation observe(const Pose2& pose, double timestamp,
                                ObservationMode mode) const override;

private:
    const BoundarySource& inner_;
    DegradationParams params_;
};

}  // namespace roadloc

#endif  // ROADLOC_BOUNDARY_SOURCE_HPP

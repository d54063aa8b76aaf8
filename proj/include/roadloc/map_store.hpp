#ifndef ROADLOC_MAP_STORE_HPP
#define ROADLOC_MAP_STORE_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "roadloc/boundary_source.hpp"
#include "roadloc/cloud.hpp"
#include "roadloc/geometry.hpp"
#include "roadloc/kdtree.hpp"
#include "roadloc/world.hpp"

namespace roadloc {

/// One stored map entry: a reference pose, the full boundary observation
/// and the two clouds derived from it.
struct MapKeyframe {
    double timestamp = 0.0;
    Pose2 reference_pose;
    BoundaryObservation observation;
    BoundaryCloud cloud_visible;
    BoundaryCloud cloud_full;
};

/// Write-once keyframe store; read-only after build/load.
class MapStore {
public:
    /// Keyframes at the first trajectory sample and then whenever the
    /// travelled distance since the last keyframe reaches `spacing_m`.
    static MapStore build(const Trajectory& trajectory, const BoundarySource& source,
                          double spacing_m);

    const std::vector<MapKeyframe>& keyframes() const { return keyframes_; }
    std::size_t size() const { return keyframes_.size(); }

    /// Keyframe whose timestamp matches within 1e-6 s; throws LookupError.
    const MapKeyframe& at_timestamp(double timestamp) const;

    /// Directory layout: index.json plus one PGM+meta pair per keyframe.
    void save(const std::filesystem::path& dir) const;
    static MapStore load(const std::filesystem::path& dir);

private:
    std::vector<MapKeyframe> keyframes_;
};

/// Stand-in for the upstream coarse localiser: maps a live timestamp to
/// the timestamp of a map keyframe, never to a pose.
class HintProvider {
public:
    virtual ~HintProvider() = default;
    virtual double lookup(double live_timestamp) const = 0;
};

/// Simulated provider: picks the keyframe nearest (Euclidean) to the true
/// live pose, optionally after shifting the query along the heading to
/// model hint error. Ties resolve to the earlier keyframe timestamp.
class NearestPoseHintProvider : public HintProvider {
public:
    NearestPoseHintProvider(const MapStore& store, const Trajectory& live_truth,
                            double along_track_offset_m = 0.0);

    double lookup(double live_timestamp) const override;

private:
    const MapStore& store_;
    Trajectory live_truth_;
    double along_track_offset_m_;
    std::unique_ptr<KdTree2> keyframe_index_;
};

/// Injected lookup table (live timestamp -> map timestamp, 1e-6 s key
/// tolerance) for replaying recorded hint streams.
class TableHintProvider : public HintProvider {
public:
    explicit TableHintProvider(std::map<double, double> table) : table_(std::move(table)) {}

    double lookup(double live_timestamp) const override;

private:
    std::map<double, double> table_;
};

}  // namespace roadloc

#endif  // ROADLOC_MAP_STORE_HPP

#include "roadloc/boundary_source.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roadloc/errors.hpp"

namespace roadloc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// k-th variate for a (seed, stream) pair; stateless so the draw for one
/// cell never depends on which other cells exist.
double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
    const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(stream)) + k);
    return static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
}

void hashed_gaussian_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t k,
                          double& z0, double& z1) {
    const double u1 = std::max(hashed_uniform(seed, stream, k), 1e-300);
    const double u2 = hashed_uniform(seed, stream, k + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * std::numbers::pi * u2);
    z1 = r * std::sin(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::string to_string(ObservationMode mode) {
    return mode == ObservationMode::kVisibleOnly ? "visible_only" : "visible_and_occluded";
}

ObservationMode observation_mode_from_string(const std::string& s) {
    if (s == "visible_only") {
        return ObservationMode::kVisibleOnly;
    }
    if (s == "visible_and_occluded") {
        return ObservationMode::kVisibleAndOccluded;
    }
    throw std::invalid_argument("unknown observation mode: " + s);
}

BoundaryObservation OracleSource::observe(const Pose2& pose, double timestamp,
                                          ObservationMode mode) const {
    const RenderedBoundaries rendered =
        render_true_boundaries(world_, pose, timestamp, sensor_origin_);
    BoundaryObservation obs;
    obs.timestamp = timestamp;
    obs.provenance = mode == ObservationMode::kVisibleOnly ? Provenance::kOracleVisible
                                                           : Provenance::kOracleFull;
    for (const Vec2& p : rendered.visible) {
        obs.grid.set_label_at(p.x, p.y, CellLabel::kVisibleBoundary);
    }
    if (mode == ObservationMode::kVisibleAndOccluded) {
        for (const Vec2& p : rendered.occluded) {
            obs.grid.set_label_at(p.x, p.y, CellLabel::kOccludedBoundary);
        }
    }
    return obs;
}

FileSource::FileSource(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open manifest: " + manifest_path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format_version").get<int>() != 1) {
            throw FormatError("unsupported manifest format_version in " +
                              manifest_path.string());
        }
        for (const auto& frame : j.at("frames")) {
            ManifestEntry entry;
            entry.timestamp = frame.at("timestamp").get<double>();
            entry.grid_file = frame.at("grid").get<std::string>();
            if (frame.contains("meta")) {
                entry.meta_file = frame.at("meta").get<std::string>();
            }
            entries_.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad manifest " + manifest_path.string() + ": " + e.what());
    }
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (!(entries_[i].timestamp > entries_[i - 1].timestamp)) {
            throw FormatError("manifest timestamps must strictly increase: " +
                              manifest_path.string());
        }
    }
    base_dir_ = manifest_path.parent_path();
}

BoundaryObservation FileSource::observe(const Pose2& /*pose*/, double timestamp,
                                        ObservationMode mode) const {
    constexpr double kTolerance = 1e-6;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), timestamp,
                               [](const ManifestEntry& e, double t) { return e.timestamp < t; });
    const ManifestEntry* match = nullptr;
    if (it != entries_.end() && std::abs(it->timestamp - timestamp) <= kTolerance) {
        match = &*it;
    } else if (it != entries_.begin() &&
               std::abs((it - 1)->timestamp - timestamp) <= kTolerance) {
        match = &*(it - 1);
    }
    if (match == nullptr) {
        throw LookupError("no manifest frame at timestamp " + std::to_string(timestamp));
    }
    BoundaryObservation obs;
    obs.timestamp = match->timestamp;
    obs.provenance = Provenance::kFile;
    obs.grid = read_pgm(base_dir_ / match->grid_file);
    if (mode == ObservationMode::kVisibleOnly) {
        for (int row = 0; row < BevGrid::kHeightPx; ++row) {
            for (int col = 0; col < BevGrid::kWidthPx; ++col) {
                if (obs.grid.at(row, col) == CellLabel::kOccludedBoundary) {
                    obs.grid.set(row, col, CellLabel::kEmpty);
                }
            }
        }
    }
    return obs;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["frames"] = nlohmann::ordered_json::array();
    for (const ManifestEntry& e : entries) {
        nlohmann::ordered_json frame;
        frame["timestamp"] = e.timestamp;
        frame["grid"] = e.grid_file;
        if (!e.meta_file.empty()) {
            frame["meta"] = e.meta_file;
        }
        j["frames"].push_back(std::move(frame));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << j.dump(2) << "\n";
}

BoundaryObservation degrade_detection(const BoundaryObservation& obs, double dropout,
                                      double jitter_sigma, std::uint64_t seed) {
    if (!(dropout >= 0.0 && dropout < 1.0)) {
        throw std::domain_error("degrade_detection: dropout must be in [0, 1)");
    }
    if (jitter_sigma < 0.0) {
        throw std::domain_error("degrade_detection: jitter_sigma must be >= 0");
    }
    BoundaryObservation out;
    out.timestamp = obs.timestamp;
    out.provenance = obs.provenance;
    for (int row = 0; row < BevGrid::kHeightPx; ++row) {
        for (int col = 0; col < BevGrid::kWidthPx; ++col) {
            const CellLabel label = obs.grid.at(row, col);
            if (label == CellLabel::kEmpty) {
                continue;
            }
            const std::uint64_t stream =
                static_cast<std::uint64_t>(row) * BevGrid::kWidthPx + col;
            if (dropout > 0.0 && hashed_uniform(seed, stream, 0) < dropout) {
                continue;
            }
            if (jitter_sigma > 0.0) {
                double z0 = 0.0, z1 = 0.0;
                hashed_gaussian_pair(seed, stream, 1, z0, z1);
                const Vec2 centre = obs.grid.cell_centre(row, col);
                out.grid.set_label_at(centre.x + jitter_sigma * z0,
                                      centre.y + jitter_sigma * z1, label);
            } else {
                const Vec2 centre = obs.grid.cell_centre(row, col);
                out.grid.set_label_at(centre.x, centre.y, label);
            }
        }
    }
    return out;
}

BoundaryObservation DegradedSource::observe(const Pose2& pose, double timestamp,
                                            ObservationMode mode) const {
    BoundaryObservation obs = inner_.observe(pose, timestamp, mode);
    if (params_.is_identity()) {
        return obs;
    }
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(timestamp));
    std::memcpy(&bits, &timestamp, sizeof(bits));
    const std::uint64_t frame_seed = splitmix64(params_.seed ^ bits);
    obs = degrade_detection(obs, params_.dropout, params_.jitter_sigma_m, frame_seed);
    if (params_.clutter_cells > 0) {
        obs = add_clutter(obs, params_.clutter_cells, frame_seed);
    }
    return obs;
}

BoundaryObservation add_clutter(const BoundaryObservation& obs, int count,
                                std::uint64_t seed) {
    if (count < 0) {
        throw std::domain_error("add_clutter: count must be >= 0");
    }
    BoundaryObservation out = obs;
    // Streams above the cell-index range so clutter draws never collide
    // with degrade_detection draws for the same seed.
    const std::uint64_t base =
        static_cast<std::uint64_t>(BevGrid::kWidthPx) * BevGrid::kHeightPx;
    for (int k = 0; k < count; ++k) {
        const std::uint64_t stream = base + static_cast<std::uint64_t>(k);
        const double x = (hashed_uniform(seed, stream, 0) - 0.5) * 2.0 * BevGrid::kRoiHalf;
        const double y = (hashed_uniform(seed, stream, 1) - 0.5) * 2.0 * BevGrid::kRoiHalf;
        out.grid.set_label_at(x, y, CellLabel::kVisibleBoundary);
    }
    return out;
}

}  // namespace roadloc

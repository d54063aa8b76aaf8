#include "roadloc/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "roadloc/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary scan format assumes a little-endian host");

namespace roadloc {

std::vector<Point3> read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    std::vector<Point3> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        Point3 p;
        char sep1 = 0, sep2 = 0;
        std::istringstream row(line);
        if (!(row >> p.x >> sep1 >> p.y >> sep2 >> p.z) || sep1 != ',' || sep2 != ',') {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected `x,y,z` row");
        }
        points.push_back(p);
    }
    return points;
}

void write_points_csv(const std::vector<Point3>& points, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    char buf[128];
    for (const Point3& p : points) {
        std::snprintf(buf, sizeof(buf), "%.9f,%.9f,%.9f\n", p.x, p.y, p.z);
        out << buf;
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::vector<Point3> read_points_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    const std::streamsize size = in.tellg();
    if (size % static_cast<std::streamsize>(3 * sizeof(double)) != 0) {
        throw FormatError(path.string() + ": size is not a multiple of 24 bytes");
    }
    in.seekg(0);
    std::vector<Point3> points(static_cast<std::size_t>(size) / (3 * sizeof(double)));
    for (Point3& p : points) {
        double xyz[3];
        in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
        p = {xyz[0], xyz[1], xyz[2]};
    }
    if (!in) {
        throw FormatError(path.string() + ": truncated point stream");
    }
    return points;
}

void write_points_binary(const std::vector<Point3>& points, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    for (const Point3& p : points) {
        const double xyz[3] = {p.x, p.y, p.z};
        out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace roadloc

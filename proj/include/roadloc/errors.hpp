#ifndef ROADLOC_ERRORS_HPP
#define ROADLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace roadloc {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// File exists but its contents do not match the documented format.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A keyed lookup (timestamp, keyframe) found no entry.
class LookupError : public std::runtime_error {
public:
    explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

/// ICP produced zero correspondences; the frame cannot be matched.
class NoOverlapError : public std::runtime_error {
public:
    explicit NoOverlapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace roadloc

#endif  // ROADLOC_ERRORS_HPP

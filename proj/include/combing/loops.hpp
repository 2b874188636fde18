#pragma once

#include <string>
#include <vector>

#include "combing/quat_core.hpp"

namespace combing {

/// Closed polyline on S³; the last point connects back to the first and the
/// orientation is the order of the points.
struct OrientedLoop {
    std::vector<S3Point> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    double length() const;
    /// Largest chord between consecutive points, including the closing one.
    double max_gap() const;
    OrientedLoop reversed() const;
    /// Inserts the normalized midpoint of every segment.
    OrientedLoop refined() const;
};

enum class SignClass { Positive, Negative };

inline const char* to_string(SignClass s) { return s == SignClass::Positive ? "positive" : "negative"; }

struct LinkSet {
    std::vector<OrientedLoop> loops;
    SignClass sign_class = SignClass::Positive;

    std::size_t size() const { return loops.size(); }
    bool empty() const { return loops.empty(); }
};

/// Minimum chord distance between the points of two loops.
double min_distance(const OrientedLoop& a, const OrientedLoop& b);

/// Minimum distance between segments of a loop that are at least `min_arc`
/// apart along the loop.
double min_self_distance(const OrientedLoop& loop, double min_arc = 0.05);

/// Symmetric Hausdorff distance between the vertex sets of two loops.
double hausdorff_distance(const OrientedLoop& a, const OrientedLoop& b);

}  // namespace combing

#include "waypath/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "waypath/errors.hpp"

namespace waypath {

double distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool near(const Point3& a, const Point3& b, double tol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol &&
           std::abs(a.z - b.z) <= tol;
}

double LineSegment::length() const { return distance(start, end); }

namespace {

void validate_contour(const Contour& c, const Model& m) {
    const std::string where = "contour " + std::to_string(c.id);
    if (c.segments.empty())
        throw InvalidModelError(where + ": no segments");
    if (c.layer < 0 || static_cast<std::size_t>(c.layer) >= m.layer_heights.size())
        throw InvalidModelError(where + ": layer index " + std::to_string(c.layer) +
                                " out of range");
    const double z = c.segments.front().start.z;
    // Looser than kMmTolerance: layer grouping may chain values a few ulp apart.
    if (std::abs(m.layer_heights[c.layer] - z) > 1e-6)
        throw InvalidModelError(where + ": z does not match its layer height");
    for (std::size_t k = 0; k < c.segments.size(); ++k) {
        const LineSegment& s = c.segments[k];
        if (!std::isfinite(s.start.x) || !std::isfinite(s.start.y) ||
            !std::isfinite(s.start.z) || !std::isfinite(s.end.x) ||
            !std::isfinite(s.end.y) || !std::isfinite(s.end.z))
            throw InvalidModelError(where + ": non-finite coordinate");
        if (s.length() <= kMmTolerance)
            throw InvalidModelError(where + ": zero-length segment " + std::to_string(k));
        if (std::abs(s.start.z - s.end.z) > kMmTolerance ||
            std::abs(s.start.z - z) > kMmTolerance)
            throw InvalidModelError(where + ": segment " + std::to_string(k) +
                                    " not planar at contour z");
        if (k > 0 && !near(c.segments[k - 1].end, s.start))
            throw InvalidModelError(where + ": segment " + std::to_string(k) +
                                    " does not continue the previous one");
    }
    if (c.closed && !near(c.segments.back().end, c.segments.front().start))
        throw InvalidModelError(where + ": marked closed but endpoints differ");
}

}  // namespace

void validate(const Model& m) {
    if (!std::is_sorted(m.layer_heights.begin(), m.layer_heights.end()))
        throw InvalidModelError("layer_heights not sorted");
    for (std::size_t k = 1; k < m.layer_heights.size(); ++k)
        if (m.layer_heights[k] - m.layer_heights[k - 1] <= kMmTolerance)
            throw InvalidModelError("layer_heights not strictly increasing");
    for (std::size_t i = 0; i < m.contours.size(); ++i) {
        if (m.contours[i].id != static_cast<int>(i))
            throw InvalidModelError("contour ids not dense 0-based at index " +
                                    std::to_string(i));
        validate_contour(m.contours[i], m);
    }
}

void assign_layers(Model& m, const std::vector<double>& contour_z) {
    std::vector<double> distinct = contour_z;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end(),
                               [](double a, double b) {
                                   return std::abs(a - b) <= kMmTolerance;
                               }),
                   distinct.end());
    m.layer_heights = distinct;
    for (std::size_t i = 0; i < m.contours.size(); ++i) {
        const auto it = std::lower_bound(distinct.begin(), distinct.end(),
                                         contour_z[i] - kMmTolerance);
        m.contours[i].layer = static_cast<int>(it - distinct.begin());
    }
}

double travel_distance(const Contour& from, const Contour& to) {
    return distance(from.end_point(), to.start_point());
}

double print_length(const Contour& c) {
    double total = 0.0;
    for (const LineSegment& s : c.segments) total += s.length();
    return total;
}

Rect2 xy_footprint(const Contour& c) {
    Rect2 r{c.segments.front().start.x, c.segments.front().start.y,
            c.segments.front().start.x, c.segments.front().start.y};
    auto grow = [&r](const Point3& p) {
        r.min_x = std::min(r.min_x, p.x);
        r.min_y = std::min(r.min_y, p.y);
        r.max_x = std::max(r.max_x, p.x);
        r.max_y = std::max(r.max_y, p.y);
    };
    for (const LineSegment& s : c.segments) {
        grow(s.start);
        grow(s.end);
    }
    return r;
}

double rect_clearance(const Rect2& a, const Rect2& b) {
    const double dx = std::max({a.min_x - b.max_x, b.min_x - a.max_x, 0.0});
    const double dy = std::max({a.min_y - b.max_y, b.min_y - a.max_y, 0.0});
    return std::sqrt(dx * dx + dy * dy);
}

double footprint_clearance(const Contour& a, const Contour& b) {
    return rect_clearance(xy_footprint(a), xy_footprint(b));
}

}  // namespace waypath

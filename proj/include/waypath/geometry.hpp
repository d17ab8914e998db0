#pragma once

#include <string>
#include <vector>

namespace waypath {

// Absolute tolerance for millimeter comparisons throughout the project.
inline constexpr double kMmTolerance = 1e-9;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

double distance(const Point3& a, const Point3& b);
bool near(const Point3& a, const Point3& b, double tol = kMmTolerance);

struct LineSegment {
    Point3 start;
    Point3 end;

    double length() const;
};

// A maximal chain of printable segments extrudable in one continuous motion.
// Consecutive segments share endpoints; all segments sit at one z. For closed
// contours the last segment ends where the first starts.
struct Contour {
    int id = -1;
    std::vector<LineSegment> segments;
    int layer = 0;
    bool closed = false;

    const Point3& start_point() const { return segments.front().start; }
    const Point3& end_point() const { return segments.back().end; }
    double z() const { return segments.front().start.z; }
};

struct Model {
    std::vector<Contour> contours;
    std::vector<double> layer_heights;  // sorted distinct z values, mm
    std::string name;
};

// Throws InvalidModelError naming the first violated invariant: dense 0-based
// contour ids, valid layer indices, chained planar nonzero segments, closure.
void validate(const Model& m);

// Fills m.layer_heights with the distinct values of contour_z (grouped within
// kMmTolerance, sorted) and points each contour's layer index into it.
// contour_z[i] is contour i's z.
void assign_layers(Model& m, const std::vector<double>& contour_z);

// Distance the extruder moves from the end of `from` to the start of `to`.
double travel_distance(const Contour& from, const Contour& to);

// Sum of segment lengths; > 0 for any valid contour.
double print_length(const Contour& c);

// Axis-aligned rectangle in the XY plane.
struct Rect2 {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

// Tight bounding rectangle of the contour's endpoints projected to XY.
Rect2 xy_footprint(const Contour& c);

// Minimum Euclidean distance between two rectangles; 0 when they overlap.
double rect_clearance(const Rect2& a, const Rect2& b);

// rect_clearance over the two contours' XY footprints.
double footprint_clearance(const Contour& a, const Contour& b);

}  // namespace waypath

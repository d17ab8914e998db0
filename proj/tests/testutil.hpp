#pragma once

// Shared helpers for the test suites: contour/model construction shorthands.

#include <vector>

#include "waypath/geometry.hpp"

namespace waypath::test {

inline Contour make_open(int id, const std::vector<Point3>& pts) {
    Contour c;
    c.id = id;
    c.closed = false;
    for (std::size_t k = 1; k < pts.size(); ++k)
        c.segments.push_back({pts[k - 1], pts[k]});
    return c;
}

inline Contour make_closed(int id, const std::vector<Point3>& pts) {
    Contour c = make_open(id, pts);
    c.segments.push_back({pts.back(), pts.front()});
    c.closed = true;
    return c;
}

inline Contour square(int id, double x, double y, double side, double z) {
    return make_closed(id, {{x, y, z},
                            {x + side, y, z},
                            {x + side, y + side, z},
                            {x, y + side, z}});
}

// Builds a model from contours, deriving layer indices from each contour's z.
inline Model make_model(std::vector<Contour> contours, std::string name = "test") {
    Model m;
    m.name = std::move(name);
    std::vector<double> z;
    for (std::size_t i = 0; i < contours.size(); ++i) {
        contours[i].id = static_cast<int>(i);
        z.push_back(contours[i].segments.front().start.z);
    }
    m.contours = std::move(contours);
    assign_layers(m, z);
    return m;
}

}  // namespace waypath::test

#pragma once

#include <string>
#include <string_view>

#include "waypath/baselines.hpp"
#include "waypath/depgraph.hpp"
#include "waypath/geometry.hpp"

namespace waypath {

// One interpreted printer motion. extrusion_delta > 0 exactly when kind is
// extrude; travels never deposit.
struct GcodeMove {
    enum class Kind { travel, extrude };
    Kind kind = Kind::travel;
    Point3 target;
    double extrusion_delta = 0.0;  // filament units
};

// Parses the supported G-code subset into a Model. Recognized: G0/G1 with
// X/Y/Z/E/F words, G90/G91 (absolute/relative), G92 logical-position reset,
// M-codes ignored, `;` and parenthesized comments stripped. Consecutive
// extruding moves at one Z concatenate into one contour; an explicit G0, a
// travel motion, a Z change, or a retraction (E decrease) ends the current
// contour. Throws MalformedLineError on unparseable words, UnsupportedModeError
// on arcs (G2/G3) and other unsupported codes, EmptyModelError when no
// extruding move exists.
Model parse_gcode(std::string_view text, std::string name = "gcode");

// Native JSON model document, schema_version 1:
//   {"schema_version":1,"name":...,"contours":[
//     {"layer_z":z,"closed":bool,"points":[[x,y],...]}, ...]}
// Open contours need >= 2 points, closed >= 3 (the closing segment is
// implied, the first point is not repeated). Throws SchemaError carrying the
// JSON path of the first violation.
Model parse_native(std::string_view text);
std::string emit_native(const Model& m);

struct GcodeEmitParams {
    double travel_feed = 9000.0;   // mm/min for G0 hops
    double print_feed = 1800.0;    // mm/min for extruding moves
    double extrude_per_mm = 0.05;  // filament units per printed mm
};

// Renders a toolpath as absolute-positioning G-code: one G0 to each contour
// start, then one G1 per segment with E accumulating extrude_per_mm times the
// printed length. Byte-exact for fixed inputs. Throws InfeasibleToolpathError
// if the order violates the dependency graph.
std::string emit_gcode(const Toolpath& t, const Model& m, const DependencyGraph& d,
                       const GcodeEmitParams& params);

// SVG 1.1 rendering of one layer: black polylines for printed contours, red
// lines for travel moves whose destination lies in the layer, in execution
// order. Throws LayerOutOfRangeError.
std::string emit_layer_svg(const Toolpath& t, const Model& m, int layer);

}  // namespace waypath

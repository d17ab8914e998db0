#include "waypath/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include <json.hpp>

#include "waypath/errors.hpp"
#include "waypath/util.hpp"

namespace waypath {

namespace {

struct GcodeParser {
    Point3 pos{};
    double e = 0.0;
    bool absolute = true;  // G90 is the initial mode
    int line_no = 0;

    std::vector<LineSegment> open_segments;
    Model model;
    std::vector<double> contour_z;
    bool saw_extrusion = false;

    void finish_contour() {
        if (open_segments.empty()) return;
        Contour c;
        c.id = static_cast<int>(model.contours.size());
        c.closed = near(open_segments.back().end, open_segments.front().start);
        c.segments = std::move(open_segments);
        open_segments.clear();
        contour_z.push_back(c.segments.front().start.z);
        model.contours.push_back(std::move(c));
    }

    void apply_move(const GcodeMove& mv, bool explicit_travel) {
        const bool moved_xy = std::abs(mv.target.x - pos.x) > kMmTolerance ||
                              std::abs(mv.target.y - pos.y) > kMmTolerance;
        const bool moved_z = std::abs(mv.target.z - pos.z) > kMmTolerance;

        if (mv.kind == GcodeMove::Kind::extrude && moved_z)
            throw UnsupportedModeError(line_no, "non-planar extruding move");

        if (mv.kind == GcodeMove::Kind::extrude && moved_xy) {
            saw_extrusion = true;
            open_segments.push_back({pos, mv.target});
        } else if (mv.kind == GcodeMove::Kind::extrude) {
            // Prime in place: deposits but draws nothing, keeps the contour open.
            saw_extrusion = true;
        } else if (explicit_travel || moved_xy || moved_z ||
                   mv.extrusion_delta < -kMmTolerance) {
            finish_contour();
        }
        pos = mv.target;
    }
};

struct Word {
    char letter = 0;
    double value = 0.0;
};

constexpr bool is_number_char(char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == '+' || c == '-';
}

std::vector<Word> tokenize(std::string_view line, int line_no) {
    std::vector<Word> words;
    std::size_t k = 0;
    while (k < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[k]))) {
            ++k;
            continue;
        }
        const char letter = static_cast<char>(
            std::toupper(static_cast<unsigned char>(line[k])));
        if (letter < 'A' || letter > 'Z')
            throw MalformedLineError(line_no, std::string("unexpected character '") +
                                                  line[k] + "'");
        ++k;
        const std::size_t start = k;
        while (k < line.size() && is_number_char(line[k])) ++k;
        if (k == start)
            throw MalformedLineError(line_no, std::string("word '") + letter +
                                                  "' has no value");
        const std::string token(line.substr(start, k - start));
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size() || !std::isfinite(value))
            throw MalformedLineError(line_no, "cannot parse number '" + token + "'");
        words.push_back({letter, value});
    }
    return words;
}

// Strips `;` comments and parenthesized inline comments.
std::string strip_comments(std::string_view line, int line_no) {
    std::string out;
    bool in_paren = false;
    for (char c : line) {
        if (in_paren) {
            if (c == ')') in_paren = false;
            continue;
        }
        if (c == '(') {
            in_paren = true;
            continue;
        }
        if (c == ';') break;
        out.push_back(c);
    }
    if (in_paren) throw MalformedLineError(line_no, "unterminated comment");
    return out;
}

}  // namespace

Model parse_gcode(std::string_view text, std::string name) {
    GcodeParser p;
    p.model.name = std::move(name);

    std::size_t offset = 0;
    while (offset <= text.size()) {
        const std::size_t eol = text.find('\n', offset);
        std::string_view raw = text.substr(
            offset, eol == std::string_view::npos ? text.size() - offset : eol - offset);
        offset = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++p.line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

        const std::string clean = strip_comments(raw, p.line_no);
        const std::vector<Word> words = tokenize(clean, p.line_no);
        if (words.empty()) continue;

        const Word head = words.front();
        if (head.letter == 'M') continue;  // M-codes are ignored wholesale
        if (head.letter != 'G')
            throw MalformedLineError(p.line_no, std::string("unsupported word '") +
                                                    head.letter + "'");
        const double code = head.value;
        if (code != std::floor(code))
            throw MalformedLineError(p.line_no, "non-integral G-code");
        const int g = static_cast<int>(code);

        if (g == 90) {
            p.absolute = true;
            continue;
        }
        if (g == 91) {
            p.absolute = false;
            continue;
        }
        if (g == 92) {
            // Logical position rebase; moves nothing. Rebasing an axis breaks
            // contour continuity, so anything but a pure E reset ends the
            // current contour.
            bool axes_rebased = false;
            for (std::size_t k = 1; k < words.size(); ++k) {
                switch (words[k].letter) {
                    case 'X': p.pos.x = words[k].value; axes_rebased = true; break;
                    case 'Y': p.pos.y = words[k].value; axes_rebased = true; break;
                    case 'Z': p.pos.z = words[k].value; axes_rebased = true; break;
                    case 'E': p.e = words[k].value; break;
                    default:
                        throw MalformedLineError(
                            p.line_no, std::string("unexpected word '") +
                                           words[k].letter + "' after G92");
                }
            }
            if (axes_rebased) p.finish_contour();
            continue;
        }
        if (g == 2 || g == 3) throw UnsupportedModeError(p.line_no, "arc move G2/G3");
        if (g != 0 && g != 1)
            throw UnsupportedModeError(p.line_no, "G" + std::to_string(g));

        Point3 target = p.pos;
        double e_target = p.e;
        for (std::size_t k = 1; k < words.size(); ++k) {
            const double v = words[k].value;
            switch (words[k].letter) {
                case 'X': target.x = p.absolute ? v : p.pos.x + v; break;
                case 'Y': target.y = p.absolute ? v : p.pos.y + v; break;
                case 'Z': target.z = p.absolute ? v : p.pos.z + v; break;
                case 'E': e_target = p.absolute ? v : p.e + v; break;
                case 'F': break;  // feeds do not affect geometry
                default:
                    throw MalformedLineError(p.line_no,
                                             std::string("unexpected word '") +
                                                 words[k].letter + "' in move");
            }
        }
        GcodeMove mv;
        mv.target = target;
        mv.extrusion_delta = e_target - p.e;
        mv.kind = (g == 1 && mv.extrusion_delta > kMmTolerance)
                      ? GcodeMove::Kind::extrude
                      : GcodeMove::Kind::travel;
        if (mv.kind == GcodeMove::Kind::travel) mv.extrusion_delta = std::min(mv.extrusion_delta, 0.0);
        p.apply_move(mv, /*explicit_travel=*/g == 0);
        p.e = e_target;
    }
    p.finish_contour();

    if (!p.saw_extrusion || p.model.contours.empty()) throw EmptyModelError();
    assign_layers(p.model, p.contour_z);
    validate(p.model);
    return p.model;
}

namespace {

using nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& detail) {
    throw SchemaError(path, detail);
}

double require_finite_number(const ordered_json& j, const std::string& path) {
    if (!j.is_number()) schema_fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_fail(path, "expected a finite number");
    return v;
}

}  // namespace

Model parse_native(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        schema_fail("$", e.what());
    }
    if (!doc.is_object()) schema_fail("$", "expected an object");
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
        schema_fail("$.schema_version", "expected an integer");
    if (doc["schema_version"].get<int>() != 1)
        schema_fail("$.schema_version", "unsupported schema_version " +
                                            doc["schema_version"].dump());
    if (!doc.contains("name") || !doc["name"].is_string())
        schema_fail("$.name", "expected a string");
    if (!doc.contains("contours") || !doc["contours"].is_array())
        schema_fail("$.contours", "expected an array");

    Model m;
    m.name = doc["name"].get<std::string>();
    std::vector<double> contour_z;

    const auto& contours = doc["contours"];
    for (std::size_t i = 0; i < contours.size(); ++i) {
        const std::string base = "$.contours[" + std::to_string(i) + "]";
        const auto& jc = contours[i];
        if (!jc.is_object()) schema_fail(base, "expected an object");
        if (!jc.contains("layer_z")) schema_fail(base + ".layer_z", "missing");
        if (!jc.contains("closed") || !jc["closed"].is_boolean())
            schema_fail(base + ".closed", "expected a boolean");
        if (!jc.contains("points") || !jc["points"].is_array())
            schema_fail(base + ".points", "expected an array");

        const double z = require_finite_number(jc["layer_z"], base + ".layer_z");
        const bool closed = jc["closed"].get<bool>();
        const auto& points = jc["points"];
        const std::size_t min_points = closed ? 3 : 2;
        if (points.size() < min_points)
            schema_fail(base + ".points",
                        "need at least " + std::to_string(min_points) + " points");

        std::vector<Point3> pts;
        pts.reserve(points.size());
        for (std::size_t k = 0; k < points.size(); ++k) {
            const std::string ppath = base + ".points[" + std::to_string(k) + "]";
            const auto& jp = points[k];
            if (!jp.is_array() || jp.size() != 2)
                schema_fail(ppath, "expected an [x, y] pair");
            pts.push_back({require_finite_number(jp[0], ppath + "[0]"),
                           require_finite_number(jp[1], ppath + "[1]"), z});
        }

        Contour c;
        c.id = static_cast<int>(i);
        c.closed = closed;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            if (near(pts[k - 1], pts[k]))
                schema_fail(base + ".points[" + std::to_string(k) + "]",
                            "duplicate consecutive point");
            c.segments.push_back({pts[k - 1], pts[k]});
        }
        if (closed) {
            if (near(pts.back(), pts.front()))
                schema_fail(base + ".points", "closed contour repeats its first point");
            c.segments.push_back({pts.back(), pts.front()});
        }
        contour_z.push_back(z);
        m.contours.push_back(std::move(c));
    }

    assign_layers(m, contour_z);
    try {
        validate(m);
    } catch (const InvalidModelError& e) {
        schema_fail("$", e.what());
    }
    return m;
}

std::string emit_native(const Model& m) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["name"] = m.name;
    doc["contours"] = ordered_json::array();
    for (const Contour& c : m.contours) {
        ordered_json jc;
        jc["layer_z"] = m.layer_heights[c.layer];
        jc["closed"] = c.closed;
        ordered_json points = ordered_json::array();
        for (const LineSegment& s : c.segments)
            points.push_back({s.start.x, s.start.y});
        if (!c.closed)
            points.push_back({c.segments.back().end.x, c.segments.back().end.y});
        jc["points"] = std::move(points);
        doc["contours"].push_back(std::move(jc));
    }
    return doc.dump(1) + "\n";
}

std::string emit_gcode(const Toolpath& t, const Model& m, const DependencyGraph& d,
                       const GcodeEmitParams& params) {
    if (!d.is_feasible_order(t.order))
        throw InfeasibleToolpathError("refusing to emit an infeasible toolpath");

    std::ostringstream os;
    os << "; model=" << m.name << " planner=" << t.planner << "\n";
    os << "G90\nG92 E0\n";
    double e = 0.0;
    bool travel_feed_sent = false;
    bool print_feed_sent = false;
    for (int id : t.order) {
        const Contour& c = m.contours[id];
        const Point3& start = c.start_point();
        os << "G0 X" << format_double(start.x) << " Y" << format_double(start.y)
           << " Z" << format_double(start.z);
        if (!travel_feed_sent) {
            os << " F" << format_double(params.travel_feed);
            travel_feed_sent = true;
        }
        os << "\n";
        for (const LineSegment& s : c.segments) {
            e += params.extrude_per_mm * s.length();
            os << "G1 X" << format_double(s.end.x) << " Y" << format_double(s.end.y)
               << " E" << format_double(e);
            if (!print_feed_sent) {
                os << " F" << format_double(params.print_feed);
                print_feed_sent = true;
            }
            os << "\n";
        }
    }
    return os.str();
}

std::string emit_layer_svg(const Toolpath& t, const Model& m, int layer) {
    if (layer < 0 || static_cast<std::size_t>(layer) >= m.layer_heights.size())
        throw LayerOutOfRangeError(layer, static_cast<int>(m.layer_heights.size()));

    // Frame the whole model so every layer's SVG shares one coordinate box.
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    bool first = true;
    for (const Contour& c : m.contours) {
        const Rect2 r = xy_footprint(c);
        if (first) {
            min_x = r.min_x;
            min_y = r.min_y;
            max_x = r.max_x;
            max_y = r.max_y;
            first = false;
        } else {
            min_x = std::min(min_x, r.min_x);
            min_y = std::min(min_y, r.min_y);
            max_x = std::max(max_x, r.max_x);
            max_y = std::max(max_y, r.max_y);
        }
    }
    const double pad = 2.0;
    const double width = (max_x - min_x) + 2 * pad;
    const double height = (max_y - min_y) + 2 * pad;
    auto sx = [&](double x) { return x - min_x + pad; };
    auto sy = [&](double y) { return max_y - y + pad; };  // flip y for viewing

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
       << format_double(width) << " " << format_double(height) << "\">\n";

    for (std::size_t k = 0; k < t.order.size(); ++k) {
        const Contour& c = m.contours[t.order[k]];
        if (c.layer != layer) continue;
        if (k > 0) {
            const Point3& from = m.contours[t.order[k - 1]].end_point();
            const Point3& to = c.start_point();
            os << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"0.15\" points=\""
               << format_double(sx(from.x)) << "," << format_double(sy(from.y)) << " "
               << format_double(sx(to.x)) << "," << format_double(sy(to.y)) << "\"/>\n";
        }
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.3\" points=\"";
        os << format_double(sx(c.segments.front().start.x)) << ","
           << format_double(sy(c.segments.front().start.y));
        for (const LineSegment& s : c.segments)
            os << " " << format_double(sx(s.end.x)) << "," << format_double(sy(s.end.y));
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace waypath

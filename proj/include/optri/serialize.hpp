// JSON and OFF serialization for triangulations and mesh plans.
#pragma once

#include <string>

#include <json.hpp>

#include "optri/errors.hpp"
#include "optri/geometry.hpp"
#include "optri/meshgen.hpp"

namespace optri {

inline nlohmann::json to_json(const Triangulation& tri) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Point2& v : tri.vertices) j["vertices"].push_back({v.x, v.y});
    j["triangles"] = nlohmann::json::array();
    for (const auto& f : tri.triangles) j["triangles"].push_back({f[0], f[1], f[2]});
    j["domain"] = {tri.domain.x0, tri.domain.y0, tri.domain.x1, tri.domain.y1};
    return j;
}

inline Triangulation triangulation_from_json(const nlohmann::json& j) {
    Triangulation out;
    try {
        for (const auto& v : j.at("vertices")) out.vertices.push_back({v.at(0), v.at(1)});
        for (const auto& f : j.at("triangles"))
            out.triangles.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
        const auto& d = j.at("domain");
        out.domain = {d.at(0), d.at(1), d.at(2), d.at(3)};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidTriangulation(std::string("triangulation_from_json: ") + e.what());
    }
    for (const auto& f : out.triangles)
        for (int v : f)
            if (v < 0 || v >= static_cast<int>(out.vertices.size()))
                throw InvalidTriangulation("triangulation_from_json: vertex index out of range");
    return out;
}

// Plain-text OFF export: header, counts, vertex lines (z = 0), face lines.
inline std::string to_off(const Triangulation& tri) {
    std::string out = "OFF\n";
    out += std::to_string(tri.vertices.size()) + " " + std::to_string(tri.triangles.size()) + " 0\n";
    char buf[80];
    for (const Point2& v : tri.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", v.x, v.y);
        out += buf;
    }
    for (const auto& f : tri.triangles) {
        std::snprintf(buf, sizeof buf, "3 %d %d %d\n", f[0], f[1], f[2]);
        out += buf;
    }
    return out;
}

inline nlohmann::json to_json(const MeshPlan& plan) {
    nlohmann::json j;
    j["epsilon"] = plan.epsilon;
    j["n_target"] = plan.n_target;
    j["p"] = plan.p;
    j["m"] = plan.m;
    j["cells"] = nlohmann::json::array();
    for (const CellPlan& c : plan.cells) {
        j["cells"].push_back({{"index", c.index},
                              {"cell", {c.cell.x0, c.cell.y0, c.cell.x1, c.cell.y1}},
                              {"center", {c.center.x, c.center.y}},
                              {"coefficients", {c.frozen.a, c.frozen.b, c.frozen.c}},
                              {"hessian", c.hessian},
                              {"weight_sup", c.weight_sup},
                              {"budget", c.budget}});
    }
    return j;
}

}  // namespace optri

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#include "robinlab/audit.hpp"
#include "robinlab/errors.hpp"
#include "robinlab/fem.hpp"
#include "robinlab/geometry.hpp"

namespace robinlab {

/// Shortest-roundtrip-safe fixed formatting (17 significant digits) so that
/// repeated runs emit byte-identical files.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline ConvexPolygon read_polygon_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw IoError(std::string("invalid JSON in ") + path + ": " + ex.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
        throw IoError("polygon JSON must be an object with a \"vertices\" array");
    std::vector<Vec2> pts;
    for (const auto& row : doc["vertices"]) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
            throw IoError("each vertex must be a [x, y] number pair");
        const double x = row[0].get<double>();
        const double y = row[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y))
            throw IoError("vertex coordinates must be finite");
        pts.push_back({x, y});
    }
    return validate_polygon(std::move(pts));
}

inline void write_polygon_json(const std::string& path, const ConvexPolygon& poly) {
    nlohmann::json doc;
    auto& verts = doc["vertices"];
    verts = nlohmann::json::array();
    for (const auto& v : poly.vertices) verts.push_back({v.x, v.y});
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

inline void write_audit_csv(const std::string& path, const InequalityAuditRecord& rec) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "id,lhs,rhs,margin,budget,status\n";
    for (const auto& e : rec.entries)
        out << e.id << ',' << fmt17(e.lhs) << ',' << fmt17(e.rhs) << ',' << fmt17(e.margin)
            << ',' << fmt17(e.error_budget) << ',' << to_string(e.status) << '\n';
}

inline nlohmann::json spectral_to_json(const RobinSpectralResult& r) {
    nlohmann::json j;
    j["kind"] = to_string(r.kind);
    j["value"] = r.value;
    j["finest_value"] = r.finest_value();
    j["level"] = r.level;
    j["error_estimate"] = r.error_estimate;
    if (std::isfinite(r.observed_order))
        j["observed_order"] = r.observed_order;
    else
        j["observed_order"] = nullptr;
    j["level_values"] = r.level_values;
    j["level_nodes"] = r.level_nodes;
    return j;
}

inline nlohmann::json report_to_json(const FunctionalReport& rep) {
    nlohmann::json j;
    j["beta"] = rep.beta;
    auto& sh = j["shape"];
    sh["area"] = rep.shape.area;
    sh["perimeter"] = rep.shape.perimeter;
    sh["inradius"] = rep.shape.inradius;
    sh["incenter"] = {rep.shape.incenter.x, rep.shape.incenter.y};
    sh["diameter"] = rep.shape.diameter;
    sh["min_width"] = rep.shape.min_width;
    sh["remainder_R"] = rep.shape.remainder_R;
    sh["remainder_A"] = rep.shape.remainder_A;
    sh["dimension_n"] = rep.shape.dimension_n;
    auto& pr = j["profile"];
    pr["event_times"] = rep.profile.event_times;
    pr["I0"] = rep.profile.I0;
    pr["I1"] = rep.profile.I1;
    pr["J"] = rep.profile.J;
    pr["t_bar"] = rep.profile.t_bar;
    pr["s_bar"] = rep.profile.s_bar;
    j["m1"] = rep.m1;
    j["m2"] = rep.m2;
    j["T_robin"] = spectral_to_json(rep.T_robin);
    j["lambda_robin"] = spectral_to_json(rep.lambda_robin);
    j["T_dirichlet"] = spectral_to_json(rep.T_dirichlet);
    j["M_dirichlet"] = spectral_to_json(rep.M_dirichlet);
    j["t0"] = rep.t0;
    j["nu1_at_s0"] = rep.nu1_at_s0;
    j["nu1_at_t0"] = rep.nu1_at_t0;
    j["makai"] = rep.makai;
    j["polya_T"] = rep.polya_T;
    j["polya_L"] = rep.polya_L;
    return j;
}

inline void write_report_json(const std::string& path, const FunctionalReport& rep) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << report_to_json(rep).dump(2) << "\n";
}

/// Nodal field dump (x, y, u) for external plotting.
inline void write_field_csv(const std::string& path, const RobinSpectralResult& r) {
    if (static_cast<size_t>(r.field.size()) != r.field_points.size())
        throw BadParameter("field and field_points are not aligned");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "x,y,u\n";
    for (size_t i = 0; i < r.field_points.size(); ++i)
        out << fmt17(r.field_points[i].x) << ',' << fmt17(r.field_points[i].y) << ','
            << fmt17(r.field[static_cast<Eigen::Index>(i)]) << '\n';
}

} // namespace robinlab

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "robinlab/audit.hpp"
#include "robinlab/errors.hpp"
#include "robinlab/geometry.hpp"
#include "robinlab/io.hpp"

namespace robinlab {

/// A thinning/refining family to audit end to end. Slabs are unbounded and
/// enter only through their rectangle truncations (noted in meta.json).
struct SweepConfig {
    std::string family; // rectangles | slabs | regular_polygons | random
    std::vector<double> betas;
    std::vector<double> widths; // rectangles, slabs
    double height = 1.0;
    std::vector<int> sides; // regular_polygons
    double area = 1.0;
    std::vector<std::uint64_t> seeds; // random
    int vertex_count = 8;
    double aspect = 1.0;
    int levels = 3;
    std::string out;
};

inline SweepConfig sweep_config_from_json(const nlohmann::json& doc) {
    SweepConfig cfg;
    try {
        cfg.family = doc.at("family").get<std::string>();
        cfg.betas = doc.at("betas").get<std::vector<double>>();
        cfg.levels = doc.value("levels", 3);
        cfg.out = doc.at("out").get<std::string>();
        const auto params = doc.value("params", nlohmann::json::object());
        if (cfg.family == "rectangles" || cfg.family == "slabs") {
            cfg.widths = params.at("widths").get<std::vector<double>>();
            cfg.height = params.value("height", 1.0);
        } else if (cfg.family == "regular_polygons") {
            cfg.sides = params.at("sides").get<std::vector<int>>();
            cfg.area = params.value("area", 1.0);
        } else if (cfg.family == "random") {
            cfg.seeds = params.at("seeds").get<std::vector<std::uint64_t>>();
            cfg.vertex_count = params.value("vertex_count", 8);
            cfg.aspect = params.value("aspect", 1.0);
        } else {
            throw BadParameter("unknown family: " + cfg.family);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw BadParameter(std::string("sweep config: ") + ex.what());
    }

    if (cfg.betas.empty()) throw BadParameter("betas must be nonempty");
    for (double b : cfg.betas)
        if (!(b > 0.0)) throw BadParameter("betas must be positive");
    if (cfg.levels < 3) throw BadParameter("levels must be >= 3");
    if (cfg.out.empty()) throw BadParameter("out path must be nonempty");
    if (cfg.family == "rectangles" || cfg.family == "slabs") {
        if (cfg.widths.empty()) throw BadParameter("widths must be nonempty");
        for (size_t i = 0; i + 1 < cfg.widths.size(); ++i)
            if (!(cfg.widths[i] > cfg.widths[i + 1]))
                throw BadParameter("widths must be strictly decreasing");
        for (double w : cfg.widths)
            if (!(w > 0.0 && w <= cfg.height)) throw BadParameter("widths must be in (0, height]");
        if (!(cfg.height > 0.0)) throw BadParameter("height must be positive");
    } else if (cfg.family == "regular_polygons") {
        if (cfg.sides.empty()) throw BadParameter("sides must be nonempty");
        for (int k : cfg.sides)
            if (k < 3) throw BadParameter("sides entries must be >= 3");
        if (!(cfg.area > 0.0)) throw BadParameter("area must be positive");
    } else if (cfg.family == "random") {
        if (cfg.seeds.empty()) throw BadParameter("seeds must be nonempty");
    }
    return cfg;
}

inline SweepConfig parse_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw IoError(std::string("invalid JSON in ") + path + ": " + ex.what());
    }
    return sweep_config_from_json(doc);
}

struct SweepRow {
    std::string param_label;
    double param_value = 0.0;
    double beta = 0.0;
    FunctionalReport report;
    InequalityAuditRecord record;
};

struct SweepReport {
    SweepConfig config;
    std::vector<SweepRow> rows;
};

namespace detail {

inline std::vector<std::pair<std::string, ConvexPolygon>> sweep_members(const SweepConfig& cfg) {
    std::vector<std::pair<std::string, ConvexPolygon>> members;
    if (cfg.family == "rectangles" || cfg.family == "slabs") {
        for (double a : cfg.widths) members.emplace_back(fmt17(a), make_rectangle(a, cfg.height));
    } else if (cfg.family == "regular_polygons") {
        for (int k : cfg.sides)
            members.emplace_back(std::to_string(k), make_regular_polygon(k, cfg.area));
    } else {
        for (std::uint64_t s : cfg.seeds)
            members.emplace_back(std::to_string(s),
                                 random_convex_polygon(s, cfg.vertex_count, cfg.aspect));
    }
    return members;
}

} // namespace detail

/// Full audit of every family member at every beta, Dirichlet solves shared
/// per member. Row order: members in config order, betas in config order.
inline SweepReport run_sweep(const SweepConfig& cfg) {
    SweepReport rep;
    rep.config = cfg;
    for (const auto& [label, poly] : detail::sweep_members(cfg)) {
        DirichletCache cache; // first beta fills it, later betas reuse it
        for (double beta : cfg.betas) {
            SweepRow row;
            row.param_label = label;
            row.param_value = std::stod(label);
            row.beta = beta;
            std::tie(row.report, row.record) = audit(poly, beta, cfg.levels, &cache);
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

inline const char* kSweepCsvHeader =
    "param,beta,area,perimeter,inradius,min_width,diameter,remainder_R,remainder_A,"
    "I0,I1,J,t_bar,s_bar,m1,m2,"
    "T_robin,T_robin_err,T_robin_order,lambda_robin,lambda_robin_err,lambda_robin_order,"
    "T_dirichlet,M_dirichlet,t0,nu1_s0,nu1_t0,"
    "slab,makai,polya_T,polya_L,ratio1,ratio2,"
    "makai_deficit,polya_deficit,eigen_deficit,explicit_deficit,"
    "makai_deficit_over_R,polya_deficit_over_R3,eigen_deficit_over_R,eigen_deficit_over_R4,"
    "polya_deficit_over_A,explicit_deficit_over_A,"
    "C1,C2,C3,K1,K2_p2,K2_p4,gating_fails";

/// Writes sweep.csv (one row per member x beta with trend diagnostics),
/// audit.csv (every audit entry of every row) and meta.json into config.out.
inline void write_sweep_files(const SweepReport& rep) {
    namespace fs = std::filesystem;
    fs::create_directories(rep.config.out);

    std::ofstream csv(fs::path(rep.config.out) / "sweep.csv");
    if (!csv) throw IoError("cannot write sweep.csv under " + rep.config.out);
    csv << kSweepCsvHeader << "\n";
    const double pi = std::acos(-1.0);
    for (const auto& row : rep.rows) {
        const auto& fr = row.report;
        const double r = fr.shape.inradius;
        const double rem_R = fr.shape.remainder_R;
        const double rem_A = fr.shape.remainder_A;
        const double slab = 1.0 / 3.0 + 1.0 / (r * row.beta);
        const double makai_deficit = slab - fr.makai;
        const double polya_deficit = fr.polya_T - slab;
        const double eigen_deficit = (fr.nu1_at_s0 - fr.lambda_robin.value) * fr.shape.area *
                                     fr.shape.area / (fr.shape.perimeter * fr.shape.perimeter);
        const double explicit_deficit =
            (pi * pi / 4.0) / (1.0 + 2.0 / (r * row.beta)) - fr.polya_L;
        const AuditConstants cst = constants(2, row.beta, r);
        int fails = 0;
        for (const auto& e : row.record.entries)
            if (e.gating && e.status == AuditStatus::Fail) ++fails;

        const double cells[] = {row.beta,
                                fr.shape.area,
                                fr.shape.perimeter,
                                r,
                                fr.shape.min_width,
                                fr.shape.diameter,
                                rem_R,
                                rem_A,
                                fr.profile.I0,
                                fr.profile.I1,
                                fr.profile.J,
                                fr.profile.t_bar,
                                fr.profile.s_bar,
                                fr.m1,
                                fr.m2,
                                fr.T_robin.value,
                                fr.T_robin.error_estimate,
                                fr.T_robin.observed_order,
                                fr.lambda_robin.value,
                                fr.lambda_robin.error_estimate,
                                fr.lambda_robin.observed_order,
                                fr.T_dirichlet.value,
                                fr.M_dirichlet.value,
                                fr.t0,
                                fr.nu1_at_s0,
                                fr.nu1_at_t0,
                                slab,
                                fr.makai,
                                fr.polya_T,
                                fr.polya_L,
                                fr.makai / slab,
                                fr.polya_T / slab,
                                makai_deficit,
                                polya_deficit,
                                eigen_deficit,
                                explicit_deficit,
                                makai_deficit / rem_R,
                                polya_deficit / (rem_R * rem_R * rem_R),
                                eigen_deficit / rem_R,
                                eigen_deficit / (rem_R * rem_R * rem_R * rem_R),
                                polya_deficit / rem_A,
                                explicit_deficit / rem_A,
                                cst.C1,
                                cst.C2,
                                cst.C3,
                                cst.K1,
                                cst.K2_p2,
                                cst.K2_p4,
                                static_cast<double>(fails)};
        csv << row.param_label;
        for (double c : cells) csv << ',' << fmt17(c);
        csv << '\n';
    }
    csv.close();

    std::ofstream acsv(fs::path(rep.config.out) / "audit.csv");
    if (!acsv) throw IoError("cannot write audit.csv under " + rep.config.out);
    acsv << "param,beta,id,lhs,rhs,margin,budget,status\n";
    for (const auto& row : rep.rows)
        for (const auto& e : row.record.entries)
            acsv << row.param_label << ',' << fmt17(row.beta) << ',' << e.id << ','
                 << fmt17(e.lhs) << ',' << fmt17(e.rhs) << ',' << fmt17(e.margin) << ','
                 << fmt17(e.error_budget) << ',' << to_string(e.status) << '\n';
    acsv.close();

    nlohmann::json meta;
    meta["family"] = rep.config.family;
    meta["betas"] = rep.config.betas;
    meta["levels"] = rep.config.levels;
    meta["row_count"] = rep.rows.size();
    if (rep.config.family == "rectangles" || rep.config.family == "slabs") {
        meta["widths"] = rep.config.widths;
        meta["height"] = rep.config.height;
    } else if (rep.config.family == "regular_polygons") {
        meta["sides"] = rep.config.sides;
        meta["area"] = rep.config.area;
    } else {
        meta["seeds"] = rep.config.seeds;
        meta["vertex_count"] = rep.config.vertex_count;
        meta["aspect"] = rep.config.aspect;
    }
    if (rep.config.family == "slabs")
        meta["note"] =
            "slabs are unbounded product domains; this family audits their rectangle truncations";
    std::ofstream mjson(fs::path(rep.config.out) / "meta.json");
    if (!mjson) throw IoError("cannot write meta.json under " + rep.config.out);
    mjson << meta.dump(2) << "\n";
}

inline SweepReport run_sweep_file(const std::string& config_path) {
    const SweepConfig cfg = parse_sweep_config(config_path);
    SweepReport rep = run_sweep(cfg);
    write_sweep_files(rep);
    return rep;
}

} // namespace robinlab

// Convergence studies: for a list of target sizes N, build the adaptive mesh
// and the uniform baseline, evaluate the global interpolation error, and
// compare N * error against the asymptotic limit. Reports serialize to CSV
// (fixed column set) and JSON, byte-stable for identical inputs.
#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "optri/constants.hpp"
#include "optri/fields.hpp"
#include "optri/meshgen.hpp"
#include "optri/norms.hpp"
#include "optri/serialize.hpp"

namespace optri {

struct ConvergenceRow {
    long long n_requested = 0;
    long long n_actual = 0;
    double epsilon = 0.0;
    double error = 0.0;
    double n_times_error = 0.0;
    double limit = 0.0;
    double ratio = 0.0;
    double certified_lower_bound = std::numeric_limits<double>::quiet_NaN();
    bool ok = true;
    std::string message;
};

struct ConvergenceReport {
    std::string field_spec;
    std::string weight_spec;
    double p = 1.0;
    double epsilon = 0.2;
    QuadratureSpec quadrature;
    std::vector<ConvergenceRow> rows;      // adaptive meshes, sorted by N
    std::vector<ConvergenceRow> baseline;  // uniform meshes at the same N list
    std::uint64_t determinism_hash = 0;
};

namespace detail {

inline bool constant_second_derivatives(const ScalarField& field) {
    double xx0 = field.fxx(0.1, 0.1), yy0 = field.fyy(0.1, 0.1), xy0 = field.fxy(0.1, 0.1);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            double x = 0.1 + 0.2 * i, y = 0.1 + 0.2 * j;
            if (std::abs(field.fxx(x, y) - xx0) > 1e-9 || std::abs(field.fyy(x, y) - yy0) > 1e-9 ||
                std::abs(field.fxy(x, y) - xy0) > 1e-9)
                return false;
        }
    }
    return true;
}

// For quadratic fields: sum of the per-triangle lower bounds, an estimated
// floor under the p-th power of the global error.
inline double certified_lower_bound(const ScalarField& field, const WeightField& weight,
                                    const Triangulation& mesh, double p, double c_p) {
    QuadraticForm q{0.5 * field.fxx(0.5, 0.5), 0.5 * field.fyy(0.5, 0.5), 0.5 * field.fxy(0.5, 0.5)};
    if (q.a < 0.0) q = {-q.a, -q.b, -q.c};
    if (!q.positive_definite()) return std::numeric_limits<double>::quiet_NaN();
    double root_det = std::sqrt(q.det());
    double sum = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        Triangle t = mesh.triangle(i);
        Point2 g = t.centroid();
        double wmin = weight(g.x, g.y);
        for (int k = 0; k < 3; ++k) {
            Point2 v = t.vertex(k);
            wmin = std::min(wmin, weight(v.x, v.y));
        }
        double bound = c_p * std::pow(t.area(), 1.0 + 1.0 / p) * root_det * wmin;
        sum += std::pow(bound, p);
    }
    return std::pow(sum, 1.0 / p);
}

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

// Pinned CSV layout for the adaptive rows.
inline std::string report_csv(const ConvergenceReport& report) {
    std::string out = "N_requested,N_actual,epsilon,error,N_times_error,limit,ratio\n";
    for (const ConvergenceRow& r : report.rows) {
        char head[64];
        std::snprintf(head, sizeof head, "%lld,%lld,", r.n_requested, r.n_actual);
        out += head;
        out += detail::format_double(r.epsilon) + "," + detail::format_double(r.error) + "," +
               detail::format_double(r.n_times_error) + "," + detail::format_double(r.limit) + "," +
               detail::format_double(r.ratio) + "\n";
    }
    return out;
}

inline nlohmann::json row_json(const ConvergenceRow& r) {
    nlohmann::json j{{"N_requested", r.n_requested}, {"N_actual", r.n_actual},
                     {"epsilon", r.epsilon},         {"error", r.error},
                     {"N_times_error", r.n_times_error}, {"limit", r.limit},
                     {"ratio", r.ratio},             {"ok", r.ok}};
    if (std::isfinite(r.certified_lower_bound)) j["certified_lower_bound"] = r.certified_lower_bound;
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

inline nlohmann::json report_json(const ConvergenceReport& report) {
    nlohmann::json j;
    j["field"] = report.field_spec;
    j["weight"] = report.weight_spec;
    j["p"] = report.p;
    j["epsilon"] = report.epsilon;
    j["quadrature"] = {{"rule_degree", report.quadrature.rule_degree},
                       {"max_depth", report.quadrature.max_depth},
                       {"rel_tol", report.quadrature.rel_tol}};
    j["rows"] = nlohmann::json::array();
    for (const ConvergenceRow& r : report.rows) j["rows"].push_back(row_json(r));
    j["uniform_baseline"] = nlohmann::json::array();
    for (const ConvergenceRow& r : report.baseline) j["uniform_baseline"].push_back(row_json(r));
    j["determinism_hash"] = report.determinism_hash;
    return j;
}

struct StudyOptions {
    bool with_baseline = true;
    QuadratureSpec quadrature{};
    std::vector<Triangulation>* keep_adaptive_meshes = nullptr;
    std::vector<Triangulation>* keep_uniform_meshes = nullptr;
};

// Run the study. A failed mesh or error evaluation records the failure in its
// row and the study continues.
inline ConvergenceReport convergence_study(const ScalarField& field, const WeightField& weight,
                                           double p, std::vector<long long> n_list, double epsilon,
                                           const StudyOptions& options = {}) {
    std::sort(n_list.begin(), n_list.end());
    ConvergenceReport report;
    report.field_spec = field.name;
    report.weight_spec = weight.name;
    report.p = p;
    report.epsilon = epsilon;
    report.quadrature = options.quadrature;

    double limit = asymptotic_limit(field, weight, p);
    double c_p = optimal_constant(p).value();
    bool quadratic_field = detail::constant_second_derivatives(field);

    auto evaluate = [&](long long n_req, const Triangulation& mesh) {
        ConvergenceRow row;
        row.n_requested = n_req;
        row.epsilon = epsilon;
        row.limit = limit;
        row.n_actual = static_cast<long long>(mesh.size());
        ErrorValue e = global_error(field, mesh, p, weight, options.quadrature);
        row.error = e.value;
        row.n_times_error = static_cast<double>(row.n_actual) * e.value;
        row.ratio = row.n_times_error / limit;
        if (quadratic_field)
            row.certified_lower_bound = detail::certified_lower_bound(field, weight, mesh, p, c_p);
        return row;
    };

    for (long long n : n_list) {
        ConvergenceRow row;
        try {
            BuildResult built = build_mesh(field, weight, p, n, epsilon);
            if (options.keep_adaptive_meshes) options.keep_adaptive_meshes->push_back(built.mesh);
            row = evaluate(n, built.mesh);
        } catch (const Error& e) {
            row.n_requested = n;
            row.epsilon = epsilon;
            row.limit = limit;
            row.ok = false;
            row.message = e.what();
        }
        report.rows.push_back(row);

        if (options.with_baseline) {
            ConvergenceRow base;
            try {
                Triangulation mesh = uniform_mesh(n);
                if (options.keep_uniform_meshes) options.keep_uniform_meshes->push_back(mesh);
                base = evaluate(n, mesh);
            } catch (const Error& e) {
                base.n_requested = n;
                base.epsilon = epsilon;
                base.limit = limit;
                base.ok = false;
                base.message = e.what();
            }
            report.baseline.push_back(base);
        }
    }

    std::string hashed = report_csv(report);
    for (const ConvergenceRow& r : report.baseline)
        hashed += detail::format_double(r.error) + "," + detail::format_double(r.ratio) + "\n";
    report.determinism_hash = detail::fnv1a(hashed);
    return report;
}

}  // namespace optri

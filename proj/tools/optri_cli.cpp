// Command-line front end: optimal constants, shape scans, optimal triangles,
// mesh generation, error evaluation, convergence studies, and the certificate
// profile checks.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric tolerance failure,
// 4 admissibility failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optri/constants.hpp"
#include "optri/experiments.hpp"
#include "optri/fields.hpp"
#include "optri/meshgen.hpp"
#include "optri/norms.hpp"
#include "optri/quadform.hpp"
#include "optri/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitAdmissibility = 4;

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw optri::InvalidArgument("cannot open '" + path + "' for writing");
    out << contents;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw optri::InvalidArgument("cannot open '" + path + "' for reading");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<long long> parse_n_list(const std::string& csv) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        std::string tok = csv.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            out.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw optri::InvalidArgument("bad N value '" + tok + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (out.empty()) throw optri::InvalidArgument("empty N list");
    return out;
}

int run_constant(double p, bool as_json) {
    optri::OptimalConstant c = optri::optimal_constant(p);
    if (as_json) {
        nlohmann::json j{{"p", c.p},
                         {"arccos_form", c.arccos_form},
                         {"beta_form", c.beta_form},
                         {"quadrature_form", c.quadrature_form},
                         {"value", c.value()},
                         {"max_rel_spread", c.max_rel_spread()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("p             = %.12g\n", c.p);
        std::printf("arccos form   = %.15g\n", c.arccos_form);
        std::printf("beta form     = %.15g\n", c.beta_form);
        std::printf("quadrature    = %.15g\n", c.quadrature_form);
        std::printf("rel spread    = %.3g\n", c.max_rel_spread());
    }
    double closed_spread = std::abs(c.arccos_form - c.beta_form) / c.arccos_form;
    if (closed_spread > 1e-8 || c.max_rel_spread() > 1e-6) {
        std::cerr << "constant: computation routes disagree beyond tolerance\n";
        return kExitTolerance;
    }
    return kExitOk;
}

int run_shape_scan(double p, int grid, const std::string& out_path) {
    optri::ShapeScanResult scan = optri::scan_optimal_shape(p, grid, /*keep_table=*/true);
    std::string csv = "A,B,d_value\n";
    char buf[96];
    for (const auto& row : scan.table) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", row[0], row[1], row[2]);
        csv += buf;
    }
    write_file(out_path, csv);
    nlohmann::json j{{"p", scan.p},
                     {"grid", scan.grid},
                     {"coarse_step", scan.coarse_step},
                     {"refined_step", scan.refined_step},
                     {"argmin_A", scan.argmin_a},
                     {"argmin_B", scan.argmin_b},
                     {"min_value", scan.min_value},
                     {"table", out_path}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_optimal_triangle(double a, double b, double c, double area, double orientation) {
    optri::QuadraticForm q{a, b, c};
    optri::Triangle t = optri::optimal_triangle(q, area, orientation);
    optri::TriangleMetrics metrics = optri::triangle_metrics(t);
    nlohmann::json j{{"form", {q.a, q.b, q.c}},
                     {"area", metrics.area},
                     {"orientation", orientation},
                     {"vertices", {{t.a.x, t.a.y}, {t.b.x, t.b.y}, {t.c.x, t.c.y}}},
                     {"diameter", metrics.diameter},
                     {"min_height", metrics.min_height}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_mesh(const std::string& field_spec, const std::string& weight_spec, double p, long long n,
             double epsilon, const std::string& out_path) {
    optri::ScalarField field = optri::field_from_spec(field_spec);
    optri::WeightField weight = optri::weight_from_spec(weight_spec);
    optri::BuildResult built = optri::build_mesh(field, weight, p, n, epsilon);

    std::filesystem::path base(out_path);
    write_file(out_path, optri::to_json(built.mesh).dump(2) + "\n");
    std::filesystem::path off = base;
    off.replace_extension(".off");
    write_file(off.string(), optri::to_off(built.mesh));
    std::filesystem::path plan = base;
    plan.replace_extension(".plan.json");
    write_file(plan.string(), optri::to_json(built.plan).dump(2) + "\n");

    nlohmann::json j{{"mesh", out_path},
                     {"off", off.string()},
                     {"plan", plan.string()},
                     {"triangles", built.mesh.size()},
                     {"vertices", built.mesh.vertices.size()},
                     {"grid_size", built.plan.m},
                     {"boundary_triangles", built.boundary_triangles}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_error(const std::string& field_spec, const std::string& weight_spec,
              const std::string& mesh_path, double p) {
    optri::ScalarField field = optri::field_from_spec(field_spec);
    optri::WeightField weight = optri::weight_from_spec(weight_spec);
    optri::Triangulation mesh =
        optri::triangulation_from_json(nlohmann::json::parse(slurp(mesh_path)));
    optri::ErrorValue e = optri::global_error(field, mesh, p, weight);
    nlohmann::json j{{"p", e.p},
                     {"value", e.value},
                     {"pth_power", e.pth_power},
                     {"converged", e.converged},
                     {"triangles", mesh.size()}};
    std::cout << j.dump(2) << "\n";
    return e.converged ? kExitOk : kExitTolerance;
}

int run_converge(const std::string& field_spec, const std::string& weight_spec, double p,
                 const std::string& n_csv, double epsilon, const std::string& out_path) {
    optri::ScalarField field = optri::field_from_spec(field_spec);
    optri::WeightField weight = optri::weight_from_spec(weight_spec);
    std::vector<long long> n_list = parse_n_list(n_csv);
    optri::ConvergenceReport report = optri::convergence_study(field, weight, p, n_list, epsilon);

    write_file(out_path, optri::report_csv(report));
    std::filesystem::path json_path(out_path);
    json_path.replace_extension(".json");
    write_file(json_path.string(), optri::report_json(report).dump(2) + "\n");

    std::cout << optri::report_csv(report);
    bool all_ok = true;
    for (const auto& row : report.rows) all_ok = all_ok && row.ok;
    return all_ok ? kExitOk : kExitTolerance;
}

int run_appendix_check(double p) {
    bool all_pass = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        all_pass = all_pass && pass;
    };
    char buf[160];

    // Right-triangle profile: non-increasing up to pi/4.
    {
        const int n = 200;
        double lo = 0.01, hi = M_PI / 4.0;
        double worst = 0.0;
        double prev = optri::shape_profile(optri::ProfileKind::Right, lo, p);
        for (int i = 1; i < n; ++i) {
            double a = lo + (hi - lo) * i / (n - 1);
            double v = optri::shape_profile(optri::ProfileKind::Right, a, p);
            worst = std::max(worst, v - prev);
            prev = v;
        }
        std::snprintf(buf, sizeof buf, "max increase %.3g over %d points", worst, n);
        report("right-triangle profile non-increasing", worst <= 1e-10, buf);
    }
    // Isosceles non-obtuse profile: minimized at pi/3.
    {
        const int n = 200;
        double lo = M_PI / 4.0, hi = M_PI / 2.0 - 0.01;
        double best = 1e300, arg = lo;
        for (int i = 0; i < n; ++i) {
            double a = lo + (hi - lo) * i / (n - 1);
            double v = optri::shape_profile(optri::ProfileKind::IsoscelesAcute, a, p);
            if (v < best) {
                best = v;
                arg = a;
            }
        }
        double step = (hi - lo) / (n - 1);
        std::snprintf(buf, sizeof buf, "argmin %.6f vs pi/3 %.6f (step %.6f)", arg, M_PI / 3.0, step);
        report("isosceles profile minimized at pi/3", std::abs(arg - M_PI / 3.0) <= step + 1e-12, buf);
    }
    // Isosceles obtuse profile: non-increasing.
    {
        const int n = 200;
        double lo = 0.01, hi = M_PI / 4.0;
        double worst = 0.0;
        double prev = optri::shape_profile(optri::ProfileKind::IsoscelesObtuse, lo, p);
        for (int i = 1; i < n; ++i) {
            double a = lo + (hi - lo) * i / (n - 1);
            double v = optri::shape_profile(optri::ProfileKind::IsoscelesObtuse, a, p);
            worst = std::max(worst, v - prev);
            prev = v;
        }
        std::snprintf(buf, sizeof buf, "max increase %.3g over %d points", worst, n);
        report("obtuse isosceles profile non-increasing", worst <= 1e-10, buf);
    }
    // Certificate polynomials (defined for p in (0,1)).
    if (p > 0.0 && p < 1.0) {
        optri::SignScanResult first =
            optri::polynomial_sign_scan(optri::SignScanKind::RightProfile, p);
        std::snprintf(buf, sizeof buf, "max %.3g at t = %.4f", first.max_value, first.argmax);
        report("right-family certificate polynomial non-positive", first.max_value <= 1e-12, buf);

        optri::SignScanResult second =
            optri::polynomial_sign_scan(optri::SignScanKind::IsoscelesProfile, p);
        bool one_change = second.sign_changes.size() == 1 && second.sign_changes[0].first > 0.0 &&
                          second.sign_changes[0].second < 1.0;
        if (second.sign_changes.empty())
            std::snprintf(buf, sizeof buf, "no sign change found");
        else
            std::snprintf(buf, sizeof buf, "%zu change(s), first in (%.4f, %.4f)",
                          second.sign_changes.size(), second.sign_changes[0].first,
                          second.sign_changes[0].second);
        report("isosceles-family certificate polynomial: one sign change in (0,1)", one_change, buf);
    } else {
        std::printf("[SKIP] certificate polynomials: defined for p in (0,1), got p = %g\n", p);
    }
    return all_pass ? kExitOk : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal linear-spline interpolation on triangulations"};
    app.require_subcommand(1);

    double p = 1.0, form_a = 1.0, form_b = 1.0, form_c = 0.0, area = 1.0, orientation = 0.0;
    double epsilon = 0.2;
    long long n = 1000;
    int grid = 400;
    bool as_json = false;
    std::string out_path, field_spec, weight_spec = "expr:1", mesh_path, n_csv;

    CLI::App* constant = app.add_subcommand("constant", "optimal constant by three routes");
    constant->add_option("--p", p, "exponent p in (0, inf)")->required();
    constant->add_flag("--json", as_json, "emit JSON");

    CLI::App* shape = app.add_subcommand("shape-scan", "grid scan over unit-area triangle shapes");
    shape->add_option("--p", p)->required();
    shape->add_option("--grid", grid, "grid resolution per angle");
    shape->add_option("--out", out_path, "CSV output path")->required();

    CLI::App* opt = app.add_subcommand("optimal-triangle", "optimal triangle for a quadratic form");
    opt->add_option("--A", form_a)->required();
    opt->add_option("--B", form_b)->required();
    opt->add_option("--C", form_c)->required();
    opt->add_option("--area", area)->required();
    opt->add_option("--orientation", orientation);

    CLI::App* mesh = app.add_subcommand("mesh", "build a near-optimal triangulation");
    mesh->add_option("--field", field_spec, "builtin:NAME or expr:SRC")->required();
    mesh->add_option("--weight", weight_spec, "weight spec (default expr:1)");
    mesh->add_option("--p", p)->required();
    mesh->add_option("--N", n, "target triangle count")->required();
    mesh->add_option("--epsilon", epsilon);
    mesh->add_option("--out", out_path, "mesh JSON path (OFF and plan written alongside)")->required();

    CLI::App* err = app.add_subcommand("error", "weighted L_p interpolation error on a mesh");
    err->add_option("--field", field_spec)->required();
    err->add_option("--mesh", mesh_path, "mesh JSON path")->required();
    err->add_option("--p", p)->required();
    err->add_option("--weight", weight_spec);

    CLI::App* conv = app.add_subcommand("converge", "convergence study against the asymptotic limit");
    conv->add_option("--field", field_spec)->required();
    conv->add_option("--weight", weight_spec);
    conv->add_option("--p", p)->required();
    conv->add_option("--Ns", n_csv, "comma-separated target sizes")->required();
    conv->add_option("--epsilon", epsilon);
    conv->add_option("--out", out_path, "CSV output path (JSON written alongside)")->required();

    CLI::App* appendix = app.add_subcommand("appendix-check", "profile monotonicity and certificate scans");
    appendix->add_option("--p", p)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (constant->parsed()) return run_constant(p, as_json);
        if (shape->parsed()) return run_shape_scan(p, grid, out_path);
        if (opt->parsed()) return run_optimal_triangle(form_a, form_b, form_c, area, orientation);
        if (mesh->parsed()) return run_mesh(field_spec, weight_spec, p, n, epsilon, out_path);
        if (err->parsed()) return run_error(field_spec, weight_spec, mesh_path, p);
        if (conv->parsed()) return run_converge(field_spec, weight_spec, p, n_csv, epsilon, out_path);
        if (appendix->parsed()) return run_appendix_check(p);
    } catch (const optri::NotAdmissible& e) {
        std::cerr << "admissibility failure: " << e.what() << "\n";
        return kExitAdmissibility;
    } catch (const optri::ModulusTooRough& e) {
        std::cerr << "admissibility failure: " << e.what() << "\n";
        return kExitAdmissibility;
    } catch (const optri::GlueError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitTolerance;
    } catch (const optri::Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

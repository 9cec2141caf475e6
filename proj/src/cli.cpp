#include "canon/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "canon/errors.hpp"

namespace canon {

namespace {

using Json = nlohmann::ordered_json;

// Fifteen significant digits.
double num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

int exit_code(Errc e) {
    switch (e) {
        case Errc::NoConvergence:
        case Errc::DegenerateShape:
            return 3;
        case Errc::ZeroSlopePair:
        case Errc::SlopeTooShort:
        case Errc::ParityError:
        case Errc::CoreSlopeExcluded:
        case Errc::GluingMismatch:
        case Errc::InvalidTriangulation:
        case Errc::ParseError:
        case Errc::Precondition:
            return 2;
        default:
            return 1;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Precondition, "cannot write " + path);
    f << text;
}

PipelineOptions options(const RunConfig& cfg) {
    PipelineOptions o;
    o.diagonal = cfg.diagonal;
    o.variant = cfg.variant;
    o.basis = cfg.basis;
    o.solver.tol = cfg.tol;
    o.solver.seed = cfg.seed;
    return o;
}

void check_admissible(const RunConfig& cfg) {
    const Slope given[2] = {cfg.slope1, cfg.slope2};
    for (int i = 0; i < 2; ++i) {
        const Slope m = filling_slope(given[i], cfg.basis, cusp_lattice(cfg.variant, i));
        if (excluded_slope(m))
            throw Error(Errc::Precondition, "slope " + to_string(given[i]) + " is " + to_string(m) +
                                                " in meridian-longitude form, which is excluded (0, 1/0, +-1, +-2)");
    }
}

}  // namespace

SlopeBasis parse_basis(const std::string& s) {
    if (s == "internal") return SlopeBasis::Internal;
    if (s == "meridian-longitude" || s == "ml") return SlopeBasis::MeridianLongitude;
    throw Error(Errc::ParseError, "unknown basis '" + s + "'");
}

LinkVariant parse_variant(const std::string& s) {
    if (s == "plain") return LinkVariant::Plain;
    if (s == "half-twist-1") return LinkVariant::HalfTwist1;
    if (s == "half-twist-2") return LinkVariant::HalfTwist2;
    if (s == "both") return LinkVariant::Both;
    throw Error(Errc::ParseError, "unknown variant '" + s + "'");
}

DiagonalChoice parse_diagonal(const std::string& s) {
    if (s == "auto") return DiagonalChoice::Auto;
    if (s == "positive" || s == "+1") return DiagonalChoice::Positive;
    if (s == "negative" || s == "-1") return DiagonalChoice::Negative;
    throw Error(Errc::ParseError, "unknown diagonal '" + s + "'");
}

bool excluded_slope(const Slope& m) {
    if (m.q == 0 || m.p == 0) return true;
    return m.q == 1 && (m.p == 1 || m.p == -1 || m.p == 2 || m.p == -2);
}

std::string emit_report(const RunConfig& cfg, const PipelineResult& r) {
    Json j;
    j["config"] = {{"slope1", to_string(cfg.slope1)},
                   {"slope2", to_string(cfg.slope2)},
                   {"basis", basis_name(cfg.basis)},
                   {"variant", variant_name(cfg.variant)},
                   {"diagonal", diagonal_name(cfg.diagonal)},
                   {"tol", num(cfg.tol)},
                   {"seed", cfg.seed}};
    j["tet_count"] = r.triangulation.size();
    j["diagonal"] = r.diagonal;
    Json shapes = Json::array();
    for (int i = 0; i < r.solution.shapes.size(); ++i)
        shapes.push_back({{"re", num(r.solution.shapes(i).real())}, {"im", num(r.solution.shapes(i).imag())}});
    j["shapes"] = shapes;
    j["volume"] = num(r.volume);
    j["solver"] = {{"residual", num(r.solution.residual)},
                   {"iterations", r.solution.iterations},
                   {"restarts", r.solution.restarts_used}};
    Json faces = Json::array();
    for (const auto& f : r.report.faces) {
        Json lambdas = Json::array();
        for (double l : f.generic.lambda) lambdas.push_back(num(l));
        Json face = {{"id", f.face.id},
                     {"class", face_class_name(f.face.cls)},
                     {"tet", f.face.tet},
                     {"face", f.face.face},
                     {"margin", num(f.generic.margin)},
                     {"rho", num(f.generic.rho)},
                     {"lambdas", lambdas},
                     {"residual", num(f.generic.residual)},
                     {"verdict", verdict_name(f.generic.verdict)},
                     {"closed_form", closed_form_name(f.closed)}};
        if (f.closed_margin) face["closed_margin"] = num(*f.closed_margin);
        faces.push_back(face);
    }
    j["faces"] = faces;
    Json hexes = Json::array();
    for (const auto& h : r.hexagons)
        hexes.push_back({{"torus", h.torus}, {"puncture", h.puncture}, {"convex", h.convex}, {"straight", h.straight}});
    j["hexagons"] = hexes;
    j["boundary_case"] = r.report.boundary ? boundary_case_name(*r.report.boundary) : "none";
    j["min_margin"] = num(r.report.min_margin);
    j["verdict"] = r.report.verdict();
    return j.dump(2) + "\n";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        check_admissible(cfg);
        const PipelineResult r = run_pipeline(cfg.slope1, cfg.slope2, options(cfg));
        if (!cfg.export_path.empty()) write_file(cfg.export_path, export_text(r.triangulation));
        if (!cfg.svg_path.empty())
            write_file(cfg.svg_path, cusp_svg(r.cusp, r.hexagons, visible_horoballs(r.cusp)));
        const std::string text = emit_report(cfg, r);
        if (cfg.json_path.empty()) out << text;
        else write_file(cfg.json_path, text);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int sweep(int n, const RunConfig& base, std::ostream& out, std::ostream& err) {
    std::vector<Slope> slopes;
    for (std::int64_t q = 1; q <= n; ++q)
        for (std::int64_t p = -n; p <= n; ++p)
            if (std::gcd(p, q) == 1) slopes.push_back({p, q});
    int failures = 0;
    for (const auto& a : slopes) {
        for (const auto& b : slopes) {
            RunConfig cfg = base;
            cfg.slope1 = a;
            cfg.slope2 = b;
            char line[256];
            try {
                check_admissible(cfg);
            } catch (const Error&) {
                continue;
            }
            try {
                const auto r = run_pipeline(a, b, options(cfg));
                std::snprintf(line, sizeof line, "%s %s tets=%d volume=%.10f min_margin=%.6e %s\n", to_string(a).c_str(),
                              to_string(b).c_str(), r.triangulation.size(), r.volume, r.report.min_margin,
                              r.report.verdict());
                if (!r.report.canonical) ++failures;
            } catch (const std::exception& e) {
                std::snprintf(line, sizeof line, "%s %s error %s\n", to_string(a).c_str(), to_string(b).c_str(), e.what());
                ++failures;
            }
            out << line;
        }
    }
    if (failures) err << failures << " pairs not verified canonical\n";
    return failures ? 1 : 0;
}

}  // namespace canon

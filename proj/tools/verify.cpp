// verify: build, solve and check the canonical triangulation of a filling.
#include <iostream>

#include <CLI11.hpp>

#include "canon/cli.hpp"
#include "canon/errors.hpp"
#include "canon/geometry.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Check canonicity of a Dehn filling of the Borromean rings along two crossing circles"};
    std::string s1, s2, basis = "meridian-longitude", variant = "plain", diagonal = "auto";
    canon::RunConfig cfg;
    int sweep = 0;
    app.add_option("--slope1", s1, "filling slope p/q of the first crossing circle");
    app.add_option("--slope2", s2, "filling slope p/q of the second crossing circle");
    app.add_option("--basis", basis, "internal | meridian-longitude")->capture_default_str();
    app.add_option("--variant", variant, "plain | half-twist-1 | half-twist-2 | both")->capture_default_str();
    app.add_option("--diagonal", diagonal, "auto | positive | negative")->capture_default_str();
    app.add_option("--tol", cfg.tol, "Newton residual tolerance")->capture_default_str();
    app.add_option("--json", cfg.json_path, "write the report here instead of standard output");
    app.add_option("--svg", cfg.svg_path, "write the cusp diagram");
    app.add_option("--export-tri", cfg.export_path, "write the triangulation");
    app.add_option("--sweep", sweep, "check every admissible pair with |p|, q <= N");
    CLI11_PARSE(app, argc, argv);

    try {
        cfg.basis = canon::parse_basis(basis);
        cfg.variant = canon::parse_variant(variant);
        cfg.diagonal = canon::parse_diagonal(diagonal);
        cfg.seed = canon::seed_from_env();
        if (sweep > 0) return canon::sweep(sweep, cfg, std::cout, std::cerr);
        if (s1.empty() || s2.empty()) {
            std::cerr << "error: --slope1 and --slope2 are required\n";
            return 2;
        }
        cfg.slope1 = canon::parse_slope(s1);
        cfg.slope2 = canon::parse_slope(s2);
    } catch (const canon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return canon::run(cfg, std::cout, std::cerr);
}

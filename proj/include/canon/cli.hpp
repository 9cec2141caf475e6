#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "canon/canonicity.hpp"

namespace canon {

struct RunConfig {
    Slope slope1{1, 3};
    Slope slope2{1, 3};
    SlopeBasis basis = SlopeBasis::MeridianLongitude;
    LinkVariant variant = LinkVariant::Plain;
    DiagonalChoice diagonal = DiagonalChoice::Auto;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::string json_path;  // empty: standard output
    std::string svg_path;
    std::string export_path;
};

SlopeBasis parse_basis(const std::string& s);
LinkVariant parse_variant(const std::string& s);
DiagonalChoice parse_diagonal(const std::string& s);

// 0, 1/0, 1, -1, 2 and -2 in meridian-longitude form.
bool excluded_slope(const Slope& m);

// Exit status: 0 report written, 2 construction error, 3 solver failure, 1 anything else.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

std::string emit_report(const RunConfig& cfg, const PipelineResult& r);

// One line per admissible pair p/q with |p|, q <= n.
int sweep(int n, const RunConfig& base, std::ostream& out, std::ostream& err);

}  // namespace canon

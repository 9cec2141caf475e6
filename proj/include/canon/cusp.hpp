#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "canon/geometry.hpp"
#include "canon/triangulation.hpp"

namespace canon {

// Horoball about a boundary point; at infinity the size is a height.
struct Horoball {
    Complex center{0, 0};
    bool at_infinity = false;
    double size = 1;  // diameter, or height when at infinity
};

using Mobius = Eigen::Matrix2cd;

Complex mobius_apply(const Mobius& g, const Complex& u);
bool mobius_sends_to_infinity(const Mobius& g, const Complex& u);
Mobius mobius_from_points(const std::array<std::optional<Complex>, 3>& from,
                          const std::array<std::optional<Complex>, 3>& to);  // nullopt is infinity
Horoball mobius_image_horoball(const Mobius& g, const Horoball& h);

// Developed cusp triangles. Triangle 4t+v holds the position of each corner w != v.
struct CuspDiagram {
    int tets = 0;
    int cusps = 0;
    std::vector<int> cusp_of;                     // vertex class per triangle
    std::vector<std::array<Complex, 4>> corner;   // per triangle
    std::vector<Complex> shape;                   // shapes used
    std::vector<std::array<Complex, 2>> translation;  // per cusp, positively oriented basis
    std::vector<double> area;                     // per cusp, from the triangles

    const std::array<Complex, 4>& at(int tet, int v) const { return corner[4 * tet + v]; }
    Complex t_mu(int cusp = 0) const { return translation.at(cusp)[0]; }
    Complex t_lambda(int cusp = 0) const { return translation.at(cusp)[1]; }
    int triangle_count(int cusp) const;
};

// Each cusp is scaled to unit area.
CuspDiagram develop_cusp(const Triangulation& t, const ShapeAssignment& s);

// Shape at the corner w of the cusp triangle (t, v).
Complex corner_shape(const ShapeAssignment& s, int tet, int v, int w);

// Normalised hexagon -1, zeta, zeta', 1, -zeta, -zeta'.
struct Hexagon {
    std::array<Complex, 6> vertex;
    Complex zeta, zeta_p;
    Complex a_vec, b_vec, c_vec;
    double a = 0, b = 0, c = 0;
    double A = 0, B = 0, C = 0;
    bool angles_valid = false;  // 0 < B < pi and B - pi < A, C < B
    bool degenerate = false;    // A or C at a branch boundary
    bool convex = false;
};

Hexagon hexagon_from_zeta(const Complex& zeta, const Complex& zeta_p);

// Similarity placing raw[k] at -1 and raw[k+3] at 1, vertices read in the given order.
Hexagon normalize_hexagon(const std::array<Complex, 6>& raw, int k = 0, double tol = 1e-9);

// Diameters at -1, zeta, zeta', 1, -zeta, -zeta'.
std::array<Horoball, 6> horoball_diameters(const Hexagon& h);

// One boundary hexagon of the cusp: the disc of a solid torus around a puncture.
struct TilingHexagon {
    int torus = -1;
    int puncture = -1;
    std::array<Pt, 6> direction;       // edge directions from the puncture, counterclockwise
    std::array<Complex, 6> vertex;     // developed, same order
    bool convex = false;               // strictly
    int straight = 0;                  // vertices with a straight angle
    Hexagon normalized;                // designated pair on the diagonal direction
    std::vector<int> triangles;        // cusp triangles 4t+v in the disc
    std::vector<std::array<Complex, 4>> local;  // their positions in this development
};

std::vector<TilingHexagon> extract_hexagons(const Triangulation& t, const CuspDiagram& d);

// Adjacent hexagons share a boundary face side.
std::vector<std::pair<int, int>> hexagon_adjacency(const Triangulation& t, const std::vector<TilingHexagon>& hex);

// Horoballs at the corners of the developed triangles of one cusp, seen from
// the height 1 horoball at infinity; duplicates merged.
std::vector<std::pair<Complex, double>> visible_horoballs(const CuspDiagram& d, int cusp = 0);

std::string cusp_svg(const CuspDiagram& d, const std::vector<TilingHexagon>& hex,
                     const std::vector<std::pair<Complex, double>>& circles);

}  // namespace canon

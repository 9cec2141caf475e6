#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "canon/triangulation.hpp"

namespace canon {

using Complex = std::complex<double>;

// Shape of each tetrahedron at the edge pair 01|23.
template <typename Scalar>
using ShapeVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
using ShapeAssignment = ShapeVector<double>;

// Slot 0: z on edges 01, 23; slot 1: z' on 02, 13; slot 2: z'' on 03, 12.
int shape_slot(int edge);

template <typename Scalar>
std::complex<Scalar> shape_in_slot(const std::complex<Scalar>& z, int slot) {
    const Scalar one(1);
    if (slot == 0) return z;
    if (slot == 1) return one / (one - z);
    return one - one / z;
}

// Even permutation starting at v: the cusp triangle of (t, v) has corners
// order[1], order[2], order[3] counterclockwise.
const std::array<int, 4>& cusp_corner_order(int v);

struct ShapeTerm {
    int tet;
    int slot;
    int power;
};

// Rows: one per edge class, then two per cusp. Row i reads
//   sum_t A(i,t) log z_t + B(i,t) log(1 - z_t) + i*pi*C(i) = target(i).
struct GluingEquations {
    int tets = 0;
    int edge_rows = 0;
    int cusps = 0;
    Eigen::MatrixXi A;
    Eigen::MatrixXi B;
    Eigen::VectorXi C;
    Eigen::VectorXcd target;
    std::vector<std::vector<ShapeTerm>> terms;  // per row, before reduction to A, B, C

    int rows() const { return static_cast<int>(A.rows()); }
};

GluingEquations derive_equations(const Triangulation& t);

Eigen::VectorXcd residual(const GluingEquations& eqs, const ShapeAssignment& z);
Eigen::MatrixXcd jacobian(const GluingEquations& eqs, const ShapeAssignment& z);  // d/d(log z)

struct SolveOptions {
    double tol = 1e-10;
    int max_iterations = 100;
    int restarts = 8;
    std::uint64_t seed = 0;
};

struct SolveResult {
    ShapeAssignment shapes;
    double residual = 0;
    int iterations = 0;
    int restarts_used = 0;
    bool from_max_volume = false;  // the initial guess failed; started at the volume maximiser
    std::vector<double> history;  // max-norm residual per iterate of the successful run
};

// Shapes at the maximum of the volume over positive angle structures; none when
// there is no such structure or the maximum lies on the boundary.
std::optional<ShapeAssignment> max_volume_shapes(const GluingEquations& eqs);

// Newton from init, then from the volume maximiser, then from seeded random starts.
SolveResult solve(const GluingEquations& eqs, const ShapeAssignment& init, const SolveOptions& opt);
SolveResult solve(const GluingEquations& eqs, const ShapeAssignment& init, double tol);

ShapeAssignment regular_shapes(int n);

// Seed from CANON_SEED, or 0 when unset.
std::uint64_t seed_from_env();

double lobachevsky(double theta);
double volume(const ShapeAssignment& z);

}  // namespace canon

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "canon/cusp.hpp"

namespace canon {

// Minkowski space R^{3,1}, form x1^2 + x2^2 + x3^2 - x4^2.
template <typename Scalar>
using MinkowskiVector = Eigen::Matrix<Scalar, 4, 1>;
using IsotropicVector = MinkowskiVector<double>;

template <typename Scalar>
Scalar minkowski_product(const MinkowskiVector<Scalar>& u, const MinkowskiVector<Scalar>& v) {
    return u(0) * v(0) + u(1) * v(1) + u(2) * v(2) - u(3) * v(3);
}

IsotropicVector horoball_to_vector(const Horoball& h);
Horoball vector_to_horoball(const IsotropicVector& v);

enum class Verdict { Convex, Flat, NonConvex };
const char* verdict_name(Verdict v);

struct ConvexityCertificate {
    std::vector<double> lambda;
    double rho = 0;
    double margin = 0;     // sum of lambda minus one
    double residual = 0;   // of the linear solve
    double condition = 0;  // of the system matrix
    Verdict verdict = Verdict::NonConvex;
    std::optional<double> Z;
};

inline constexpr double kFlatTolerance = 1e-8;

Verdict classify_margin(double margin, double tol = kFlatTolerance);

// Solves rho P + (1 - rho) Q = sum lambda_i A_i.
ConvexityCertificate local_convexity(const std::vector<IsotropicVector>& face, const IsotropicVector& P,
                                     const IsotropicVector& Q, double tol = kFlatTolerance);

// Closed form for the face (zeta zeta' inf) with neighbours 1 and -1.
ConvexityCertificate hexagon_face_criterion(const Hexagon& h, double tol = kFlatTolerance);
bool angle_criterion(const Hexagon& h);  // -pi < (A + C)/2 < 0

// Face (-1 1 inf) folded onto itself; apexes zeta and -zeta.
ConvexityCertificate lst_core_criterion(const Complex& zeta, double tol = kFlatTolerance);
// Face (0 zeta inf) at the identified vertex; apexes 1 and -1.
ConvexityCertificate sbs_core_criterion(const Complex& zeta, double tol = kFlatTolerance);

// The horoball configurations behind the closed forms: face vertices, then P and Q.
struct Configuration {
    std::vector<Horoball> face;
    Horoball P, Q;
};

Configuration hexagon_configuration(const Hexagon& h);
Configuration lst_core_configuration(const Complex& zeta);
Configuration sbs_core_configuration(const Complex& zeta);
ConvexityCertificate check_configuration(const Configuration& c, double tol = kFlatTolerance);

Complex handedness(const Mobius& g);
// u -> 1 - a c / (u + 1), taking (-1 zeta inf) to (zeta' 1 inf).
Mobius face_pairing(const Hexagon& h);

}  // namespace canon

#include "canon/minkowski.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "canon/errors.hpp"

namespace canon {

IsotropicVector horoball_to_vector(const Horoball& h) {
    if (!(h.size > 0)) throw Error(Errc::Precondition, "horoball size must be positive");
    if (h.at_infinity) return {0, 0, -h.size, h.size};
    const double xi = h.center.real(), eta = h.center.imag(), r2 = std::norm(h.center);
    return IsotropicVector(2 * xi, 2 * eta, 1 - r2, 1 + r2) / h.size;
}

Horoball vector_to_horoball(const IsotropicVector& v) {
    if (!(v(3) > 0)) throw Error(Errc::Precondition, "isotropic vector must have x4 > 0");
    Horoball h;
    const double s = v(2) + v(3);  // 2/d, zero at infinity
    if (std::abs(s) <= 1e-14 * v(3)) {
        h.at_infinity = true;
        h.size = v(3);
        return h;
    }
    h.size = 2 / s;
    h.center = Complex(v(0), v(1)) * h.size / 2.0;
    return h;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Convex: return "convex";
        case Verdict::Flat: return "flat";
        case Verdict::NonConvex: return "non-convex";
    }
    return "?";
}

Verdict classify_margin(double margin, double tol) {
    if (margin > tol) return Verdict::Convex;
    if (margin >= -tol) return Verdict::Flat;
    return Verdict::NonConvex;
}

ConvexityCertificate local_convexity(const std::vector<IsotropicVector>& face, const IsotropicVector& P,
                                     const IsotropicVector& Q, double tol) {
    const int s = static_cast<int>(face.size());
    if (s < 3) throw Error(Errc::Precondition, "a face needs at least three vertices");
    Eigen::MatrixXd M(4, s + 1);
    for (int i = 0; i < s; ++i) M.col(i) = face[i];
    M.col(s) = Q - P;
    const Eigen::Vector4d rhs = Q;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    if (!(smin > 1e-12 * smax) || sv.size() < s + 1)
        throw Error(Errc::SingularSystem, "convexity system is rank deficient");
    const Eigen::VectorXd x = M.colPivHouseholderQr().solve(rhs);

    ConvexityCertificate c;
    c.condition = smax / smin;
    c.lambda.assign(x.data(), x.data() + s);
    c.rho = x(s);
    c.residual = (M * x - rhs).norm() / rhs.norm();
    double sum = 0;
    for (double l : c.lambda) sum += l;
    c.margin = sum - 1;
    c.verdict = classify_margin(c.margin, tol);
    if (!(c.rho > 0 && c.rho < 1))
        throw Error(Errc::NoCrossing, "rho = " + std::to_string(c.rho) + " outside (0,1)");
    return c;
}

bool angle_criterion(const Hexagon& h) {
    const double m = (h.A + h.C) / 2;
    return m > -std::numbers::pi && m < 0;
}

ConvexityCertificate hexagon_face_criterion(const Hexagon& h, double tol) {
    const double eta = h.zeta.imag(), eta_p = h.zeta_p.imag();
    if (eta_p == eta) throw Error(Errc::DegenerateHexagon, "eta' equals eta");
    const double a = h.a, b = h.b, c = h.c, d = eta_p - eta;
    ConvexityCertificate out;
    out.lambda = {b * eta_p / (c * d), -b * eta / (a * d),
                  (eta_p * (1 - std::norm(h.zeta)) - eta * (1 - std::norm(h.zeta_p))) / (a * c * d)};
    const double Z = a * b * eta_p - b * c * eta + eta_p * (1 - std::norm(h.zeta)) -
                     eta * (1 - std::norm(h.zeta_p)) - a * c * d;
    out.Z = Z;
    out.margin = Z / (a * c * d);
    out.rho = std::numeric_limits<double>::quiet_NaN();
    out.verdict = classify_margin(out.margin, tol);
    return out;
}

ConvexityCertificate lst_core_criterion(const Complex& zeta, double tol) {
    const double s = std::abs(zeta + 1.0);
    ConvexityCertificate out;
    out.lambda = {(std::norm(zeta) - 1) / (s * s), 1 / s, 1 / s};  // infinity, 1, -1
    out.rho = 0.5;
    out.margin = (std::norm(zeta) - 1 + 2 * s) / (s * s) - 1;
    out.verdict = classify_margin(out.margin, tol);
    return out;
}

ConvexityCertificate sbs_core_criterion(const Complex& zeta, double tol) {
    const double s = std::abs(zeta - 1.0);
    ConvexityCertificate out;
    out.lambda = {1 / s, std::abs(zeta) / s, 0};  // infinity, 0, zeta
    out.rho = std::numeric_limits<double>::quiet_NaN();
    out.margin = (std::abs(zeta) + 1) / s - 1;
    out.verdict = classify_margin(out.margin, tol);
    return out;
}

Configuration hexagon_configuration(const Hexagon& h) {
    const double ac = h.a * h.c;
    Configuration c;
    c.face = {{h.zeta, false, h.a * h.b}, {h.zeta_p, false, h.b * h.c}, {0, true, 1}};
    c.P = {1, false, ac};
    c.Q = {-1, false, ac};
    return c;
}

Configuration lst_core_configuration(const Complex& zeta) {
    const double s = std::abs(zeta + 1.0);
    Configuration c;
    c.face = {{0, true, 1}, {1, false, 2 * s}, {-1, false, 2 * s}};
    c.P = {zeta, false, s * s};
    c.Q = {-zeta, false, s * s};
    return c;
}

Configuration sbs_core_configuration(const Complex& zeta) {
    const double s = std::abs(zeta - 1.0), r = std::abs(zeta);
    Configuration c;
    c.face = {{0, true, 1}, {0, false, r}, {zeta, false, r * s}};
    c.P = {1, false, s};
    c.Q = {-1, false, s};
    return c;
}

ConvexityCertificate check_configuration(const Configuration& c, double tol) {
    std::vector<IsotropicVector> face;
    for (const auto& h : c.face) face.push_back(horoball_to_vector(h));
    return local_convexity(face, horoball_to_vector(c.P), horoball_to_vector(c.Q), tol);
}

Complex handedness(const Mobius& g) {
    const Complex det = g.determinant();
    if (std::abs(det) == 0) throw Error(Errc::Precondition, "singular matrix");
    const Complex tr = g.trace();
    return tr * tr / det;
}

Mobius face_pairing(const Hexagon& h) {
    const Complex w = h.a_vec * h.c_vec;
    Mobius m;
    m << 1.0, 1.0 - w, 1.0, 1.0;
    return m;
}

}  // namespace canon

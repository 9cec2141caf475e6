#include <doctest.h>

#include "canon/build.hpp"
#include "canon/errors.hpp"
#include "canon/geometry.hpp"
#include "oracles.hpp"

using namespace canon;

namespace {

bool throws_code(Errc code, auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

GluingEquations equations(Slope a, Slope b, SlopeBasis basis = SlopeBasis::MeridianLongitude) {
    return derive_equations(assemble_filled(a, b, DiagonalChoice::Auto, LinkVariant::Plain, basis));
}

SolveResult solved(Slope a, Slope b) {
    const auto t = assemble_filled(a, b, DiagonalChoice::Auto);
    const auto eqs = derive_equations(t);
    return solve(eqs, regular_shapes(t.size()), SolveOptions{});
}

}  // namespace

TEST_CASE("shape slots") {
    const Complex z{0.3, 0.8};
    const Complex z1 = shape_in_slot(z, 1), z2 = shape_in_slot(z, 2);
    CHECK(std::abs(z * z1 * z2 + 1.0) < 1e-14);
    CHECK(std::abs(shape_in_slot(z1, 1) - z2) < 1e-14);
    CHECK(shape_slot(0) == 0);
    CHECK(shape_slot(5) == 0);
    CHECK(shape_slot(1) == shape_slot(4));
    CHECK(shape_slot(2) == shape_slot(3));
}

TEST_CASE("lobachevsky against quadrature") {
    for (double t = -3.0; t <= 3.0; t += 0.173)
        CHECK(std::abs(lobachevsky(t) - oracle::lobachevsky(t)) < 1e-10);
    CHECK(lobachevsky(0.0) == 0.0);
}

TEST_CASE("volumes of single tetrahedra") {
    ShapeAssignment z(1);
    z(0) = std::polar(1.0, oracle::kPi / 3);
    CHECK(volume(z) == doctest::Approx(3 * oracle::lobachevsky(oracle::kPi / 3)).epsilon(1e-12));
    CHECK(volume(z) == doctest::Approx(1.0149416064).epsilon(1e-10));
    z(0) = Complex(0, 1);
    CHECK(volume(z) == doctest::Approx(2 * oracle::lobachevsky(oracle::kPi / 4)).epsilon(1e-12));
    CHECK(volume(z) == doctest::Approx(0.9159655941).epsilon(1e-10));
    z(0) = Complex(2.5, 0);
    CHECK(std::abs(volume(z)) < 1e-14);
    oracle::Rng r(3);
    for (int k = 0; k < 50; ++k) {
        z(0) = r.upper();
        CHECK(std::abs(volume(z) - oracle::tet_volume(z(0))) < 1e-9);
    }
}

TEST_CASE("equation counts") {
    for (auto [a, b] : {std::pair<Slope, Slope>{{1, 3}, {1, 3}}, {{1, 3}, {4, 3}}, {{3, 1}, {-3, 1}}}) {
        const auto t = assemble_filled(a, b, DiagonalChoice::Auto);
        const auto eqs = derive_equations(t);
        CHECK(eqs.edge_rows == t.size());
        CHECK(eqs.cusps == 1);
        CHECK(eqs.rows() == t.size() + 2);
        // Each tetrahedron meets the edges six times.
        for (int tet = 0; tet < t.size(); ++tet) {
            int count = 0;
            for (int i = 0; i < eqs.edge_rows; ++i)
                for (const auto& term : eqs.terms[i]) count += term.tet == tet;
            CHECK(count == 6);
        }
    }
    auto open = assemble_filled({1, 3}, {1, 3}, DiagonalChoice::Auto);
    open.unglue(0, 0);
    CHECK(throws_code(Errc::InvalidTriangulation, [&] { derive_equations(open); }));
}

TEST_CASE("jacobian matches finite differences") {
    oracle::Rng r(5);
    for (auto [a, b] : {std::pair<Slope, Slope>{{1, 3}, {1, 3}}, {{4, 3}, {6, 1}}, {{-1, 3}, {2, 5}}}) {
        const auto eqs = equations(a, b);
        ShapeAssignment z(eqs.tets);
        for (int t = 0; t < eqs.tets; ++t) z(t) = r.upper(1.5, 1.5);
        const auto J = jacobian(eqs, z);
        const double h = 1e-6;
        double worst = 0;
        for (int t = 0; t < eqs.tets; ++t) {
            ShapeAssignment zp = z, zm = z;
            zp(t) *= std::exp(h);
            zm(t) *= std::exp(-h);
            const Eigen::VectorXcd fd = (residual(eqs, zp) - residual(eqs, zm)) / (2 * h);
            worst = std::max(worst, (fd - J.col(t)).norm() / std::max(1.0, J.col(t).norm()));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("solver on the (1/3, 1/3) filling") {
    for (auto basis : {SlopeBasis::Internal, SlopeBasis::MeridianLongitude}) {
        const auto t = assemble_filled({1, 3}, {1, 3}, DiagonalChoice::Auto, LinkVariant::Plain, basis);
        const auto eqs = derive_equations(t);
        const auto s = solve(eqs, regular_shapes(t.size()), 1e-10);
        CHECK(s.residual < 1e-10);
        for (int i = 0; i < s.shapes.size(); ++i) CHECK(s.shapes(i).imag() > 0);
        CHECK(residual(eqs, s.shapes).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("volume maximiser agrees with Newton") {
    for (auto [a, b] : {std::pair<Slope, Slope>{{1, 3}, {1, 3}}, {{3, 1}, {5, 1}}, {{7, 2}, {-5, 3}}}) {
        const auto eqs = equations(a, b);
        const auto s = solved(a, b);
        const auto vmax = max_volume_shapes(eqs);
        REQUIRE(vmax.has_value());
        CHECK(volume(*vmax) == doctest::Approx(volume(s.shapes)).epsilon(1e-9));
        CHECK(residual(eqs, *vmax).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("solver errors") {
    const auto eqs = equations({1, 3}, {1, 3});
    SolveOptions opt;
    opt.tol = 0;
    CHECK(throws_code(Errc::Precondition, [&] { solve(eqs, regular_shapes(eqs.tets), opt); }));
    CHECK(throws_code(Errc::Precondition, [&] { solve(eqs, regular_shapes(eqs.tets + 1), SolveOptions{}); }));

    // log z = 0.1 and log z = 0.2 at once.
    GluingEquations bad;
    bad.tets = 1;
    bad.edge_rows = 2;
    bad.A = Eigen::MatrixXi::Ones(2, 1);
    bad.B = Eigen::MatrixXi::Zero(2, 1);
    bad.C = Eigen::VectorXi::Zero(2);
    bad.target = Eigen::VectorXcd(2);
    bad.target << Complex(0.1, 1), Complex(0.2, 1);
    bad.terms = {{{0, 0, 1}}, {{0, 0, 1}}};
    CHECK(throws_code(Errc::NoConvergence, [&] { solve(bad, regular_shapes(1), SolveOptions{}); }));
}

TEST_CASE("seeded restarts are reproducible") {
    const auto eqs = equations({2, 3}, {2, 3});
    SolveOptions opt;
    opt.seed = 42;
    ShapeAssignment far = ShapeAssignment::Constant(eqs.tets, Complex(-5, 0.01));
    const auto a = solve(eqs, far, opt);
    const auto b = solve(eqs, far, opt);
    CHECK(a.shapes == b.shapes);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("solved shapes are sound") {
    for (auto [a, b] : {std::pair<Slope, Slope>{{1, 3}, {4, 3}}, {{-5, 2}, {-7, 3}}, {{1, 4}, {-2, 7}}}) {
        const auto s = solved(a, b);
        for (int i = 0; i < s.shapes.size(); ++i) {
            const Complex z = s.shapes(i);
            CHECK(z.imag() > 1e-3);
            CHECK(std::abs(z * shape_in_slot(z, 1) * shape_in_slot(z, 2) + 1.0) < 1e-12);
        }
        CHECK(volume(s.shapes) > 0);
        CHECK(volume(s.shapes) < 7.32772475342);
    }
}

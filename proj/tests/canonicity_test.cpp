#include <doctest.h>

#include "canon/canonicity.hpp"
#include "canon/errors.hpp"

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

}  // namespace

TEST_CASE("boundary cases") {
    CHECK(boundary_case({1, 3}, {1, 3}) == BoundaryCase::Case3);
    CHECK(boundary_case({-1, 3}, {-4, 3}) == BoundaryCase::Case2);
    CHECK(boundary_case({1, 3}, {-1, 3}) == BoundaryCase::Case1);
    CHECK(boundary_case({-7, 2}, {5, 3}) == BoundaryCase::Case1);
}

TEST_CASE("face classes") {
    const auto dd = assemble_filled({1, 3}, {1, 3}, DiagonalChoice::Auto);
    const auto faces = classify_faces(dd);
    CHECK(static_cast<int>(faces.size()) == 2 * dd.size());
    std::map<FaceClass, int> n;
    for (const auto& f : faces) {
        ++n[f.cls];
        CHECK(dd.tets[f.tet].neighbor[f.face] == f.other);
        CHECK(std::make_pair(f.tet, f.face) <= std::make_pair(f.other, f.other_face));
    }
    CHECK(n[FaceClass::BoundaryBR] > 0);
    CHECK(n[FaceClass::InteriorSBS] == 0);
    CHECK(n[FaceClass::CoreSBS] == 0);

    const auto ds = assemble_filled({1, 3}, {4, 3}, DiagonalChoice::Auto);
    std::map<FaceClass, int> m;
    for (const auto& f : classify_faces(ds)) ++m[f.cls];
    CHECK(m[FaceClass::BoundaryBR] > 0);
    CHECK(m[FaceClass::CoreSBS] > 0);
    CHECK(m[FaceClass::CoreDouble] + m[FaceClass::InteriorDouble] > 0);

    const auto bare = import_text(export_text(dd));
    CHECK(throws_code(Errc::MissingMetadata, [&] { classify_faces(bare); }));
}

TEST_CASE("pipeline on (1/3, 1/3)") {
    const auto r = run_pipeline({1, 3}, {1, 3});
    CHECK(r.triangulation.size() == 16);
    CHECK(r.volume == doctest::Approx(6.29701965).epsilon(1e-8));
    CHECK(r.report.canonical);
    CHECK(std::string(r.report.verdict()) == "canonical");
    CHECK(r.report.min_margin == doctest::Approx(4.761e-3).epsilon(1e-3));
    CHECK(r.report.boundary == BoundaryCase::Case3);
    CHECK(r.report.view_spread <= 1e-9);
    CHECK(r.report.lift_spread <= 1e-9);
    CHECK(r.hexagons.size() == 4);
    for (const auto& f : r.report.faces) {
        CHECK(f.generic.margin > kFlatTolerance);
        for (double m : f.view_margins) CHECK(std::abs(m - f.generic.margin) <= 1e-9 * std::max(1.0, std::abs(m)));
        if (f.closed_margin) CHECK(std::abs(*f.closed_margin - f.generic.margin) <= 1e-9 * std::max(1.0, std::abs(*f.closed_margin)));
    }
}

TEST_CASE("reference fillings are canonical") {
    struct Ref {
        Slope a, b;
        double volume;
    };
    for (const auto& ref : std::vector<Ref>{{{1, 3}, {4, 3}, 6.41572545},
                                            {{-1, 3}, {-4, 3}, 6.41572545},
                                            {{3, 1}, {3, 1}, 4.05976643},
                                            {{3, 1}, {-3, 1}, 4.81381919},
                                            {{7, 2}, {-5, 3}, 6.72428859}}) {
        const auto r = run_pipeline(ref.a, ref.b);
        CHECK(r.volume == doctest::Approx(ref.volume).epsilon(1e-8));
        CHECK(r.report.canonical);
        CHECK(r.report.min_margin > kFlatTolerance);
    }
}

TEST_CASE("both-negative boundary hexagons have A, C < 0") {
    const auto r = run_pipeline({-1, 3}, {-4, 3});
    REQUIRE(r.report.boundary == BoundaryCase::Case2);
    int seen = 0;
    for (const auto& f : r.report.faces) {
        if (f.face.cls != FaceClass::BoundaryBR || f.closed != ClosedForm::Hexagon || !f.hexagon) continue;
        CHECK(f.hexagon->A < 0);
        CHECK(f.hexagon->C < 0);
        ++seen;
    }
    CHECK(seen > 0);
}

TEST_CASE("handedness of face pairings") {
    const auto r = run_pipeline({1, 3}, {-1, 3});
    int seen = 0;
    for (const auto& f : r.report.faces) {
        if (!f.hand || !f.hand_formula) continue;
        CHECK(std::abs(*f.hand - *f.hand_formula) <= 1e-8 * std::abs(*f.hand_formula));
        ++seen;
    }
    CHECK(seen > 0);
}

TEST_CASE("check_all preconditions") {
    const auto t = assemble_filled({1, 3}, {1, 3}, DiagonalChoice::Auto);
    CHECK(throws_code(Errc::Precondition, [&] { check_all(t, regular_shapes(3)); }));
}

#include <doctest.h>

#include <numeric>

#include "canon/build.hpp"
#include "canon/errors.hpp"
#include "canon/triangulation.hpp"

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

int expected_tets(const TorusInfo& t) {
    const int n = t.walk.length();
    switch (t.kind) {
        case TorusKind::Lst: return n - 1;
        case TorusKind::DoubleCover: return 2 * (n - 1);
        case TorusKind::SideBySide: return 2 * n + 1;
    }
    return -1;
}

bool admissible(const Slope& m) { return !(m.p == 0 || (m.q == 1 && std::abs(m.p) <= 2)); }

}  // namespace

TEST_CASE("layered solid tori") {
    const auto t = build_lst({1, 3});
    CHECK(t.size() == 1);
    REQUIRE(t.boundary.size() == 2);
    for (const auto& bf : t.boundary)
        for (const auto& s : bf.side_slope)
            CHECK((s == Slope{0, 1} || s == Slope{1, 0} || s == Slope{1, 1}));
    CHECK(build_lst({3, 7}).size() == 3);
    CHECK(throws_code(Errc::SlopeTooShort, [] { build_lst({2, 1}); }));
}

TEST_CASE("double covers") {
    const auto t = build_double_cover({1, 3});
    CHECK(t.boundary.size() == 4);
    CHECK(t.size() == expected_tets(t.tori[0]));
    CHECK(t.size() % 2 == 0);
    for (int i = 0; i < t.size(); ++i)
        if (t.info[i].partner >= 0) CHECK(t.info[t.info[i].partner].partner == i);
    CHECK(throws_code(Errc::ParityError, [] { build_double_cover({4, 3}); }));
}

TEST_CASE("side by side") {
    const auto t = build_side_by_side({4, 3});
    CHECK(t.size() == 5);
    CHECK(t.boundary.size() == 4);
    CHECK(build_side_by_side({6, 1}).size() == 5);
    CHECK(throws_code(Errc::CoreSlopeExcluded, [] { build_side_by_side({2, 1}); }));
    CHECK(throws_code(Errc::ParityError, [] { build_side_by_side({3, 1}); }));
}

TEST_CASE("assembled fillings validate") {
    for (auto [a, b] : {std::pair<Slope, Slope>{{1, 3}, {1, 3}}, {{1, 3}, {4, 3}}, {{-1, 3}, {5, 2}}}) {
        const auto t = assemble_filled(a, b, DiagonalChoice::Auto);
        const auto rep = validate(t);
        CHECK(rep.valid);
        CHECK(rep.cusps == 1);
        CHECK(rep.edge_count == t.size());
        CHECK(rep.unglued_faces == 0);
        CHECK(t.size() == expected_tets(t.tori[0]) + expected_tets(t.tori[1]));
    }
    CHECK(assemble_filled({1, 3}, {1, 3}, DiagonalChoice::Auto).size() == 16);
    CHECK(assemble_filled({1, 3}, {4, 3}, DiagonalChoice::Auto).size() == 13);
    CHECK(throws_code(Errc::SlopeTooShort, [] {
        assemble_filled({1, 2}, {1, 2}, DiagonalChoice::Auto, LinkVariant::Plain, SlopeBasis::Internal);
    }));
}

TEST_CASE("all small fillings and variants validate") {
    std::vector<Slope> slopes;
    for (std::int64_t q = 1; q <= 5; ++q)
        for (std::int64_t p = -5; p <= 5; ++p)
            if (std::gcd(p, q) == 1 && admissible({p, q})) slopes.push_back({p, q});
    for (auto v : {LinkVariant::Plain, LinkVariant::HalfTwist1, LinkVariant::HalfTwist2, LinkVariant::Both}) {
        int built = 0;
        for (const auto& a : slopes)
            for (const auto& b : slopes) {
                Triangulation t;
                try {
                    t = assemble_filled(a, b, DiagonalChoice::Auto, v);
                } catch (const Error& e) {
                    CHECK(e.code() == Errc::GluingMismatch);
                    continue;
                }
                ++built;
                const auto rep = validate(t);
                CHECK(rep.valid);
                CHECK(rep.orientable);
                CHECK(rep.edge_count == t.size());
            }
        CHECK(built > static_cast<int>(slopes.size() * slopes.size() * 9 / 10));
    }
}

TEST_CASE("validate catches broken gluings") {
    auto t = assemble_filled({1, 3}, {1, 3}, DiagonalChoice::Auto);
    auto open = t;
    const int u = open.tets[0].neighbor[0];
    open.unglue(0, 0);
    (void)u;
    auto rep = validate(open);
    CHECK(!rep.valid);
    CHECK(rep.unglued_faces > 0);

    auto twisted = t;
    auto& p = twisted.tets[0].gluing[0];
    std::swap(p[1], p[2]);
    CHECK(!validate(twisted).valid);
}

TEST_CASE("export and import round trip") {
    const auto t = assemble_filled({1, 3}, {4, 3}, DiagonalChoice::Auto);
    const auto back = import_text(export_text(t));
    REQUIRE(back.size() == t.size());
    for (int i = 0; i < t.size(); ++i) {
        CHECK(back.tets[i].neighbor == t.tets[i].neighbor);
        CHECK(back.tets[i].gluing == t.tets[i].gluing);
    }
    CHECK(export_text(back) == export_text(t));
    CHECK(throws_code(Errc::ParseError, [] { import_text("tets x"); }));
}

TEST_CASE("slope bases") {
    CHECK(meridian_vector({1, 3}, kPlainCover) == Pt{6, 1});
    CHECK(meridian_vector({1, 3}, kTwistedCover) == Pt{7, 1});
    CHECK(filling_slope({1, 3}, SlopeBasis::Internal, kPlainCover) == Slope{2, 3});
    CHECK(filling_slope({2, 1}, SlopeBasis::Internal, kPlainCover) == Slope{4, 1});
    CHECK(filling_slope({5, 3}, SlopeBasis::MeridianLongitude, kPlainCover) == Slope{5, 3});
    for (std::int64_t q = 1; q <= 6; ++q)
        for (std::int64_t p = -6; p <= 6; ++p) {
            if (std::gcd(p, q) != 1) continue;
            for (const auto& l : {kPlainCover, kTwistedCover})
                CHECK(meridian_slope(meridian_vector({p, q}, l), l) == Slope{p, q});
        }
    CHECK(throws_code(Errc::Precondition, [] { meridian_slope({1, 0}, kPlainCover); }));
}

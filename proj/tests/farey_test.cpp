#include <doctest.h>

#include <numeric>

#include "canon/errors.hpp"
#include "canon/farey.hpp"
#include "oracles.hpp"

using namespace canon;

namespace {

oracle::Tri as_tri(const FareyTriangle& t) {
    oracle::Tri out;
    for (int i = 0; i < 3; ++i) out[i] = {t.slopes[i].p, t.slopes[i].q};
    return oracle::sorted(out);
}

bool throws_code(Errc code, auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("reduce normalises sign and gcd") {
    CHECK(reduce(2, 4) == Slope{1, 2});
    CHECK(reduce(1, 0) == Slope{1, 0});
    CHECK(reduce(-1, 0) == Slope{1, 0});
    CHECK(reduce(-3, -6) == Slope{1, 2});
    CHECK(reduce(3, -6) == Slope{-1, 2});
    CHECK(throws_code(Errc::ZeroSlopePair, [] { reduce(0, 0); }));
}

TEST_CASE("parse and print") {
    CHECK(parse_slope("4/3") == Slope{4, 3});
    CHECK(parse_slope("-2/6") == Slope{-1, 3});
    CHECK(parse_slope("5") == Slope{5, 1});
    CHECK(parse_slope("1/0") == Slope{1, 0});
    CHECK(to_string(Slope{-7, 3}) == "-7/3");
    CHECK(throws_code(Errc::ParseError, [] { parse_slope("x/2"); }));
    CHECK(throws_code(Errc::ParseError, [] { parse_slope(""); }));
}

TEST_CASE("intersection numbers") {
    CHECK(intersection_number({0, 1}, {1, 0}) == 1);
    CHECK(intersection_number({1, 2}, {1, 3}) == 1);
    CHECK(intersection_number({1, 0}, {1, 0}) == 0);
    CHECK(intersection_number({1, 3}, {2, 5}) == 1);
    CHECK(intersection_number({1, 1}, {-1, 1}) == 2);
}

TEST_CASE("walk to 1/3") {
    const auto w = walk_to({1, 3});
    REQUIRE(w.length() == 2);
    CHECK(as_tri(w.triangles[0]) == oracle::sorted({{{0, 1}, {1, 0}, {1, 1}}}));
    CHECK(as_tri(w.triangles[1]) == oracle::sorted({{{0, 1}, {1, 1}, {1, 2}}}));
    CHECK(as_tri(w.triangles[2]) == oracle::sorted({{{0, 1}, {1, 2}, {1, 3}}}));
}

TEST_CASE("walk to -1/3 mirrors 1/3") {
    const auto w = walk_to({-1, 3});
    const auto v = walk_to({1, 3});
    REQUIRE(w.length() == v.length());
    for (int i = 0; i <= w.length(); ++i) {
        FareyTriangle mirrored = v.triangles[i];
        for (auto& s : mirrored.slopes) s = reduce(-s.p, s.q);
        CHECK(w.triangles[i].same_as(mirrored));
    }
}

TEST_CASE("short walks are rejected") {
    CHECK(throws_code(Errc::SlopeTooShort, [] { walk_to({1, 2}); }));
    CHECK(throws_code(Errc::SlopeTooShort, [] { walk_to({2, 1}); }));
    CHECK(throws_code(Errc::SlopeTooShort, [] { walk_to({1, 1}); }));
    CHECK(throws_code(Errc::SlopeTooShort, [] { walk_to({0, 1}); }));
    CHECK(walk_to({3, 7}).length() == 4);
}

TEST_CASE("walks agree with breadth-first search for |p|, |q| <= 20") {
    int compared = 0, rejected = 0;
    for (std::int64_t q = 1; q <= 20; ++q) {
        for (std::int64_t p = -20; p <= 20; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Slope m{p, q};
            const auto start = initial_triangle(p >= 0 ? 1 : -1);
            const auto path = oracle::farey_path(as_tri(start), {p, q});
            REQUIRE(!path.empty());
            if (path.size() < 3) {
                CHECK(throws_code(Errc::SlopeTooShort, [&] { walk_to(m); }));
                ++rejected;
                continue;
            }
            const auto w = walk_to(m);
            REQUIRE(w.length() + 1 == static_cast<int>(path.size()));
            for (int i = 0; i <= w.length(); ++i) CHECK(as_tri(w.triangles[i]) == path[i]);
            ++compared;
        }
    }
    CHECK(compared > 400);
    CHECK(rejected > 0);
}

TEST_CASE("walk structure") {
    oracle::Rng r(11);
    for (int k = 0; k < 300; ++k) {
        std::int64_t q = r.integer(1, 60), p = r.integer(-60, 60);
        if (std::gcd(p, q) != 1) continue;
        FareyWalk w;
        try {
            w = walk_to({p, q});
        } catch (const Error&) {
            continue;
        }
        CHECK(w.triangles.back().contains({p, q}));
        CHECK(w.turns.size() + 1 == w.triangles.size() - 1);
        for (int i = 0; i < w.length(); ++i) {
            const auto& a = w.triangles[i];
            const auto& b = w.triangles[i + 1];
            int shared = 0;
            for (const auto& s : a.slopes) shared += b.contains(s);
            CHECK(shared == 2);
            CHECK(intersection_number(w.dropped(i), w.added(i)) == 2);
            for (int j = 0; j < i; ++j) CHECK(!w.triangles[j].same_as(b));
        }
        for (const auto& t : w.triangles)
            for (int i = 0; i < 3; ++i) CHECK(intersection_number(t.slopes[i], t.slopes[(i + 1) % 3]) == 1);
    }
}

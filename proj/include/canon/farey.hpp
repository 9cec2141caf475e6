#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace canon {

// Reduced p/q with q >= 0; infinity is 1/0.
struct Slope {
    std::int64_t p = 0;
    std::int64_t q = 1;

    friend bool operator==(const Slope&, const Slope&) = default;
};

Slope reduce(std::int64_t p, std::int64_t q);
Slope parse_slope(const std::string& text);
std::string to_string(const Slope& s);

std::int64_t intersection_number(const Slope& a, const Slope& b);

// -1, 0 or +1; infinity counts as 0 here.
int sign(const Slope& s);
bool is_infinity(const Slope& s);

// Primitive lattice vector (x, y) = (q, p) with angle in [0, pi).
struct Vec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

Vec2 direction(const Slope& s);
Slope slope_of(const Vec2& v);

struct FareyTriangle {
    std::array<Slope, 3> slopes;

    bool contains(const Slope& s) const;
    bool same_as(const FareyTriangle& other) const;
};

enum class Turn { L, R };

struct FareyWalk {
    std::vector<FareyTriangle> triangles;  // T0 .. TN
    std::vector<Turn> turns;               // one per transition after the first
    Slope target;

    int length() const { return static_cast<int>(triangles.size()) - 1; }
    // Slope of T_i missing from T_{i+1}, and the one gained.
    Slope dropped(int i) const;
    Slope added(int i) const;
};

FareyTriangle initial_triangle(int diagonal_sign);

// Geodesic walk from an arbitrary start triangle; any length N >= 0.
FareyWalk walk_from(const FareyTriangle& start, const Slope& m);

// Walk from the sign-keyed initial triangle; throws SlopeTooShort when N < 2.
FareyWalk walk_to(const Slope& m);

std::string turn_word(const FareyWalk& w);

}  // namespace canon

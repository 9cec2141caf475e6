#include "canon/farey.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "canon/errors.hpp"

namespace canon {

namespace {

std::int64_t cross(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }

Vec2 upper(Vec2 v) {
    if (v.y < 0 || (v.y == 0 && v.x < 0)) return {-v.x, -v.y};
    return v;
}

// Strict angular order on the projective line, angles in [0, pi).
bool before(const Vec2& u, const Vec2& v) { return cross(u, v) > 0; }

bool strictly_between(const Vec2& a, const Vec2& m, const Vec2& b) {
    if (before(a, b)) return before(a, m) && before(m, b);
    return before(a, m) || before(m, b);
}

std::array<Slope, 3> ccw_sorted(std::array<Slope, 3> s) {
    std::sort(s.begin(), s.end(), [](const Slope& a, const Slope& b) {
        return before(direction(a), direction(b));
    });
    return s;
}

}  // namespace

Slope reduce(std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) throw Error(Errc::ZeroSlopePair, "0/0 is not a slope");
    std::int64_t g = std::gcd(p < 0 ? -p : p, q < 0 ? -q : q);
    p /= g;
    q /= g;
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (q == 0) p = 1;
    return {p, q};
}

Slope parse_slope(const std::string& text) {
    auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            std::int64_t p = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return reduce(p, 1);
        }
        std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        std::int64_t p = std::stoll(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        std::int64_t q = std::stoll(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return reduce(p, q);
    } catch (const std::logic_error&) {
        throw Error(Errc::ParseError, "cannot parse slope '" + text + "'");
    }
}

std::string to_string(const Slope& s) { return std::to_string(s.p) + "/" + std::to_string(s.q); }

std::int64_t intersection_number(const Slope& a, const Slope& b) {
    std::int64_t d = a.p * b.q - a.q * b.p;
    return d < 0 ? -d : d;
}

int sign(const Slope& s) {
    if (s.q == 0 || s.p == 0) return 0;
    return s.p > 0 ? 1 : -1;
}

bool is_infinity(const Slope& s) { return s.q == 0; }

Vec2 direction(const Slope& s) { return upper({s.q, s.p}); }

Slope slope_of(const Vec2& v) { return reduce(v.y, v.x); }

bool FareyTriangle::contains(const Slope& s) const {
    return std::find(slopes.begin(), slopes.end(), s) != slopes.end();
}

bool FareyTriangle::same_as(const FareyTriangle& other) const {
    return std::all_of(slopes.begin(), slopes.end(), [&](const Slope& s) { return other.contains(s); });
}

Slope FareyWalk::dropped(int i) const {
    for (const auto& s : triangles.at(i).slopes)
        if (!triangles.at(i + 1).contains(s)) return s;
    throw std::logic_error("consecutive triangles do not differ");
}

Slope FareyWalk::added(int i) const {
    for (const auto& s : triangles.at(i + 1).slopes)
        if (!triangles.at(i).contains(s)) return s;
    throw std::logic_error("consecutive triangles do not differ");
}

FareyTriangle initial_triangle(int diagonal_sign) {
    return {{Slope{0, 1}, Slope{1, 0}, Slope{diagonal_sign >= 0 ? 1 : -1, 1}}};
}

FareyWalk walk_from(const FareyTriangle& start, const Slope& m) {
    FareyWalk w;
    w.target = m;
    w.triangles.push_back(start);
    const Vec2 dm = direction(m);
    // Edge crossed into the current triangle, to read off turns.
    std::array<Slope, 2> entry{};
    bool have_entry = false;
    while (!w.triangles.back().contains(m)) {
        auto s = ccw_sorted(w.triangles.back().slopes);
        int k = 0;
        for (; k < 3; ++k)
            if (strictly_between(direction(s[k]), dm, direction(s[(k + 1) % 3]))) break;
        if (k == 3) throw std::logic_error("slope not located in any arc");
        const Slope& a = s[k];
        const Slope& b = s[(k + 1) % 3];
        Vec2 da = direction(a), db = direction(b);
        Vec2 plus = upper({da.x + db.x, da.y + db.y});
        Vec2 minus = upper({da.x - db.x, da.y - db.y});
        Vec2 nv = strictly_between(da, plus, db) ? plus : minus;
        Slope n = slope_of(nv);

        if (have_entry) {
            // Pivot is the vertex of the exit edge that was on the entry edge.
            const auto& cur = w.triangles.back();
            auto order = ccw_sorted(cur.slopes);
            Slope entered_new;
            for (const auto& t : cur.slopes)
                if (!(t == entry[0]) && !(t == entry[1])) entered_new = t;
            Slope pivot = (a == entered_new) ? b : a;
            int idx = 0;
            while (!(order[idx] == entered_new)) ++idx;
            Slope after_new = order[(idx + 1) % 3];
            w.turns.push_back(pivot == after_new ? Turn::L : Turn::R);
        }
        entry = {a, b};
        have_entry = true;
        w.triangles.push_back(FareyTriangle{{a, b, n}});
        if (w.triangles.size() > 100000) throw std::logic_error("runaway Farey walk");
    }
    return w;
}

FareyWalk walk_to(const Slope& m) {
    if (is_infinity(m) || m.p == 0)
        throw Error(Errc::SlopeTooShort, to_string(m) + " lies in the initial triangle");
    FareyWalk w = walk_from(initial_triangle(sign(m)), m);
    if (w.length() < 2)
        throw Error(Errc::SlopeTooShort,
                    to_string(m) + " gives a walk of length " + std::to_string(w.length()));
    return w;
}

std::string turn_word(const FareyWalk& w) {
    std::string out;
    for (Turn t : w.turns) out.push_back(t == Turn::L ? 'L' : 'R');
    return out;
}

}  // namespace canon

#include "canon/build.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "canon/errors.hpp"

namespace canon {

const char* diagonal_name(DiagonalChoice d) {
    switch (d) {
        case DiagonalChoice::Auto: return "auto";
        case DiagonalChoice::Positive: return "positive";
        case DiagonalChoice::Negative: return "negative";
    }
    return "?";
}

const char* variant_name(LinkVariant v) {
    switch (v) {
        case LinkVariant::Plain: return "plain";
        case LinkVariant::HalfTwist1: return "half_twist_1";
        case LinkVariant::HalfTwist2: return "half_twist_2";
        case LinkVariant::Both: return "both";
    }
    return "?";
}

const char* basis_name(SlopeBasis b) {
    return b == SlopeBasis::Internal ? "internal" : "meridian-longitude";
}

Sublattice cusp_lattice(LinkVariant v, int circle) {
    bool twisted = v == LinkVariant::Both || (circle == 0 && v == LinkVariant::HalfTwist1) ||
                   (circle == 1 && v == LinkVariant::HalfTwist2);
    return twisted ? kTwistedCover : kPlainCover;
}

Pt meridian_vector(const Slope& m, const Sublattice& cusp) {
    Pt mu = cusp.b ? Pt{1, 1} : Pt{0, 1};
    const Pt lambda{2, 0};
    return {m.p * mu.x + m.q * lambda.x, m.p * mu.y + m.q * lambda.y};
}

Pt internal_vector(const Slope& r, const Sublattice& cusp) {
    Vec2 d = direction(r);
    Pt w{d.x, d.y};
    return cusp.contains(w) ? w : Pt{2 * w.x, 2 * w.y};
}

Slope meridian_slope(const Pt& v, const Sublattice& cusp) {
    if (!cusp.contains(v)) throw Error(Errc::Precondition, "vector is not in the cusp lattice");
    const std::int64_t p = v.y, mx = cusp.b ? 1 : 0;
    return reduce(p, (v.x - p * mx) / 2);
}

Slope filling_slope(const Slope& m, SlopeBasis basis, const Sublattice& cusp) {
    if (basis == SlopeBasis::MeridianLongitude) return m;
    return meridian_slope(internal_vector(m, cusp), cusp);
}

namespace {

std::int64_t det(const Pt& u, const Pt& v) { return u.x * v.y - u.y * v.x; }

Pt as_pt(const Slope& s) {
    Vec2 d = direction(s);
    return {d.x, d.y};
}

Slope slope_between(const Pt& a, const Pt& b) { return reduce(b.y - a.y, b.x - a.x); }

bool parallel(const Pt& u, const Slope& s) { return det(u, as_pt(s)) == 0; }

// x, y spanning the slopes a, b with det(x, y) = 1 and x + y of slope w.
std::pair<Pt, Pt> frame(const Slope& a, const Slope& b, const Slope& w) {
    const Pt A = as_pt(a), B = as_pt(b), W = as_pt(w);
    const Pt cand[4] = {A, -A, B, -B};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if ((i < 2) == (j < 2)) continue;
            const Pt x = cand[i], y = cand[j];
            if (det(x, y) != 1) continue;
            const Pt s = x + y;
            if (s == W || s == -W) return {x, y};
        }
    throw std::logic_error("slopes do not form a Farey triangle");
}

// Surface triangle of the current layer, counterclockwise.
struct Face {
    std::array<Pt, 3> c;
    int tet = -1;
    int face = -1;
    std::array<int, 3> v{};
};

Perm face_perm(int f_from, const std::array<int, 3>& from, int f_to, const std::array<int, 3>& to) {
    Perm p{};
    p[f_from] = static_cast<std::uint8_t>(f_to);
    for (int i = 0; i < 3; ++i) p[from[i]] = static_cast<std::uint8_t>(to[i]);
    return p;
}

class Layering {
public:
    Layering(Triangulation& tri, const Sublattice& lattice) : tri_(tri), lat_(lattice) {}

    void start(const FareyTriangle& t0) {
        auto [x, y] = frame(t0.slopes[0], t0.slopes[1], t0.slopes[2]);
        for (const Pt& o : origins()) {
            faces_.push_back({{o, o + x, o + x + y}});
            faces_.push_back({{o, o + x + y, o + y}});
        }
    }

    void layer(const FareyTriangle& tri, const Slope& dropped, int index) {
        std::array<Slope, 2> keep{};
        int k = 0;
        for (const auto& s : tri.slopes)
            if (!(s == dropped)) keep[k++] = s;
        auto [x, y] = frame(keep[0], keep[1], dropped);
        std::vector<Face> next;
        std::vector<int> made;
        for (const Pt& P : origins()) {
            int t = tri_.add_tet();
            TetInfo info;
            info.torus = torus_;
            info.layer = index;
            info.lift = lat_.coset(P);
            const std::array<Pt, 4> pos{P, P + x, P + x + y, P + y};
            for (int v = 0; v < 4; ++v) info.puncture[v] = lat_.coset(pos[v]);
            info.face_kind.fill(FaceKind::Interior);
            tri_.info.push_back(info);
            attach(t, 3, {0, 1, 2}, {pos[0], pos[1], pos[2]});
            attach(t, 1, {0, 2, 3}, {pos[0], pos[2], pos[3]});
            next.push_back({{pos[0], pos[1], pos[3]}, t, 2, {0, 1, 3}});
            next.push_back({{pos[1], pos[2], pos[3]}, t, 0, {1, 2, 3}});
            made.push_back(t);
        }
        if (!faces_.empty()) throw std::logic_error("layer left surface faces uncovered");
        if (made.size() == 2) {
            tri_.info[made[0]].partner = made[1];
            tri_.info[made[1]].partner = made[0];
        }
        faces_ = std::move(next);
    }

    // Identify the two triangles on either side of each edge of slope m.
    void fold(const Slope& m) {
        std::vector<bool> done(faces_.size(), false);
        for (std::size_t i = 0; i < faces_.size(); ++i) {
            if (done[i]) continue;
            const Face& s = faces_[i];
            int a = -1;
            for (int j = 0; j < 3; ++j)
                if (parallel(s.c[(j + 2) % 3] - s.c[(j + 1) % 3], m)) a = j;
            if (a < 0) throw std::logic_error("fold slope missing from surface triangle");
            const int j1 = (a + 1) % 3, j2 = (a + 2) % 3;
            const Pt far = s.c[j1] + s.c[j2] - s.c[a];
            // Images of corners a, j1, j2 under the half turn about the side's midpoint.
            const std::array<Pt, 3> img{far, s.c[j2], s.c[j1]};
            bool found = false;
            for (std::size_t k = 0; k < faces_.size() && !found; ++k) {
                if (k == i || done[k]) continue;
                auto rot = match_rotation(faces_[k].c, img);
                if (!rot) continue;
                const Face& o = faces_[k];
                // s.c[a] sits at img[0] = o.c[rot], and so on; the fold fixes the shared side.
                std::array<int, 3> from{s.v[a], s.v[j1], s.v[j2]};
                std::array<int, 3> to{o.v[(*rot) % 3], o.v[(*rot + 2) % 3], o.v[(*rot + 1) % 3]};
                tri_.glue(s.tet, s.face, o.tet, face_perm(s.face, from, o.face, to));
                mark_core(s.tet, s.face);
                mark_core(o.tet, o.face);
                done[i] = done[k] = true;
                found = true;
            }
            if (!found) throw std::logic_error("fold partner not found");
        }
        faces_.clear();
    }

    // Close four surface triangles with one tetrahedron whose two free edges fold onto r.
    void core(const Slope& r, int index) {
        if (faces_.size() != 4) throw std::logic_error("core tetrahedron needs four surface faces");
        const int t = tri_.add_tet();
        TetInfo info;
        info.torus = torus_;
        info.layer = index;
        info.core = true;
        info.face_kind.fill(FaceKind::Core);
        tri_.info.push_back(info);

        std::array<int, 4> assign{0, 1, 2, 3};
        do {
            std::array<std::array<int, 3>, 4> corner_of{};  // per face, corner index for each of its vertices
            if (search_corners(t, r, assign, 0, corner_of)) return;
        } while (std::next_permutation(assign.begin(), assign.end()));
        throw Error(Errc::GluingMismatch, "no core tetrahedron fits the surface");
    }

    void set_torus(int k) { torus_ = k; }
    std::size_t open_faces() const { return faces_.size(); }

private:
    std::vector<Pt> origins() const {
        if (lat_.index() == 1) return {Pt{0, 0}};
        return {Pt{0, 0}, lat_.odd_representative()};
    }

    // Rotation k with have[(i + k) % 3] = want[i] + z for some z in the lattice.
    std::optional<int> match_rotation(const std::array<Pt, 3>& have, const std::array<Pt, 3>& want) const {
        for (int k = 0; k < 3; ++k) {
            const Pt z = have[k] - want[0];
            if (!lat_.contains(z)) continue;
            if (have[(1 + k) % 3] - want[1] == z && have[(2 + k) % 3] - want[2] == z) return k;
        }
        return std::nullopt;
    }

    void mark_core(int t, int f) { tri_.info[t].face_kind[f] = FaceKind::Core; }

    void attach(int t, int f, const std::array<int, 3>& verts, const std::array<Pt, 3>& pos) {
        for (auto it = faces_.begin(); it != faces_.end(); ++it) {
            auto rot = match_rotation(it->c, pos);
            if (!rot) continue;
            std::array<int, 3> to{};
            for (int i = 0; i < 3; ++i) to[i] = (i + *rot) % 3;
            if (it->tet < 0) {
                BoundaryFace bf;
                bf.torus = torus_;
                bf.tet = t;
                bf.face = f;
                bf.corner = it->c;
                for (int i = 0; i < 3; ++i) bf.vertex[to[i]] = verts[i];
                for (int j = 0; j < 3; ++j)
                    bf.side_slope[j] = slope_between(bf.corner[(j + 1) % 3], bf.corner[(j + 2) % 3]);
                tri_.boundary.push_back(bf);
                tri_.info[t].face_kind[f] = FaceKind::Boundary;
            } else {
                std::array<int, 3> tv{};
                for (int i = 0; i < 3; ++i) tv[i] = it->v[to[i]];
                tri_.glue(t, f, it->tet, face_perm(f, verts, it->face, tv));
            }
            faces_.erase(it);
            return;
        }
        throw std::logic_error("layered face has no partner on the surface");
    }

    std::array<int, 3> face_vertices(int f) const {
        std::array<int, 3> out{};
        int k = 0;
        for (int v = 0; v < 4; ++v)
            if (v != f) out[k++] = v;
        return out;
    }

    bool search_corners(int t, const Slope& r, const std::array<int, 4>& assign, int f,
                        std::array<std::array<int, 3>, 4>& corner_of) {
        if (f == 4) return try_core(t, r, assign, corner_of);
        std::array<int, 3> bij{0, 1, 2};
        do {
            corner_of[f] = bij;
            const Face& s = faces_[assign[f]];
            const auto fv = face_vertices(f);
            std::array<int, 3> to{};
            for (int i = 0; i < 3; ++i) to[i] = s.v[bij[i]];
            if (parity(face_perm(f, fv, s.face, to)) == 0) continue;
            if (search_corners(t, r, assign, f + 1, corner_of)) return true;
        } while (std::next_permutation(bij.begin(), bij.end()));
        return false;
    }

    Pt position(const std::array<int, 4>& assign, const std::array<std::array<int, 3>, 4>& corner_of,
                int f, int v) const {
        const auto fv = face_vertices(f);
        for (int i = 0; i < 3; ++i)
            if (fv[i] == v) return faces_[assign[f]].c[corner_of[f][i]];
        throw std::logic_error("vertex not on face");
    }

    bool try_core(int t, const Slope& r, const std::array<int, 4>& assign,
                  const std::array<std::array<int, 3>, 4>& corner_of) {
        std::array<int, 4> punct{-1, -1, -1, -1};
        for (int v = 0; v < 4; ++v)
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                int c = lat_.coset(position(assign, corner_of, f, v));
                if (punct[v] < 0) punct[v] = c;
                else if (punct[v] != c) return false;
            }
        std::vector<int> r_edges;
        for (int e = 0; e < 6; ++e) {
            const int i = kEdgeVertices[e][0], j = kEdgeVertices[e][1];
            int k = -1, l = -1;
            for (int v = 0; v < 4; ++v)
                if (v != i && v != j) (k < 0 ? k : l) = v;
            const Pt ak = position(assign, corner_of, k, i), bk = position(assign, corner_of, k, j);
            const Pt al = position(assign, corner_of, l, i), bl = position(assign, corner_of, l, j);
            const Pt dk = bk - ak, dl = bl - al;
            if (lat_.contains(al - ak) && dk == dl) continue;
            // The two r-edges form the meridian path through a puncture; fold it there.
            if (!(dk == -dl) || !parallel(dk, r) || lat_.contains(bl - ak)) return false;
            r_edges.push_back(e);
        }
        if (r_edges.size() != 2 || r_edges[0] + r_edges[1] != 5) return false;

        tri_.info[t].puncture = punct;
        for (int f = 0; f < 4; ++f) {
            const Face& s = faces_[assign[f]];
            const auto fv = face_vertices(f);
            std::array<int, 3> to{};
            for (int i = 0; i < 3; ++i) to[i] = s.v[corner_of[f][i]];
            tri_.glue(t, f, s.tet, face_perm(f, fv, s.face, to));
            mark_core(s.tet, s.face);
        }
        faces_.clear();
        return true;
    }

    Triangulation& tri_;
    Sublattice lat_;
    int torus_ = 0;
    std::vector<Face> faces_;
};

int natural_length(const Slope& r) { return walk_to(r).length(); }

bool excluded_core(const Slope& r) {
    return is_infinity(r) || r.p == 0 || (r.q == 1 && (r.p == 1 || r.p == -1));
}

Slope slope_of_pt(const Pt& v) { return reduce(v.y, v.x); }

Pt primitive(const Pt& v) {
    std::int64_t g = std::gcd(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
    if (g == 0) throw Error(Errc::ZeroSlopePair, "zero meridian vector");
    return {v.x / g, v.y / g};
}

}  // namespace

Triangulation build_dlst(const Sublattice& lattice, const Pt& meridian, int diagonal) {
    if (!lattice.contains(meridian))
        throw Error(Errc::ParityError, "meridian lift is not in the cusp lattice");
    const Pt w = primitive(meridian);
    const Slope r = slope_of_pt(w);
    const bool folded = w == meridian || w == -meridian;
    if (!folded && !(meridian == Pt{2 * w.x, 2 * w.y}) && !(meridian == Pt{-2 * w.x, -2 * w.y}))
        throw Error(Errc::ParityError, "meridian lift is not primitive in the cusp lattice");

    TorusInfo ti;
    ti.lattice = lattice;
    ti.meridian = meridian;
    ti.core_slope = r;
    if (folded) {
        ti.kind = lattice.index() == 1 ? TorusKind::Lst : TorusKind::DoubleCover;
        natural_length(r);  // throws SlopeTooShort
    } else {
        ti.kind = TorusKind::SideBySide;
        if (excluded_core(r))
            throw Error(Errc::CoreSlopeExcluded, "core slope " + to_string(r) + " lies in the initial triangle");
    }
    ti.diagonal = diagonal == 0 ? sign(r) : (diagonal > 0 ? 1 : -1);
    ti.walk = walk_from(initial_triangle(ti.diagonal), r);

    Triangulation tri;
    Layering lay(tri, lattice);
    lay.set_torus(0);
    lay.start(ti.walk.triangles[0]);
    const int n = ti.walk.length();
    if (folded) {
        for (int i = 0; i + 1 < n; ++i) lay.layer(ti.walk.triangles[i], ti.walk.dropped(i), i);
        lay.fold(ti.walk.dropped(n - 1));
    } else {
        for (int i = 0; i < n; ++i) lay.layer(ti.walk.triangles[i], ti.walk.dropped(i), i);
        lay.core(r, n);
    }
    ti.first_tet = 0;
    ti.tet_count = tri.size();
    tri.tori.push_back(ti);
    return tri;
}

Triangulation build_lst(const Slope& m) {
    Vec2 d = direction(m);
    return build_dlst(kSquareLattice, {d.x, d.y}, 0);
}

Triangulation build_double_cover(const Slope& m, int diagonal) {
    if (m.p % 2 == 0) throw Error(Errc::ParityError, to_string(m) + " has even numerator");
    return build_dlst(kPlainCover, meridian_vector(m, kPlainCover), diagonal);
}

Triangulation build_side_by_side(const Slope& m, int diagonal) {
    if (m.p % 2 != 0) throw Error(Errc::ParityError, to_string(m) + " has odd numerator");
    return build_dlst(kPlainCover, meridian_vector(m, kPlainCover), diagonal);
}

namespace {

// Reflection of the square picture identifying the two solid tori's boundaries.
Pt reflect(const Pt& p, bool right) {
    if (right) return {p.y + 1, p.x - 1};
    return {1 - p.y, 1 - p.x};
}

bool diagonal_first(const TorusInfo& t) {
    return t.walk.length() > 0 && sign(t.walk.dropped(0)) == t.diagonal && t.walk.dropped(0).q == 1 &&
           (t.walk.dropped(0).p == 1 || t.walk.dropped(0).p == -1);
}

}  // namespace

Triangulation assemble_from_vectors(const Sublattice& l1, const Pt& v1, const Sublattice& l2,
                                    const Pt& v2, int diagonal) {
    Triangulation a = build_dlst(l1, v1, diagonal);
    Triangulation b = build_dlst(l2, v2, diagonal);
    if (diagonal_first(a.tori[0]) && diagonal_first(b.tori[0]))
        throw Error(Errc::GluingMismatch, "both solid tori layer across the diagonal first");

    Triangulation m = a;
    const int off = a.size();
    for (const auto& t : b.tets) {
        Tetrahedron u = t;
        for (auto& n : u.neighbor)
            if (n >= 0) n += off;
        m.tets.push_back(u);
    }
    for (auto info : b.info) {
        info.torus = 1;
        if (info.partner >= 0) info.partner += off;
        m.info.push_back(info);
    }
    TorusInfo tb = b.tori[0];
    tb.first_tet = off;
    m.tori.push_back(tb);
    std::vector<BoundaryFace> second;
    for (auto bf : b.boundary) {
        bf.torus = 1;
        bf.tet += off;
        second.push_back(bf);
        m.boundary.push_back(bf);
    }

    std::vector<bool> used(second.size(), false);
    for (const auto& bf : a.boundary) {
        std::int64_t mx = std::min({bf.corner[0].x, bf.corner[1].x, bf.corner[2].x});
        std::int64_t my = std::min({bf.corner[0].y, bf.corner[1].y, bf.corner[2].y});
        const bool right = l1.coset({mx, my}) == 1;
        const Pt shift = Pt{right ? 1 : 0, 0} - Pt{mx, my};
        std::array<Pt, 3> img{};
        for (int i = 0; i < 3; ++i) img[i] = reflect(bf.corner[i] + shift, right);

        bool found = false;
        for (std::size_t k = 0; k < second.size() && !found; ++k) {
            if (used[k]) continue;
            const auto& o = second[k];
            std::array<int, 3> sigma{0, 1, 2};
            do {
                const Pt z = o.corner[sigma[0]] - img[0];
                if (!l2.contains(z)) continue;
                if (!(o.corner[sigma[1]] - img[1] == z) || !(o.corner[sigma[2]] - img[2] == z)) continue;
                std::array<int, 3> from{}, to{};
                for (int i = 0; i < 3; ++i) {
                    from[i] = bf.vertex[i];
                    to[i] = o.vertex[sigma[i]];
                }
                m.glue(bf.tet, bf.face, o.tet, face_perm(bf.face, from, o.face, to));
                used[k] = true;
                found = true;
                break;
            } while (std::next_permutation(sigma.begin(), sigma.end()));
        }
        if (!found) throw Error(Errc::GluingMismatch, "boundary triangle has no mirror partner");
    }
    m.closed = true;
    auto rep = validate(m);
    if (!rep.valid) {
        std::string msg = "assembled triangulation is invalid";
        for (const auto& v : rep.violations) msg += "; " + v;
        throw Error(Errc::InvalidTriangulation, msg);
    }
    return m;
}

Triangulation assemble_filled(const Slope& m1, const Slope& m2, DiagonalChoice diag, LinkVariant variant,
                              SlopeBasis basis) {
    const Sublattice l1 = cusp_lattice(variant, 0), l2 = cusp_lattice(variant, 1);
    auto lift = [&](const Slope& m, const Sublattice& l) {
        return basis == SlopeBasis::Internal ? internal_vector(m, l) : meridian_vector(m, l);
    };
    const Pt v1 = lift(m1, l1), v2 = lift(m2, l2);
    if (diag == DiagonalChoice::Positive) return assemble_from_vectors(l1, v1, l2, v2, 1);
    if (diag == DiagonalChoice::Negative) return assemble_from_vectors(l1, v1, l2, v2, -1);
    try {
        return assemble_from_vectors(l1, v1, l2, v2, -1);
    } catch (const Error& e) {
        if (e.code() != Errc::GluingMismatch) throw;
    }
    return assemble_from_vectors(l1, v1, l2, v2, 1);
}

}  // namespace canon

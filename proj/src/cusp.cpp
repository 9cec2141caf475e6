#include "canon/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>

#include "canon/errors.hpp"

namespace canon {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(const Complex& u, const Complex& v) { return (std::conj(u) * v).imag(); }

// Projective point; infinity is (1, 0).
Eigen::Vector2cd proj(const std::optional<Complex>& p) {
    if (!p) return {1.0, 0.0};
    return {*p, 1.0};
}

// Sends a, b, c to 0, 1, infinity.
Mobius to_standard(const std::array<std::optional<Complex>, 3>& pts) {
    const Eigen::Vector2cd a = proj(pts[0]), b = proj(pts[1]), c = proj(pts[2]);
    auto L = [](const Eigen::Vector2cd& x, const Eigen::Vector2cd& y) { return x(0) * y(1) - x(1) * y(0); };
    const Complex lcb = L(b, c), lab = L(b, a);
    Mobius m;
    m << lcb * a(1), -lcb * a(0), lab * c(1), -lab * c(0);
    return m;
}

// Third corner of a cusp triangle from two placed corners.
Complex third_corner(const ShapeAssignment& s, int tet, int v, int w1, const Complex& p1, int w2, const Complex& p2) {
    const auto& ord = cusp_corner_order(v);
    int k = 1;
    while (ord[k] != w1) ++k;
    if (ord[1 + (k % 3)] == w2) return p1 + corner_shape(s, tet, v, w1) * (p2 - p1);
    return p2 + corner_shape(s, tet, v, w2) * (p1 - p2);
}

struct Placement {
    std::array<Complex, 4> pos;
};

// Positions of triangle y = (u, g[v]) developed across face f of x = (tet, v).
std::array<Complex, 4> develop_across(const Triangulation& t, const ShapeAssignment& s, int tet, int v, int f,
                                      const std::array<Complex, 4>& px) {
    const int u = t.tets[tet].neighbor[f];
    const Perm& g = t.tets[tet].gluing[f];
    std::array<int, 2> shared{};
    int k = 0;
    for (int w = 0; w < 4; ++w)
        if (w != v && w != f) shared[k++] = w;
    std::array<Complex, 4> out{};
    out[g[shared[0]]] = px[shared[0]];
    out[g[shared[1]]] = px[shared[1]];
    out[g[f]] = third_corner(s, u, g[v], g[shared[0]], px[shared[0]], g[shared[1]], px[shared[1]]);
    return out;
}

double triangle_area(const std::array<Complex, 4>& p, int v) {
    const auto& ord = cusp_corner_order(v);
    return 0.5 * cross(p[ord[2]] - p[ord[1]], p[ord[3]] - p[ord[1]]);
}

// Basis of the additive group generated by planar vectors.
std::array<Complex, 2> lattice_basis(const std::vector<Complex>& gens) {
    std::vector<Complex> g;
    double scale = 0;
    for (const auto& v : gens) scale = std::max(scale, std::abs(v));
    for (const auto& v : gens)
        if (std::abs(v) > 1e-9 * scale) g.push_back(v);
    if (g.empty()) throw Error(Errc::DegenerateShape, "cusp has no translations");
    Complex b1 = *std::min_element(g.begin(), g.end(), [](auto& x, auto& y) { return std::abs(x) < std::abs(y); });
    Complex b2 = b1;
    double best = 0;
    for (const auto& v : g) {
        double c = std::abs(cross(b1, v)) / std::abs(v);
        if (c > best) {
            best = c;
            b2 = v;
        }
    }
    if (best < 1e-9 * std::abs(b1)) throw Error(Errc::DegenerateShape, "cusp translations are collinear");
    const double det = cross(b1, b2);
    std::vector<std::array<double, 2>> coords;
    for (const auto& v : g) coords.push_back({cross(v, b2) / det, cross(b1, v) / det});
    std::int64_t den = 0;
    for (std::int64_t D = 1; D <= 720 && !den; ++D) {
        bool ok = true;
        for (auto& c : coords)
            for (double x : c)
                if (std::abs(D * x - std::round(D * x)) > 1e-6) ok = false;
        if (ok) den = D;
    }
    if (!den) throw Error(Errc::DegenerateShape, "cusp translations are not commensurable");
    // Integer row reduction in the (b1, b2) coordinates scaled by den.
    std::vector<std::array<std::int64_t, 2>> iv;
    for (auto& c : coords) iv.push_back({std::llround(den * c[0]), std::llround(den * c[1])});
    std::array<std::int64_t, 2> low{0, 0};
    for (;;) {
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < iv.size(); ++i)
            if (iv[i][1] != 0) nz.push_back(i);
        if (nz.size() <= 1) {
            if (nz.size() == 1) low = iv[nz[0]];
            break;
        }
        std::sort(nz.begin(), nz.end(), [&](auto i, auto j) { return std::llabs(iv[i][1]) < std::llabs(iv[j][1]); });
        const auto& piv = iv[nz[0]];
        for (std::size_t k = 1; k < nz.size(); ++k) {
            auto& w = iv[nz[k]];
            std::int64_t q = w[1] / piv[1];
            w[0] -= q * piv[0];
            w[1] -= q * piv[1];
        }
    }
    std::int64_t h = 0;
    for (auto& w : iv)
        if (w[1] == 0) h = std::gcd(h, std::llabs(w[0]));
    auto to_c = [&](std::int64_t x, std::int64_t y) {
        return (static_cast<double>(x) * b1 + static_cast<double>(y) * b2) / static_cast<double>(den);
    };
    Complex e1 = to_c(h, 0), e2 = to_c(low[0], low[1]);
    // Lagrange reduction.
    for (int it = 0; it < 100; ++it) {
        if (std::abs(e1) > std::abs(e2)) std::swap(e1, e2);
        const double mu = std::round((std::conj(e1) * e2).real() / std::norm(e1));
        if (mu == 0) break;
        e2 -= mu * e1;
    }
    if (cross(e1, e2) < 0) e2 = -e2;
    return {e1, e2};
}

// Strict convexity and the number of straight vertices of a closed polygon.
std::pair<bool, int> classify_polygon(const std::array<Complex, 6>& v) {
    double size = 0;
    for (const auto& p : v) size = std::max(size, std::abs(p - v[0]));
    const double eps = 1e-9 * size * size;
    int pos = 0, neg = 0, flat = 0;
    for (int i = 0; i < 6; ++i) {
        const double tr = cross(v[(i + 1) % 6] - v[i], v[(i + 2) % 6] - v[(i + 1) % 6]);
        if (tr > eps) ++pos;
        else if (tr < -eps) ++neg;
        else ++flat;
    }
    return {flat == 0 && (pos == 0 || neg == 0), flat};
}

}  // namespace

Complex mobius_apply(const Mobius& g, const Complex& u) { return (g(0, 0) * u + g(0, 1)) / (g(1, 0) * u + g(1, 1)); }

bool mobius_sends_to_infinity(const Mobius& g, const Complex& u) {
    return std::abs(g(1, 0) * u + g(1, 1)) <= 1e-14 * (std::abs(g(1, 0) * u) + std::abs(g(1, 1)) + 1e-300);
}

Mobius mobius_from_points(const std::array<std::optional<Complex>, 3>& from,
                          const std::array<std::optional<Complex>, 3>& to) {
    return to_standard(to).inverse() * to_standard(from);
}

Horoball mobius_image_horoball(const Mobius& g0, const Horoball& h) {
    Complex det = g0.determinant();
    if (std::abs(det) == 0) throw Error(Errc::Precondition, "singular Mobius transformation");
    Mobius g = g0 / std::sqrt(det);
    double height = h.size;
    if (!h.at_infinity) {
        // s^{-1}(u) = zeta - 1/u carries the height 1/d horoball at infinity onto h.
        Mobius sinv;
        sinv << h.center, -1.0, 1.0, 0.0;
        g = g * sinv;
        height = 1.0 / h.size;
    }
    Horoball out;
    const Complex gamma = g(1, 0);
    if (std::abs(gamma) < 1e-14 * g.cwiseAbs().maxCoeff()) {
        out.at_infinity = true;
        out.size = height * std::norm(g(0, 0));
        return out;
    }
    out.center = g(0, 0) / gamma;
    out.size = 1.0 / (height * std::norm(gamma));
    return out;
}

Complex corner_shape(const ShapeAssignment& s, int tet, int v, int w) {
    return shape_in_slot(s(tet), shape_slot(edge_index(v, w)));
}

int CuspDiagram::triangle_count(int cusp) const {
    return static_cast<int>(std::count(cusp_of.begin(), cusp_of.end(), cusp));
}

CuspDiagram develop_cusp(const Triangulation& t, const ShapeAssignment& s) {
    if (s.size() != t.size()) throw Error(Errc::Precondition, "shape count does not match the triangulation");
    for (int i = 0; i < s.size(); ++i)
        if (!(s(i).imag() > 0)) throw Error(Errc::DegenerateShape, "tetrahedron " + std::to_string(i) + " is not positively oriented");
    for (int i = 0; i < t.size(); ++i)
        for (int f = 0; f < 4; ++f)
            if (!t.glued(i, f)) throw Error(Errc::Precondition, "cusp development needs a closed triangulation");

    CuspDiagram d;
    d.tets = t.size();
    d.shape.assign(s.data(), s.data() + s.size());
    const auto vc = vertex_classes(t, &d.cusps);
    d.cusp_of.resize(4 * t.size());
    for (int i = 0; i < t.size(); ++i)
        for (int v = 0; v < 4; ++v) d.cusp_of[4 * i + v] = vc[i][v];
    d.corner.assign(4 * t.size(), {});
    std::vector<bool> placed(4 * t.size(), false);

    for (int c = 0; c < d.cusps; ++c) {
        int root = 0;
        while (d.cusp_of[root] != c) ++root;
        {
            const int tet = root / 4, v = root % 4;
            const auto& ord = cusp_corner_order(v);
            auto& p = d.corner[root];
            p[ord[1]] = 0;
            p[ord[2]] = 1;
            p[ord[3]] = corner_shape(s, tet, v, ord[1]);
            placed[root] = true;
        }
        std::vector<int> queue{root};
        std::vector<Complex> gens;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const int x = queue[q], tet = x / 4, v = x % 4;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const int u = t.tets[tet].neighbor[f];
                const int y = 4 * u + t.tets[tet].gluing[f][v];
                auto py = develop_across(t, s, tet, v, f, d.corner[x]);
                if (!placed[y]) {
                    d.corner[y] = py;
                    placed[y] = true;
                    queue.push_back(y);
                    continue;
                }
                // Already placed: the discrepancy is a deck translation.
                std::vector<Complex> diff;
                for (int w = 0; w < 4; ++w)
                    if (w != y % 4) diff.push_back(py[w] - d.corner[y][w]);
                const double tol = 1e-7 * (1 + std::abs(diff[0]));
                if (std::abs(diff[1] - diff[0]) > tol || std::abs(diff[2] - diff[0]) > tol)
                    throw Error(Errc::DegenerateShape, "cusp holonomy is not a translation");
                gens.push_back(diff[0]);
            }
        }
        double area = 0;
        for (int x : queue) {
            const double a = triangle_area(d.corner[x], x % 4);
            if (!(a > 0)) throw Error(Errc::DegenerateShape, "developed cusp triangle is not counterclockwise");
            area += a;
        }
        const double k = 1.0 / std::sqrt(area);
        for (int x : queue)
            for (auto& p : d.corner[x]) p *= k;
        for (auto& g : gens) g *= k;
        d.translation.push_back(lattice_basis(gens));
        d.area.push_back(1.0);
    }
    return d;
}

Hexagon hexagon_from_zeta(const Complex& zeta, const Complex& zeta_p) {
    Hexagon h;
    h.zeta = zeta;
    h.zeta_p = zeta_p;
    h.vertex = {-1.0, zeta, zeta_p, 1.0, -zeta, -zeta_p};
    h.a_vec = zeta + 1.0;
    h.b_vec = zeta_p - zeta;
    h.c_vec = 1.0 - zeta_p;
    h.a = std::abs(h.a_vec);
    h.b = std::abs(h.b_vec);
    h.c = std::abs(h.c_vec);
    h.B = std::arg(h.b_vec);
    if (h.B < 0) h.B += 2 * kPi;
    auto branch = [&](double raw) {
        double x = h.B + std::remainder(raw - h.B, 2 * kPi);
        if (std::abs(x) < 1e-12) {
            h.degenerate = true;
            x = 0;
        }
        return x;
    };
    h.A = branch(std::arg(h.a_vec));
    h.C = branch(std::arg(h.c_vec));
    h.angles_valid = h.B > 0 && h.B < kPi && h.A > h.B - kPi && h.A < h.B && h.C > h.B - kPi && h.C < h.B;
    h.convex = classify_polygon(h.vertex).first;
    return h;
}

Hexagon normalize_hexagon(const std::array<Complex, 6>& raw, int k, double tol) {
    Complex centre = 0;
    double size = 0;
    for (const auto& v : raw) centre += v / 6.0;
    for (const auto& v : raw) size = std::max(size, std::abs(v - centre));
    for (int i = 0; i < 3; ++i)
        if (std::abs(raw[i] + raw[i + 3] - 2.0 * centre) > tol * std::max(1.0, size))
            throw Error(Errc::AsymmetricHexagon, "vertex " + std::to_string(i) + " has no opposite partner");
    k = ((k % 6) + 6) % 6;
    const Complex p = raw[k], q = raw[(k + 3) % 6];
    if (std::abs(q - p) < tol * std::max(1.0, size)) throw Error(Errc::DegenerateHexagon, "designated pair coincides");
    auto g = [&](const Complex& u) { return (2.0 * u - (p + q)) / (q - p); };
    return hexagon_from_zeta(g(raw[(k + 1) % 6]), g(raw[(k + 2) % 6]));
}

std::array<Horoball, 6> horoball_diameters(const Hexagon& h) {
    const double ac = h.a * h.c, ab = h.a * h.b, bc = h.b * h.c;
    const std::array<double, 6> d{ac, ab, bc, ac, ab, bc};
    std::array<Horoball, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = {h.vertex[i], false, d[i]};
    return out;
}

std::vector<TilingHexagon> extract_hexagons(const Triangulation& t, const CuspDiagram& d) {
    if (t.tori.size() != 2 || !t.closed || !t.has_metadata())
        throw Error(Errc::HexagonExtractionFailed, "need an assembled manifold with two solid tori");
    ShapeAssignment s(static_cast<Eigen::Index>(d.shape.size()));
    for (std::size_t i = 0; i < d.shape.size(); ++i) s(i) = d.shape[i];
    // Undo the unit-area scaling so local development matches the stored positions.
    std::vector<TilingHexagon> out;
    for (int k = 0; k < 2; ++k) {
        const Sublattice lat = t.tori[k].lattice;
        for (int p = 0; p < lat.index(); ++p) {
            TilingHexagon hx;
            hx.torus = k;
            hx.puncture = p;
            int start = -1;
            for (const auto& bf : t.boundary) {
                if (bf.torus != k) continue;
                for (int i = 0; i < 3 && start < 0; ++i)
                    if (lat.coset(bf.corner[i]) == p) start = 4 * bf.tet + bf.vertex[i];
                if (start >= 0) break;
            }
            if (start < 0) throw Error(Errc::HexagonExtractionFailed, "puncture has no boundary corner");
            std::map<int, std::array<Complex, 4>> local;
            local[start] = d.corner[start];
            std::vector<int> queue{start};
            for (std::size_t q = 0; q < queue.size(); ++q) {
                const int x = queue[q], tet = x / 4, v = x % 4;
                for (int f = 0; f < 4; ++f) {
                    if (f == v || t.info[tet].face_kind[f] == FaceKind::Boundary) continue;
                    const int u = t.tets[tet].neighbor[f];
                    const int y = 4 * u + t.tets[tet].gluing[f][v];
                    if (local.count(y)) continue;
                    local[y] = develop_across(t, s, tet, v, f, local[x]);
                    queue.push_back(y);
                }
            }
            for (const auto& [x, pos] : local) {
                if (t.info[x / 4].torus != k || t.info[x / 4].puncture[x % 4] != p)
                    throw Error(Errc::HexagonExtractionFailed, "disc leaks out of its solid torus");
                hx.triangles.push_back(x);
                hx.local.push_back(pos);
            }
            std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Complex>> by_dir;
            for (const auto& bf : t.boundary) {
                if (bf.torus != k) continue;
                for (int i = 0; i < 3; ++i) {
                    if (lat.coset(bf.corner[i]) != p) continue;
                    const int x = 4 * bf.tet + bf.vertex[i];
                    auto it = local.find(x);
                    if (it == local.end()) throw Error(Errc::HexagonExtractionFailed, "boundary corner outside the disc");
                    for (int j = 0; j < 3; ++j) {
                        if (j == i) continue;
                        const Pt dir = bf.corner[j] - bf.corner[i];
                        by_dir[{dir.x, dir.y}].push_back(it->second[bf.vertex[j]]);
                    }
                }
            }
            if (by_dir.size() != 6) throw Error(Errc::HexagonExtractionFailed, "disc boundary has " + std::to_string(by_dir.size()) + " sides");
            std::vector<std::pair<Pt, Complex>> verts;
            for (const auto& [dir, pos] : by_dir) {
                for (const auto& q : pos)
                    if (std::abs(q - pos[0]) > 1e-8) throw Error(Errc::HexagonExtractionFailed, "disc development is inconsistent");
                verts.push_back({Pt{dir.first, dir.second}, pos[0]});
            }
            std::sort(verts.begin(), verts.end(), [](const auto& a, const auto& b) {
                return std::atan2(static_cast<double>(a.first.y), static_cast<double>(a.first.x)) <
                       std::atan2(static_cast<double>(b.first.y), static_cast<double>(b.first.x));
            });
            int designated = 0;
            for (int i = 0; i < 6; ++i) {
                hx.direction[i] = verts[i].first;
                hx.vertex[i] = verts[i].second;
                if (verts[i].first.x != 0 && verts[i].first.y != 0 && verts[i].first.x < 0) designated = i;
            }
            const auto shape = classify_polygon(hx.vertex);
            hx.convex = shape.first;
            hx.straight = shape.second;
            hx.normalized = normalize_hexagon(hx.vertex, designated, 1e-7);
            hx.normalized.convex = hx.convex;
            out.push_back(hx);
        }
    }
    if (out.size() != 4) throw Error(Errc::HexagonExtractionFailed, "expected four hexagons");
    return out;
}

std::vector<std::pair<int, int>> hexagon_adjacency(const Triangulation& t, const std::vector<TilingHexagon>& hex) {
    auto index_of = [&](int torus, int puncture) {
        for (std::size_t i = 0; i < hex.size(); ++i)
            if (hex[i].torus == torus && hex[i].puncture == puncture) return static_cast<int>(i);
        return -1;
    };
    std::vector<std::pair<int, int>> out;
    for (const auto& bf : t.boundary) {
        if (bf.torus != 0) continue;
        const int u = t.tets[bf.tet].neighbor[bf.face];
        const Perm& g = t.tets[bf.tet].gluing[bf.face];
        for (const auto& other : t.boundary) {
            if (other.tet != u || other.face != g[bf.face]) continue;
            for (int i = 0; i < 3; ++i) {
                int j = 0;
                while (other.vertex[j] != g[bf.vertex[i]]) ++j;
                out.push_back({index_of(0, t.tori[0].lattice.coset(bf.corner[i])),
                               index_of(1, t.tori[1].lattice.coset(other.corner[j]))});
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<Complex, double>> visible_horoballs(const CuspDiagram& d, int cusp) {
    std::vector<std::pair<Complex, double>> out;
    for (int x = 0; x < static_cast<int>(d.corner.size()); ++x) {
        if (d.cusp_of[x] != cusp) continue;
        const int tet = x / 4, a = x % 4;
        const auto& p = d.corner[x];
        for (int w = 0; w < 4; ++w) {
            if (w == a) continue;
            const int k = w == (a + 1) % 4 ? (a + 2) % 4 : (a + 1) % 4;
            const auto& q = d.corner[4 * tet + w];
            const double diam = std::abs(q[a] - q[k]) * std::abs(p[w] - p[k]);
            bool seen = false;
            for (const auto& [c, r] : out)
                if (std::abs(c - p[w]) < 1e-9 * (1 + std::abs(c))) seen = true;
            if (!seen) out.push_back({p[w], diam});
        }
    }
    return out;
}

std::string cusp_svg(const CuspDiagram& d, const std::vector<TilingHexagon>& hex,
                     const std::vector<std::pair<Complex, double>>& circles) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    auto grow = [&](const Complex& p) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    };
    for (std::size_t x = 0; x < d.corner.size(); ++x) {
        if (d.cusp_of[x] != 0) continue;
        for (int w = 0; w < 4; ++w)
            if (w != static_cast<int>(x % 4)) grow(d.corner[x][w]);
    }
    for (const auto& h : hex)
        for (const auto& v : h.vertex) grow(v);
    const double span = std::max(x1 - x0, y1 - y0) * 1.1 + 1e-12;
    const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
    auto X = [&](const Complex& p) { return 500 + 1000 * (p.real() - cx) / span; };
    auto Y = [&](const Complex& p) { return 500 - 1000 * (p.imag() - cy) / span; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
    out += "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    char buf[256];
    for (std::size_t x = 0; x < d.corner.size(); ++x) {
        if (d.cusp_of[x] != 0) continue;
        const auto& ord = cusp_corner_order(static_cast<int>(x % 4));
        const auto& p = d.corner[x];
        std::snprintf(buf, sizeof buf, "<polygon points=\"%.3f,%.3f %.3f,%.3f %.3f,%.3f\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.5\"/>\n",
                      X(p[ord[1]]), Y(p[ord[1]]), X(p[ord[2]]), Y(p[ord[2]]), X(p[ord[3]]), Y(p[ord[3]]));
        out += buf;
    }
    for (const auto& h : hex) {
        out += "<polygon points=\"";
        for (const auto& v : h.vertex) {
            std::snprintf(buf, sizeof buf, "%.3f,%.3f ", X(v), Y(v));
            out += buf;
        }
        out += h.convex ? "\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2.5\"/>\n"
                        : "\" fill=\"none\" stroke=\"#bf3f1f\" stroke-width=\"2.5\"/>\n";
    }
    for (const auto& [c, diam] : circles) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" stroke=\"#2f9f4f\" stroke-width=\"1\"/>\n",
                      X(c), Y(c), 500 * diam / span);
        out += buf;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace canon

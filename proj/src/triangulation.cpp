#include "canon/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "canon/errors.hpp"

namespace canon {

const std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < 6; ++e)
        if (kEdgeVertices[e][0] == a && kEdgeVertices[e][1] == b) return e;
    return -1;
}

Perm identity_perm() { return {0, 1, 2, 3}; }

Perm inverse(const Perm& p) {
    Perm q{};
    for (int i = 0; i < 4; ++i) q[p[i]] = static_cast<std::uint8_t>(i);
    return q;
}

Perm compose(const Perm& outer, const Perm& inner) {
    Perm r{};
    for (int i = 0; i < 4; ++i) r[i] = outer[inner[i]];
    return r;
}

int parity(const Perm& p) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) ++inv;
    return inv & 1;
}

std::string perm_string(const Perm& p) {
    std::string s;
    for (auto v : p) s.push_back(static_cast<char>('0' + v));
    return s;
}

int Sublattice::coset(const Pt& v) const {
    std::int64_t s = a * v.x + b * v.y;
    return static_cast<int>(((s % 2) + 2) % 2);
}

Pt Sublattice::odd_representative() const {
    if (coset({1, 0}) == 1) return {1, 0};
    return {0, 1};
}

const char* torus_kind_name(TorusKind k) {
    switch (k) {
        case TorusKind::Lst: return "layered";
        case TorusKind::DoubleCover: return "double_cover";
        case TorusKind::SideBySide: return "side_by_side";
    }
    return "?";
}

int Triangulation::add_tet() {
    tets.emplace_back();
    return size() - 1;
}

void Triangulation::glue(int t, int f, int u, const Perm& p) {
    tets[t].neighbor[f] = u;
    tets[t].gluing[f] = p;
    tets[u].neighbor[p[f]] = t;
    tets[u].gluing[p[f]] = inverse(p);
}

void Triangulation::unglue(int t, int f) {
    int u = tets[t].neighbor[f];
    if (u < 0) return;
    int g = tets[t].gluing[f][f];
    tets[t].neighbor[f] = -1;
    if (tets[u].neighbor[g] == t) tets[u].neighbor[g] = -1;
}

namespace {

struct EdgeWalker {
    const Triangulation& tri;
    // Walks from (t, a, b) crossing the face opposite c; returns false on boundary.
    struct State {
        int t, a, b, c, d;
    };

    bool step(State& s) const {
        const auto& tet = tri.tets[s.t];
        int u = tet.neighbor[s.c];
        if (u < 0) return false;
        const Perm& p = tet.gluing[s.c];
        s = {u, p[s.a], p[s.b], p[s.d], p[s.c]};
        return true;
    }
};

}  // namespace

std::vector<EdgeClass> edge_classes(const Triangulation& t) {
    std::vector<std::array<int, 6>> seen(t.size());
    for (auto& row : seen) row.fill(-1);
    std::vector<EdgeClass> out;
    EdgeWalker walker{t};
    for (int ti = 0; ti < t.size(); ++ti) {
        for (int e = 0; e < 6; ++e) {
            if (seen[ti][e] >= 0) continue;
            int id = static_cast<int>(out.size());
            EdgeClass cls;
            int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
            int others[2], k = 0;
            for (int v = 0; v < 4; ++v)
                if (v != a && v != b) others[k++] = v;
            EdgeWalker::State start{ti, a, b, others[0], others[1]};
            EdgeWalker::State s = start;
            std::vector<std::pair<int, int>> forward{{ti, e}};
            seen[ti][e] = id;
            bool closed = false;
            for (int guard = 0; guard < 6 * t.size() + 6; ++guard) {
                if (!walker.step(s)) break;
                int ei = edge_index(s.a, s.b);
                if (s.t == start.t && ei == e) {
                    closed = true;
                    if (s.a != start.a) cls.reversed_self = true;
                    break;
                }
                if (seen[s.t][ei] >= 0) {
                    cls.reversed_self = true;
                    break;
                }
                seen[s.t][ei] = id;
                forward.emplace_back(s.t, ei);
            }
            if (!closed) {
                cls.on_boundary = true;
                std::vector<std::pair<int, int>> backward;
                EdgeWalker::State r{ti, a, b, others[1], others[0]};
                for (int guard = 0; guard < 6 * t.size() + 6; ++guard) {
                    if (!walker.step(r)) break;
                    int ei = edge_index(r.a, r.b);
                    if (seen[r.t][ei] >= 0) {
                        if (!(r.t == ti && ei == e)) cls.reversed_self = true;
                        break;
                    }
                    seen[r.t][ei] = id;
                    backward.emplace_back(r.t, ei);
                }
                std::reverse(backward.begin(), backward.end());
                cls.members = backward;
                cls.members.insert(cls.members.end(), forward.begin(), forward.end());
            } else {
                cls.members = forward;
            }
            out.push_back(std::move(cls));
        }
    }
    return out;
}

std::vector<std::array<int, 4>> vertex_classes(const Triangulation& t, int* count) {
    std::vector<int> parent(4 * t.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int ti = 0; ti < t.size(); ++ti)
        for (int f = 0; f < 4; ++f) {
            int u = t.tets[ti].neighbor[f];
            if (u < 0) continue;
            const Perm& p = t.tets[ti].gluing[f];
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                int x = find(4 * ti + v), y = find(4 * u + p[v]);
                if (x != y) parent[x] = y;
            }
        }
    std::vector<int> label(4 * t.size(), -1);
    int n = 0;
    std::vector<std::array<int, 4>> out(t.size());
    for (int ti = 0; ti < t.size(); ++ti)
        for (int v = 0; v < 4; ++v) {
            int r = find(4 * ti + v);
            if (label[r] < 0) label[r] = n++;
            out[ti][v] = label[r];
        }
    if (count) *count = n;
    return out;
}

ValidationReport validate(const Triangulation& t) {
    ValidationReport rep;
    rep.tetrahedra = t.size();
    auto fail = [&](const std::string& msg) {
        rep.valid = false;
        rep.violations.push_back(msg);
    };
    if (t.size() == 0) fail("empty triangulation");

    std::set<std::pair<int, int>> declared;
    for (const auto& bf : t.boundary) declared.insert({bf.tet, bf.face});

    for (int ti = 0; ti < t.size(); ++ti) {
        for (int f = 0; f < 4; ++f) {
            int u = t.tets[ti].neighbor[f];
            if (u < 0) {
                ++rep.unglued_faces;
                if (t.closed || !declared.count({ti, f}))
                    fail("unglued face: tet " + std::to_string(ti) + " face " + std::to_string(f));
                continue;
            }
            if (u >= t.size()) {
                fail("neighbor out of range at tet " + std::to_string(ti));
                continue;
            }
            const Perm& p = t.tets[ti].gluing[f];
            std::array<bool, 4> hit{};
            bool bijective = true;
            for (auto v : p) {
                if (v > 3 || hit[v]) bijective = false;
                else hit[v] = true;
            }
            if (!bijective) {
                fail("gluing is not a permutation at tet " + std::to_string(ti));
                continue;
            }
            int g = p[f];
            if (t.tets[u].neighbor[g] != ti || t.tets[u].gluing[g] != inverse(p))
                fail("involution: tet " + std::to_string(ti) + " face " + std::to_string(f));
            if (u == ti && g == f) fail("face glued to itself at tet " + std::to_string(ti));
            if (parity(p) == 0) rep.oriented = false;
        }
    }
    if (!rep.valid) return rep;

    // Orientability by two-colouring tetrahedra.
    std::vector<int> side(t.size(), 0);
    for (int root = 0; root < t.size(); ++root) {
        if (side[root]) continue;
        side[root] = 1;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int ti = stack.back();
            stack.pop_back();
            for (int f = 0; f < 4; ++f) {
                int u = t.tets[ti].neighbor[f];
                if (u < 0) continue;
                int want = parity(t.tets[ti].gluing[f]) ? side[ti] : -side[ti];
                if (!side[u]) {
                    side[u] = want;
                    stack.push_back(u);
                } else if (side[u] != want) {
                    rep.orientable = false;
                }
            }
        }
    }
    if (!rep.orientable) fail("orientability: gluings admit no consistent orientation");

    auto classes = edge_classes(t);
    rep.edge_count = static_cast<int>(classes.size());
    std::vector<std::array<int, 6>> hits(t.size());
    for (auto& h : hits) h.fill(0);
    for (const auto& c : classes) {
        if (c.reversed_self) fail("edge class identified with its own reverse");
        for (auto [ti, e] : c.members) ++hits[ti][e];
    }
    for (int ti = 0; ti < t.size(); ++ti)
        for (int e = 0; e < 6; ++e)
            if (hits[ti][e] != 1) fail("edge-class partition broken at tet " + std::to_string(ti));

    int nv = 0;
    auto vc = vertex_classes(t, &nv);
    rep.cusps = nv;
    std::vector<int> faces(nv, 0), sides(nv, 0), ends(nv, 0);
    for (int ti = 0; ti < t.size(); ++ti)
        for (int v = 0; v < 4; ++v) {
            faces[vc[ti][v]] += 1;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                // Glued sides are shared by two link triangles.
                sides[vc[ti][v]] += t.tets[ti].neighbor[f] >= 0 ? 1 : 2;
            }
        }
    for (const auto& c : classes) {
        auto [ti, e] = c.members.front();
        ends[vc[ti][kEdgeVertices[e][0]]] += 1;
        ends[vc[ti][kEdgeVertices[e][1]]] += 1;
    }
    for (int k = 0; k < nv; ++k) {
        int chi = ends[k] - sides[k] / 2 + faces[k];
        rep.link_euler.push_back(chi);
        if (t.closed && chi != 0) fail("vertex link " + std::to_string(k) + " is not a torus");
        if (!t.closed && rep.unglued_faces > 0 && chi != 1 && chi != 0)
            fail("vertex link " + std::to_string(k) + " has Euler characteristic " + std::to_string(chi));
    }
    if (t.closed && nv == 1 && rep.edge_count != rep.tetrahedra)
        fail("edge classes (" + std::to_string(rep.edge_count) + ") differ from tetrahedra (" +
             std::to_string(rep.tetrahedra) + ")");
    return rep;
}

std::string export_text(const Triangulation& t) {
    std::ostringstream os;
    int cusps = 0;
    vertex_classes(t, &cusps);
    os << "tets " << t.size() << " cusps " << cusps << "\n";
    for (int ti = 0; ti < t.size(); ++ti) {
        const auto& tet = t.tets[ti];
        os << "tet " << ti << ": nbr";
        for (int f = 0; f < 4; ++f) os << ' ' << tet.neighbor[f];
        os << " ; perm";
        for (int f = 0; f < 4; ++f) {
            if (tet.neighbor[f] < 0) os << " -1";
            else os << ' ' << perm_string(tet.gluing[f]);
        }
        os << "\n";
    }
    return os.str();
}

Triangulation import_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    int n = 0, cusps = 0;
    auto bad = [](const std::string& why) { return Error(Errc::ParseError, why); };
    if (!(is >> word) || word != "tets" || !(is >> n) || !(is >> word) || word != "cusps" || !(is >> cusps))
        throw bad("missing header");
    Triangulation t;
    t.tets.resize(n);
    for (int ti = 0; ti < n; ++ti) {
        std::string label;
        int idx = -1;
        if (!(is >> word) || word != "tet" || !(is >> label)) throw bad("missing tet line");
        idx = std::stoi(label);
        if (idx != ti) throw bad("tet lines out of order");
        if (!(is >> word) || word != "nbr") throw bad("missing nbr");
        for (int f = 0; f < 4; ++f)
            if (!(is >> t.tets[ti].neighbor[f])) throw bad("bad neighbor");
        if (!(is >> word) || word != ";" || !(is >> word) || word != "perm") throw bad("missing perm");
        for (int f = 0; f < 4; ++f) {
            if (!(is >> word)) throw bad("bad perm");
            if (word == "-1") continue;
            if (word.size() != 4) throw bad("bad perm '" + word + "'");
            for (int k = 0; k < 4; ++k) t.tets[ti].gluing[f][k] = static_cast<std::uint8_t>(word[k] - '0');
        }
    }
    t.closed = std::all_of(t.tets.begin(), t.tets.end(), [](const Tetrahedron& x) {
        return std::all_of(x.neighbor.begin(), x.neighbor.end(), [](int v) { return v >= 0; });
    });
    return t;
}

}  // namespace canon

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "canon/farey.hpp"

namespace canon {

// Vertex map between two tetrahedra: vertex i goes to perm[i].
using Perm = std::array<std::uint8_t, 4>;

Perm identity_perm();
Perm inverse(const Perm& p);
Perm compose(const Perm& outer, const Perm& inner);  // outer after inner
int parity(const Perm& p);                           // 0 even, 1 odd
std::string perm_string(const Perm& p);

// Edges 0..5 are the vertex pairs 01 02 03 12 13 23; edge e and 5-e are opposite.
extern const std::array<std::array<int, 2>, 6> kEdgeVertices;
int edge_index(int a, int b);

// Point of Z^2, not normalised (unlike Vec2).
struct Pt {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Pt&, const Pt&) = default;
    Pt operator+(const Pt& o) const { return {x + o.x, y + o.y}; }
    Pt operator-(const Pt& o) const { return {x - o.x, y - o.y}; }
    Pt operator-() const { return {-x, -y}; }
};

// Index-two sublattice {v : a*x + b*y even}, or all of Z^2 when a = b = 0.
struct Sublattice {
    int a = 0;
    int b = 0;

    int coset(const Pt& v) const;
    bool contains(const Pt& v) const { return coset(v) == 0; }
    int index() const { return (a | b) ? 2 : 1; }
    Pt odd_representative() const;  // a point of coset 1
};

inline constexpr Sublattice kSquareLattice{0, 0};     // Z^2
inline constexpr Sublattice kPlainCover{1, 0};        // <(2,0),(0,1)>
inline constexpr Sublattice kTwistedCover{1, 1};      // <(2,0),(1,1)>

enum class TorusKind { Lst, DoubleCover, SideBySide };
enum class FaceKind { Boundary, Interior, Core };

const char* torus_kind_name(TorusKind k);

struct Tetrahedron {
    std::array<int, 4> neighbor{-1, -1, -1, -1};
    std::array<Perm, 4> gluing{};
};

// Construction record of one solid torus.
struct TorusInfo {
    TorusKind kind = TorusKind::Lst;
    Sublattice lattice;
    Pt meridian;           // lift of the meridian in R^2
    Slope core_slope;      // slope in the square picture targeted by the walk
    int diagonal = 1;      // sign of the square diagonal in T0
    FareyWalk walk;
    int first_tet = 0;
    int tet_count = 0;
};

struct TetInfo {
    int torus = -1;
    int layer = -1;        // 0-based layering step; core tetrahedron gets N
    int lift = -1;         // coset of the layered quadrilateral, -1 for the core
    int partner = -1;      // deck-transformation image, -1 if none
    bool core = false;
    std::array<int, 4> puncture{-1, -1, -1, -1};
    std::array<FaceKind, 4> face_kind{};
};

// A face on the outside of a solid torus, with its square-picture data.
struct BoundaryFace {
    int torus = -1;
    int tet = -1;
    int face = -1;
    std::array<Pt, 3> corner;        // counterclockwise lattice positions
    std::array<int, 3> vertex{};     // tetrahedron vertex at each corner
    std::array<Slope, 3> side_slope; // side i joins corners i+1 and i+2
};

struct Triangulation {
    std::vector<Tetrahedron> tets;
    std::vector<TetInfo> info;
    std::vector<TorusInfo> tori;
    std::vector<BoundaryFace> boundary;
    bool closed = false;  // assembled manifold: no face may stay unglued

    int size() const { return static_cast<int>(tets.size()); }
    bool has_metadata() const { return info.size() == tets.size() && !tets.empty(); }
    bool glued(int t, int f) const { return tets[t].neighbor[f] >= 0; }

    int add_tet();
    void glue(int t, int f, int u, const Perm& p);
    void unglue(int t, int f);
};

struct EdgeClass {
    std::vector<std::pair<int, int>> members;  // (tet, edge index), cyclic order
    bool on_boundary = false;
    bool reversed_self = false;
};

std::vector<EdgeClass> edge_classes(const Triangulation& t);

// Vertex class id for every (tet, vertex).
std::vector<std::array<int, 4>> vertex_classes(const Triangulation& t, int* count = nullptr);

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
    int tetrahedra = 0;
    int edge_count = 0;
    int cusps = 0;
    int unglued_faces = 0;
    bool orientable = true;
    bool oriented = true;  // every gluing map odd
    std::vector<int> link_euler;
};

ValidationReport validate(const Triangulation& t);

std::string export_text(const Triangulation& t);
Triangulation import_text(const std::string& text);

}  // namespace canon

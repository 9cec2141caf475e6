#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "canon/build.hpp"
#include "canon/cusp.hpp"
#include "canon/geometry.hpp"
#include "canon/minkowski.hpp"

namespace canon {

enum class FaceClass { BoundaryBR, InteriorDouble, CoreDouble, InteriorSBS, CoreSBS };
const char* face_class_name(FaceClass c);

enum class BoundaryCase { Case1, Case2, Case3 };
const char* boundary_case_name(BoundaryCase c);

// Case1 mixed signs, Case2 both negative, Case3 both positive.
BoundaryCase boundary_case(const Slope& m1, const Slope& m2);

struct FaceRecord {
    int id = 0;
    int tet = 0, face = 0;        // the side with the smaller (tet, face)
    int other = 0, other_face = 0;
    FaceClass cls = FaceClass::InteriorDouble;
};

// One record per face of the closed triangulation.
std::vector<FaceRecord> classify_faces(const Triangulation& t);

enum class ClosedForm { None, Hexagon, LstCore, SbsCore };
const char* closed_form_name(ClosedForm c);

// The face seen from one of its vertices placed at infinity.
struct FaceView {
    int infinity = 0;                 // vertex of rec.tet sent to infinity
    std::array<int, 2> ends{};        // the other two face vertices
    std::array<Complex, 2> end_pos{};
    std::array<double, 2> end_diam{};
    Complex apex_pos, other_apex_pos; // apex of rec.tet, apex of rec.other
    double apex_diam = 0, other_apex_diam = 0;
};

struct FaceCertificate {
    FaceRecord face;
    ConvexityCertificate generic;        // from the first view
    std::array<double, 3> view_margins{};
    ClosedForm closed = ClosedForm::None;
    std::optional<double> closed_margin;
    int closed_view = -1;
    bool mirrored = false;               // closed form matched in the mirror image
    std::optional<Hexagon> hexagon;      // per-face hexagon; from the first view when no pattern matched
    std::optional<Complex> core_zeta;
    std::optional<Complex> hand;         // handedness of the developed face pairing
    std::optional<Complex> hand_formula; // 4 / (a c)
};

struct CanonicityReport {
    std::vector<FaceCertificate> faces;
    double min_margin = 0;
    std::map<FaceClass, int> class_counts;
    std::optional<BoundaryCase> boundary;
    std::vector<int> flat_faces;
    std::vector<int> nonconvex_faces;
    double view_spread = 0;     // largest disagreement between the three views of a face
    double lift_spread = 0;     // largest disagreement between deck-transformation lifts
    bool canonical = false;

    const char* verdict() const;
};

// The three views of a face, each developed from the cusp diagram.
std::array<FaceView, 3> face_views(const Triangulation& t, const CuspDiagram& d, const FaceRecord& f);

CanonicityReport check_all(const Triangulation& t, const ShapeAssignment& s, double tol = kFlatTolerance);

struct PipelineOptions {
    DiagonalChoice diagonal = DiagonalChoice::Auto;
    LinkVariant variant = LinkVariant::Plain;
    SlopeBasis basis = SlopeBasis::MeridianLongitude;
    SolveOptions solver;
    double margin_tol = kFlatTolerance;
};

struct PipelineResult {
    Triangulation triangulation;
    int diagonal = 0;
    SolveResult solution;
    double volume = 0;
    CuspDiagram cusp;
    std::vector<TilingHexagon> hexagons;
    CanonicityReport report;
};

// Assemble, solve and check. With an automatic diagonal, the other diagonal is
// tried when the first fails to glue or to solve.
PipelineResult run_pipeline(const Slope& m1, const Slope& m2, const PipelineOptions& opt = {});

}  // namespace canon

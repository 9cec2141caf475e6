#include "canon/canonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "canon/errors.hpp"

namespace canon {

namespace {

constexpr double kPatternTol = 1e-6;

bool close(double x, double y) { return std::abs(x - y) <= kPatternTol * std::max(1.0, std::abs(y)); }

double cross(const Complex& u, const Complex& v) { return (std::conj(u) * v).imag(); }

// Side of the cusp triangle (tet, x) between corners a and y.
double side(const CuspDiagram& d, int tet, int x, int a, int y) {
    const auto& p = d.at(tet, x);
    return std::abs(p[a] - p[y]);
}

// A view moved so the apexes sit at -1 and 1, horoball at infinity of height 1.
struct Normalised {
    std::array<Complex, 2> end;
    std::array<double, 2> end_diam;
    double p_diam, q_diam;
};

Normalised normalise(const FaceView& v, const Complex& from_m1, const Complex& from_p1) {
    const Complex alpha = 2.0 / (from_p1 - from_m1), beta = -1.0 - alpha * from_m1;
    const double k = std::norm(alpha);
    Normalised n;
    for (int i = 0; i < 2; ++i) {
        n.end[i] = alpha * v.end_pos[i] + beta;
        n.end_diam[i] = k * v.end_diam[i];
    }
    n.p_diam = k * v.apex_diam;
    n.q_diam = k * v.other_apex_diam;
    return n;
}

// The view as a per-face hexagon, with the diameters it actually carries.
Hexagon view_hexagon(const FaceView& v, bool mirror, Normalised* out = nullptr) {
    Normalised n = normalise(v, v.apex_pos, v.other_apex_pos);
    if (mirror)
        for (auto& z : n.end) z = std::conj(z);
    if (cross(n.end[0] + 1.0, n.end[1] + 1.0) < 0) {
        std::swap(n.end[0], n.end[1]);
        std::swap(n.end_diam[0], n.end_diam[1]);
    }
    if (out) *out = n;
    return hexagon_from_zeta(n.end[0], n.end[1]);
}

std::optional<Hexagon> match_hexagon(const FaceView& v, bool mirror) {
    Normalised n;
    const Hexagon h = view_hexagon(v, mirror, &n);
    if (close(n.p_diam, h.a * h.c) && close(n.q_diam, h.a * h.c) && close(n.end_diam[0], h.a * h.b) &&
        close(n.end_diam[1], h.b * h.c))
        return h;
    return std::nullopt;
}

std::optional<Complex> match_lst_core(const FaceView& v) {
    for (int s = 0; s < 2; ++s) {
        const Complex e0 = v.end_pos[s], e1 = v.end_pos[1 - s];
        const Complex alpha = 2.0 / (e1 - e0), beta = -1.0 - alpha * e0;
        const double k = std::norm(alpha);
        const Complex z = alpha * v.apex_pos + beta, w = alpha * v.other_apex_pos + beta;
        const double r = std::abs(z + 1.0);
        if (std::abs(z + w) > kPatternTol * (1 + std::abs(z))) continue;
        if (close(k * v.end_diam[0], 2 * r) && close(k * v.end_diam[1], 2 * r) && close(k * v.apex_diam, r * r) &&
            close(k * v.other_apex_diam, r * r))
            return z;
    }
    return std::nullopt;
}

std::optional<Complex> match_sbs_core(const FaceView& v) {
    for (int s = 0; s < 2; ++s) {
        const Normalised n = s ? normalise(v, v.other_apex_pos, v.apex_pos) : normalise(v, v.apex_pos, v.other_apex_pos);
        for (int i = 0; i < 2; ++i) {
            if (std::abs(n.end[i]) > kPatternTol) continue;
            const Complex z = n.end[1 - i];
            const double r = std::abs(z), q = std::abs(z - 1.0);
            if (close(n.end_diam[i], r) && close(n.end_diam[1 - i], r * q) && close(n.p_diam, q) && close(n.q_diam, q))
                return z;
        }
    }
    return std::nullopt;
}

ConvexityCertificate generic_certificate(const FaceView& v, double tol) {
    const std::vector<IsotropicVector> face{horoball_to_vector({v.end_pos[0], false, v.end_diam[0]}),
                                            horoball_to_vector({v.end_pos[1], false, v.end_diam[1]}),
                                            horoball_to_vector({0, true, 1})};
    return local_convexity(face, horoball_to_vector({v.apex_pos, false, v.apex_diam}),
                           horoball_to_vector({v.other_apex_pos, false, v.other_apex_diam}), tol);
}

}  // namespace

const char* face_class_name(FaceClass c) {
    switch (c) {
        case FaceClass::BoundaryBR: return "BoundaryBR";
        case FaceClass::InteriorDouble: return "InteriorDouble";
        case FaceClass::CoreDouble: return "CoreDouble";
        case FaceClass::InteriorSBS: return "InteriorSBS";
        case FaceClass::CoreSBS: return "CoreSBS";
    }
    return "?";
}

const char* boundary_case_name(BoundaryCase c) {
    switch (c) {
        case BoundaryCase::Case1: return "Case1";
        case BoundaryCase::Case2: return "Case2";
        case BoundaryCase::Case3: return "Case3";
    }
    return "?";
}

const char* closed_form_name(ClosedForm c) {
    switch (c) {
        case ClosedForm::None: return "none";
        case ClosedForm::Hexagon: return "hexagon";
        case ClosedForm::LstCore: return "lst-core";
        case ClosedForm::SbsCore: return "sbs-core";
    }
    return "?";
}

BoundaryCase boundary_case(const Slope& m1, const Slope& m2) {
    const int s1 = sign(m1), s2 = sign(m2);
    if (s1 < 0 && s2 < 0) return BoundaryCase::Case2;
    if (s1 > 0 && s2 > 0) return BoundaryCase::Case3;
    return BoundaryCase::Case1;
}

std::vector<FaceRecord> classify_faces(const Triangulation& t) {
    if (!t.has_metadata() || t.tori.empty()) throw Error(Errc::MissingMetadata, "triangulation carries no construction record");
    std::vector<FaceRecord> out;
    for (int i = 0; i < t.size(); ++i) {
        for (int f = 0; f < 4; ++f) {
            if (!t.glued(i, f)) throw Error(Errc::Precondition, "face classification needs a closed triangulation");
            const int u = t.tets[i].neighbor[f], g = t.tets[i].gluing[f][f];
            if (u < i || (u == i && g < f)) continue;
            FaceRecord r;
            r.id = static_cast<int>(out.size());
            r.tet = i;
            r.face = f;
            r.other = u;
            r.other_face = g;
            const TetInfo& a = t.info[i];
            const TetInfo& b = t.info[u];
            const FaceKind k = a.face_kind[f];
            if (k != b.face_kind[g]) throw Error(Errc::MissingMetadata, "face kinds disagree across a gluing");
            if (k == FaceKind::Boundary) {
                if (a.torus == b.torus) throw Error(Errc::MissingMetadata, "boundary face glued inside one solid torus");
                r.cls = FaceClass::BoundaryBR;
            } else {
                if (a.torus != b.torus || a.torus < 0) throw Error(Errc::MissingMetadata, "inner face crosses solid tori");
                const bool sbs = t.tori.at(a.torus).kind == TorusKind::SideBySide;
                if (k == FaceKind::Core) r.cls = sbs ? FaceClass::CoreSBS : FaceClass::CoreDouble;
                else r.cls = sbs ? FaceClass::InteriorSBS : FaceClass::InteriorDouble;
            }
            out.push_back(r);
        }
    }
    return out;
}

std::array<FaceView, 3> face_views(const Triangulation& t, const CuspDiagram& d, const FaceRecord& r) {
    std::array<FaceView, 3> out;
    const int f = r.face, u = r.other;
    const Perm& g = t.tets[r.tet].gluing[f];
    int n = 0;
    for (int a = 0; a < 4; ++a) {
        if (a == f) continue;
        FaceView& v = out[n++];
        v.infinity = a;
        int m = 0;
        for (int w = 0; w < 4; ++w)
            if (w != a && w != f) v.ends[m++] = w;
        const auto& p = d.at(r.tet, a);
        const int k = v.ends[0], j = v.ends[1];
        v.end_pos = {p[k], p[j]};
        v.apex_pos = p[f];
        // The neighbour's cusp triangle, moved onto the shared side.
        const auto& q = d.at(u, g[a]);
        const Complex s = (p[j] - p[k]) / (q[g[j]] - q[g[k]]);
        v.other_apex_pos = p[k] + s * (q[g[f]] - q[g[k]]);
        v.end_diam = {side(d, r.tet, k, a, j) * std::abs(p[k] - p[j]), side(d, r.tet, j, a, k) * std::abs(p[j] - p[k])};
        v.apex_diam = side(d, r.tet, f, a, k) * std::abs(p[f] - p[k]);
        v.other_apex_diam = side(d, u, g[f], g[a], g[k]) * std::abs(v.other_apex_pos - p[k]);
    }
    return out;
}

const char* CanonicityReport::verdict() const {
    if (canonical) return "canonical";
    if (nonconvex_faces.empty()) return "not strictly canonical";
    return "not canonical";
}

CanonicityReport check_all(const Triangulation& t, const ShapeAssignment& s, double tol) {
    const auto faces = classify_faces(t);
    const CuspDiagram d = develop_cusp(t, s);
    CanonicityReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();

    for (const auto& rec : faces) {
        FaceCertificate fc;
        fc.face = rec;
        ++rep.class_counts[rec.cls];
        const auto views = face_views(t, d, rec);
        for (int i = 0; i < 3; ++i) {
            const auto c = generic_certificate(views[i], tol);
            if (i == 0) fc.generic = c;
            fc.view_margins[i] = c.margin;
            rep.view_spread = std::max(rep.view_spread, std::abs(c.margin - fc.generic.margin));
        }

        for (int i = 0; i < 3 && fc.closed == ClosedForm::None; ++i) {
            const FaceView& v = views[i];
            if (rec.cls == FaceClass::CoreDouble) {
                if (auto z = match_lst_core(v)) {
                    fc.closed = ClosedForm::LstCore;
                    fc.core_zeta = *z;
                    fc.closed_margin = lst_core_criterion(*z, tol).margin;
                    fc.closed_view = i;
                }
            } else if (rec.cls == FaceClass::CoreSBS) {
                if (auto z = match_sbs_core(v)) {
                    fc.closed = ClosedForm::SbsCore;
                    fc.core_zeta = *z;
                    fc.closed_margin = sbs_core_criterion(*z, tol).margin;
                    fc.closed_view = i;
                }
            } else {
                for (bool mirror : {false, true}) {
                    auto h = match_hexagon(v, mirror);
                    if (!h) continue;
                    fc.closed = ClosedForm::Hexagon;
                    fc.mirrored = mirror;
                    fc.hexagon = *h;
                    fc.closed_margin = hexagon_face_criterion(*h, tol).margin;
                    fc.closed_view = i;
                    const Mobius dev = mobius_from_points({Complex(-1), h->zeta, std::nullopt},
                                                          {std::nullopt, h->zeta_p, Complex(1)});
                    fc.hand = handedness(dev);
                    fc.hand_formula = 4.0 / (h->a_vec * h->c_vec);
                    break;
                }
            }
        }
        const bool hex_class = rec.cls == FaceClass::BoundaryBR || rec.cls == FaceClass::InteriorDouble ||
                               rec.cls == FaceClass::InteriorSBS;
        if (hex_class && !fc.hexagon) fc.hexagon = view_hexagon(views[0], false);
        if (fc.closed_margin) {
            const double g = fc.generic.margin;
            if (std::abs(*fc.closed_margin - g) > 1e-6 * std::max(1.0, std::abs(g)))
                throw Error(Errc::InconsistentOracles,
                            "face " + std::to_string(rec.id) + ": closed form " + std::to_string(*fc.closed_margin) +
                                " against " + std::to_string(g));
        }

        rep.min_margin = std::min(rep.min_margin, fc.generic.margin);
        if (fc.generic.verdict == Verdict::Flat) rep.flat_faces.push_back(rec.id);
        if (fc.generic.verdict == Verdict::NonConvex) rep.nonconvex_faces.push_back(rec.id);
        rep.faces.push_back(fc);
    }

    // Lifts of one face under the deck transformation of a double cover.
    std::map<std::pair<int, int>, double> margin_of;
    for (const auto& fc : rep.faces) {
        margin_of[{fc.face.tet, fc.face.face}] = fc.generic.margin;
        margin_of[{fc.face.other, fc.face.other_face}] = fc.generic.margin;
    }
    for (const auto& fc : rep.faces) {
        const TetInfo& info = t.info[fc.face.tet];
        if (info.partner < 0 || t.tori[info.torus].kind != TorusKind::DoubleCover) continue;
        auto it = margin_of.find({info.partner, fc.face.face});
        if (it != margin_of.end()) rep.lift_spread = std::max(rep.lift_spread, std::abs(it->second - fc.generic.margin));
    }

    if (t.tori.size() == 2)
        rep.boundary = boundary_case(t.tori[0].core_slope, t.tori[1].core_slope);
    rep.canonical = rep.flat_faces.empty() && rep.nonconvex_faces.empty();
    return rep;
}

PipelineResult run_pipeline(const Slope& m1, const Slope& m2, const PipelineOptions& opt) {
    std::vector<DiagonalChoice> tries;
    if (opt.diagonal == DiagonalChoice::Auto) tries = {DiagonalChoice::Negative, DiagonalChoice::Positive};
    else tries = {opt.diagonal};

    std::optional<Error> last;
    for (const auto choice : tries) {
        PipelineResult out;
        try {
            out.triangulation = assemble_filled(m1, m2, choice, opt.variant, opt.basis);
        } catch (const Error& e) {
            if (e.code() != Errc::GluingMismatch) throw;
            last = e;
            continue;
        }
        out.diagonal = out.triangulation.tori.at(0).diagonal;
        try {
            const auto eqs = derive_equations(out.triangulation);
            out.solution = solve(eqs, regular_shapes(out.triangulation.size()), opt.solver);
        } catch (const Error& e) {
            if (e.code() != Errc::NoConvergence && e.code() != Errc::DegenerateShape) throw;
            last = e;
            continue;
        }
        out.volume = volume(out.solution.shapes);
        out.cusp = develop_cusp(out.triangulation, out.solution.shapes);
        if (out.cusp.cusps == 1) out.hexagons = extract_hexagons(out.triangulation, out.cusp);
        out.report = check_all(out.triangulation, out.solution.shapes, opt.margin_tol);
        return out;
    }
    throw *last;
}

}  // namespace canon

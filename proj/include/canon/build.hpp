#pragma once

#include "canon/farey.hpp"
#include "canon/triangulation.hpp"

namespace canon {

enum class DiagonalChoice { Auto, Positive, Negative };
enum class LinkVariant { Plain, HalfTwist1, HalfTwist2, Both };
enum class SlopeBasis { Internal, MeridianLongitude };

const char* diagonal_name(DiagonalChoice d);
const char* variant_name(LinkVariant v);
const char* basis_name(SlopeBasis b);

// Cusp lattice of crossing circle 0 or 1 under a link variant.
Sublattice cusp_lattice(LinkVariant v, int circle);

// Lift of p*meridian + q*longitude; the meridian lifts to (0,1), or (1,1) when twisted.
Pt meridian_vector(const Slope& m, const Sublattice& cusp);

// Lift for a slope read directly in the square picture: the primitive vector of
// that slope, doubled if it is not in the cusp lattice.
Pt internal_vector(const Slope& r, const Sublattice& cusp);

// Inverse of meridian_vector on the cusp lattice.
Slope meridian_slope(const Pt& v, const Sublattice& cusp);

// A slope given in either basis, rewritten in meridian-longitude form.
Slope filling_slope(const Slope& m, SlopeBasis basis, const Sublattice& cusp);

// Double layered solid torus on (R^2 - Z^2)/L bounding the given meridian lift.
// diagonal = 0 picks the sign of the core slope.
Triangulation build_dlst(const Sublattice& lattice, const Pt& meridian, int diagonal = 0);

Triangulation build_lst(const Slope& m);
Triangulation build_double_cover(const Slope& m, int diagonal = 0);
Triangulation build_side_by_side(const Slope& m, int diagonal = 0);

// The Dehn-filled manifold; m1, m2 are read in the basis given.
Triangulation assemble_filled(const Slope& m1, const Slope& m2, DiagonalChoice diag,
                              LinkVariant variant = LinkVariant::Plain,
                              SlopeBasis basis = SlopeBasis::MeridianLongitude);

Triangulation assemble_from_vectors(const Sublattice& l1, const Pt& v1, const Sublattice& l2,
                                    const Pt& v2, int diagonal);

}  // namespace canon

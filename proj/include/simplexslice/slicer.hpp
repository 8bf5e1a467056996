#pragma once

#include <json.hpp>

#include <optional>
#include <vector>

#include "simplexslice/core.hpp"
#include "simplexslice/rational.hpp"

namespace sslice {

// A polytope section held in an orthonormal chart of the cutting subspace.
// A 0-dimensional section (a point) carries no subspace and a single empty
// local coordinate vector.
struct SectionPolytope {
    Polytope parent = Polytope::empty(1);
    std::optional<Subspace> subspace;
    std::vector<double> origin;
    std::vector<std::vector<double>> vertices_local;

    bool is_empty() const { return vertices_local.empty(); }
    int chart_dim() const { return subspace ? subspace->dim() : 0; }
    std::vector<std::vector<double>> vertices_ambient() const;
};

// The regular simplex conv{e_1..e_{n+1}} embedded in {sum x = 1}.
Polytope regular_simplex(int n);
Polytope regular_simplex_rational(int n);

// Central hyperplane section Delta_n cap a-perp through the barycentre.
SectionPolytope simplex_section(const Direction& a);

// Volume of a polytope in its own affine hull (d-dimensional for full-dim
// input). Points have 0-dimensional volume 1; empty polytopes volume 0.
double volume(const Polytope& P);
double volume(const SectionPolytope& S);

// Exact rational volume; requires a full-dimensional rational polytope.
Rational volume_exact(const Polytope& P);

// sqrt(n+1)/(n-1)! * p_a(0)
double section_volume_via_density(const Direction& a);

// P cap (offset + span S), in an orthonormal chart of S.
SectionPolytope polytope_section(const Polytope& P, const Subspace& S,
                                 const std::vector<double>& offset);

// P cap {<x, normal> >= level}
Polytope halfspace_clip(const Polytope& P, const std::vector<double>& normal, double level);

// Exact-rational section of a full-dimensional rational polytope by the flat
// offset + span(basis_cols); the chart basis need not be orthonormal, the
// gram determinant carries the metric correction.
struct ExactSection {
    std::vector<std::vector<Rational>> vertices_local;
    std::vector<std::vector<Rational>> basis_cols;  // ambient_dim x l
    std::vector<Rational> offset;
    Rational gram_det = 1;
    bool empty = false;
};

ExactSection polytope_section_exact(const Polytope& P,
                                    const std::vector<std::vector<Rational>>& basis_cols,
                                    const std::vector<Rational>& offset);

// chart volume (exact) and ambient volume (chart * sqrt(gram)) of a section
Rational exact_section_chart_volume(const ExactSection& S);
double exact_section_volume(const ExactSection& S);

// polytope JSON schema: {"dim": int, "vertices": [[...]], "mode": "float"|"rational"}
Polytope polytope_from_json(const nlohmann::json& j);
nlohmann::json polytope_to_json(const Polytope& P);

}  // namespace sslice

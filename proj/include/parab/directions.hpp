#pragma once

#include "parab/jet.hpp"
#include "parab/rational.hpp"

#include <vector>

namespace parab {

/// Projective direction [v1 : v2] with P_k(v) = lambda v, normalized so the
/// larger-modulus entry is 1. `exact` marks directions verified in rational
/// arithmetic (residual identically zero).
struct CharacteristicDirection {
    cplx v1, v2;
    cplx lambda;
    bool degenerate;
    int multiplicity;
    bool exact;
};

/// Degree of the lowest nonvanishing homogeneous part P_k (the order nu(F)).
/// Throws if the nonlinear part vanishes identically.
int nonlinear_order(const MapJet<cplx>& m);
int nonlinear_order(const MapJet<Rational>& m);

/// All characteristic directions of a tangent-to-identity jet, from the chart
/// [1:u] (roots of r(u) = Q_k(1,u) - u P_k(1,u)) plus the separate [0:1] test.
std::vector<CharacteristicDirection> characteristic_directions(const MapJet<cplx>& m,
                                                               double tol = 1e-12);

/// Rational-mode variant: rational roots of r(u) are found exactly (and tagged
/// exact); any residual non-rational factor is solved in binary64.
std::vector<CharacteristicDirection> characteristic_directions(const MapJet<Rational>& m);

/// Director A(v) = r'(u0) / P_k(1, u0) for a non-degenerate direction in the
/// chart [1:u0]. Directions at [0:1] require swapping coordinates first.
cplx director(const MapJet<cplx>& m, const CharacteristicDirection& d);
Rational director(const MapJet<Rational>& m, const Rational& u0);

/// Roots of a complex polynomial (Durand-Kerner with clustering); helper used
/// by the direction solver and exposed for tests.
std::vector<std::pair<cplx, int>> polynomial_roots(const std::vector<cplx>& coeffs,
                                                   double cluster_tol = 1e-6);

} // namespace parab

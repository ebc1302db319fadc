#pragma once

// Independent oracles used only by the tests and the verification suite.
// Nothing in src/ includes this header; each oracle recomputes its quantity
// along a different route than the implementation it checks.

#include "parab/jet.hpp"
#include "parab/mapchain.hpp"
#include "parab/rational.hpp"
#include "parab/series.hpp"

#include <cmath>
#include <stdexcept>

namespace parab::testing {

/// One application of the graph transform: push the graph w = gamma(z)
/// through the map and re-expand over the new base coordinate,
///   T(gamma) = F2(., gamma) o (F1(., gamma))^{-1}   (series reversion).
/// The invariant curve is its exact fixed point; a deviation delta z^k in the
/// input reappears as delta (b11 - k) z^{k+1} in the output, so comparing
/// T(gamma) with gamma through order N+1 detects any wrong coefficient up to
/// order N. (As an iteration from 0 the transform is neutral at each order
/// and never converges -- fixed-point verification is the usable oracle.)
template <class K>
Series1<K> graph_transform_once(const MapJet<K>& m, const Series1<K>& gamma) {
    Series1<K> z1 = Series1<K>::substitute_into_jet(m.first, gamma);
    Series1<K> w1 = Series1<K>::substitute_into_jet(m.second, gamma);
    Series1<K> back = Series1<K>::reversion(z1);
    return Series1<K>::compose(w1, back);
}

/// Invert q = F(p) by a damped 2-D Newton iteration with a finite-difference
/// Jacobian; usable near the origin where F is well-conditioned.
inline std::pair<cplx, cplx> newton_inverse(const MapChain& chain, cplx qz, cplx qw,
                                            double tol = 1e-12, int max_iter = 60) {
    cplx z = qz, w = qw; // near-identity seed
    const double h = 1e-7;
    for (int it = 0; it < max_iter; ++it) {
        auto [fz, fw] = chain.forward(z, w);
        const cplx rz = fz - qz, rw = fw - qw;
        if (std::abs(rz) + std::abs(rw) < tol) return {z, w};
        auto [fz1, fw1] = chain.forward(z + h, w);
        auto [fz2, fw2] = chain.forward(z, w + h);
        const cplx a = (fz1 - fz) / h, b = (fz2 - fz) / h;
        const cplx c = (fw1 - fw) / h, d = (fw2 - fw) / h;
        const cplx det = a * d - b * c;
        if (det == cplx(0.0)) throw std::domain_error("newton_inverse: singular Jacobian");
        z -= (d * rz - b * rw) / det;
        w -= (a * rw - c * rz) / det;
    }
    throw std::domain_error("newton_inverse: no convergence");
}

/// Pointwise composition oracle for map_compose: evaluate outer at inner's
/// values and compare against the composed jet's evaluation.
inline double compose_pointwise_error(const MapJet<cplx>& outer, const MapJet<cplx>& inner,
                                      const MapJet<cplx>& composed, cplx z, cplx w) {
    const cplx iz = inner.first.eval(z, w), iw = inner.second.eval(z, w);
    const cplx ez = outer.first.eval(iz, iw), ew = outer.second.eval(iz, iw);
    return std::max(std::abs(ez - composed.first.eval(z, w)),
                    std::abs(ew - composed.second.eval(z, w)));
}

} // namespace parab::testing

#pragma once

#include "parab/jet.hpp"
#include "parab/rational.hpp"
#include "parab/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parab {

struct RegionParams; // regions.hpp

/// Parabolic-curve series gamma(z) = sum_{k>=3} gamma_k z^k along (1,0),
/// with measured bound constants and a truncation-error growth constant.
struct CurveSeries {
    int order = 0;                    // highest stored degree
    std::vector<cplx> coeffs;         // coeffs[k] for k = 0..order (0,1,2 are zero)
    std::vector<Rational> coeffs_q;   // exact twin when solved in rational mode
    double measured_C1 = 0.0;         // sup |gamma(z)| / |z|^3 over V_eps samples
    double measured_C2 = 0.0;         // sup |gamma'(z)| / |z|^2
    double M = 0.0;                   // coefficient growth bound for the tail
    double growth_ratio = 1.0;        // geometric ratio used with M
    cplx oncurve_c3{0.0, 0.0};        // z^3 coefficient of F1(z, gamma(z))

    cplx value(cplx z) const {
        cplx s = 0.0;
        for (int k = order; k >= 3; --k) s = s * z + coeffs[k];
        return s * z * z * z;
    }
    cplx derivative(cplx z) const {
        cplx s = 0.0;
        for (int k = order; k >= 3; --k) s = s * z + double(k) * coeffs[k];
        return s * z * z;
    }
    double tail_bound(double abs_z) const {
        const double q = growth_ratio * abs_z;
        const double head = M * std::pow(abs_z, order + 1);
        return q < 1.0 ? head / (1.0 - q) : head;
    }

    std::string to_json() const;
};

struct CurveEval {
    cplx gamma;
    cplx gamma_prime;
    double trunc_error_bound;
};

/// Solve the invariance identity gamma(F1(z,gamma)) = F2(z,gamma) order by
/// order. Requires jet order >= N+1 (the z^{k+1} coefficient pins gamma_k) and
/// a nonzero pivot at each order (no resonance).
CurveSeries solve_curve(const MapJet<Rational>& m, int N);

/// Same solver over complex coefficients (used for perturbed maps in tests).
std::vector<cplx> solve_curve_coeffs(const MapJet<cplx>& m, int N);

/// Evaluate gamma with a certified-truncation error bound; z must lie in V_eps.
CurveEval eval_curve(const CurveSeries& c, cplx z, const RegionParams& params);

/// Record measured C1/C2/M constants by sampling V_eps (mutates the series).
void measure_curve_bounds(CurveSeries& c, const RegionParams& params);

/// 1-D Fatou coordinate of the on-curve map z -> F1(z, gamma(z)):
/// zeta(z) = lim tau_n - n - b log(tau_n), tau = -1/z, b = 1 - c3.
/// Principal log branch (the tau-domain straddles the positive real axis).
struct CurveFatou {
    cplx value;
    long stop_index;  // absolute orbit index at which the tail rule fired
    double tail_estimate;
};

class OnCurveMap {
public:
    OnCurveMap(const class MapChain& chain, const CurveSeries& curve)
        : chain_(&chain), curve_(&curve) {}
    cplx step(cplx z) const;
    cplx b() const; // log weight 1 - c3
    const CurveSeries& curve() const { return *curve_; }

private:
    const class MapChain* chain_;
    const CurveSeries* curve_;
};

CurveFatou curve_fatou(const OnCurveMap& m, cplx z, double tol, long n_max = 2'000'000);

/// Fatou coordinate on Gamma extended off the local graph:
/// Phi(p) = zeta(pi_1(F^N p)) - N for the first N that lands within `tol` of
/// the graph over V_eps. Throws if the budget is exhausted.
CurveFatou phi_on_gamma(const class MapChain& chain, const CurveSeries& curve,
                        const RegionParams& params, cplx z, cplx w, double tol,
                        long budget = 100000);

} // namespace parab

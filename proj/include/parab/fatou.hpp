#pragma once

#include "parab/curve.hpp"
#include "parab/jet.hpp"
#include "parab/mapchain.hpp"
#include "parab/rational.hpp"
#include "parab/regions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parab {

/// log with the cut along the positive real axis, arg in (0, 2pi]; all the
/// (x,y,t) sectors straddle the negative axis so this branch is interior there.
inline cplx log_pos(cplx z) {
    double a = std::arg(z);
    if (a <= 0.0) a += 2 * M_PI;
    return {std::log(std::abs(z)), a};
}

struct TruncPolicy {
    long n_max = 20000;
    double tol = 1e-9;
};

/// Extracted double-series data of the conjugated map in (z,u)-coordinates:
///   1/z1 = 1/z - 1 + g(u) + c z + t11 z u + ...
///   u * (1/u1 - 1/u) = z + z h(u) + ...
struct ExtractedSeries {
    std::vector<Rational> g;   // g[j], j >= 1 (g[0] stored as 0)
    std::vector<Rational> h;   // h[j], j >= 1
    Rational c;                // linear-in-z coefficient of 1/z1
    Rational k;                // aggregate 1/(xy) coefficient of the mu increment
    Rational t11, ell11, a11;  // the three 1/(xy) contributions (k = t11 + c*ell11 + a11)
    std::vector<Rational> beta; // asymptotic series beta_m of the beta-ODE, m >= 1 (beta[0] = 0)
};

ExtractedSeries extract_series(const MapJet<Rational>& m, const CurveSeries& curve, int order,
                               int beta_terms = 28);

/// The Abel-Fatou coordinate machine: series data, constants r = c and
/// s = -k, the beta evaluator, and the truncation policy.
class FatouMachine {
public:
    FatouMachine(const MapChain& chain, CurveSeries curve, RegionParams params,
                 TruncPolicy policy = {});

    const CurveSeries& curve() const { return curve_; }
    const RegionParams& params() const { return params_; }
    const TruncPolicy& policy() const { return policy_; }
    const ExtractedSeries& series() const { return ext_; }
    const MapChain& chain() const { return *chain_; }

    cplx c() const { return c_; }
    cplx k() const { return k_; }
    cplx r() const { return c_; }
    cplx s() const { return -k_; }
    /// log-y weight of the fiber coordinate: -(h1 + beta1) (cancels the
    /// 1/(xy) family of the xi increment; see fibers.hpp).
    cplx fiber_log_weight() const { return q_y_; }

    cplx g_of(cplx u) const { return eval_tail(g_, u); }
    cplx h_of(cplx u) const { return eval_tail(h_, u); }

    /// beta by the optimally truncated asymptotic series (term-decrease rule).
    cplx beta(cplx y) const;
    /// Residual of the beta ODE at y via a 5-point derivative stencil.
    double beta_ode_residual(cplx y, double step = 0.1) const;

    // ---- charts ----
    /// (x,y) = (1/z, 1/(w - gamma(z))); throws on the poles.
    std::pair<cplx, cplx> to_xy(cplx z, cplx w) const;
    std::pair<cplx, cplx> from_xy(cplx x, cplx y) const;

    /// One step of the conjugated map: advances in (z,w) through the chain.
    std::pair<cplx, cplx> step_xy(cplx x, cplx y) const;

    /// mu_n-style partial Fatou coordinate evaluated on the (z,w)-orbit of p:
    /// mu_n = x_n + n + r log x_n + s log y_n + x_n beta(y_n).
    cplx mu_partial(cplx z, cplx w, long n) const;
    /// All partials mu_0..mu_{n_max} along one orbit (single pass).
    std::vector<cplx> mu_partial_sequence(cplx z, cplx w, long n_max) const;

    struct Limit {
        cplx value;
        long stop_index;
        double tail_estimate;
    };
    /// Limit mode: iterate until |mu_{n+1} - mu_n| < tol (first passage, an
    /// absolute-orbit-index rule) or n_max; tail estimate from the fitted
    /// increment law C/(n log^2 n).
    Limit mu_limit(cplx z, cplx w) const;

    /// psi(p) = mu-limit at F^N(p) plus N, for the first N with a certified
    /// D'-entry at the entry radius 1/eps. nullopt = no entry within budget
    /// ("outside basin at this budget", not a failure).
    std::optional<Limit> psi(cplx z, cplx w, long budget = 100000) const;

    /// Theta(p) = (psi(p), 1/(w - gamma(z))); requires p in D.
    std::optional<std::pair<Limit, cplx>> theta(cplx z, cplx w, long budget = 100000) const;

    /// Cheap t-estimate mu_0(x,y) = x + r log x + s log y + x beta(y); the
    /// classifier pairs it with an entry margin covering |psi - mu_0|.
    cplx mu0(cplx x, cplx y) const;

    /// mu_0 with principal-branch logs: conjugation-equivariant, used by the
    /// D'-entry tests so classification commutes with conjugation exactly
    /// (the positive-axis branch maps conj(zeta) to conj(log) + 2 pi i).
    cplx t_entry_estimate(cplx x, cplx y) const {
        return x + c_ * std::log(x) - k_ * std::log(y) + x * beta(y);
    }

    /// Operational k: the constant making measured mu-increments free of
    /// 1/(xy) terms, fitted from far-out increments with s forced to 0 and
    /// Richardson extrapolation in y. Cross-checks the symbolic aggregate.
    cplx fit_k() const;

    std::string to_json() const;

private:
    static cplx eval_tail(const std::vector<cplx>& c, cplx u) {
        cplx s = 0.0; // c[0] is structurally zero
        for (size_t j = c.size(); j-- > 1;) s = s * u + c[j];
        return s * u;
    }

    const MapChain* chain_;
    CurveSeries curve_;
    RegionParams params_;
    TruncPolicy policy_;
    ExtractedSeries ext_;
    std::vector<cplx> g_, h_, beta_;
    cplx c_, k_, q_y_;
};

} // namespace parab

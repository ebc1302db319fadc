#pragma once

#include "parab/fatou.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parab {

/// Point on a fiber of psi with its fiber coordinate.
struct FiberPoint {
    cplx t, y;
    cplx z, w;
    cplx upsilon;
    double err_est;
};

/// Fiber-coordinate partials along the (z,w)-orbit of p, with t advancing by
/// exact unit translations:
///   xi_n = y_n + q_y log(y_n) + log(t - n),  q_y = -(h1 + beta1).
/// (The log-y weight is the unique one cancelling the 1/(xy) increment family;
/// it equals the literature's -1 when h1 + beta1 = -1.)
cplx xi_partial(const FatouMachine& fm, cplx t, cplx z, cplx w, long n);

/// Converged xi with the absolute first-passage stopping rule.
FatouMachine::Limit xi_limit(const FatouMachine& fm, cplx t, cplx z, cplx w);

/// xi at a chart point (t,y) in D'_{(t,y)}: the underlying point is recovered
/// through Theta^{-1} (secant on psi - t) and then iterated.
std::optional<cplx> xi_at_chart(const FatouMachine& fm, cplx t, cplx y, long n);

/// Upsilon(p): extend along the orbit to the first certified D'-entry with
/// t-chart in U_{4 R_entry}, then take the xi limit there (n-independent by
/// the matched-index stopping rule).
std::optional<FatouMachine::Limit> upsilon(const FatouMachine& fm, cplx z, cplx w,
                                           long budget = 100000);

/// G(p) = (psi(p), Upsilon(p)).
struct GlobalValue {
    FatouMachine::Limit psi;
    FatouMachine::Limit upsilon;
};
std::optional<GlobalValue> global_map(const FatouMachine& fm, cplx z, cplx w,
                                      long budget = 100000);

/// Solve psi(z, 1/y + gamma(z)) = t for z by secant iteration, seeded from the
/// closed mu_0 form. Returns (z,w) on the fiber. The tolerance floor is set by
/// psi's orbit-roundoff noise (~eps n^2/2 at deep stopping indices), so the
/// default asks for 1e-6.
std::optional<std::pair<cplx, cplx>> theta_inverse(const FatouMachine& fm, cplx t, cplx y,
                                                   double tol = 1e-6);

/// Trace the fiber psi = t0 by marching in y (predictor: previous z;
/// corrector: secant on psi - t0). Returns points with Upsilon values.
std::vector<FiberPoint> trace_fiber(const FatouMachine& fm, cplx t0,
                                    const std::vector<cplx>& y_samples);

std::string fiber_csv(const std::vector<FiberPoint>& pts);

} // namespace parab

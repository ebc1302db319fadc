#pragma once

#include "parab/rational.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace parab {

struct CurveSeries;

inline constexpr double kAperture = M_PI / 8;        // V_eps, U_R sectors
inline constexpr double kNarrowAperture = M_PI / 20; // T' sectors
inline constexpr double kEntryMargin = 0.25;         // covers sup|psi - mu_0| on entry tests

/// Argument measured with the branch centered at pi: arg(z) - pi computed as
/// the principal argument of -z, so the sector axis sits in the branch interior.
inline double arg_from_pi(cplx z) { return std::arg(-z); }

/// One certification inequality with its evaluated sides.
struct CertCheck {
    std::string name;
    double lhs, rhs;
    bool pass;
};

struct Certification {
    double eps, R;
    std::vector<CertCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::string to_json() const;
};

/// Certify (eps, R): R >= 1/eps, the two log inequalities, and (when series
/// are supplied) the empirical smallness of g, h on the boundary of U_R.
Certification certify_params(double eps, double R,
                             const std::vector<cplx>* g_series = nullptr,
                             const std::vector<cplx>* h_series = nullptr);

/// Sector parameters; construction requires certification to pass.
struct RegionParams {
    double eps;
    double R;

    static RegionParams make(double eps, double R);

    double entry_R() const { return 1.0 / eps; } // D'-entry radius (paper couples R = 1/eps)
};

inline bool in_V(cplx z, double eps) {
    const double a = std::abs(z);
    return a > 0.0 && a < eps && std::abs(arg_from_pi(z)) < kAperture;
}
inline bool in_V(cplx z, const RegionParams& p) { return in_V(z, p.eps); }

inline bool in_U(cplx zeta, double radius) {
    return std::abs(zeta) > radius && std::abs(arg_from_pi(zeta)) < kAperture;
}

/// T_{b,a} = U_b intersected with |zeta| < a.
inline bool in_T(cplx zeta, double b, double a) { return in_U(zeta, b) && std::abs(zeta) < a; }

/// T'_{a,b} = {a < |zeta| < b, |Arg(zeta) - pi| < pi/20}.
inline bool in_Tprime(cplx zeta, double a, double b) {
    const double m = std::abs(zeta);
    return m > a && m < b && std::abs(arg_from_pi(zeta)) < kNarrowAperture;
}

/// D in (z,w): z in V_eps, w - gamma(z) in V_eps, |z| < |w - gamma(z)|.
bool in_D(cplx z, cplx w, const RegionParams& params, const CurveSeries& curve);

/// D in (x,y): both in U_{1/eps}, |y| < |x|.
inline bool in_D_xy(cplx x, cplx y, const RegionParams& p) {
    const double r = 1.0 / p.eps;
    return in_U(x, r) && in_U(y, r) && std::abs(y) < std::abs(x);
}

/// D' in (t,y): t in U_{2R}, y in U_R, |y| < |t|/2.
inline bool in_Dprime_ty(cplx t, cplx y, double R) {
    return in_U(t, 2 * R) && in_U(y, R) && std::abs(y) < std::abs(t) / 2;
}
inline bool in_Dprime_ty(cplx t, cplx y, const RegionParams& p) { return in_Dprime_ty(t, y, p.R); }

/// Same with every t-inequality strengthened by `margin` (used when t is the
/// cheap mu_0 estimate rather than the full Abel-Fatou value).
inline bool in_Dprime_ty_margin(cplx t, cplx y, double R, double margin) {
    const double at = std::abs(t);
    return at > 2 * R + margin && std::abs(arg_from_pi(t)) < kAperture - margin / at &&
           in_U(y, R) && std::abs(y) < at / 2 - margin;
}

} // namespace parab

#include "parab/curve.hpp"

#include "parab/mapchain.hpp"
#include "parab/regions.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace parab {
namespace {

// Residual of the invariance identity for a partial gamma, as a univariate
// series: H(z) = F2(z, gamma(z)) - gamma(F1(z, gamma(z))).
template <class K>
Series1<K> invariance_residual(const MapJet<K>& m, const Series1<K>& gamma) {
    Series1<K> z1 = Series1<K>::substitute_into_jet(m.first, gamma);
    Series1<K> lhs = Series1<K>::substitute_into_jet(m.second, gamma);
    return lhs - Series1<K>::compose(gamma, z1);
}

template <class K>
std::vector<K> solve_curve_impl(const MapJet<K>& m, int N) {
    if (!m.tangent_to_identity()) throw std::domain_error("curve solver needs tangency to identity");
    if (m.order() < N + 1)
        throw std::invalid_argument("jet order must be at least N+1 to solve gamma to degree N");
    const int ord = m.order();
    Series1<K> gamma(ord);
    for (int deg = 4; deg <= N + 1; ++deg) {
        Series1<K> H = invariance_residual(m, gamma);
        // order-deg equation: [z^deg] H + pivot * gamma_{deg-1} = 0 with
        // pivot = b11 - (deg-1); b11 = coeff(zw) of the second component.
        K b11 = m.second.coeff(1, 1);
        K pivot = b11 - ring_traits<K>::from_fraction(deg - 1, 1);
        if (ring_traits<K>::is_zero(pivot))
            throw std::domain_error("zero pivot (resonance) solving gamma at order " +
                                    std::to_string(deg - 1));
        K val = H[deg];
        val = val / pivot;
        gamma[deg - 1] = ring_traits<K>::zero() - val; // gamma_{deg-1} = -H[deg]/pivot
    }
    std::vector<K> out(N + 1, ring_traits<K>::zero());
    for (int k = 3; k <= N; ++k) out[k] = gamma[k];
    return out;
}

} // namespace

CurveSeries solve_curve(const MapJet<Rational>& m, int N) {
    auto coef = solve_curve_impl(m, N);
    CurveSeries c;
    c.order = N;
    c.coeffs_q = coef;
    c.coeffs.resize(N + 1, cplx(0, 0));
    for (int k = 0; k <= N; ++k) c.coeffs[k] = ring_traits<Rational>::to_complex(coef[k]);
    {
        Series1<Rational> gam(m.order());
        for (int k = 3; k <= N; ++k) gam[k] = coef[k];
        Series1<Rational> oncurve = Series1<Rational>::substitute_into_jet(m.first, gam);
        c.oncurve_c3 = ring_traits<Rational>::to_complex(oncurve[3]);
    }
    // growth constant: max |gamma_k| and the largest consecutive ratio
    double mx = 0.0, ratio = 1.0;
    for (int k = 3; k <= N; ++k) {
        mx = std::max(mx, std::abs(c.coeffs[k]));
        if (k > 3 && std::abs(c.coeffs[k - 1]) > 0)
            ratio = std::max(ratio, std::abs(c.coeffs[k]) / std::abs(c.coeffs[k - 1]));
    }
    c.M = mx * ratio;
    c.growth_ratio = ratio;
    return c;
}

std::vector<cplx> solve_curve_coeffs(const MapJet<cplx>& m, int N) { return solve_curve_impl(m, N); }

CurveEval eval_curve(const CurveSeries& c, cplx z, const RegionParams& params) {
    if (!in_V(z, params)) throw std::domain_error("eval_curve: z outside V_eps");
    return {c.value(z), c.derivative(z), c.tail_bound(std::abs(z))};
}

void measure_curve_bounds(CurveSeries& c, const RegionParams& params) {
    std::mt19937_64 rng(0x67a1b2c3d4e5f607ull);
    std::uniform_real_distribution<double> mod(1e-6, params.eps), ang(-kAperture, kAperture);
    double c1 = 0.0, c2 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = mod(rng);
        const cplx z = -std::polar(r, ang(rng));
        c1 = std::max(c1, std::abs(c.value(z)) / (r * r * r));
        c2 = std::max(c2, std::abs(c.derivative(z)) / (r * r));
    }
    c.measured_C1 = c1;
    c.measured_C2 = c2;
}

std::string CurveSeries::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"order\":" << order << ",\"coeffs\":[";
    bool first = true;
    for (int k = 3; k <= order; ++k) {
        if (!first) os << ',';
        first = false;
        os << '[' << k << ',' << coeffs[k].real() << ',' << coeffs[k].imag() << ']';
    }
    os << "],\"C1\":" << measured_C1 << ",\"C2\":" << measured_C2 << ",\"M\":" << M << '}';
    return os.str();
}

cplx OnCurveMap::step(cplx z) const {
    auto [z1, w1] = chain_->forward(z, curve_->value(z));
    (void)w1;
    return z1;
}

cplx OnCurveMap::b() const {
    // on-curve map is z + z^2 + c3 z^3 + ...; the Abel log weight is b = 1 - c3
    return cplx(1.0, 0.0) - curve_->oncurve_c3;
}

CurveFatou curve_fatou(const OnCurveMap& m, cplx z, double tol, long n_max) {
    if (tol <= 0) throw std::invalid_argument("curve_fatou: tol must be positive");
    const cplx b = m.b();
    cplx zc = z;
    cplx prev = 0.0;
    bool have_prev = false;
    for (long n = 0; n < n_max; ++n) {
        const cplx tau = -1.0 / zc;
        const cplx val = tau - cplx(double(n), 0.0) - b * std::log(tau); // principal branch
        if (have_prev && std::abs(val - prev) < tol && n > 32)
            return {val, n, std::abs(val - prev) * double(n)};
        prev = val;
        have_prev = true;
        zc = m.step(zc);
        if (!std::isfinite(zc.real()) || !std::isfinite(zc.imag()))
            throw std::domain_error("curve_fatou: orbit left the domain");
    }
    throw std::domain_error("curve_fatou: no convergence within iteration budget");
}

CurveFatou phi_on_gamma(const MapChain& chain, const CurveSeries& curve, const RegionParams& params,
                        cplx z, cplx w, double tol, long budget) {
    OnCurveMap oc(chain, curve);
    cplx zc = z, wc = w;
    for (long n = 0; n <= budget; ++n) {
        if (in_V(zc, params) && std::abs(wc - curve.value(zc)) < tol) {
            CurveFatou f = curve_fatou(oc, zc, tol);
            f.value -= double(n);
            return f;
        }
        std::tie(zc, wc) = chain.forward(zc, wc);
        if (!std::isfinite(zc.real()) || !std::isfinite(wc.real()))
            throw std::domain_error("phi_on_gamma: orbit diverged before reaching the curve");
    }
    throw std::domain_error("phi_on_gamma: point not attracted to the curve within budget");
}

} // namespace parab

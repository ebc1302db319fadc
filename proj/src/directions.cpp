#include "parab/directions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parab {
namespace {

template <class K>
int nonlinear_order_impl(const MapJet<K>& m) {
    if (!m.tangent_to_identity())
        throw std::domain_error("characteristic directions need a tangent-to-identity jet");
    for (int d = 2; d <= m.order(); ++d) {
        auto p = m.first.homogeneous(d);
        auto q = m.second.homogeneous(d);
        auto nz = [](const auto& v) {
            return std::any_of(v.begin(), v.end(),
                               [](const K& x) { return !ring_traits<K>::is_zero(x); });
        };
        if (nz(p) || nz(q)) return d;
    }
    throw std::domain_error("identically-zero nonlinear part: nu(F) undefined at this order");
}

// r(u) = Q_k(1,u) - u P_k(1,u) as a coefficient vector (degree k+1)
template <class K>
std::vector<K> chart_polynomial(const MapJet<K>& m, int k) {
    auto p = m.first.homogeneous(k);  // p[j] = coeff z^{k-j} w^j
    auto q = m.second.homogeneous(k);
    std::vector<K> r(k + 2, ring_traits<K>::zero());
    for (int j = 0; j <= k; ++j) {
        r[j] += q[j];
        r[j + 1] -= p[j];
    }
    return r;
}

template <class K>
K poly_eval(const std::vector<K>& c, const K& x) {
    K s = ring_traits<K>::zero();
    for (size_t i = c.size(); i-- > 0;) s = s * x + c[i];
    return s;
}

cplx ipow(cplx b, int e) {
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

cplx homo_eval(const std::vector<cplx>& h, cplx v1, cplx v2) {
    // h[j] multiplies v1^{k-j} v2^j
    const int k = int(h.size()) - 1;
    cplx s = 0.0;
    for (int j = 0; j <= k; ++j) s += h[j] * ipow(v1, k - j) * ipow(v2, j);
    return s;
}

CharacteristicDirection make_dir(cplx v1, cplx v2, cplx lambda, int mult, bool exact, double tol) {
    // normalize so the larger-modulus entry is 1
    if (std::abs(v2) > std::abs(v1)) {
        v1 /= v2;
        v2 = 1.0;
    } else {
        v2 /= v1;
        v1 = 1.0;
    }
    return {v1, v2, lambda, std::abs(lambda) <= tol, mult, exact};
}

} // namespace

int nonlinear_order(const MapJet<cplx>& m) { return nonlinear_order_impl(m); }
int nonlinear_order(const MapJet<Rational>& m) { return nonlinear_order_impl(m); }

std::vector<std::pair<cplx, int>> polynomial_roots(const std::vector<cplx>& coeffs,
                                                   double cluster_tol) {
    // strip leading zeros
    std::vector<cplx> c = coeffs;
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() <= 1) return {};
    const int n = int(c.size()) - 1;
    // Durand-Kerner from spread starting points
    std::vector<cplx> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = std::polar(0.4 + 0.9 * i / n, 2 * M_PI * i / n + 0.5);
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx num = poly_eval(c, roots[i]) / c.back();
            cplx den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= roots[i] - roots[j];
            cplx delta = num / den;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-15) break;
    }
    // cluster equal roots into multiplicities
    std::vector<std::pair<cplx, int>> out;
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        cplx sum = roots[i];
        int cnt = 1;
        used[i] = true;
        for (int j = i + 1; j < n; ++j) {
            if (!used[j] && std::abs(roots[j] - roots[i]) < cluster_tol * (1.0 + std::abs(roots[i]))) {
                sum += roots[j];
                ++cnt;
                used[j] = true;
            }
        }
        out.push_back({sum / double(cnt), cnt});
    }
    return out;
}

std::vector<CharacteristicDirection> characteristic_directions(const MapJet<cplx>& m, double tol) {
    const int k = nonlinear_order(m);
    auto r = chart_polynomial(m, k);
    auto p = m.first.homogeneous(k);
    auto q = m.second.homogeneous(k);
    if (std::all_of(r.begin(), r.end(), [&](cplx c) { return std::abs(c) <= tol; }))
        throw std::domain_error("dicritical P_k: every direction is characteristic");

    std::vector<CharacteristicDirection> dirs;
    for (auto& [u0, mult] : polynomial_roots(r)) {
        cplx lambda = homo_eval(p, 1.0, u0);
        dirs.push_back(make_dir(1.0, u0, lambda, mult, false, tol));
    }
    // chart [0:1]: characteristic iff P_k(0,1) = 0, lambda = Q_k(0,1)
    if (std::abs(p[k]) <= tol) dirs.push_back(make_dir(0.0, 1.0, q[k], 1, std::abs(p[k]) == 0.0, tol));
    return dirs;
}

std::vector<CharacteristicDirection> characteristic_directions(const MapJet<Rational>& m) {
    const int k = nonlinear_order(m);
    auto r = chart_polynomial(m, k);
    if (std::all_of(r.begin(), r.end(), [](const Rational& c) { return sgn(c) == 0; }))
        throw std::domain_error("dicritical P_k: every direction is characteristic");

    // exact rational roots: clear denominators, enumerate divisor candidates
    std::vector<CharacteristicDirection> dirs;
    std::vector<Rational> reduced = r;
    auto deg = [](const std::vector<Rational>& c) {
        int d = int(c.size()) - 1;
        while (d > 0 && sgn(c[d]) == 0) --d;
        return d;
    };
    auto deflate = [](std::vector<Rational>& c, const Rational& root, int d) {
        // synthetic division by (u - root)
        std::vector<Rational> out(d, Rational(0));
        Rational carry = c[d];
        for (int i = d - 1; i >= 0; --i) {
            out[i] = carry;
            carry = c[i] + carry * root;
        }
        c = out;
        c.resize(d, Rational(0));
    };

    auto p = m.first.homogeneous(k);
    auto eval_lambda = [&](const Rational& u0) {
        Rational acc(0), upow(1);
        for (int j = 0; j <= k; ++j) {
            acc += p[j] * upow;
            upow *= u0;
        }
        return acc;
    };
    auto all_zero = [](const std::vector<Rational>& c) {
        return std::all_of(c.begin(), c.end(), [](const Rational& x) { return sgn(x) == 0; });
    };

    int d = deg(reduced);
    // root u = 0 first (constant term vanishing)
    if (!all_zero(reduced) && sgn(reduced[0]) == 0) {
        int mult = 0;
        while (d > 0 && sgn(reduced[0]) == 0 && !all_zero(reduced)) {
            deflate(reduced, Rational(0), d);
            d = deg(reduced);
            ++mult;
        }
        Rational lam = eval_lambda(Rational(0));
        dirs.push_back({cplx(1, 0), cplx(0, 0), ring_traits<Rational>::to_complex(lam), sgn(lam) == 0,
                        mult, true});
    }
    if (d > 0 && !all_zero(reduced)) {
        // clear denominators to integer polynomial
        mpz_class lcm_den(1);
        for (int i = 0; i <= d; ++i)
            mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), reduced[i].get_den_mpz_t());
        std::vector<mpz_class> ic(d + 1);
        for (int i = 0; i <= d; ++i) ic[i] = mpz_class(reduced[i] * lcm_den);
        // divisors of |ic[0]| and |ic[d]| (bounded enumeration)
        auto divisors = [](mpz_class v) {
            std::vector<mpz_class> out;
            v = abs(v);
            if (v == 0) return out;
            for (mpz_class t = 1; t * t <= v && out.size() < 64; ++t)
                if (v % t == 0) {
                    out.push_back(t);
                    out.push_back(v / t);
                }
            return out;
        };
        for (const auto& pnum : divisors(ic[0]))
            for (const auto& qden : divisors(ic[d]))
                for (int sign : {1, -1}) {
                    if (deg(reduced) == 0) break;
                    Rational cand(sign * pnum, qden);
                    cand.canonicalize();
                    int mult = 0;
                    while (deg(reduced) > 0 && sgn(poly_eval(reduced, cand)) == 0) {
                        deflate(reduced, cand, deg(reduced));
                        ++mult;
                    }
                    if (mult > 0) {
                        Rational lam = eval_lambda(cand);
                        dirs.push_back({cplx(1, 0), ring_traits<Rational>::to_complex(cand),
                                        ring_traits<Rational>::to_complex(lam), sgn(lam) == 0, mult,
                                        true});
                    }
                }
        d = deg(reduced);
        if (d > 0 && !std::all_of(reduced.begin(), reduced.end(),
                                  [](const Rational& x) { return sgn(x) == 0; })) {
            // non-rational factor: fall back to binary64 roots
            std::vector<cplx> rc(d + 1);
            for (int i = 0; i <= d; ++i) rc[i] = ring_traits<Rational>::to_complex(reduced[i]);
            auto pC = m.first.to_complex().homogeneous(k);
            for (auto& [u0, mult] : polynomial_roots(rc)) {
                cplx lambda = homo_eval(pC, 1.0, u0);
                dirs.push_back(make_dir(1.0, u0, lambda, mult, false, 1e-12));
            }
        }
    }
    // normalize chart-[1:u] entries (|u|>1 flips)
    for (auto& dd : dirs)
        if (std::abs(dd.v2) > std::abs(dd.v1)) {
            dd.v1 /= dd.v2;
            dd.v2 = 1.0;
        }
    // chart [0:1]
    auto pk = m.first.homogeneous(k);
    auto qk = m.second.homogeneous(k);
    if (sgn(pk[k]) == 0)
        dirs.push_back({cplx(0, 0), cplx(1, 0), ring_traits<Rational>::to_complex(qk[k]),
                        sgn(qk[k]) == 0, 1, true});
    return dirs;
}

cplx director(const MapJet<cplx>& m, const CharacteristicDirection& d) {
    if (d.degenerate) throw std::domain_error("director of a degenerate direction");
    if (d.v1 == cplx(0.0) || std::abs(d.v2) > std::abs(d.v1) * 1e12)
        throw std::domain_error("direction [0:1] needs a coordinate swap first");
    const int k = nonlinear_order(m);
    auto r = chart_polynomial(m, k);
    const cplx u0 = d.v2 / d.v1;
    // r'(u0)
    cplx rp = 0.0;
    for (size_t i = r.size(); i-- > 1;) rp = rp * u0 + double(i) * r[i];
    cplx pk = homo_eval(m.first.homogeneous(k), 1.0, u0);
    if (pk == cplx(0.0)) throw std::domain_error("P_k(1,u0) vanishes");
    return rp / pk;
}

Rational director(const MapJet<Rational>& m, const Rational& u0) {
    const int k = nonlinear_order(m);
    auto r = chart_polynomial(m, k);
    Rational rp(0);
    for (size_t i = r.size(); i-- > 1;) rp = rp * u0 + Rational(long(i)) * r[i];
    auto p = m.first.homogeneous(k);
    Rational pk(0), upow(1);
    for (int j = 0; j <= k; ++j) {
        pk += p[j] * upow;
        upow *= u0;
    }
    if (sgn(pk) == 0) throw std::domain_error("P_k(1,u0) vanishes");
    return rp / pk;
}

} // namespace parab

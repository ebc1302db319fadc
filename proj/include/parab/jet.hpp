#pragma once

#include "parab/rational.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parab {

/// Truncated bivariate power series at the origin: coefficients of z^i w^j for
/// i + j <= order, closed under ring operations at fixed total degree.
/// K is the coefficient ring (Rational or cplx, see ring_traits).
template <class K>
class Jet2 {
public:
    explicit Jet2(int order) : order_(order), c_((order + 1) * (order + 2) / 2, ring_traits<K>::zero()) {
        if (order < 0) throw std::invalid_argument("jet order must be >= 0");
    }

    static Jet2 constant(int order, K v) {
        Jet2 j(order);
        j.c_[0] = std::move(v);
        return j;
    }
    static Jet2 var_z(int order) {
        Jet2 j(order);
        j.set(1, 0, ring_traits<K>::one());
        return j;
    }
    static Jet2 var_w(int order) {
        Jet2 j(order);
        j.set(0, 1, ring_traits<K>::one());
        return j;
    }

    int order() const { return order_; }

    const K& coeff(int i, int j) const { return c_[idx(i, j)]; }
    void set(int i, int j, K v) { c_[idx(i, j)] = std::move(v); }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const K& x) { return ring_traits<K>::is_zero(x); });
    }

    Jet2& operator+=(const Jet2& o) {
        check_order(o);
        for (size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        check_order(o);
        for (size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
        return *this;
    }
    Jet2& operator*=(const K& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(Jet2 a, const K& s) { return a *= s; }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        a.check_order(b);
        const int N = a.order_;
        Jet2 r(N);
        for (int d1 = 0; d1 <= N; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const K& x = a.c_[d1 * (d1 + 1) / 2 + j1];
                if (ring_traits<K>::is_zero(x)) continue;
                for (int d2 = 0; d2 + d1 <= N; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2) {
                        const K& y = b.c_[d2 * (d2 + 1) / 2 + j2];
                        if (ring_traits<K>::is_zero(y)) continue;
                        r.c_[(d1 + d2) * (d1 + d2 + 1) / 2 + j1 + j2] += x * y;
                    }
            }
        return r;
    }

    bool operator==(const Jet2& o) const { return order_ == o.order_ && c_ == o.c_; }

    /// Homogeneous part of total degree d as a coefficient list [i = d..0 -> j = d-i].
    std::vector<K> homogeneous(int d) const {
        std::vector<K> h(d + 1, ring_traits<K>::zero());
        for (int j = 0; j <= d; ++j) h[j] = c_[d * (d + 1) / 2 + j];
        return h; // h[j] = coeff(d-j, j)
    }

    /// Exact division by the monomial z (every nonzero term must carry a z factor).
    Jet2 divided_by_z() const {
        Jet2 r(order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) {
                const K& x = c_[d * (d + 1) / 2 + j];
                if (ring_traits<K>::is_zero(x)) continue;
                if (j == d) throw std::domain_error("jet not divisible by z");
                r.c_[(d - 1) * d / 2 + j] = x;
            }
        return r;
    }
    Jet2 divided_by_w() const {
        Jet2 r(order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) {
                const K& x = c_[d * (d + 1) / 2 + j];
                if (ring_traits<K>::is_zero(x)) continue;
                if (j == 0) throw std::domain_error("jet not divisible by w");
                r.c_[(d - 1) * d / 2 + j - 1] = x;
            }
        return r;
    }

    Jet2 truncated(int new_order) const {
        Jet2 r(new_order);
        for (int d = 0; d <= std::min(order_, new_order); ++d)
            for (int j = 0; j <= d; ++j) r.c_[d * (d + 1) / 2 + j] = c_[d * (d + 1) / 2 + j];
        return r;
    }

    Jet2<cplx> to_complex() const {
        Jet2<cplx> r(order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) r.set(d - j, j, ring_traits<K>::to_complex(c_[d * (d + 1) / 2 + j]));
        return r;
    }

    /// Evaluate the polynomial at a point (truncation ignored; plain sum).
    cplx eval(cplx z, cplx w) const {
        // Horner in w within each z-power block would need a different layout;
        // powers are fine at these orders.
        std::vector<cplx> zp(order_ + 1), wp(order_ + 1);
        zp[0] = wp[0] = 1.0;
        for (int m = 1; m <= order_; ++m) {
            zp[m] = zp[m - 1] * z;
            wp[m] = wp[m - 1] * w;
        }
        cplx s = 0.0;
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) {
                const K& x = c_[d * (d + 1) / 2 + j];
                if (!ring_traits<K>::is_zero(x)) s += ring_traits<K>::to_complex(x) * zp[d - j] * wp[j];
            }
        return s;
    }

private:
    size_t idx(int i, int j) const {
        if (i < 0 || j < 0 || i + j > order_) throw std::out_of_range("jet monomial out of range");
        const int d = i + j;
        return size_t(d) * (d + 1) / 2 + j;
    }
    void check_order(const Jet2& o) const {
        if (order_ != o.order_) throw std::invalid_argument("jet order mismatch");
    }

    int order_;
    std::vector<K> c_;
};

/// JSON form {"order": N, "coeffs": [[i, j, value], ...]} with coefficients
/// sorted by (i+j, i); value is "num/den" in rational mode, [re, im] in
/// binary64 mode.
inline std::string coeff_json(const Rational& c) { return '"' + to_string(c) + '"'; }
inline std::string coeff_json(const cplx& c) {
    std::ostringstream os;
    os.precision(17);
    os << '[' << c.real() << ',' << c.imag() << ']';
    return os.str();
}

template <class K>
std::string jet_to_json(const Jet2<K>& j) {
    std::ostringstream os;
    os << "{\"order\":" << j.order() << ",\"coeffs\":[";
    bool first = true;
    for (int d = 0; d <= j.order(); ++d)
        for (int i = 0; i <= d; ++i) {
            const K& c = j.coeff(i, d - i);
            if (ring_traits<K>::is_zero(c)) continue;
            if (!first) os << ',';
            first = false;
            os << '[' << i << ',' << (d - i) << ',' << coeff_json(c) << ']';
        }
    os << "]}";
    return os.str();
}

/// exp of a jet with zero constant term: sum a^m / m! truncated.
template <class K>
Jet2<K> jet_exp(const Jet2<K>& a) {
    if (!ring_traits<K>::is_zero(a.coeff(0, 0)))
        throw std::domain_error("jet_exp requires zero constant term");
    const int N = a.order();
    Jet2<K> r = Jet2<K>::constant(N, ring_traits<K>::one());
    Jet2<K> term = Jet2<K>::constant(N, ring_traits<K>::one());
    for (int m = 1; m <= N; ++m) {
        term = term * a;                              // term carries a^m / (m-1)! here
        term *= ring_traits<K>::from_fraction(1, m);  // now a^m / m!
        r += term;
    }
    return r;
}

/// log(1 + a) for a with zero constant term.
template <class K>
Jet2<K> jet_log1p(const Jet2<K>& a) {
    if (!ring_traits<K>::is_zero(a.coeff(0, 0)))
        throw std::domain_error("jet_log1p requires zero constant term");
    const int N = a.order();
    Jet2<K> r(N);
    Jet2<K> term = Jet2<K>::constant(N, ring_traits<K>::one());
    for (int m = 1; m <= N; ++m) {
        term = term * a;
        Jet2<K> t = term;
        t *= ring_traits<K>::from_fraction((m % 2) ? 1 : -1, m);
        r += t;
    }
    return r;
}

/// 1/a for a unit jet (constant term 1): geometric series in (1 - a).
template <class K>
Jet2<K> jet_inverse_unit(const Jet2<K>& a) {
    if (!(a.coeff(0, 0) == ring_traits<K>::one()))
        throw std::domain_error("jet_inverse_unit requires constant term 1");
    const int N = a.order();
    Jet2<K> q = Jet2<K>::constant(N, ring_traits<K>::one());
    q -= a; // q = 1 - a, zero constant term
    Jet2<K> r = Jet2<K>::constant(N, ring_traits<K>::one());
    Jet2<K> term = Jet2<K>::constant(N, ring_traits<K>::one());
    for (int m = 1; m <= N; ++m) {
        term = term * q;
        r += term;
    }
    return r;
}

/// Pair of coordinate jets of a map fixing the origin.
template <class K>
struct MapJet {
    Jet2<K> first;
    Jet2<K> second;

    MapJet(Jet2<K> f, Jet2<K> s) : first(std::move(f)), second(std::move(s)) {
        if (first.order() != second.order()) throw std::invalid_argument("component order mismatch");
        if (!ring_traits<K>::is_zero(first.coeff(0, 0)) || !ring_traits<K>::is_zero(second.coeff(0, 0)))
            throw std::invalid_argument("map jet must fix the origin");
    }

    static MapJet identity(int order) {
        return {Jet2<K>::var_z(order), Jet2<K>::var_w(order)};
    }

    int order() const { return first.order(); }

    bool tangent_to_identity() const {
        return first.coeff(1, 0) == ring_traits<K>::one() && ring_traits<K>::is_zero(first.coeff(0, 1)) &&
               ring_traits<K>::is_zero(second.coeff(1, 0)) && second.coeff(0, 1) == ring_traits<K>::one();
    }

    MapJet<cplx> to_complex() const { return {first.to_complex(), second.to_complex()}; }
};

/// Substitute a jet pair (with zero constant terms) into a single jet.
template <class K>
Jet2<K> jet_substitute(const Jet2<K>& outer, const Jet2<K>& f, const Jet2<K>& g) {
    const int N = outer.order();
    if (f.order() != N || g.order() != N) throw std::invalid_argument("jet order mismatch");
    if (!ring_traits<K>::is_zero(f.coeff(0, 0)) || !ring_traits<K>::is_zero(g.coeff(0, 0)))
        throw std::invalid_argument("inner map must fix the origin");
    std::vector<Jet2<K>> fp, gp;
    fp.reserve(N + 1);
    gp.reserve(N + 1);
    fp.push_back(Jet2<K>::constant(N, ring_traits<K>::one()));
    gp.push_back(Jet2<K>::constant(N, ring_traits<K>::one()));
    for (int m = 1; m <= N; ++m) {
        fp.push_back(fp.back() * f);
        gp.push_back(gp.back() * g);
    }
    Jet2<K> r(N);
    for (int d = 0; d <= N; ++d)
        for (int j = 0; j <= d; ++j) {
            const K& x = outer.coeff(d - j, j);
            if (ring_traits<K>::is_zero(x)) continue;
            Jet2<K> t = fp[d - j] * gp[j];
            t *= x;
            r += t;
        }
    return r;
}

/// Jet of outer∘inner at the common order.
template <class K>
MapJet<K> map_compose(const MapJet<K>& outer, const MapJet<K>& inner) {
    return {jet_substitute(outer.first, inner.first, inner.second),
            jet_substitute(outer.second, inner.first, inner.second)};
}

} // namespace parab

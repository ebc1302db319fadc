#pragma once

#include "parab/jet.hpp"
#include "parab/rational.hpp"

#include <stdexcept>
#include <vector>

namespace parab {

/// Univariate truncated power series, coefficients c[0..order].
template <class K>
class Series1 {
public:
    explicit Series1(int order) : c_(order + 1, ring_traits<K>::zero()) {}

    int order() const { return int(c_.size()) - 1; }
    const K& operator[](int d) const { return c_.at(d); }
    K& operator[](int d) { return c_.at(d); }

    static Series1 var(int order) {
        Series1 s(order);
        s[1] = ring_traits<K>::one();
        return s;
    }

    Series1& operator+=(const Series1& o) {
        check(o);
        for (size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
        return *this;
    }
    Series1& operator-=(const Series1& o) {
        check(o);
        for (size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
        return *this;
    }
    Series1& operator*=(const K& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend Series1 operator+(Series1 a, const Series1& b) { return a += b; }
    friend Series1 operator-(Series1 a, const Series1& b) { return a -= b; }

    friend Series1 operator*(const Series1& a, const Series1& b) {
        a.check(b);
        const int N = a.order();
        Series1 r(N);
        for (int i = 0; i <= N; ++i) {
            if (ring_traits<K>::is_zero(a.c_[i])) continue;
            for (int j = 0; i + j <= N; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    bool operator==(const Series1& o) const { return c_ == o.c_; }

    /// outer(inner) with inner(0) = 0.
    static Series1 compose(const Series1& outer, const Series1& inner) {
        outer.check(inner);
        if (!ring_traits<K>::is_zero(inner.c_[0]))
            throw std::domain_error("series composition needs inner(0) = 0");
        const int N = outer.order();
        Series1 r(N);
        r[0] = outer.c_[0];
        Series1 p(N);
        p[0] = ring_traits<K>::one();
        for (int d = 1; d <= N; ++d) {
            p = p * inner;
            if (ring_traits<K>::is_zero(outer.c_[d])) continue;
            Series1 t = p;
            t *= outer.c_[d];
            r += t;
        }
        return r;
    }

    /// Compositional inverse of s = z + O(z^2): returns g with g(s(z)) = z up to order.
    static Series1 reversion(const Series1& s) {
        if (!ring_traits<K>::is_zero(s.c_[0]) || !(s.c_[1] == ring_traits<K>::one()))
            throw std::domain_error("reversion needs s = z + O(z^2)");
        const int N = s.order();
        Series1 g = var(N);
        // fix one coefficient per pass: g(s(z)) - z vanishes to increasing order
        for (int d = 2; d <= N; ++d) {
            Series1 err = compose(g, s) - var(N);
            g[d] -= err[d]; // s has unit linear part so err[d] shifts one-to-one
        }
        return g;
    }

    /// Substitute w = this series into a bivariate jet: j(z, s(z)).
    static Series1 substitute_into_jet(const Jet2<K>& j, const Series1& s) {
        const int N = s.order();
        Series1 r(N);
        std::vector<Series1> pw;
        pw.reserve(N + 1);
        Series1 one(N);
        one[0] = ring_traits<K>::one();
        pw.push_back(one);
        for (int m = 1; m <= N; ++m) pw.push_back(pw.back() * s);
        for (int d = 0; d <= std::min(j.order(), N); ++d)
            for (int jj = 0; jj <= d; ++jj) {
                const K& x = j.coeff(d - jj, jj);
                if (ring_traits<K>::is_zero(x)) continue;
                // monomial z^{d-jj} w^{jj}
                const Series1& p = pw[jj];
                for (int m = 0; m + (d - jj) <= N; ++m) {
                    if (!ring_traits<K>::is_zero(p[m])) r[m + d - jj] += x * p[m];
                }
            }
        return r;
    }

    Series1<cplx> to_complex() const {
        Series1<cplx> r(order());
        for (int d = 0; d <= order(); ++d) r[d] = ring_traits<K>::to_complex(c_[d]);
        return r;
    }

    cplx eval(cplx z) const {
        cplx s = 0.0;
        for (int d = order(); d >= 0; --d) s = s * z + ring_traits<K>::to_complex(c_[d]);
        return s;
    }

private:
    void check(const Series1& o) const {
        if (c_.size() != o.c_.size()) throw std::invalid_argument("series order mismatch");
    }
    std::vector<K> c_;
};

} // namespace parab

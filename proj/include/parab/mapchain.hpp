#pragma once

#include "parab/jet.hpp"
#include "parab/rational.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace parab {

/// One shear/overshear/diagonal automorphism of C^2. `axis` names the
/// coordinate being modified; the polynomial data acts on the other one.
///   shear     first:(z + f(w), w)   second:(z, w + f(z))
///   overshear first:(z e^{g(w)}, w) second:(z, w e^{g(z)})
///   diagonal  first:(c z, w)        second:(z, c w)
struct ElementaryMap {
    enum class Kind { shear, overshear, diagonal };
    enum class Axis { first, second };

    Kind kind;
    Axis axis;
    std::vector<Rational> poly; // coefficients by degree; for diagonal, poly[0] = scale

    ElementaryMap inverse() const {
        ElementaryMap m = *this;
        if (kind == Kind::diagonal) {
            m.poly[0] = 1 / poly[0];
        } else {
            for (auto& c : m.poly) c = -c;
        }
        return m;
    }

    template <class T>
    std::complex<T> apply_poly(std::complex<T> x) const {
        std::complex<T> s(T(0), T(0));
        for (int d = int(poly.size()) - 1; d >= 0; --d)
            s = s * x + std::complex<T>(T(poly[d].get_d()), T(0));
        return s;
    }

    template <class T>
    void apply(std::complex<T>& z, std::complex<T>& w) const {
        std::complex<T>& tgt = (axis == Axis::first) ? z : w;
        const std::complex<T>& arg = (axis == Axis::first) ? w : z;
        switch (kind) {
            case Kind::shear: tgt += apply_poly(arg); break;
            case Kind::overshear: tgt *= std::exp(apply_poly(arg)); break;
            case Kind::diagonal: tgt *= std::complex<T>(T(poly[0].get_d()), T(0)); break;
        }
    }

    /// Jet of the map at a given order (exact rational coefficients).
    MapJet<Rational> jet(int order) const;
};

struct CurveSeries; // curve.hpp

/// Orbit of a point under repeated evaluation; u_n = w_n - gamma(z_n) when a
/// curve is attached. `truncated` flags a non-finite intermediate.
struct OrbitTrace {
    cplx seed_z, seed_w;
    std::vector<cplx> z, w;
    std::vector<cplx> u; // empty when no curve attached
    bool truncated = false;

    size_t length() const { return z.size(); }
    std::string to_csv() const;
};

/// Ordered composition of elementary maps (applied left to right).
class MapChain {
public:
    MapChain() = default;
    explicit MapChain(std::vector<ElementaryMap> maps) : maps_(std::move(maps)) {}

    const std::vector<ElementaryMap>& maps() const { return maps_; }
    bool empty() const { return maps_.empty(); }

    template <class T>
    std::pair<std::complex<T>, std::complex<T>> eval(std::complex<T> z, std::complex<T> w) const {
        for (const auto& m : maps_) m.apply(z, w);
        return {z, w};
    }

    template <class T>
    std::pair<std::complex<T>, std::complex<T>> eval_inverse(std::complex<T> z, std::complex<T> w) const {
        for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) {
            const ElementaryMap inv = it->inverse();
            inv.apply(z, w);
        }
        return {z, w};
    }

    std::pair<cplx, cplx> forward(cplx z, cplx w) const { return eval<double>(z, w); }
    std::pair<cplx, cplx> inverse(cplx z, cplx w) const { return eval_inverse<double>(z, w); }

    /// Exact rational jet of the whole chain; throws if it does not fix 0.
    MapJet<Rational> germ(int order) const;

    OrbitTrace orbit(cplx z0, cplx w0, int n, const CurveSeries* curve = nullptr) const;

private:
    std::vector<ElementaryMap> maps_;
};

/// The ten-map chain phi^{-1} o o2 o o1 o s2 o s1 o f4 o f3 o f2 o f1 o phi
/// in application order, defining the automorphism F.
MapChain paper_chain();

/// Closed-form evaluation of F (first and second coordinate), used as the
/// cross-check route against the chain.
std::pair<cplx, cplx> closed_form_F(cplx z, cplx w);

} // namespace parab

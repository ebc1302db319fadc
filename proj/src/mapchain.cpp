#include "parab/mapchain.hpp"

#include "parab/curve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parab {

MapJet<Rational> ElementaryMap::jet(int order) const {
    using J = Jet2<Rational>;
    const bool on_first = (axis == Axis::first);
    J z = J::var_z(order), w = J::var_w(order);
    J arg = on_first ? w : z;

    J poly_jet(order);
    for (int d = 0; d < int(poly.size()) && d <= order; ++d) {
        if (sgn(poly[d]) == 0) continue;
        // arg^d scaled
        J p = J::constant(order, Rational(1));
        for (int m = 0; m < d; ++m) p = p * arg;
        p *= poly[d];
        poly_jet += p;
    }

    J tgt = on_first ? z : w;
    switch (kind) {
        case Kind::shear:
            if (!poly.empty() && sgn(poly[0]) != 0)
                throw std::domain_error("shear polynomial must vanish at 0 to fix the origin");
            tgt += poly_jet;
            break;
        case Kind::overshear:
            if (!poly.empty() && sgn(poly[0]) != 0)
                throw std::domain_error("overshear exponent must vanish at 0");
            tgt = tgt * jet_exp(poly_jet);
            break;
        case Kind::diagonal:
            tgt *= poly[0];
            break;
    }
    return on_first ? MapJet<Rational>{tgt, w} : MapJet<Rational>{z, tgt};
}

MapJet<Rational> MapChain::germ(int order) const {
    if (maps_.empty()) throw std::invalid_argument("empty chain has no germ");
    MapJet<Rational> cur = MapJet<Rational>::identity(order);
    for (const auto& m : maps_) cur = map_compose(m.jet(order), cur);
    return cur;
}

MapChain paper_chain() {
    using EM = ElementaryMap;
    auto shear2 = [](std::vector<Rational> p) {
        return EM{EM::Kind::shear, EM::Axis::second, std::move(p)};
    };
    auto overshear1 = [](std::vector<Rational> p) {
        return EM{EM::Kind::overshear, EM::Axis::first, std::move(p)};
    };
    auto overshear2 = [](std::vector<Rational> p) {
        return EM{EM::Kind::overshear, EM::Axis::second, std::move(p)};
    };
    auto diag2 = [](Rational c) {
        return EM{EM::Kind::diagonal, EM::Axis::second, {std::move(c)}};
    };
    const Rational z0(0);
    return MapChain({
        diag2(Rational(2)),                       // phi: (z, 2w)
        shear2({z0, Rational(1)}),                // f1: (z, w + z)
        overshear1({z0, Rational(1)}),            // f2: (z e^w, w)
        shear2({z0, Rational(-1)}),               // f3: (z, w - z)
        overshear1({z0, Rational(-1)}),           // f4: (z e^{-w}, w)
        shear2({z0, z0, Rational(1)}),            // s1: (z, w + z^2)
        shear2({z0, z0, z0, rat(-3, 2)}),         // s2: (z, w - 3z^3/2)
        overshear2({z0, Rational(1)}),            // o1: (z, w e^z)
        overshear2({z0, z0, rat(1, 2)}),          // o2: (z, w e^{z^2/2})
        diag2(rat(1, 2)),                         // phi^{-1}: (z, w/2)
    });
}

std::pair<cplx, cplx> closed_form_F(cplx z, cplx w) {
    const cplx E = std::exp(2.0 * w + z);
    const cplx zE = z * E;
    const cplx A = std::exp(zE);        // e^{z e^{2w+z}}
    const cplx B = std::exp(2.0 * zE);
    const cplx C = std::exp(3.0 * zE);
    const cplx z1 = z * A;
    const cplx bracket = w + z / 2.0 - (z / 2.0) * E + (z * z / 2.0) * B - 0.75 * z * z * z * C;
    const cplx w1 = bracket * std::exp(z * A + (z * z / 2.0) * B);
    return {z1, w1};
}

OrbitTrace MapChain::orbit(cplx z0, cplx w0, int n, const CurveSeries* curve) const {
    if (n < 0) throw std::invalid_argument("orbit length must be >= 0");
    OrbitTrace tr;
    tr.seed_z = z0;
    tr.seed_w = w0;
    tr.z.reserve(n + 1);
    tr.w.reserve(n + 1);
    if (curve) tr.u.reserve(n + 1);
    cplx z = z0, w = w0;
    for (int i = 0; i <= n; ++i) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
            !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
            tr.truncated = true;
            break;
        }
        tr.z.push_back(z);
        tr.w.push_back(w);
        if (curve) tr.u.push_back(w - curve->value(z));
        if (i < n) std::tie(z, w) = forward(z, w);
    }
    return tr;
}

std::string OrbitTrace::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,re_z,im_z,re_w,im_w,re_u,im_u\n";
    for (size_t i = 0; i < z.size(); ++i) {
        os << i << ',' << z[i].real() << ',' << z[i].imag() << ',' << w[i].real() << ','
           << w[i].imag() << ',';
        if (i < u.size())
            os << u[i].real() << ',' << u[i].imag();
        else
            os << ',';
        os << '\n';
    }
    return os.str();
}

} // namespace parab

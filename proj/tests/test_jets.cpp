#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parab/jet.hpp"
#include "parab/mapchain.hpp"
#include "parab/testing/oracles.hpp"

#include <random>

using namespace parab;
using J = Jet2<Rational>;
using M = MapJet<Rational>;

namespace {

J random_jet(std::mt19937_64& rng, int order) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 12);
    J j(order);
    for (int d = 0; d <= order; ++d)
        for (int i = 0; i <= d; ++i) j.set(i, d - i, rat(num(rng), den(rng)));
    return j;
}

} // namespace

TEST_CASE("multiplication basics") {
    const int N = 5;
    J one = J::constant(N, Rational(1));
    J z = J::var_z(N), w = J::var_w(N);

    CHECK(one * z == z);                    // multiplicative identity
    CHECK((z * w).coeff(1, 1) == Rational(1)); // z*w = zw

    J s = z + w;
    J sq = s * s; // (z+w)^2 = z^2 + 2zw + w^2
    CHECK(sq.coeff(2, 0) == Rational(1));
    CHECK(sq.coeff(1, 1) == Rational(2));
    CHECK(sq.coeff(0, 2) == Rational(1));

    CHECK_THROWS(void(J::var_z(4) * J::var_z(5))); // order mismatch
}

TEST_CASE("truncation drops total degree > N") {
    const int N = 3;
    J z = J::var_z(N);
    J p = z;
    for (int i = 0; i < 5; ++i) p = p * z; // z^6 truncated away entirely
    CHECK(p.is_zero());
}

TEST_CASE("exp of jets") {
    const int N = 6;
    J z = J::var_z(N), w = J::var_w(N);
    J e0 = jet_exp(J(N)); // exp(0) = 1
    CHECK(e0 == J::constant(N, Rational(1)));

    J ez = jet_exp(z);
    CHECK(ez.coeff(3, 0) == rat(1, 6)); // z^3/3!
    CHECK(ez.coeff(6, 0) == rat(1, 720));

    // homomorphism on commuting arguments: exp(z+w) = exp(z) exp(w)
    CHECK(jet_exp(z + w) == jet_exp(z) * jet_exp(w));

    CHECK_THROWS(void(jet_exp(J::constant(N, Rational(1))))); // unit constant term
}

TEST_CASE("ring axioms on randomized rational jets (order <= 8)") {
    std::mt19937_64 rng(0xa5a5a5a5);
    for (int trial = 0; trial < 12; ++trial) {
        const int N = 2 + int(rng() % 7);
        J a = random_jet(rng, N), b = random_jet(rng, N), c = random_jet(rng, N);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("map composition: identity and additive shears") {
    const int N = 4;
    M id = M::identity(N);
    std::mt19937_64 rng(7);
    J jf = random_jet(rng, N), js = random_jet(rng, N);
    jf.set(0, 0, Rational(0)); // inner must fix the origin
    js.set(0, 0, Rational(0));
    M j{jf, js};
    M cj = map_compose(id, j);
    CHECK(cj.first == j.first);
    CHECK(cj.second == j.second);

    // s1(z,w) = (z, w + z^2): s1 o s1 = (z, w + 2 z^2)
    J z = J::var_z(N), w = J::var_w(N);
    M s1{z, w + z * z};
    M s11 = map_compose(s1, s1);
    CHECK(s11.first == z);
    CHECK(s11.second.coeff(2, 0) == Rational(2));
    CHECK(s11.second.coeff(0, 1) == Rational(1));
}

TEST_CASE("full ten-map chain at order 4: exact paper germ") {
    MapJet<Rational> g = paper_chain().germ(4);
    CHECK(g.tangent_to_identity());
    CHECK(g.second.coeff(1, 2) == Rational(-1));  // zw^2
    CHECK(g.second.coeff(4, 0) == rat(-1, 3));     // z^4
    CHECK(g.second.coeff(3, 1) == rat(8, 3));      // z^3 w
    CHECK(g.first.coeff(2, 0) == Rational(1));     // z^2
    CHECK(sgn(g.first.coeff(1, 1)) == 0);          // no zw
    CHECK(g.first.coeff(3, 0) == rat(3, 2));       // z^3
    CHECK(g.first.coeff(2, 1) == Rational(2));     // z^2 w
    // P_2 = (z^2, 0): no degree-2 terms in the second coordinate
    for (int i = 0; i <= 2; ++i) CHECK(sgn(g.second.coeff(i, 2 - i)) == 0);
}

TEST_CASE("empty-extension chain: identity germ") {
    // a shear with zero polynomial composed with its inverse is the identity
    J z = J::var_z(3), w = J::var_w(3);
    M a{z, w + z * z};
    M b{z, w - z * z};
    M c = map_compose(b, a);
    CHECK(c.first == z);
    CHECK(c.second == w);
}

TEST_CASE("composed jet agrees with pointwise composition near 0") {
    // 100 random points in the 0.1-bidisk; agreement to O(r^{N+1})
    const int N = 8;
    MapJet<Rational> gq = paper_chain().germ(N);
    MapJet<cplx> g = gq.to_complex();
    MapJet<cplx> gg = map_compose(g, g);
    std::mt19937_64 rng(0xfeed);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        worst = std::max(worst, testing::compose_pointwise_error(g, g, gg, z, w));
    }
    // r = 0.1 x sqrt(2); allow a generous constant on r^{N+1}
    CHECK(worst < 1e3 * std::pow(0.15, N + 1));
}

TEST_CASE("jet JSON: num/den in rational mode, [re, im] in binary64") {
    J j(3);
    j.set(1, 0, Rational(1));
    j.set(1, 2, rat(-8, 3));
    CHECK(jet_to_json(j) == "{\"order\":3,\"coeffs\":[[1,0,\"1\"],[1,2,\"-8/3\"]]}");
    Jet2<cplx> jc(2);
    jc.set(0, 1, cplx(0.5, -1.0));
    CHECK(jet_to_json(jc) == "{\"order\":2,\"coeffs\":[[0,1,[0.5,-1]]]}");
}

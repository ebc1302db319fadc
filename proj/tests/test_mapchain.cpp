#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parab/curve.hpp"
#include "parab/mapchain.hpp"
#include "parab/testing/oracles.hpp"

#include <random>
#include <sstream>

using namespace parab;

TEST_CASE("fixed point and axis: F(0,0) = (0,0), F(0,w) = (0,w)") {
    MapChain F = paper_chain();
    auto [z0, w0] = F.forward(cplx(0, 0), cplx(0, 0));
    CHECK(z0 == cplx(0, 0));
    CHECK(w0 == cplx(0, 0));

    auto [z1, w1] = F.forward(cplx(0, 0), cplx(0.3, 0.1));
    CHECK(z1 == cplx(0, 0));
    CHECK(w1 == cplx(0.3, 0.1));

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> mod(0.0, 10.0), ph(0.0, 2 * M_PI);
    for (int i = 0; i < 100; ++i) {
        const cplx w = std::polar(mod(rng), ph(rng));
        auto [za, wa] = F.forward(cplx(0, 0), w);
        CHECK(std::abs(za) == 0.0);
        CHECK(std::abs(wa - w) <= 1e-15 * std::abs(w));
        // inverse fixes the axis pointwise too
        auto [zb, wb] = F.inverse(cplx(0, 0), w);
        CHECK(std::abs(zb) == 0.0);
        CHECK(std::abs(wb - w) <= 1e-15 * std::abs(w));
    }
}

TEST_CASE("chain vs closed form: 1e4 random points in the 0.2-bidisk") {
    MapChain F = paper_chain();
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        auto [cz, cw] = F.forward(z, w);
        auto [fz, fw] = closed_form_F(z, w);
        const double rel = (std::abs(cz - fz) + std::abs(cw - fw)) /
                           std::max(1.0, std::abs(fz) + std::abs(fw));
        worst = std::max(worst, rel);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("forward-inverse round trip") {
    MapChain F = paper_chain();
    auto [z1, w1] = F.forward(cplx(0.02, 0), cplx(-0.03, 0));
    auto [z0, w0] = F.inverse(z1, w1);
    CHECK(std::abs(z0 - 0.02) < 1e-12);
    CHECK(std::abs(w0 + 0.03) < 1e-12);

    // round trip on the dynamics-relevant 0.2-bidisk; the full unit bidisk
    // overflows binary64 near the corners (acceptance criterion 2 reports it)
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        auto [fz, fw] = F.forward(z, w);
        auto [bz, bw] = F.inverse(fz, fw);
        worst = std::max(worst, std::abs(bz - z) + std::abs(bw - w));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("inverse agrees with Newton inversion of the forward map") {
    MapChain F = paper_chain();
    const cplx q1(-0.013, 0.004), q2(-0.05, -0.02);
    auto [iz, iw] = F.inverse(q1, q2);
    auto [nz, nw] = testing::newton_inverse(F, q1, q2, 1e-13);
    CHECK(std::abs(iz - nz) < 1e-10);
    CHECK(std::abs(iw - nw) < 1e-10);
}

TEST_CASE("DF(0) = Id via exact jets") {
    MapJet<Rational> g = paper_chain().germ(2);
    CHECK(g.tangent_to_identity());
}

TEST_CASE("elementary map inverses are closed-form") {
    ElementaryMap shear{ElementaryMap::Kind::shear, ElementaryMap::Axis::second,
                        {Rational(0), Rational(0), rat(3, 2)}};
    ElementaryMap over{ElementaryMap::Kind::overshear, ElementaryMap::Axis::first,
                       {Rational(0), rat(-1, 2)}};
    ElementaryMap diag{ElementaryMap::Kind::diagonal, ElementaryMap::Axis::second, {Rational(2)}};
    for (const auto& m : {shear, over, diag}) {
        const cplx z(0.3, -0.1), w(-0.2, 0.05);
        cplx za = z, wa = w;
        m.apply(za, wa);
        m.inverse().apply(za, wa);
        CHECK(std::abs(za - z) < 1e-14);
        CHECK(std::abs(wa - w) < 1e-14);
    }
}

TEST_CASE("orbit traces") {
    MapChain F = paper_chain();
    SUBCASE("fixed point gives a constant trace") {
        OrbitTrace tr = F.orbit(cplx(0, 0), cplx(0, 0), 100);
        CHECK(tr.length() == 101);
        CHECK(!tr.truncated);
        for (const auto& z : tr.z) CHECK(z == cplx(0, 0));
    }
    SUBCASE("1/z_{k+1} - 1/z_k ~ -1 with shrinking error along a basin orbit") {
        OrbitTrace tr = F.orbit(cplx(-1e-3, 0), cplx(-1e-2, 0), 4000);
        REQUIRE(!tr.truncated);
        const cplx d_early = 1.0 / tr.z[11] - 1.0 / tr.z[10];
        const cplx d_late = 1.0 / tr.z[3999] - 1.0 / tr.z[3998];
        CHECK(std::abs(d_early + 1.0) < 0.05);
        CHECK(std::abs(d_late + 1.0) < std::abs(d_early + 1.0));
    }
    SUBCASE("|z_n| strictly decreasing after a finite prefix") {
        OrbitTrace tr = F.orbit(cplx(-1e-3, 0), cplx(-1e-2, 0), 100000);
        REQUIRE(!tr.truncated);
        for (size_t n = 10; n + 1 < tr.length(); n += 997)
            CHECK(std::abs(tr.z[n + 1]) < std::abs(tr.z[n]));
    }
    SUBCASE("non-finite intermediate truncates with flag") {
        OrbitTrace tr = F.orbit(cplx(500.0, 0), cplx(500.0, 0), 50);
        CHECK(tr.truncated);
        CHECK(tr.length() < 51);
    }
}

TEST_CASE("orbit CSV format") {
    MapChain F = paper_chain();
    MapJet<Rational> germ9 = F.germ(9);
    CurveSeries curve = solve_curve(germ9, 8);
    OrbitTrace tr = F.orbit(cplx(-1e-3, 0), cplx(-1e-2, 0), 3, &curve);
    std::istringstream is(tr.to_csv());
    std::string header;
    std::getline(is, header);
    CHECK(header == "n,re_z,im_z,re_w,im_w,re_u,im_u");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);

    OrbitTrace bare = F.orbit(cplx(-1e-3, 0), cplx(-1e-2, 0), 1);
    std::istringstream is2(bare.to_csv());
    std::getline(is2, header);
    std::getline(is2, line);
    CHECK(line.substr(line.size() - 2) == ",,"); // empty u columns without a curve
}

TEST_CASE("long-double evaluation path agrees with double in the small regime") {
    MapChain F = paper_chain();
    auto [zd, wd] = F.eval<double>(cplx(-0.01, 0.002), cplx(-0.02, -0.001));
    auto [zl, wl] = F.eval<long double>(std::complex<long double>(-0.01L, 0.002L),
                                        std::complex<long double>(-0.02L, -0.001L));
    CHECK(std::abs(zd - cplx(double(zl.real()), double(zl.imag()))) < 1e-14);
    CHECK(std::abs(wd - cplx(double(wl.real()), double(wl.imag()))) < 1e-14);
}

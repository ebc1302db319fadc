#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parab/fibers.hpp"
#include "parab/mapchain.hpp"

#include <cmath>
#include <memory>
#include <random>

using namespace parab;

namespace {

struct FixtureHolder {
    MapChain chain = paper_chain();
    RegionParams params = RegionParams::make(0.05, 100.0);
    CurveSeries curve;
    std::unique_ptr<FatouMachine> machine;
    FixtureHolder() {
        curve = solve_curve(chain.germ(9), 8);
        measure_curve_bounds(curve, params);
        machine = std::make_unique<FatouMachine>(chain, curve, params, TruncPolicy{200000, 1e-10});
    }
};

const FatouMachine& fm() {
    static FixtureHolder f;
    return *f.machine;
}

} // namespace

TEST_CASE("xi partials: matched-truncation identity") {
    auto [z, w] = fm().from_xy(cplx(-2600, 0), cplx(-1100, 0));
    auto t = fm().psi(z, w);
    REQUIRE(t.has_value());
    auto [z1, w1] = fm().chain().forward(z, w);
    for (long n : {50L, 500L, 5000L}) {
        const cplx a = xi_partial(fm(), t->value - 1.0, z1, w1, n);
        const cplx b = xi_partial(fm(), t->value, z, w, n + 1);
        CHECK(std::abs(a - b) < 1e-10);
    }
}

TEST_CASE("xi increments decay summably (slope <= -1.1)") {
    auto [z, w] = fm().from_xy(cplx(-300, 0), cplx(-180, 0));
    auto t = fm().psi(z, w);
    REQUIRE(t.has_value());
    std::vector<double> inc;
    cplx prev = 0;
    cplx zc = z, wc = w;
    for (long n = 0; n <= 110000; ++n) {
        const cplx u = wc - fm().curve().value(zc);
        const cplx val = 1.0 / u + fm().fiber_log_weight() * log_pos(1.0 / u) +
                         log_pos(t->value - double(n));
        if (n > 0) inc.push_back(std::abs(val - prev));
        prev = val;
        std::tie(zc, wc) = fm().chain().forward(zc, wc);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long cnt = 0;
    for (long n = 100; n <= 100000; ++n) {
        const double xl = std::log(double(n)), yl = std::log(inc[n - 1]);
        sx += xl;
        sy += yl;
        sxx += xl * xl;
        sxy += xl * yl;
        ++cnt;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(slope <= -1.1);
}

TEST_CASE("closeness bound |xi - y| < 2 log|y| + log|t|") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> xr(2000, 5000), yr(600, 1500), ar(-0.2, 0.2);
    for (int i = 0; i < 50; ++i) {
        const cplx x = -std::polar(xr(rng), ar(rng)), y = -std::polar(yr(rng), 0.5 * ar(rng));
        auto [z, w] = fm().from_xy(x, y);
        auto U = upsilon(fm(), z, w);
        auto T = fm().psi(z, w);
        REQUIRE((U && T));
        const double bound = 2 * std::log(std::abs(y)) + std::log(std::abs(T->value));
        CHECK(std::abs(U->value - y) < bound);
    }
}

TEST_CASE("Upsilon invariance and extension independence") {
    auto [z, w] = fm().from_xy(cplx(-2600, 0), cplx(-1100, 0));
    SUBCASE("Upsilon(F p) = Upsilon(p) at the matched stopping rule") {
        auto [z1, w1] = fm().chain().forward(z, w);
        auto a = upsilon(fm(), z, w);
        auto b = upsilon(fm(), z1, w1);
        REQUIRE((a && b));
        CHECK(std::abs(a->value - b->value) < 1e-9);
    }
    SUBCASE("two admissible extension counts agree") {
        // forward extension: matched stopping makes the values identical
        auto base = upsilon(fm(), z, w);
        cplx zc = z, wc = w;
        for (int i = 0; i < 5; ++i) std::tie(zc, wc) = fm().chain().forward(zc, wc);
        auto ext = upsilon(fm(), zc, wc);
        REQUIRE((base && ext));
        CHECK(std::abs(ext->value - base->value) < 1e-9);
    }
    SUBCASE("extension through the numerical inverse at its own accuracy") {
        auto [bz1, bw1] = fm().chain().inverse(z, w);
        auto a = upsilon(fm(), bz1, bw1);
        auto base = upsilon(fm(), z, w);
        REQUIRE((a && base));
        CHECK(std::abs(a->value - base->value) < 1e-6);
    }
}

TEST_CASE("theta inverse recovers chart points") {
    auto [z, w] = fm().from_xy(cplx(-2600, 0), cplx(-900, 0));
    auto T = fm().psi(z, w);
    REQUIRE(T.has_value());
    const cplx y = 1.0 / (w - fm().curve().value(z));
    auto p = theta_inverse(fm(), T->value, y);
    REQUIRE(p.has_value());
    CHECK(std::abs(p->first - z) < 1e-7 * std::abs(z));
    CHECK(std::abs(p->second - w) < 1e-7 * std::abs(w));
}

TEST_CASE("fiber injectivity: distinct Upsilon on one fiber") {
    // sample the fiber psi = t0 by marching y; Upsilon values must separate
    auto [z0, w0] = fm().from_xy(cplx(-2600, 0), cplx(-900, 0));
    auto T = fm().psi(z0, w0);
    REQUIRE(T.has_value());
    std::vector<cplx> ys;
    for (int i = 0; i < 24; ++i) ys.push_back(-std::polar(700.0 + 30.0 * i, 0.01 * (i % 5 - 2)));
    auto pts = trace_fiber(fm(), T->value, ys);
    REQUIRE(pts.size() >= 20);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            if (std::abs(pts[i].y - pts[j].y) <= 1e-3) continue;
            CHECK(std::abs(pts[i].upsilon - pts[j].upsilon) > 1e-9);
        }
    // FiberPoint invariant: |xi - y| < 2 log|y| + log|t|
    for (const auto& p : pts)
        CHECK(std::abs(p.upsilon - p.y) < 2 * std::log(std::abs(p.y)) + std::log(std::abs(p.t)));
}

TEST_CASE("fiber connectivity proxy: traced fiber is one chain of close samples") {
    auto [z0, w0] = fm().from_xy(cplx(-2600, 0), cplx(-900, 0));
    auto T = fm().psi(z0, w0);
    REQUIRE(T.has_value());
    std::vector<cplx> ys;
    for (int i = 0; i < 16; ++i) ys.push_back(cplx(-750.0 - 25.0 * i, 0));
    auto pts = trace_fiber(fm(), T->value, ys);
    REQUIRE(pts.size() == ys.size());
    // consecutive samples stay close in (z,w): a single connected component
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        CHECK(std::abs(pts[i + 1].z - pts[i].z) < 0.2 * std::abs(pts[i].z) + 1e-6);
}

TEST_CASE("global map: conjugacy to translation and coverage") {
    SUBCASE("G(F p) = (psi(p) - 1, Upsilon(p))") {
        auto [z, w] = fm().from_xy(cplx(-3000, 0.0), cplx(-1000, 50.0));
        auto [z1, w1] = fm().chain().forward(z, w);
        auto Gp = global_map(fm(), z, w);
        auto Gfp = global_map(fm(), z1, w1);
        REQUIRE((Gp && Gfp));
        CHECK(std::abs(Gfp->psi.value - (Gp->psi.value - 1.0)) < 1e-9);
        CHECK(std::abs(Gfp->upsilon.value - Gp->upsilon.value) < 1e-9);
    }
    SUBCASE("Upsilon coverage of truncated narrow sectors") {
        // image of W_n = psi^{-1}(t) cap F^{-n}(D') covers T'_{2R', n} + log n
        // at the entry scale R' = 1/eps; containment checked on a target grid
        // by solving Upsilon = target on the (t - n)-fiber
        const double Rp = fm().params().entry_R();
        auto [z0, w0] = fm().from_xy(cplx(-2600, 0), cplx(-900, 0));
        auto T = fm().psi(z0, w0);
        REQUIRE(T.has_value());
        for (const double n : {100.0, 1000.0}) {
            const cplx t_n = T->value - n;
            const cplx shift = std::log(cplx(n, 0));
            auto ups_at = [&](cplx y) -> std::optional<cplx> {
                auto p = theta_inverse(fm(), t_n, y);
                if (!p) return std::nullopt;
                return xi_limit(fm(), t_n, p->first, p->second).value;
            };
            int hits = 0, targets = 0;
            for (double m : {2 * Rp * 1.4, 2 * Rp * 2.5})
                for (double a : {-0.7 * kNarrowAperture, 0.0, 0.7 * kNarrowAperture}) {
                    if (m >= 0.9 * n) continue; // inside the truncation |zeta| < n
                    const cplx target = -std::polar(m, a) + shift;
                    ++targets;
                    // damped fixed point on y (dUpsilon/dy ~ 1)
                    cplx y = target - fm().fiber_log_weight() * log_pos(target) - log_pos(t_n);
                    bool ok = false;
                    for (int it = 0; it < 12; ++it) {
                        auto cur = ups_at(y);
                        if (!cur) break;
                        if (std::abs(*cur - target) < 1e-6) {
                            ok = in_U(y, Rp) && std::abs(y) < std::abs(t_n) / 2;
                            break;
                        }
                        y -= 0.9 * (*cur - target);
                    }
                    if (ok) ++hits;
                }
            CHECK(hits == targets);
        }
    }
}

TEST_CASE("fiber CSV has the pinned header") {
    std::vector<FiberPoint> pts(1);
    pts[0] = {cplx(-100, 0), cplx(-50, 0), cplx(-0.01, 0), cplx(-0.02, 0), cplx(-48, 0), 1e-8};
    const std::string csv = fiber_csv(pts);
    CHECK(csv.substr(0, csv.find('\n')) ==
          "re_t,im_t,re_z,im_z,re_w,im_w,re_upsilon,im_upsilon");
}

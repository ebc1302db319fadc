#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parab/analysis.hpp"
#include "parab/mapchain.hpp"

#include <memory>

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
        machine = std::make_unique<FatouMachine>(chain, curve, params, TruncPolicy{20000, 1e-9});
    }
};

FixtureHolder& fx() {
    static FixtureHolder f;
    return f;
}

} // namespace

TEST_CASE("asymptotics report structure and fits") {
    AsymptoticsReport rep =
        asymptotics(fx().chain, fx().curve, cplx(-1e-3, 0), cplx(-1e-2, 0), {10000, 100000, 1000000});
    REQUIRE(rep.n_zn.size() == 3);
    // pointwise values stay near -1 even at desk scale
    for (const auto& v : rep.n_zn) CHECK(std::abs(v + 1.0) < 0.12);
    // the u-quantity fit reproduces the paper limit -1 almost exactly
    CHECK(rep.a_u == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(rep.resid_u < 0.05);
    // samples at the exact checkpoints
    CHECK(rep.checkpoints == std::vector<long>{10000, 100000, 1000000});
    const std::string js = rep.to_json();
    CHECK(js.find("\"a_u\":") != std::string::npos);
    CHECK_THROWS(void(asymptotics(fx().chain, fx().curve, cplx(-1e-3, 0), cplx(-1e-2, 0), {10, 20})));
}

TEST_CASE("classification verdicts") {
    const FatouMachine& fm = *fx().machine;
    SUBCASE("axis, exactly and at any budget") {
        CHECK(classify(fm, cplx(0, 0), cplx(0.2, 0), 10).verdict == Verdict::axis);
        CHECK(classify(fm, cplx(0, 0), cplx(-5, 2), 10000).verdict == Verdict::axis);
    }
    SUBCASE("basin with small entry index at the deep seed") {
        Classification c = classify(fm, cplx(-1e-3, 0), cplx(-1e-2, 0), 1000);
        CHECK(c.verdict == Verdict::basin);
        CHECK(c.entry_index >= 0);
        CHECK(c.entry_index < 20);
    }
    SUBCASE("on-curve points never certify; nearby below-curve points do") {
        const cplx z(-1e-3, 0);
        Classification on = classify(fm, z, fx().curve.value(z), 10000);
        CHECK(on.verdict == Verdict::on_curve);
        Classification off = classify(fm, z, fx().curve.value(z) - cplx(1e-3, 0), 10000);
        CHECK(off.verdict == Verdict::basin);
    }
    SUBCASE("monotonicity: larger budget never flips basin to undecided") {
        for (const cplx z : {cplx(-0.03, 0.01), cplx(-0.002, 0.02), cplx(0.004, 0.001)}) {
            Classification lo = classify(fm, z, cplx(-0.02, 0), 400);
            Classification hi = classify(fm, z, cplx(-0.02, 0), 1600);
            if (lo.verdict == Verdict::basin) CHECK(hi.verdict == Verdict::basin);
        }
    }
}

TEST_CASE("raster: determinism, symmetry, codes, drift") {
    const FatouMachine& fm = *fx().machine;
    RasterParams rp;
    rp.nx = 48;
    rp.ny = 48;
    rp.budget = 400;
    Raster g1 = raster(fm, rp);
    SUBCASE("deterministic across runs and thread counts") {
        Raster g2 = raster(fm, rp);
        CHECK(g1.cells == g2.cells);
        RasterParams rp1 = rp;
        rp1.threads = 1;
        Raster g3 = raster(fm, rp1);
        CHECK(g1.cells == g3.cells);
    }
    SUBCASE("conjugation symmetry of the default slice") {
        for (int iy = 0; iy < rp.ny; ++iy)
            for (int ix = 0; ix < rp.nx; ++ix)
                CHECK(g1.at(ix, iy) == g1.at(ix, rp.ny - 1 - iy));
    }
    SUBCASE("PGM header and size") {
        const std::string pgm = g1.to_pgm();
        CHECK(pgm.substr(0, 3) == "P5\n");
        CHECK(pgm.find("48 48\n255\n") != std::string::npos);
        CHECK(pgm.size() == pgm.find("255\n") + 4 + size_t(48 * 48));
    }
    SUBCASE("uniform-basin slice") {
        RasterParams deep;
        deep.origin_z = cplx(-0.004, -0.0002);
        deep.ds_z = cplx(0.002, 0.0);
        deep.dt_z = cplx(0.0, 0.0004);
        deep.origin_w = cplx(-0.005, 0.0);
        deep.nx = deep.ny = 16;
        deep.budget = 400;
        Raster g = raster(fm, deep);
        for (uint8_t c : g.cells) CHECK(c == uint8_t(Verdict::basin));
    }
    SUBCASE("sidecar JSON carries window and budget") {
        const std::string js = g1.sidecar_json();
        CHECK(js.find("\"budget\":400") != std::string::npos);
        CHECK(js.find("\"codes\"") != std::string::npos);
    }
}

TEST_CASE("boundary-cell counting") {
    Raster r;
    r.nx = r.ny = 3;
    r.cells = {0, 0, 0, 0, 255, 0, 0, 0, 0};
    // the center differs from its 4 neighbours: center + 4 neighbours are boundary
    CHECK(r.boundary_cells() == 5);
}

#pragma once

#include "parab/fatou.hpp"
#include "parab/mapchain.hpp"
#include "parab/regions.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace parab {

/// Orbit asymptotics at checkpoints: samples (n, n z_n, log(n) u_n) and the
/// fitted limits of the reciprocal quantities 1/(n z_n), 1/(log n u_n) under
/// the model a + b/log n.
struct AsymptoticsReport {
    cplx seed_z, seed_w;
    std::vector<long> checkpoints;
    std::vector<cplx> n_zn;     // n * z_n
    std::vector<cplx> logn_un;  // log(n) * u_n
    double a_z = 0, b_z = 0;    // fit of Re 1/(n z_n)
    double a_u = 0, b_u = 0;    // fit of Re 1/(log n u_n)
    double resid_z = 0, resid_u = 0;
    std::string to_json() const;
};

AsymptoticsReport asymptotics(const MapChain& chain, const CurveSeries& curve, cplx z0, cplx w0,
                              const std::vector<long>& checkpoints);

enum class Verdict : uint8_t { undecided = 0, axis = 64, on_curve = 128, basin = 255 };

struct Classification {
    Verdict verdict;
    long entry_index; // iterate of certified D'-entry (basin case), else -1
    long budget;
};

/// Desk-scale basin test: axis iff z = 0 exactly; basin iff some iterate
/// certifies D'-entry in (t,y) at the entry radius 1/eps (with margin against
/// the mu_0-vs-psi gap); on_curve iff within 10x the certified series error of
/// the local graph and never entering; orbits leaving the trust disk are
/// undecided.
Classification classify(const FatouMachine& fm, cplx z, cplx w, long budget);

struct RasterParams {
    // affine slice p(s,t) = origin + s*ds + t*dt (complex pairs)
    cplx origin_z{-0.05, -0.03}, origin_w{-0.02, 0.0};
    cplx ds_z{0.06, 0.0}, ds_w{0.0, 0.0}; // s in [0,1] left-to-right
    cplx dt_z{0.0, 0.06}, dt_w{0.0, 0.0}; // t in [0,1] bottom-to-top
    int nx = 256, ny = 256;
    long budget = 1000;
    int threads = 0; // 0 = hardware concurrency
};

struct Raster {
    int nx, ny;
    std::vector<uint8_t> cells; // row-major, codes basin=255, on_curve=128, axis=64, undecided=0
    RasterParams params;

    uint8_t at(int ix, int iy) const { return cells[size_t(iy) * nx + ix]; }
    std::string to_pgm() const;      // binary P5
    std::string sidecar_json() const;
    long boundary_cells() const;     // cells with a 4-neighbour of another class
};

Raster raster(const FatouMachine& fm, const RasterParams& rp);

} // namespace parab

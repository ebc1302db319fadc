#include "parab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace parab {
namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// least squares of v ~ a + b * s
std::pair<double, double> ls_fit(const std::vector<double>& s, const std::vector<double>& v) {
    const size_t n = s.size();
    double sm = 0, vm = 0;
    for (size_t i = 0; i < n; ++i) {
        sm += s[i];
        vm += v[i];
    }
    sm /= double(n);
    vm /= double(n);
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (s[i] - sm) * (v[i] - vm);
        sxx += (s[i] - sm) * (s[i] - sm);
    }
    const double b = sxy / sxx;
    return {vm - b * sm, b};
}

} // namespace

AsymptoticsReport asymptotics(const MapChain& chain, const CurveSeries& curve, cplx z0, cplx w0,
                              const std::vector<long>& checkpoints) {
    if (checkpoints.size() < 3)
        throw std::invalid_argument("asymptotics: fit needs at least 3 checkpoints");
    AsymptoticsReport rep;
    rep.seed_z = z0;
    rep.seed_w = w0;
    rep.checkpoints = checkpoints;
    std::vector<long> cps = checkpoints;
    std::sort(cps.begin(), cps.end());

    cplx z = z0, w = w0;
    long n = 0;
    for (long cp : cps) {
        for (; n < cp; ++n) {
            std::tie(z, w) = chain.forward(z, w);
            if (!finite(z) || !finite(w)) throw std::domain_error("asymptotics: orbit escaped");
        }
        const cplx u = w - curve.value(z);
        rep.n_zn.push_back(double(cp) * z);
        rep.logn_un.push_back(std::log(double(cp)) * u);
    }
    // fit the paper-form reciprocals 1/(n z_n), 1/(log n u_n) with a + b/log n
    std::vector<double> s, vz, vu;
    for (size_t i = 0; i < cps.size(); ++i) {
        s.push_back(1.0 / std::log(double(cps[i])));
        vz.push_back((1.0 / rep.n_zn[i]).real());
        vu.push_back((1.0 / rep.logn_un[i]).real());
    }
    std::tie(rep.a_z, rep.b_z) = ls_fit(s, vz);
    std::tie(rep.a_u, rep.b_u) = ls_fit(s, vu);
    for (size_t i = 0; i < cps.size(); ++i) {
        rep.resid_z = std::max(rep.resid_z, std::abs(rep.a_z + rep.b_z * s[i] - vz[i]));
        rep.resid_u = std::max(rep.resid_u, std::abs(rep.a_u + rep.b_u * s[i] - vu[i]));
    }
    return rep;
}

std::string AsymptoticsReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"seed\":[" << seed_z.real() << ',' << seed_z.imag() << ',' << seed_w.real() << ','
       << seed_w.imag() << "],\"samples\":[";
    for (size_t i = 0; i < checkpoints.size(); ++i) {
        if (i) os << ',';
        os << '[' << checkpoints[i] << ',' << n_zn[i].real() << ',' << n_zn[i].imag() << ','
           << logn_un[i].real() << ',' << logn_un[i].imag() << ']';
    }
    os << "],\"a_z\":" << a_z << ",\"b_z\":" << b_z << ",\"a_u\":" << a_u << ",\"b_u\":" << b_u
       << ",\"resid_z\":" << resid_z << ",\"resid_u\":" << resid_u << '}';
    return os.str();
}

Classification classify(const FatouMachine& fm, cplx z, cplx w, long budget) {
    if (z == cplx(0.0)) return {Verdict::axis, -1, budget};

    const auto& params = fm.params();
    const auto& curve = fm.curve();
    const double Re = params.entry_R();

    // on-curve candidacy is judged at the starting point
    bool near_curve = false;
    if (in_V(z, params)) {
        const double tolc = 10.0 * curve.tail_bound(std::abs(z));
        near_curve = std::abs(w - curve.value(z)) < tolc;
    }

    cplx zc = z, wc = w;
    for (long n = 0; n <= budget; ++n) {
        if (!finite(zc) || !finite(wc) || std::max(std::abs(zc), std::abs(wc)) > 1.0)
            return {near_curve ? Verdict::on_curve : Verdict::undecided, -1, budget};
        if (zc != cplx(0.0)) {
            const cplx u = wc - curve.value(zc);
            // entry test gated on Re x < 0: no certified entry is possible on
            // the right (|mu_0 - x| <= ~30 + 0.105|x| there), and the gate
            // keeps the test away from the positive-axis log cut so the
            // classification commutes with conjugation exactly
            const cplx x = 1.0 / zc;
            if (u != cplx(0.0) && x.real() < 0.0) {
                const cplx y = 1.0 / u;
                if (in_U(y, Re) && in_Dprime_ty_margin(fm.t_entry_estimate(x, y), y, Re, kEntryMargin))
                    return {Verdict::basin, n, budget};
            }
        }
        std::tie(zc, wc) = fm.chain().forward(zc, wc);
    }
    return {near_curve ? Verdict::on_curve : Verdict::undecided, -1, budget};
}

Raster raster(const FatouMachine& fm, const RasterParams& rp) {
    if (rp.nx < 2 || rp.ny < 2) throw std::invalid_argument("raster grid must be at least 2x2");
    Raster out;
    out.nx = rp.nx;
    out.ny = rp.ny;
    out.params = rp;
    out.cells.assign(size_t(rp.nx) * rp.ny, 0);

    // centered grid coordinates: center + (2i - (n-1)) * halfstep, so symmetric
    // windows produce exactly conjugate-symmetric sample points
    const cplx cz = rp.origin_z + 0.5 * rp.ds_z + 0.5 * rp.dt_z;
    const cplx cw = rp.origin_w + 0.5 * rp.ds_w + 0.5 * rp.dt_w;
    auto point = [&](int ix, int iy) {
        const double a = double(2 * ix - (rp.nx - 1)) / (2.0 * (rp.nx - 1));
        const double b = double(2 * iy - (rp.ny - 1)) / (2.0 * (rp.ny - 1));
        return std::make_pair(cz + a * rp.ds_z + b * rp.dt_z, cw + a * rp.ds_w + b * rp.dt_w);
    };

    int nthreads = rp.threads > 0 ? rp.threads : int(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    std::vector<std::thread> pool;
    std::atomic<int> next_row{0};
    auto worker = [&]() {
        for (;;) {
            const int iy = next_row.fetch_add(1);
            if (iy >= rp.ny) return;
            for (int ix = 0; ix < rp.nx; ++ix) {
                auto [z, w] = point(ix, iy);
                out.cells[size_t(iy) * rp.nx + ix] =
                    uint8_t(classify(fm, z, w, rp.budget).verdict);
            }
        }
    };
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

std::string Raster::to_pgm() const {
    std::ostringstream os;
    os << "P5\n" << nx << ' ' << ny << "\n255\n";
    // top row first
    for (int iy = ny - 1; iy >= 0; --iy)
        os.write(reinterpret_cast<const char*>(&cells[size_t(iy) * nx]), nx);
    return os.str();
}

std::string Raster::sidecar_json() const {
    std::ostringstream os;
    os.precision(17);
    auto pair = [&](cplx a) { os << '[' << a.real() << ',' << a.imag() << ']'; };
    os << "{\"grid\":[" << nx << ',' << ny << "],\"budget\":" << params.budget
       << ",\"origin_z\":";
    pair(params.origin_z);
    os << ",\"origin_w\":";
    pair(params.origin_w);
    os << ",\"ds_z\":";
    pair(params.ds_z);
    os << ",\"ds_w\":";
    pair(params.ds_w);
    os << ",\"dt_z\":";
    pair(params.dt_z);
    os << ",\"dt_w\":";
    pair(params.dt_w);
    os << ",\"codes\":{\"basin\":255,\"on_curve\":128,\"axis\":64,\"undecided\":0}}";
    return os.str();
}

long Raster::boundary_cells() const {
    long count = 0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const uint8_t v = at(ix, iy);
            const bool b = (ix > 0 && at(ix - 1, iy) != v) || (ix + 1 < nx && at(ix + 1, iy) != v) ||
                           (iy > 0 && at(ix, iy - 1) != v) || (iy + 1 < ny && at(ix, iy + 1) != v);
            if (b) ++count;
        }
    return count;
}

} // namespace parab

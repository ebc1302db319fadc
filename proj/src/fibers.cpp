#include "parab/fibers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parab {
namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx xi_value(const FatouMachine& fm, cplx t_n, cplx y_n) {
    return y_n + fm.fiber_log_weight() * log_pos(y_n) + log_pos(t_n);
}

} // namespace

cplx xi_partial(const FatouMachine& fm, cplx t, cplx z, cplx w, long n) {
    for (long i = 0; i < n; ++i) std::tie(z, w) = fm.chain().forward(z, w);
    const cplx u = w - fm.curve().value(z);
    if (u == cplx(0.0)) throw std::domain_error("xi: orbit hit the curve");
    return xi_value(fm, t - double(n), 1.0 / u);
}

FatouMachine::Limit xi_limit(const FatouMachine& fm, cplx t, cplx z, cplx w) {
    // stopping is anchored in the translation coordinate (Re x_n <= -n_max),
    // so evaluations extended along the same orbit truncate at the same
    // absolute point and the n-independence identities hold to roundoff
    const auto& pol = fm.policy();
    cplx prev = 0.0;
    bool have = false;
    long n = 0;
    for (;; ++n) {
        const cplx u = w - fm.curve().value(z);
        if (u == cplx(0.0) || z == cplx(0.0) || !finite(z) || !finite(w))
            throw std::domain_error("xi: orbit left the chart");
        const cplx val = xi_value(fm, t - double(n), 1.0 / u);
        if (have) {
            const double inc = std::abs(val - prev);
            if (inc < pol.tol && n > 32) {
                const double L = std::log(double(n));
                return {val, n, inc * double(n) * L};
            }
        }
        if ((1.0 / z).real() <= -double(pol.n_max) || n >= 4 * pol.n_max)
            break; // absolute depth cap
        prev = val;
        have = true;
        std::tie(z, w) = fm.chain().forward(z, w);
    }
    const double L = std::log(double(pol.n_max));
    return {prev, n, pol.tol * double(pol.n_max) * L};
}

std::optional<cplx> xi_at_chart(const FatouMachine& fm, cplx t, cplx y, long n) {
    auto p = theta_inverse(fm, t, y);
    if (!p) return std::nullopt;
    return xi_partial(fm, t, p->first, p->second, n);
}

std::optional<FatouMachine::Limit> upsilon(const FatouMachine& fm, cplx z, cplx w, long budget) {
    const double Re = fm.params().entry_R();
    for (long n = 0; n <= budget; ++n) {
        if (!finite(z) || !finite(w) || std::max(std::abs(z), std::abs(w)) > 1.0)
            return std::nullopt;
        if (z != cplx(0.0)) {
            const cplx u = w - fm.curve().value(z);
            const cplx x = 1.0 / z;
            if (u != cplx(0.0) && x.real() < 0.0) {
                const cplx y = 1.0 / u;
                if (in_U(y, Re)) {
                    const cplx that = fm.t_entry_estimate(x, y);
                    // D'-entry plus the admissible half-plane t in U_{4R}
                    if (in_Dprime_ty_margin(that, y, Re, kEntryMargin) &&
                        std::abs(that) > 4 * Re + kEntryMargin) {
                        auto L = fm.mu_limit(z, w);
                        return xi_limit(fm, L.value, z, w);
                    }
                }
            }
        }
        std::tie(z, w) = fm.chain().forward(z, w);
    }
    return std::nullopt;
}

std::optional<GlobalValue> global_map(const FatouMachine& fm, cplx z, cplx w, long budget) {
    auto p = fm.psi(z, w, budget);
    if (!p) return std::nullopt;
    auto u = upsilon(fm, z, w, budget);
    if (!u) return std::nullopt;
    return GlobalValue{*p, *u};
}

std::optional<std::pair<cplx, cplx>> theta_inverse(const FatouMachine& fm, cplx t, cplx y,
                                                   double tol) {
    const cplx u = 1.0 / y;
    // seed from the closed mu_0 form: x (1 + beta(y)) + r log t + s log y ~ t
    cplx x0 = (t - fm.r() * log_pos(t) + fm.k() * log_pos(y)) / (1.0 + fm.beta(y));
    auto psi_of = [&](cplx z) -> std::optional<cplx> {
        auto L = fm.psi(z, u + fm.curve().value(z), 200000);
        if (!L) return std::nullopt;
        return L->value;
    };
    cplx z0 = 1.0 / x0;
    cplx z1 = z0 * (1.0 + 1e-6);
    auto f0o = psi_of(z0), f1o = psi_of(z1);
    if (!f0o || !f1o) return std::nullopt;
    cplx f0 = *f0o - t, f1 = *f1o - t;
    cplx best_z = std::abs(f0) < std::abs(f1) ? z0 : z1;
    double best = std::min(std::abs(f0), std::abs(f1));
    for (int it = 0; it < 20 && best >= tol; ++it) {
        const cplx dz = (z1 - z0) * f1 / (f1 - f0);
        z0 = z1;
        f0 = f1;
        z1 = z1 - dz;
        auto fo = psi_of(z1);
        if (!fo) return std::nullopt;
        f1 = *fo - t;
        if (std::abs(f1) < best) {
            best = std::abs(f1);
            best_z = z1;
        }
    }
    if (best >= tol) return std::nullopt;
    return std::make_pair(best_z, u + fm.curve().value(best_z));
}

std::vector<FiberPoint> trace_fiber(const FatouMachine& fm, cplx t0,
                                    const std::vector<cplx>& y_samples) {
    std::vector<FiberPoint> out;
    std::optional<cplx> prev_z;
    for (const cplx& y : y_samples) {
        std::optional<std::pair<cplx, cplx>> p;
        if (prev_z) {
            // predictor: previous z; corrector: secant on psi - t0
            const cplx u = 1.0 / y;
            cplx z0 = *prev_z, z1 = *prev_z * (1.0 + 1e-6);
            auto psi_of = [&](cplx z) -> std::optional<cplx> {
                auto L = fm.psi(z, u + fm.curve().value(z), 200000);
                if (!L) return std::nullopt;
                return L->value;
            };
            auto f0o = psi_of(z0), f1o = psi_of(z1);
            if (f0o && f1o) {
                cplx f0 = *f0o - t0, f1 = *f1o - t0;
                for (int it = 0; it < 20 && std::abs(f1) >= 1e-6; ++it) {
                    const cplx dz = (z1 - z0) * f1 / (f1 - f0);
                    z0 = z1;
                    f0 = f1;
                    z1 = z1 - dz;
                    auto fo = psi_of(z1);
                    if (!fo) break;
                    f1 = *fo - t0;
                }
                if (std::abs(f1) < 3e-6) p = std::make_pair(z1, u + fm.curve().value(z1));
            }
        }
        if (!p) p = theta_inverse(fm, t0, y);
        if (!p) continue;
        prev_z = p->first;
        auto L = xi_limit(fm, t0, p->first, p->second);
        out.push_back({t0, y, p->first, p->second, L.value, L.tail_estimate});
    }
    return out;
}

std::string fiber_csv(const std::vector<FiberPoint>& pts) {
    std::ostringstream os;
    os.precision(17);
    os << "re_t,im_t,re_z,im_z,re_w,im_w,re_upsilon,im_upsilon\n";
    for (const auto& p : pts)
        os << p.t.real() << ',' << p.t.imag() << ',' << p.z.real() << ',' << p.z.imag() << ','
           << p.w.real() << ',' << p.w.imag() << ',' << p.upsilon.real() << ','
           << p.upsilon.imag() << '\n';
    return os.str();
}

} // namespace parab

#include "parab/regions.hpp"

#include "parab/curve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parab {

Certification certify_params(double eps, double R, const std::vector<cplx>* g_series,
                             const std::vector<cplx>* h_series) {
    if (eps <= 0 || R <= 0) throw std::invalid_argument("certify_params: eps, R must be positive");
    Certification cert;
    cert.eps = eps;
    cert.R = R;
    auto add = [&](std::string name, double lhs, double rhs, bool strict_gt) {
        cert.checks.push_back({std::move(name), lhs, rhs, strict_gt ? lhs > rhs : lhs >= rhs});
    };
    add("R >= 1/eps", R, 1.0 / eps, false);
    add("2R - 2log(2R) > R + 2log(R)", 2 * R - 2 * std::log(2 * R), R + 2 * std::log(R), true);
    add("2R sin(pi/8) > 4log(R)", 2 * R * std::sin(M_PI / 8), 4 * std::log(R), true);

    auto sup_on_boundary = [&](const std::vector<cplx>& series) {
        // sample dU_R: the arc |y| = R across the aperture
        double sup = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double th = -kAperture + 2 * kAperture * i / 64.0;
            const cplx y = -std::polar(R, th);
            const cplx u = 1.0 / y;
            cplx s = 0.0;
            for (size_t j = series.size(); j-- > 1;) s = s * u + series[j];
            sup = std::max(sup, std::abs(s * u));
        }
        return sup;
    };
    if (g_series) add("sup |g(1/y)| on dU_R < 1/8", 1.0 / 8, sup_on_boundary(*g_series), true);
    if (h_series) add("sup |h(1/y)| on dU_R < 1/4", 1.0 / 4, sup_on_boundary(*h_series), true);
    return cert;
}

RegionParams RegionParams::make(double eps, double R) {
    Certification cert = certify_params(eps, R);
    if (!cert.all_pass()) {
        std::ostringstream os;
        os << "region parameters (eps=" << eps << ", R=" << R << ") fail certification:";
        for (const auto& c : cert.checks)
            if (!c.pass) os << " [" << c.name << ": " << c.lhs << " vs " << c.rhs << "]";
        throw std::invalid_argument(os.str());
    }
    return RegionParams{eps, R};
}

bool in_D(cplx z, cplx w, const RegionParams& params, const CurveSeries& curve) {
    if (!in_V(z, params)) return false;
    const cplx u = w - curve.value(z);
    return in_V(u, params) && std::abs(z) < std::abs(u);
}

std::string Certification::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"eps\":" << eps << ",\"R\":" << R << ",\"checks\":[";
    for (size_t i = 0; i < checks.size(); ++i) {
        if (i) os << ',';
        os << "{\"name\":\"" << checks[i].name << "\",\"lhs\":" << checks[i].lhs
           << ",\"rhs\":" << checks[i].rhs << ",\"pass\":" << (checks[i].pass ? "true" : "false")
           << '}';
    }
    os << "]}";
    return os.str();
}

} // namespace parab

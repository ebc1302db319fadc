#include "parab/fatou.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parab {
namespace {

// Sum beta_m u^m with u replaced by a jet (u-divisible argument keeps orders straight).
Jet2<Rational> beta_sum_of_jet(const std::vector<Rational>& beta, const Jet2<Rational>& uj) {
    const int N = uj.order();
    Jet2<Rational> r(N);
    Jet2<Rational> pw = Jet2<Rational>::constant(N, Rational(1));
    for (int m = 1; m <= N && m < int(beta.size()); ++m) {
        pw = pw * uj;
        Jet2<Rational> t = pw;
        t *= beta[m];
        r += t;
    }
    return r;
}

} // namespace

ExtractedSeries extract_series(const MapJet<Rational>& m, const CurveSeries& curve, int order,
                               int beta_terms) {
    if (int(curve.coeffs_q.size()) == 0)
        throw std::invalid_argument("extract_series needs a rational-mode curve");
    if (curve.order < order - 1)
        throw std::invalid_argument("insufficient curve order for series extraction");
    const int N = m.order();
    if (N < order) throw std::invalid_argument("jet order too small");

    using J = Jet2<Rational>;
    // substitution (z, u) -> (z, u + gamma(z))
    J gam_j(N);
    for (int k = 3; k <= curve.order && k <= N; ++k) gam_j.set(k, 0, curve.coeffs_q[k]);
    J sub_first = J::var_z(N);
    J sub_second = J::var_w(N) + gam_j;

    J G1 = jet_substitute(m.first, sub_first, sub_second);
    J G2 = jet_substitute(m.second, sub_first, sub_second);

    // u1 = G2 - gamma(G1)
    J gamG1(N);
    {
        std::vector<J> pw;
        pw.push_back(J::constant(N, Rational(1)));
        for (int d = 1; d <= N; ++d) pw.push_back(pw.back() * G1);
        for (int k = 3; k <= curve.order && k <= N; ++k) {
            J t = pw[k];
            t *= curve.coeffs_q[k];
            gamG1 += t;
        }
    }
    J U1 = G2 - gamG1;

    // T = 1/z1 - 1/z = (E^{-1} - 1)/z, E = z1/z
    J E = G1.divided_by_z();
    J T = (jet_inverse_unit(E) - J::constant(N, Rational(1))).divided_by_z();

    ExtractedSeries out;
    out.g.assign(N, Rational(0));
    for (int j = 1; j < N; ++j) out.g[j] = T.coeff(0, j);
    out.c = T.coeff(1, 0);
    out.t11 = T.coeff(1, 1);

    // u*(1/u1 - 1/u) = Eu^{-1} - 1, Eu = u1/u; h[j] = coeff of z u^{j+1}
    J Eu = U1.divided_by_w();
    J SuNum = jet_inverse_unit(Eu) - J::constant(N, Rational(1));
    if (!(SuNum.coeff(1, 1) == Rational(1)))
        throw std::domain_error("unexpected leading drift in 1/u1 (expected +z)");
    out.h.assign(N, Rational(0));
    for (int j = 1; j + 1 <= N - 1; ++j) out.h[j] = SuNum.coeff(1, j + 1);

    // ell11 = coeff zu of log(x1/x) = log(1 + zT)
    J zT = J::var_z(N) * T;
    out.ell11 = jet_log1p(zT).coeff(1, 1);

    // beta asymptotic series from the ODE (1+h)beta' - (1-g)beta = -g
    out.beta.assign(beta_terms + 1, Rational(0));
    for (int mm = 1; mm <= beta_terms; ++mm) {
        Rational val = (mm < int(out.g.size())) ? out.g[mm] : Rational(0);
        if (mm >= 2) val += Rational(-(mm - 1)) * out.beta[mm - 1];
        for (int i = 1; i <= mm - 2; ++i) { // h_i * beta', terms with j = mm - i >= 2
            const int j = mm - i;
            if (i < int(out.h.size())) val += out.h[i] * (Rational(-(j - 1)) * out.beta[j - 1]);
        }
        for (int i = 1; i <= mm - 1; ++i) { // g_i * beta_j
            const int j = mm - i;
            if (i < int(out.g.size())) val += out.g[i] * out.beta[j];
        }
        out.beta[mm] = val;
    }

    // a11 = coeff zu of Delta_alpha = (B1 - B0)/z + B1 * T
    J B1 = beta_sum_of_jet(out.beta, U1);
    J B0 = beta_sum_of_jet(out.beta, J::var_w(N));
    J Dalpha = (B1 - B0).divided_by_z() + B1 * T;
    out.a11 = Dalpha.coeff(1, 1);

    out.k = out.t11 + out.c * out.ell11 + out.a11;
    return out;
}

FatouMachine::FatouMachine(const MapChain& chain, CurveSeries curve, RegionParams params,
                           TruncPolicy policy)
    : chain_(&chain), curve_(std::move(curve)), params_(params), policy_(policy) {
    const int internal_order = curve_.order + 1;
    MapJet<Rational> germ = chain.germ(internal_order);
    ext_ = extract_series(germ, curve_, internal_order);
    auto to_c = [](const std::vector<Rational>& v) {
        std::vector<cplx> r(v.size());
        for (size_t i = 0; i < v.size(); ++i) r[i] = ring_traits<Rational>::to_complex(v[i]);
        return r;
    };
    g_ = to_c(ext_.g);
    h_ = to_c(ext_.h);
    beta_ = to_c(ext_.beta);
    c_ = ring_traits<Rational>::to_complex(ext_.c);
    k_ = ring_traits<Rational>::to_complex(ext_.k);
    // fiber log weight: -(h1 + beta1)
    q_y_ = -(h_[1] + beta_[1]);
}

cplx FatouMachine::beta(cplx y) const {
    const cplx v = 1.0 / y;
    cplx term = beta_[1] * v;
    cplx sum = term;
    double prev = std::abs(term);
    cplx pw = v;
    for (size_t mm = 2; mm < beta_.size(); ++mm) {
        pw *= v;
        term = beta_[mm] * pw;
        const double a = std::abs(term);
        if (a > prev) break; // optimal truncation of the asymptotic series
        sum += term;
        prev = a;
    }
    return sum;
}

double FatouMachine::beta_ode_residual(cplx y, double step) const {
    const cplx h2 = cplx(2 * step, 0.0), h1 = cplx(step, 0.0);
    const cplx d = (-beta(y + h2) + 8.0 * beta(y + h1) - 8.0 * beta(y - h1) + beta(y - h2)) /
                   (12.0 * step);
    const cplx u = 1.0 / y;
    return std::abs((1.0 + h_of(u)) * d - (1.0 - g_of(u)) * beta(y) + g_of(u));
}

std::pair<cplx, cplx> FatouMachine::to_xy(cplx z, cplx w) const {
    if (z == cplx(0.0)) throw std::domain_error("to_xy: pole on the axis z = 0");
    const cplx u = w - curve_.value(z);
    if (u == cplx(0.0)) throw std::domain_error("to_xy: pole on the curve w = gamma(z)");
    return {1.0 / z, 1.0 / u};
}

std::pair<cplx, cplx> FatouMachine::from_xy(cplx x, cplx y) const {
    const cplx z = 1.0 / x;
    return {z, 1.0 / y + curve_.value(z)};
}

std::pair<cplx, cplx> FatouMachine::step_xy(cplx x, cplx y) const {
    auto [z, w] = from_xy(x, y);
    std::tie(z, w) = chain_->forward(z, w);
    return to_xy(z, w);
}

cplx FatouMachine::mu0(cplx x, cplx y) const {
    return x + c_ * log_pos(x) - k_ * log_pos(y) + x * beta(y);
}

cplx FatouMachine::mu_partial(cplx z, cplx w, long n) const {
    for (long i = 0; i < n; ++i) std::tie(z, w) = chain_->forward(z, w);
    auto [x, y] = to_xy(z, w);
    return mu0(x, y) + double(n);
}

std::vector<cplx> FatouMachine::mu_partial_sequence(cplx z, cplx w, long n_max) const {
    std::vector<cplx> out;
    out.reserve(n_max + 1);
    for (long n = 0; n <= n_max; ++n) {
        auto [x, y] = to_xy(z, w);
        out.push_back(mu0(x, y) + double(n));
        if (n < n_max) std::tie(z, w) = chain_->forward(z, w);
    }
    return out;
}

FatouMachine::Limit FatouMachine::mu_limit(cplx z, cplx w) const {
    // first-passage increment rule plus an absolute depth cap in the
    // translation coordinate (Re x_n), so values computed from different
    // extension counts along one orbit truncate at the same absolute point
    cplx prev = 0.0;
    bool have = false;
    long n = 0;
    for (;; ++n) {
        auto [x, y] = to_xy(z, w);
        const cplx val = mu0(x, y) + double(n);
        if (have) {
            const double inc = std::abs(val - prev);
            if (inc < policy_.tol && n > 32) {
                const double L = std::log(double(n));
                return {val, n, inc * double(n) * L};
            }
        }
        if (x.real() <= -double(policy_.n_max) || n >= 4 * policy_.n_max) break;
        prev = val;
        have = true;
        std::tie(z, w) = chain_->forward(z, w);
    }
    const double L = std::log(double(policy_.n_max));
    return {prev, n, policy_.tol * double(policy_.n_max) * L};
}

std::optional<FatouMachine::Limit> FatouMachine::psi(cplx z, cplx w, long budget) const {
    const double Re = params_.entry_R();
    for (long n = 0; n <= budget; ++n) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(w.real()) ||
            !std::isfinite(w.imag()) || std::max(std::abs(z), std::abs(w)) > 1.0)
            return std::nullopt;
        if (z != cplx(0.0)) {
            const cplx u = w - curve_.value(z);
            const cplx x = 1.0 / z;
            // Re x < 0 gate: see classify() -- keeps the entry test away from
            // the positive-axis log cut (conjugation equivariance)
            if (u != cplx(0.0) && x.real() < 0.0) {
                const cplx y = 1.0 / u;
                if (in_U(y, Re) && in_Dprime_ty_margin(t_entry_estimate(x, y), y, Re, kEntryMargin)) {
                    Limit L = mu_limit(z, w);
                    L.value += double(n);
                    return L;
                }
            }
        }
        std::tie(z, w) = chain_->forward(z, w);
    }
    return std::nullopt;
}

std::optional<std::pair<FatouMachine::Limit, cplx>> FatouMachine::theta(cplx z, cplx w,
                                                                        long budget) const {
    if (!in_D(z, w, params_, curve_)) throw std::domain_error("theta: point not in D");
    auto L = psi(z, w, budget);
    if (!L) return std::nullopt;
    return std::make_pair(*L, 1.0 / (w - curve_.value(z)));
}

cplx FatouMachine::fit_k() const {
    // one-step mu increment with the s-term removed, far out where 1/(xy)
    // dominates; fit k + a/y + b/y^2 + c*y over four y depths (the y-linear
    // basis absorbs the O(1/x^2) family, the 1/y powers the O(1/(xy^j)) ones)
    constexpr int NPT = 4;
    const double x0 = -1e5;
    const double ys[NPT] = {-100.0, -200.0, -400.0, -800.0};
    double A[NPT][NPT], v[NPT];
    for (int i = 0; i < NPT; ++i) {
        const cplx x(x0, 0.0), y(ys[i], 0.0);
        auto [x1, y1] = step_xy(x, y);
        const cplx B = (x1 - x) + 1.0 + c_ * (log_pos(x1) - log_pos(x)) +
                       (x1 * beta(y1) - x * beta(y));
        v[i] = (B * x * y).real();
        A[i][0] = 1.0;
        A[i][1] = 1.0 / ys[i];
        A[i][2] = 1.0 / (ys[i] * ys[i]);
        A[i][3] = ys[i];
    }
    for (int col = 0; col < NPT; ++col) {
        int piv = col;
        for (int r2 = col + 1; r2 < NPT; ++r2)
            if (std::abs(A[r2][col]) > std::abs(A[piv][col])) piv = r2;
        for (int c2 = 0; c2 < NPT; ++c2) std::swap(A[col][c2], A[piv][c2]);
        std::swap(v[col], v[piv]);
        for (int r2 = col + 1; r2 < NPT; ++r2) {
            const double f = A[r2][col] / A[col][col];
            for (int c2 = col; c2 < NPT; ++c2) A[r2][c2] -= f * A[col][c2];
            v[r2] -= f * v[col];
        }
    }
    double sol[NPT];
    for (int r2 = NPT - 1; r2 >= 0; --r2) {
        double s = v[r2];
        for (int c2 = r2 + 1; c2 < NPT; ++c2) s -= A[r2][c2] * sol[c2];
        sol[r2] = s / A[r2][r2];
    }
    return {sol[0], 0.0};
}

std::string FatouMachine::to_json() const {
    std::ostringstream os;
    os.precision(17);
    auto arr = [&](const std::vector<cplx>& v, size_t from) {
        os << '[';
        for (size_t i = from; i < v.size(); ++i) {
            if (i > from) os << ',';
            os << v[i].real();
        }
        os << ']';
    };
    os << "{\"g\":";
    arr(g_, 1);
    os << ",\"h\":";
    arr(h_, 1);
    os << ",\"c\":" << c_.real() << ",\"k\":" << k_.real() << ",\"r\":" << c_.real()
       << ",\"s\":" << -k_.real() << ",\"fiber_log_weight\":" << q_y_.real() << ",\"beta\":";
    arr(beta_, 1);
    os << ",\"policy\":{\"n_max\":" << policy_.n_max << ",\"tol\":" << policy_.tol << '}'
       << ",\"eps\":" << params_.eps << ",\"R\":" << params_.R << '}';
    return os.str();
}

} // namespace parab

// Command-line front end: verification suite, germ/orbit/curve dumps, psi and
// Upsilon evaluation, basin rasters, and parameter certification.
// Machine-readable output (JSON/CSV/PGM) goes to stdout or --out; human-facing
// progress goes to stderr. Exit codes: 0 ok, 1 verification failure, 2 usage.

#include "parab/analysis.hpp"
#include "parab/directions.hpp"
#include "parab/fatou.hpp"
#include "parab/fibers.hpp"
#include "parab/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace parab;

struct Config {
    double eps = 0.05;
    double R = 100.0;
    int order = 8;
    long budget = 1000;
    double tol = 1e-9;
    long n_max = 20000;
    std::string out;
    bool stamp = false;
};

// plain key=value file; '#' starts a comment
void load_config_file(const std::string& path, Config& cfg) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key == "eps") cfg.eps = std::stod(val);
        else if (key == "R") cfg.R = std::stod(val);
        else if (key == "order") cfg.order = std::stoi(val);
        else if (key == "budget") cfg.budget = std::stol(val);
        else if (key == "tol") cfg.tol = std::stod(val);
        else if (key == "n_max") cfg.n_max = std::stol(val);
        else if (key == "out") cfg.out = val;
        else throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    }
}

void write_output(const Config& cfg, const std::string& data) {
    if (cfg.out.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.out);
    out << data;
}

std::string jet_json(const MapJet<Rational>& m) {
    return "{\"first\":" + jet_to_json(m.first) + ",\"second\":" + jet_to_json(m.second) + "}";
}

int run_verify(const Config& cfg) {
    std::cerr << "building chain, curve and machine (eps=" << cfg.eps << ", R=" << cfg.R
              << ")...\n";
    verify::Context cx = verify::Context::standard(cfg.eps, cfg.R);
    auto results = verify::run_all(cx);
    for (const auto& r : results) {
        std::cerr << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name
                  << "  (" << r.runtime_s << " s)\n";
        for (const auto& c : r.checks)
            if (!c.pass) std::cerr << "      failed: " << c.name << "  " << c.detail << '\n';
    }
    write_output(cfg, verify::report_json(results) + "\n");
    const bool all = std::all_of(results.begin(), results.end(),
                                 [](const verify::CriterionResult& r) { return r.pass; });
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a parabolic automorphism of C^2"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand name

    Config cfg;
    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file (flags override)");
    app.add_option("--eps", cfg.eps, "sector radius epsilon");
    app.add_option("--R", cfg.R, "machinery sector radius R");
    app.add_option("--order", cfg.order, "jet/series truncation order");
    app.add_option("--budget", cfg.budget, "iteration budget for classification");
    app.add_option("--tol", cfg.tol, "limit tolerance");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_flag("--stamp", cfg.stamp, "embed a timestamp in sidecar metadata");

    auto* sc_verify = app.add_subcommand("verify", "run the full invariant suite");
    auto* sc_jet = app.add_subcommand("jet", "print the exact germ of the chain");
    auto* sc_orbit = app.add_subcommand("orbit", "CSV orbit trace");
    auto* sc_curve = app.add_subcommand("curve", "solve and serialize the parabolic curve");
    auto* sc_fatou = app.add_subcommand("fatou", "evaluate psi/Upsilon on an input CSV of points");
    auto* sc_basin = app.add_subcommand("basin", "raster the default slice to PGM");
    auto* sc_certify = app.add_subcommand("certify", "parameter certification report");

    double seed_re = -1e-3, seed_im = 0.0, seed_wre = -1e-2, seed_wim = 0.0;
    long orbit_n = 1000;
    bool with_curve = false;
    sc_orbit->add_option("--z-re", seed_re, "seed Re z");
    sc_orbit->add_option("--z-im", seed_im, "seed Im z");
    sc_orbit->add_option("--w-re", seed_wre, "seed Re w");
    sc_orbit->add_option("--w-im", seed_wim, "seed Im w");
    sc_orbit->add_option("--n", orbit_n, "orbit length");
    sc_orbit->add_flag("--curve", with_curve, "attach u_n = w_n - gamma(z_n) columns");

    std::string fatou_in;
    bool fatou_ups = false;
    sc_fatou->add_option("--in", fatou_in, "CSV of points: re_z,im_z,re_w,im_w")->required();
    sc_fatou->add_flag("--upsilon", fatou_ups, "append Upsilon columns");

    int nx = 256, ny = 256;
    sc_basin->add_option("--nx", nx, "raster width");
    sc_basin->add_option("--ny", ny, "raster height");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            Config file_cfg;
            load_config_file(config_path, file_cfg);
            // flags override file values: reparse over the file baseline
            Config merged = file_cfg;
            for (const auto* opt : app.get_options()) {
                if (opt->count() == 0) continue;
                const std::string n = opt->get_name();
                if (n == "--eps") merged.eps = cfg.eps;
                else if (n == "--R") merged.R = cfg.R;
                else if (n == "--order") merged.order = cfg.order;
                else if (n == "--budget") merged.budget = cfg.budget;
                else if (n == "--tol") merged.tol = cfg.tol;
                else if (n == "--out") merged.out = cfg.out;
                else if (n == "--stamp") merged.stamp = cfg.stamp;
            }
            cfg = merged;
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help
        std::cerr << app.help() << '\n' << e.what() << '\n';
        return 2;
    }

    try {
        // parsed config must certify before any command runs
        RegionParams params = RegionParams::make(cfg.eps, cfg.R);

        if (*sc_verify) return run_verify(cfg);

        MapChain chain = paper_chain();
        if (*sc_jet) {
            write_output(cfg, jet_json(chain.germ(cfg.order)) + "\n");
            return 0;
        }

        MapJet<Rational> germ9 = chain.germ(std::max(cfg.order, 8) + 1);
        CurveSeries curve = solve_curve(germ9, std::max(cfg.order, 8));
        measure_curve_bounds(curve, params);

        if (*sc_curve) {
            write_output(cfg, curve.to_json() + "\n");
            return 0;
        }
        if (*sc_orbit) {
            OrbitTrace tr = chain.orbit(cplx(seed_re, seed_im), cplx(seed_wre, seed_wim),
                                        int(orbit_n), with_curve ? &curve : nullptr);
            write_output(cfg, tr.to_csv());
            return 0;
        }

        FatouMachine fm(chain, curve, params, TruncPolicy{cfg.n_max, cfg.tol});
        if (*sc_certify) {
            std::vector<cplx> g(fm.series().g.size()), h(fm.series().h.size());
            for (size_t i = 0; i < g.size(); ++i) g[i] = ring_traits<Rational>::to_complex(fm.series().g[i]);
            for (size_t i = 0; i < h.size(); ++i) h[i] = ring_traits<Rational>::to_complex(fm.series().h[i]);
            write_output(cfg, certify_params(cfg.eps, cfg.R, &g, &h).to_json() + "\n");
            return 0;
        }
        if (*sc_fatou) {
            std::ifstream in(fatou_in);
            if (!in) throw std::runtime_error("cannot open " + fatou_in);
            std::ostringstream os;
            os.precision(17);
            os << "re_z,im_z,re_w,im_w,re_psi,im_psi,err_est";
            if (fatou_ups) os << ",re_ups,im_ups,ups_err";
            os << '\n';
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '+'))
                    continue;
                std::istringstream ls(line);
                double a, b, c, d;
                char comma;
                ls >> a >> comma >> b >> comma >> c >> comma >> d;
                if (!ls) continue;
                const cplx z(a, b), w(c, d);
                auto L = fm.psi(z, w, cfg.budget);
                os << a << ',' << b << ',' << c << ',' << d << ',';
                if (L)
                    os << L->value.real() << ',' << L->value.imag() << ',' << L->tail_estimate;
                else
                    os << ",,";
                if (fatou_ups) {
                    auto U = upsilon(fm, z, w, cfg.budget);
                    if (U)
                        os << ',' << U->value.real() << ',' << U->value.imag() << ','
                           << U->tail_estimate;
                    else
                        os << ",,,";
                }
                os << '\n';
            }
            write_output(cfg, os.str());
            return 0;
        }
        if (*sc_basin) {
            RasterParams rp;
            rp.nx = nx;
            rp.ny = ny;
            rp.budget = cfg.budget;
            Raster ras = raster(fm, rp);
            const std::string base = cfg.out.empty() ? std::string("basin.pgm") : cfg.out;
            {
                std::ofstream out(base, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + base);
                out << ras.to_pgm();
            }
            std::string sidecar = ras.sidecar_json();
            if (cfg.stamp) {
                const auto now = std::chrono::system_clock::now().time_since_epoch();
                sidecar.pop_back();
                sidecar += ",\"generated_at\":" +
                           std::to_string(
                               std::chrono::duration_cast<std::chrono::seconds>(now).count()) +
                           "}";
            }
            std::ofstream side(base + ".json");
            side << sidecar << '\n';
            std::cerr << "wrote " << base << " and " << base << ".json\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

// Command-line laboratory for time-harmonic plate waveguide problems in a
// 2D strip: modal exponents, thresholds, dispersion scans, truncated source
// and scattering solves, clamped-strip contour solutions, and
// limiting-absorption trajectories.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "plate/clamped_strip.hpp"
#include "plate/fem.hpp"
#include "plate/io.hpp"
#include "plate/physics.hpp"
#include "plate/scattering.hpp"
#include "plate/spectrum.hpp"
#include "plate/transverse.hpp"

using nlohmann::json;
using namespace plate;

namespace {

struct RunConfig {
    double k = 5.0;
    std::string bc = "simply";
    int nx = 80, ny = 40;
    double L = 1.5;
    std::string hole;  // "x0,y0,x1,y1"
    int pmax = 20;
    double beta = -1.0;  // <0: automatic
    double nu = 0.3;
    int n = 5;
    int p = 1;
    std::string gammas = "1e-2..1e-6";
    std::string out;
    std::string coeffs_out;
    std::string source_path;
    std::string matrix_out;
    std::string config_path;
    unsigned seed = 0;
};

// JSON config file; explicitly passed flags take precedence.
void apply_config(RunConfig& cfg, const std::string& path, CLI::App* sub) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot read config " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    auto absent = [&](const char* flag) {
        const CLI::Option* o = sub->get_option_no_throw(flag);
        return o == nullptr || o->count() == 0;
    };
    try {
        if (j.contains("k") && absent("--k")) cfg.k = j["k"].get<double>();
        if (j.contains("bc") && absent("--bc")) cfg.bc = j["bc"].get<std::string>();
        if (j.contains("nx") && absent("--nx")) cfg.nx = j["nx"].get<int>();
        if (j.contains("ny") && absent("--ny")) cfg.ny = j["ny"].get<int>();
        if (j.contains("L") && absent("--L")) cfg.L = j["L"].get<double>();
        if (j.contains("hole") && absent("--hole"))
            cfg.hole = j["hole"].get<std::string>();
        if (j.contains("pmax") && absent("--pmax")) cfg.pmax = j["pmax"].get<int>();
        if (j.contains("beta") && absent("--beta"))
            cfg.beta = j["beta"].get<double>();
        if (j.contains("nu") && absent("--nu")) cfg.nu = j["nu"].get<double>();
        if (j.contains("out") && absent("--out"))
            cfg.out = j["out"].get<std::string>();
        if (j.contains("seed") && absent("--seed"))
            cfg.seed = j["seed"].get<unsigned>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config schema error: ") + e.what());
    }
}

Bc parse_bc(const std::string& s) {
    if (s == "simply") return Bc::SimplySupported;
    if (s == "clamped") return Bc::Clamped;
    throw ValidationError("bc must be 'simply' or 'clamped'");
}

std::optional<fem::HoleRect> parse_hole(const std::string& s) {
    if (s.empty()) return std::nullopt;
    fem::HoleRect h;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &h.x0, &h.y0, &h.x1, &h.y1) != 4)
        throw ValidationError("hole must be x0,y0,x1,y1");
    return h;
}

std::vector<double> parse_gammas(const std::string& s) {
    std::vector<double> out;
    auto range = s.find("..");
    if (range != std::string::npos) {
        const double a = std::stod(s.substr(0, range));
        const double b = std::stod(s.substr(range + 2));
        for (double g = a; g >= b * (1.0 - 1e-12); g /= 10.0) out.push_back(g);
        return out;
    }
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stod(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

int cmd_thresholds(const RunConfig& cfg) {
    auto table = spectrum::thresholds(parse_bc(cfg.bc), cfg.n);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < cfg.n; ++i) {
        const double asym = kPi / 2.0 + (i + 1) * kPi;
        rows.push_back({static_cast<double>(i + 1), table.k[i],
                        cfg.bc == "clamped" ? asym : (i + 1) * kPi});
    }
    io::write_csv(cfg.out.empty() ? "thresholds.csv" : cfg.out,
                  {"n", "k_n", "asymptote"}, rows);
    return 0;
}

int cmd_modes(const RunConfig& cfg) {
    const Bc bc = parse_bc(cfg.bc);
    std::vector<spectrum::ModalExponent> modes;
    if (bc == Bc::SimplySupported)
        modes = spectrum::simply_supported_exponents(cfg.k, cfg.pmax);
    else
        modes = spectrum::clamped_propagating(cfg.k);
    std::vector<std::vector<double>> rows;
    int n_prop = 0;
    for (const auto& m : modes) {
        const bool prop = m.cls == spectrum::ModeClass::Propagating;
        if (prop) ++n_prop;
        rows.push_back({m.lambda.real(), m.lambda.imag(), prop ? 1.0 : 0.0});
    }
    io::write_csv(cfg.out.empty() ? "modes.csv" : cfg.out,
                  {"re_lambda", "im_lambda", "propagating"}, rows);
    std::cout << n_prop << " propagating exponents at k=" << cfg.k << "\n";
    return 0;
}

int cmd_dispersion(const RunConfig& cfg) {
    const Bc bc = parse_bc(cfg.bc);
    std::vector<std::vector<double>> rows;
    const int N = 1024;
    for (int i = 0; i < N; ++i) {
        const double tau = (i + 0.5) / N;
        const Complex lam(0.0, tau * cfg.k);
        const Complex d = transverse::det_dispersion(lam, cfg.k, bc);
        rows.push_back({tau, d.real(), d.imag()});
    }
    io::write_csv(cfg.out.empty() ? "dispersion.csv" : cfg.out,
                  {"tau", "re_det", "im_det"}, rows);
    return 0;
}

int cmd_solve_strip(const RunConfig& cfg) {
    if (parse_bc(cfg.bc) != Bc::SimplySupported)
        throw ValidationError("solve-strip: truncated solve requires the "
                              "simply supported strip (no clamped DtN)");
    fem::StripMesh mesh(cfg.L, cfg.nx, cfg.ny, parse_hole(cfg.hole));
    auto f = [](double x, double y) -> Complex {
        const double t = x / 0.5, s = (y - 0.5) / 0.3;
        if (std::abs(t) >= 1.0 || std::abs(s) >= 1.0) return 0.0;
        return std::pow((1 - t * t) * (1 - s * s), 4);
    };
    auto sys = fem::assemble_plate(mesh, cfg.nu, cfg.k,
                                   fem::EssentialBc::SimplySupportedStrip, f);
    fem::assemble_dtn_coupling(sys, cfg.pmax);
    if (!cfg.matrix_out.empty()) io::write_matrix_market(cfg.matrix_out, sys.A);
    fem::PlateSolver solver(sys);
    fem::PlateField u = solver.solve();
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= 4 * cfg.nx; ++i)
        for (int j = 0; j <= 4 * cfg.ny; ++j) {
            const double x = -cfg.L + 2.0 * cfg.L * i / (4.0 * cfg.nx);
            const double y = static_cast<double>(j) / (4.0 * cfg.ny);
            const Complex v = u.eval(x, y);
            rows.push_back({x, y, v.real(), v.imag()});
        }
    io::write_csv(cfg.out.empty() ? "field.csv" : cfg.out,
                  {"x", "y", "re_u", "im_u"}, rows);
    json summary{{"k", cfg.k}, {"residual", solver.last_residual()},
                 {"n_eq", sys.n_eq}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_scatter(const RunConfig& cfg) {
    fem::StripMesh mesh(cfg.L, cfg.nx, cfg.ny, parse_hole(cfg.hole));
    scattering::ScatterOptions opt;
    opt.nu = cfg.nu;
    opt.p_max = cfg.pmax;
    auto sm = scattering::scattering_matrix(cfg.k, mesh, opt);
    json out;
    out["k"] = cfg.k;
    out["n"] = sm.n;
    std::vector<std::vector<double>> Sre, Sim;
    for (int i = 0; i < 2 * sm.n; ++i) {
        std::vector<double> re, im;
        for (int j = 0; j < 2 * sm.n; ++j) {
            re.push_back(sm.S(i, j).real());
            im.push_back(sm.S(i, j).imag());
        }
        Sre.push_back(re);
        Sim.push_back(im);
    }
    out["S_re"] = Sre;
    out["S_im"] = Sim;
    out["unitarity_defect"] = sm.unitarity_defect();
    out["symmetry_defect"] = sm.symmetry_defect();
    out["solve_residuals"] = sm.solve_residuals;
    std::ofstream os(cfg.out.empty() ? "s_matrix.json" : cfg.out);
    os << out.dump(2) << "\n";
    std::cout << "unitarity defect " << sm.unitarity_defect()
              << ", symmetry defect " << sm.symmetry_defect() << "\n";
    return 0;
}

clamped_strip::SourceTerm load_source(const std::string& path) {
    clamped_strip::SourceTerm f;
    json spec;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw ValidationError("cannot read source spec " + path);
        is >> spec;
    } else {
        spec = json{{"terms",
                     {{{"x_center", 0.0},
                       {"x_halfwidth", 0.8},
                       {"amplitude", {1.0, 0.0}},
                       {"y_sines", {{1, 1.0}}}}}}};
    }
    for (const auto& t : spec.at("terms")) {
        clamped_strip::SeparableTerm term;
        const double c = t.at("x_center").get<double>();
        const double hw = t.at("x_halfwidth").get<double>();
        const Complex amp(t.at("amplitude")[0].get<double>(),
                          t.at("amplitude")[1].get<double>());
        term.x_lo = c - hw;
        term.x_hi = c + hw;
        term.X = [c, hw, amp](double x) -> Complex {
            const double t0 = (x - c) / hw;
            if (std::abs(t0) >= 1.0) return 0.0;
            return amp * std::pow(1.0 - t0 * t0, 9);
        };
        std::vector<std::pair<int, double>> sines;
        for (const auto& s : t.at("y_sines"))
            sines.emplace_back(s[0].get<int>(), s[1].get<double>());
        term.Y = [sines](double y) -> Complex {
            double v = 0.0;
            for (const auto& [p, cpv] : sines) v += cpv * std::sin(kPi * p * y);
            return v;
        };
        f.terms.push_back(term);
    }
    return f;
}

int cmd_clamped_solve(const RunConfig& cfg) {
    auto f = load_source(cfg.source_path);
    auto spec = clamped_strip::default_contour(cfg.k);
    if (cfg.beta > 0.0) spec.beta = cfg.beta;
    transverse::HermiteGrid1D grid(64);
    auto u = clamped_strip::radiating_solution(f, cfg.k, spec, grid);

    std::vector<std::vector<double>> rows;
    const double X = 2.5 * u.cutoff_L;
    for (int i = 0; i <= 120; ++i)
        for (int j = 0; j <= 24; ++j) {
            const double x = -X + 2.0 * X * i / 120.0;
            const double y = static_cast<double>(j) / 24.0;
            const Complex v = u.eval(x, y);
            rows.push_back({x, y, v.real(), v.imag()});
        }
    io::write_csv(cfg.out.empty() ? "field.csv" : cfg.out,
                  {"x", "y", "re_u", "im_u"}, rows);

    auto fx = clamped_strip::flux_extract(u.field(), cfg.k, 2.2 * u.cutoff_L,
                                          u.cutoff_L);
    json cj;
    cj["k"] = cfg.k;
    cj["beta"] = u.beta;
    cj["etas"] = u.etas;
    double agree = 0.0;
    for (std::size_t p = 0; p < u.a.size(); ++p) {
        cj["a_re"].push_back(u.a[p].real());
        cj["a_im"].push_back(u.a[p].imag());
        cj["b_re"].push_back(u.b[p].real());
        cj["b_im"].push_back(u.b[p].imag());
        cj["flux_a_re"].push_back(fx.a[p].real());
        cj["flux_a_im"].push_back(fx.a[p].imag());
        cj["flux_b_re"].push_back(fx.b[p].real());
        cj["flux_b_im"].push_back(fx.b[p].imag());
        agree = std::max(agree, std::abs(u.a[p] - fx.a[p]));
        agree = std::max(agree, std::abs(u.b[p] - fx.b[p]));
    }
    cj["extraction_disagreement"] = agree;
    std::ofstream os(cfg.coeffs_out.empty() ? "coeffs.json" : cfg.coeffs_out);
    os << cj.dump(2) << "\n";
    std::cout << "outgoing coefficients written; extraction paths agree to "
              << agree << "\n";
    return 0;
}

int cmd_labs(const RunConfig& cfg) {
    const Bc bc = parse_bc(cfg.bc);
    auto gammas = parse_gammas(cfg.gammas);
    auto traj = physics::damped_trajectory(cfg.p, cfg.k, gammas, 1.0, bc);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < gammas.size(); ++i)
        rows.push_back({gammas[i], traj.eta_gamma[i].real(),
                        traj.eta_gamma[i].imag()});
    io::write_csv(cfg.out.empty() ? "labs.csv" : cfg.out,
                  {"gamma", "re_i_eta", "im_i_eta"}, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("PLATE_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"platewave: time-harmonic plate waveguide laboratory"};
    app.require_subcommand(1);
    RunConfig cfg;

    std::string config_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config (flags override)")
            ->check(CLI::ExistingFile);
        sub->add_option("--k", cfg.k, "wavenumber");
        sub->add_option("--bc", cfg.bc, "simply|clamped");
        sub->add_option("--nx", cfg.nx, "elements along x");
        sub->add_option("--ny", cfg.ny, "elements along y");
        sub->add_option("--L", cfg.L, "half-length of the truncated strip");
        sub->add_option("--hole", cfg.hole, "x0,y0,x1,y1");
        sub->add_option("--pmax", cfg.pmax, "modal truncation");
        sub->add_option("--beta", cfg.beta, "contour shift (clamped)");
        sub->add_option("--nu", cfg.nu, "Poisson ratio");
        sub->add_option("--out", cfg.out, "output path");
        sub->add_option("--dump-matrix", cfg.matrix_out,
                        "Matrix Market export of the assembled system");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    };

    auto* th = app.add_subcommand("thresholds", "threshold wavenumbers");
    th->add_option("--n", cfg.n, "how many");
    add_common(th);
    auto* mo = app.add_subcommand("modes", "modal exponents");
    mo->add_option("--p", cfg.p, "mode index");
    add_common(mo);
    auto* di = app.add_subcommand("dispersion", "dispersion function scan");
    add_common(di);
    auto* ss = app.add_subcommand("solve-strip", "source problem with DtN");
    add_common(ss);
    auto* sc = app.add_subcommand("scatter", "scattering matrix");
    add_common(sc);
    auto* cs = app.add_subcommand("clamped-solve", "clamped contour solution");
    cs->add_option("--source", cfg.source_path, "source spec JSON");
    cs->add_option("--coeffs", cfg.coeffs_out, "coefficient JSON output");
    add_common(cs);
    auto* la = app.add_subcommand("labs", "limiting-absorption trajectory");
    la->add_option("--p", cfg.p, "mode index");
    la->add_option("--gammas", cfg.gammas, "list or A..B decades");
    add_common(la);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty())
            apply_config(cfg, config_path, app.get_subcommands().front());
        if (th->parsed()) return cmd_thresholds(cfg);
        if (mo->parsed()) return cmd_modes(cfg);
        if (di->parsed()) return cmd_dispersion(cfg);
        if (ss->parsed()) return cmd_solve_strip(cfg);
        if (sc->parsed()) return cmd_scatter(cfg);
        if (cs->parsed()) return cmd_clamped_solve(cfg);
        if (la->parsed()) return cmd_labs(cfg);
    } catch (const ValidationError& e) {
        std::cerr << json{{"error", "validation"}, {"what", e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << json{{"error", "numerical"}, {"what", e.what()}}.dump()
                  << "\n";
        return 3;
    }
    return 0;
}

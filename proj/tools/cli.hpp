#pragma once

// Command-line front end. run_cli is kept free of process-level side effects
// (it only writes to the given streams and to --out paths) so tests can drive
// it in-process.

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptdimer/bdg.hpp"
#include "ptdimer/dynamics.hpp"
#include "ptdimer/io.hpp"
#include "ptdimer/isospectral.hpp"
#include "ptdimer/stationary.hpp"

namespace ptdimer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Thrown for unwritable destinations; mapped to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

struct Options {
    double v = 1.0;
    double c = 0.0;
    std::string gamma = "0";
    std::string out;
    double tol = 1e-9;
    std::string mode = "physical";
    std::string branch;
    double epsilon = 0.0;
    double t_end = 10.0;
    double dt = 1e-3;
};

inline double scalar_gamma(const Options& o) {
    const io::Grid g = io::parse_grid(o.gamma);
    if (!g.scalar) throw Error(ErrorKind::InvalidArgument, "--gamma must be a single value here");
    return g.points.front();
}

inline void append_spectrum(std::string& csv, const Spectrum& s) {
    for (const auto& st : s.states) {
        csv += io::spectrum_row(s.params, st);
        csv += '\n';
    }
}

inline std::string spectrum_csv(double v, double c, const std::vector<double>& gammas, SpectrumMode mode) {
    std::string csv(io::kSpectrumHeader);
    csv += '\n';
    for (double g : gammas) append_spectrum(csv, solve({v, g, c}, mode));
    return csv;
}

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline std::string stability_json(const ModelParams& p, double tol) {
    nlohmann::json doc;
    doc["params"] = {{"v", p.v}, {"gamma", p.gamma}, {"c", p.c}};
    doc["tol"] = tol;
    doc["states"] = nlohmann::json::array();
    for (const auto& s : solve_physical(p).states) {
        const StabilityReport r = stability(p, s, tol);
        nlohmann::json omegas = nlohmann::json::array();
        for (cplx w : r.omegas) omegas.push_back(complex_json(w));
        doc["states"].push_back({{"branch", std::string(to_string(s.branch))},
                                 {"kappa", complex_json(s.kappa)},
                                 {"mu", complex_json(s.mu)},
                                 {"omegas", omegas},
                                 {"max_im", r.max_im},
                                 {"verdict", std::string(to_string(r.verdict))}});
    }
    return doc.dump(2) + "\n";
}

inline constexpr std::string_view kStabilityHeader =
    "gamma,v,c,branch,mu_re,mu_im,omega1_re,omega1_im,omega2_re,omega2_im,omega3_re,omega3_im,omega4_re,omega4_im,"
    "max_im,verdict";

inline std::string stability_csv(double v, double c, const std::vector<double>& gammas, double tol) {
    std::string csv(kStabilityHeader);
    csv += '\n';
    for (double g : gammas) {
        const ModelParams p{v, g, c};
        for (const auto& s : solve_physical(p).states) {
            const StabilityReport r = stability(p, s, tol);
            csv += io::format_double(g) + ',' + io::format_double(v) + ',' + io::format_double(c) + ',';
            csv += std::string(to_string(s.branch));
            csv += ',' + io::format_double(s.mu.real()) + ',' + io::format_double(s.mu.imag());
            for (cplx w : r.omegas) csv += ',' + io::format_double(w.real()) + ',' + io::format_double(w.imag());
            csv += ',' + io::format_double(r.max_im) + ',' + std::string(to_string(r.verdict)) + '\n';
        }
    }
    return csv;
}

inline std::string trajectory_csv(const Trajectory& tr) {
    std::string csv = "t,psi1_re,psi1_im,psi2_re,psi2_im,norm,kappa_norm\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const auto& y = tr.psi[k];
        csv += io::format_double(tr.times[k]);
        for (double x : {y[0].real(), y[0].imag(), y[1].real(), y[1].imag(), tr.norm[k], tr.kappa_normalized[k]})
            csv += ',' + io::format_double(x);
        csv += '\n';
    }
    return csv;
}

inline int cmd_spectrum(const Options& o, std::ostream& out) {
    const io::Grid g = io::parse_grid(o.gamma);
    if (g.scalar) throw Error(ErrorKind::InvalidArgument, "spectrum needs --gamma min:max:count");
    SpectrumMode mode;
    if (o.mode == "physical") mode = SpectrumMode::Physical;
    else if (o.mode == "continued") mode = SpectrumMode::Continued;
    else throw Error(ErrorKind::InvalidArgument, "--mode must be physical or continued");
    write_text(o.out, spectrum_csv(o.v, o.c, g.points, mode), out);
    return kExitOk;
}

inline int cmd_stability(const Options& o, std::ostream& out) {
    const ModelParams p{o.v, scalar_gamma(o), o.c};
    write_text(o.out, stability_json(p, o.tol), out);
    return kExitOk;
}

inline int cmd_isospectral(const Options& o, std::ostream& out) {
    const io::Grid g = io::parse_grid(o.gamma);
    std::string csv = "gamma,c,max_pair_distance,pass\n";
    bool all = true;
    for (double gamma : g.points) {
        const IsospectralCheck chk = check_isospectral({o.v, gamma, o.c}, o.tol);
        all = all && chk.pass;
        csv += io::format_double(gamma) + ',' + io::format_double(o.c) + ',' + io::format_double(chk.max_distance) +
               ',' + (chk.pass ? "1" : "0") + '\n';
    }
    write_text(o.out, csv, out);
    return all ? kExitOk : kExitCheckFailed;
}

inline int cmd_dynamics(const Options& o, std::ostream& out) {
    const ModelParams p{o.v, scalar_gamma(o), o.c};
    const auto branch = parse_branch(o.branch);
    if (!branch) throw Error(ErrorKind::InvalidArgument, "unknown --branch '" + o.branch + "'");
    if (!(o.epsilon >= 0.0) || !std::isfinite(o.epsilon))
        throw Error(ErrorKind::InvalidArgument, "--epsilon must be >= 0");

    const Spectrum physical = solve_physical(p);
    const StationaryState* s = physical.find(*branch);
    if (!s) throw Error(ErrorKind::BranchAbsent, std::string(to_string(*branch)) + " does not exist at these parameters");

    Vec<2> psi0 = s->phi();
    if (o.epsilon > 0.0) {
        const Vec<2> dir = perturbation_direction(p, *s);
        psi0 = {psi0[0] + o.epsilon * dir[0], psi0[1] + o.epsilon * dir[1]};
    }
    write_text(o.out, trajectory_csv(integrate(p, psi0, o.t_end, o.dt)), out);
    return kExitOk;
}

/// Figure datasets at v = 1 on the gamma grid 0:2:401.
inline int cmd_figures(const Options& o, std::ostream& out) {
    namespace fs = std::filesystem;
    const fs::path dir = o.out.empty() ? fs::path("figures") : fs::path(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");

    const double v = 1.0;
    const std::vector<double> gammas = io::parse_grid("0:2:401").points;
    auto emit = [&](const std::string& name, const std::string& text) { write_text((dir / name).string(), text, out); };

    emit("fig1_c0.csv", spectrum_csv(v, 0.0, gammas, SpectrumMode::Physical));
    emit("fig1_c0.5.csv", spectrum_csv(v, 0.5, gammas, SpectrumMode::Physical));
    emit("fig2_c0.9.csv", spectrum_csv(v, 0.9, gammas, SpectrumMode::Physical));
    emit("fig2_c1.csv", spectrum_csv(v, 1.0, gammas, SpectrumMode::Physical));
    emit("fig2_c1.5.csv", spectrum_csv(v, 1.5, gammas, SpectrumMode::Physical));
    emit("fig3_stability.csv", stability_csv(v, 0.9, {0.2, 0.7, 1.2}, kStabilityTol));
    emit("fig4_c0.5.csv", spectrum_csv(v, 0.5, gammas, SpectrumMode::Continued));
    emit("fig4_c1.csv", spectrum_csv(v, 1.0, gammas, SpectrumMode::Continued));
    emit("fig4_c1.5.csv", spectrum_csv(v, 1.5, gammas, SpectrumMode::Continued));
    return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stationary states, stability and dynamics of a PT-symmetric two-mode condensate", "ptdimer"};
    app.require_subcommand(1, 1);

    Options o;
    app.add_option("--v", o.v, "coupling v")->capture_default_str();
    app.add_option("--c", o.c, "effective nonlinearity c")->capture_default_str();
    app.add_option("--gamma", o.gamma, "gain/loss rate: value or min:max:count")->capture_default_str();
    app.add_option("--out", o.out, "output file (stdout if omitted); directory for 'figures'");
    app.add_option("--tol", o.tol, "tolerance (isospectral distance, stability threshold)")->capture_default_str();

    auto* spectrum = app.add_subcommand("spectrum", "stationary states over a gamma grid (CSV)");
    spectrum->add_option("--mode", o.mode, "physical or continued")->capture_default_str();
    auto* stab = app.add_subcommand("stability", "BdG frequencies of every physical state (JSON)");
    auto* iso = app.add_subcommand("isospectral", "compare eig(M) with the continued chemical potentials (CSV)");
    auto* dyn = app.add_subcommand("dynamics", "integrate the mean-field equation from a stationary state (CSV)");
    dyn->add_option("--branch", o.branch, "symmetric-plus, symmetric-minus, self-trap-plus, self-trap-minus")
        ->required();
    dyn->add_option("--epsilon", o.epsilon, "size of the kick along the most unstable direction")
        ->capture_default_str();
    dyn->add_option("--t-end", o.t_end, "final time")->capture_default_str();
    dyn->add_option("--dt", o.dt, "RK4 step")->capture_default_str();
    auto* fig = app.add_subcommand("figures", "write all figure datasets into --out (default ./figures)");

    for (auto* sub : {spectrum, stab, iso, dyn, fig}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*spectrum) return cmd_spectrum(o, out);
        if (*stab) return cmd_stability(o, out);
        if (*iso) return cmd_isospectral(o, out);
        if (*dyn) return cmd_dynamics(o, out);
        return cmd_figures(o, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"ptdimer"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace ptdimer::cli

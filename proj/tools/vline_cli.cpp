#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vline/io.hpp"
#include "vline/vline.hpp"

using namespace vline;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// Pipeline parameters: defaults, then a JSON config file, then flags.
struct Settings {
    std::string config;
    std::optional<std::size_t> grid, vertices, angles;
    std::optional<int> weight;
    std::optional<double> lambda, svd_threshold, noise, step;
    std::optional<std::string> method;
    std::optional<std::uint64_t> seed;

    json file;

    template <class T>
    T pick(const std::optional<T>& flag, const char* key, T fallback) const {
        if (flag) return *flag;
        if (file.contains(key)) return file.at(key).get<T>();
        return fallback;
    }

    void load() {
        if (config.empty()) return;
        std::ifstream in(config);
        if (!in) throw std::invalid_argument("cannot open config '" + config + "'");
        file = json::parse(in);
        if (!file.is_object()) throw std::invalid_argument("config must be a JSON object");
    }

    SolveConfig solver() const {
        SolveConfig s;
        s.method = parse_solve_method(pick<std::string>(method, "method", "tikhonov"));
        s.lambda = pick(lambda, "lambda", s.lambda);
        s.svd_threshold = pick(svd_threshold, "svd_threshold", s.svd_threshold);
        if (file.contains("lambda_per_order"))
            for (const auto& [key, value] : file.at("lambda_per_order").items())
                s.lambda_per_order[std::stoi(key)] = value.get<double>();
        s.validate();
        return s;
    }
};

void add_flags(CLI::App* cmd, Settings& st, std::initializer_list<std::string> which) {
    for (const auto& name : which) {
        if (name == "config") cmd->add_option("--config", st.config, "JSON config file")->check(CLI::ExistingFile);
        if (name == "grid") cmd->add_option("--grid", st.grid, "image size in pixels (default 301)");
        if (name == "vertices") cmd->add_option("--vertices", st.vertices, "number of vertices M, a power of two (default 256)");
        if (name == "angles") cmd->add_option("--angles", st.angles, "opening-angle intervals N (default 300)");
        if (name == "weight") cmd->add_option("--weight", st.weight, "distance weight m (default 0)");
        if (name == "lambda") cmd->add_option("--lambda", st.lambda, "Tikhonov parameter (default 0.015)");
        if (name == "method") cmd->add_option("--method", st.method, "triangular | tikhonov | tsvd");
        if (name == "svd") cmd->add_option("--svd-threshold", st.svd_threshold, "relative TSVD cutoff (default 1e-3)");
        if (name == "noise") cmd->add_option("--noise", st.noise, "relative Gaussian noise level (default 0)");
        if (name == "seed") cmd->add_option("--seed", st.seed, "noise seed (default 1)");
        if (name == "step") cmd->add_option("--step", st.step, "ray quadrature spacing (default 1/(2 grid))");
    }
}

/// Raw outputs carry a JSON sidecar; all files touched by one command must differ.
void require_distinct(const std::vector<std::string>& inputs, const std::vector<std::string>& raw_outputs,
                      const std::vector<std::string>& plain_outputs = {}) {
    std::set<fs::path> seen;
    auto claim = [&](const std::string& p) {
        if (p.empty()) return;
        const auto key = fs::weakly_canonical(fs::path(p));
        if (!seen.insert(key).second) throw std::invalid_argument("path '" + p + "' is used more than once");
    };
    for (const auto& p : inputs) claim(p);
    for (const auto& p : raw_outputs) {
        claim(p);
        if (!p.empty()) claim(io::sidecar_path(p));
    }
    for (const auto& p : plain_outputs) claim(p);
}

PhantomSpec phantom_from(const std::string& arg) {
    if (arg == "disk" || arg == "smiley") return io::parse_phantom(json{{"builtin", arg}});
    return io::load_phantom(arg);
}

PhantomSpec phantom_from(const json& j) {
    if (j.is_string()) return phantom_from(j.get<std::string>());
    return io::parse_phantom(j);
}

void write_report(const json& report, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << report.dump(2) << '\n';
}

json orders_json(const std::vector<OrderDiagnostics>& orders) {
    json arr = json::array();
    for (const auto& d : orders)
        arr.push_back({{"order", d.order}, {"relative_residual", d.relative_residual}, {"lambda", d.lambda}});
    return arr;
}

json verify_report(int max_order, bool& all_pass) {
    json cases = json::array();
    all_pass = true;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {3, 1}, {2, 1}})
        for (int l = 0; l <= max_order; ++l) {
            const KernelSpec spec{n, m, l};
            double identity = 0.0;
            for (int k = 1; k < 200; ++k) {
                const double s = k / 200.0;
                identity = std::max(identity, std::abs(kernel_F(spec, s, s) - kernel_F_diagonal(spec, s)));
            }
            json zeros = json::array();
            for (const auto& u : check_uniqueness_condition(spec)) {
                const auto v = check_volterra_slope(spec, u.s0);
                zeros.push_back({{"s0", u.s0},
                                 {"beta1", u.beta1},
                                 {"beta2", u.beta2},
                                 {"value", u.value},
                                 {"expected", u.expected},
                                 {"slope_rel_error", u.slope_rel_error},
                                 {"uniqueness_pass", u.pass},
                                 {"volterra_slope_rel_error", v.rel_error},
                                 {"volterra_pass", v.pass}});
                all_pass = all_pass && u.pass && v.pass;
            }
            all_pass = all_pass && identity < 1e-12;
            cases.push_back({{"n", n}, {"m", m}, {"l", l}, {"diagonal_identity_error", identity}, {"zeros", zeros}});
        }
    return {{"max_order", max_order}, {"pass", all_pass}, {"cases", cases}};
}

int run(int argc, char** argv) {
    CLI::App app{"V-line transform reconstruction by circular harmonic decomposition"};
    app.require_subcommand(1);
    Settings st;
    std::string in, out, pgm, csv, report, phantom_arg, sinogram_path, profiles_out, data_out;

    auto* phantom = app.add_subcommand("phantom", "render a phantom to an image");
    phantom->add_option("--phantom", phantom_arg, "disk | smiley | path to a JSON description")->required();
    phantom->add_option("-o,--out", out, "raw image output")->required();
    phantom->add_option("--pgm", pgm, "PGM quicklook");
    add_flags(phantom, st, {"config", "grid"});

    auto* forward = app.add_subcommand("forward", "V-line transform of an image");
    forward->add_option("-i,--in", in, "raw image input")->required();
    forward->add_option("-o,--out", out, "raw sinogram output")->required();
    forward->add_option("--csv", csv, "CSV table of the sinogram");
    forward->add_option("--pgm", pgm, "PGM quicklook");
    add_flags(forward, st, {"config", "vertices", "angles", "weight", "step"});

    auto* noise = app.add_subcommand("noise", "add relative Gaussian noise to a sinogram");
    noise->add_option("-i,--in", in, "raw sinogram input")->required();
    noise->add_option("-o,--out", out, "raw sinogram output")->required();
    add_flags(noise, st, {"config", "noise", "seed"});

    auto* decomp = app.add_subcommand("decompose", "circular harmonic coefficients of a sinogram");
    decomp->add_option("-i,--in", in, "raw sinogram input")->required();
    decomp->add_option("-o,--out", out, "raw harmonics output")->required();

    auto* solve_cmd = app.add_subcommand("solve", "per-order Abel solves");
    bool with_condition = false;
    solve_cmd->add_option("-i,--in", in, "raw harmonics input")->required();
    solve_cmd->add_option("-o,--out", out, "raw radial profiles output")->required();
    solve_cmd->add_option("--report", report, "JSON report with per-order residuals");
    solve_cmd->add_flag("--condition", with_condition, "add singular value diagnostics to the report");
    add_flags(solve_cmd, st, {"config", "weight", "method", "lambda", "svd"});

    auto* synth = app.add_subcommand("synthesize", "image from radial profiles");
    synth->add_option("-i,--in", in, "raw radial profiles input")->required();
    synth->add_option("-o,--out", out, "raw image output")->required();
    synth->add_option("--pgm", pgm, "PGM quicklook");
    add_flags(synth, st, {"config", "grid"});

    auto* recon = app.add_subcommand("reconstruct", "simulate (or load) data and invert end to end");
    auto* recon_phantom = recon->add_option("--phantom", phantom_arg, "disk | smiley | path to a JSON description");
    recon->add_option("--sinogram", sinogram_path, "raw sinogram input")->excludes(recon_phantom)->check(CLI::ExistingFile);
    recon->add_option("-o,--out", out, "raw image output")->required();
    recon->add_option("--pgm", pgm, "PGM quicklook");
    recon->add_option("--report", report, "JSON report (- for stdout)");
    recon->add_option("--profiles", profiles_out, "raw radial profiles output");
    recon->add_option("--data", data_out, "raw sinogram actually inverted");
    add_flags(recon, st, {"config", "grid", "vertices", "angles", "weight", "lambda", "method", "svd", "noise", "seed", "step"});

    auto* verify = app.add_subcommand("verify", "kernel identity, uniqueness and Volterra checks");
    int max_order = 8;
    verify->add_option("--max-order", max_order, "largest order l (default 8)")->check(CLI::NonNegativeNumber);
    verify->add_option("--report", report, "JSON report (default stdout)");

    auto* oracle = app.add_subcommand("oracle", "alpha-form vs rho-form radial transform table");
    std::string profile = "bump";
    double radius = 0.8;
    int samples = 20, oracle_order = 6;
    oracle->add_option("--profile", profile, "constant | bump (default bump)");
    oracle->add_option("--radius", radius, "profile support radius (default 0.8)");
    oracle->add_option("--max-order", oracle_order, "largest order l (default 6)")->check(CLI::NonNegativeNumber);
    oracle->add_option("--samples", samples, "opening angles per case (default 20)")->check(CLI::PositiveNumber);
    oracle->add_option("-o,--out", csv, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }
    st.load();
    const auto grid = st.pick<std::size_t>(st.grid, "grid", 301);
    const auto vertices = st.pick<std::size_t>(st.vertices, "vertices", 256);
    const auto angles = st.pick<std::size_t>(st.angles, "angles", 300);
    const auto weight = st.pick(st.weight, "weight", 0);
    const auto noise_level = st.pick(st.noise, "noise", 0.0);
    const auto seed = st.pick<std::uint64_t>(st.seed, "seed", 1);
    const auto step = st.pick(st.step, "step", 0.0);

    if (*phantom) {
        require_distinct({phantom_arg, st.config}, {out}, {pgm});
        const auto img = render_phantom(phantom_from(phantom_arg), grid);
        io::save_image(img, out);
        if (!pgm.empty()) io::write_pgm(img, pgm);
    } else if (*forward) {
        require_distinct({in, st.config}, {out}, {csv, pgm});
        const auto sino = vline_forward(io::load_image(in), vertices, angles, weight, ForwardOptions{step});
        io::save_sinogram(sino, out);
        if (!csv.empty()) io::write_sinogram_csv(sino, csv);
        if (!pgm.empty()) io::write_pgm(sino, pgm);
    } else if (*noise) {
        require_distinct({in, st.config}, {out});
        io::save_sinogram(add_noise(io::load_sinogram(in), noise_level, seed), out);
    } else if (*decomp) {
        require_distinct({in}, {out});
        io::save_harmonics(decompose(io::load_sinogram(in)), out);
    } else if (*solve_cmd) {
        require_distinct({in, st.config}, {out}, {report});
        const auto table = io::load_harmonics(in);
        const auto cfg = st.solver();
        std::vector<OrderDiagnostics> diag;
        const auto profiles = solve_all_orders(table, weight, cfg, &diag);
        io::save_profiles(profiles, out);
        if (!report.empty()) {
            json r{{"method", to_string(cfg.method)}, {"weight", weight}, {"orders", orders_json(diag)}};
            if (with_condition) {
                json cond = json::array();
                for (int l = 0; l <= static_cast<int>(table.vertices() / 2); ++l) {
                    const auto c = condition_report(assemble(KernelSpec{2, weight, l}, table.intervals()));
                    cond.push_back({{"order", l},
                                    {"sigma_max", c.sigma_max},
                                    {"sigma_min", c.sigma_min},
                                    {"condition_number", c.condition_number},
                                    {"min_abs_diagonal", c.min_abs_diagonal},
                                    {"max_abs_diagonal", c.max_abs_diagonal}});
                }
                r["condition"] = cond;
            }
            write_report(r, report);
        }
    } else if (*synth) {
        require_distinct({in, st.config}, {out}, {pgm});
        const auto img = synthesize(io::load_profiles(in), grid);
        io::save_image(img, out);
        if (!pgm.empty()) io::write_pgm(img, pgm);
    } else if (*recon) {
        ReconConfig cfg;
        cfg.grid = grid;
        cfg.vertices = vertices;
        cfg.intervals = angles;
        cfg.weight = weight;
        cfg.solver = st.solver();
        cfg.noise = noise_level;
        cfg.seed = seed;
        cfg.step = step;
        if (sinogram_path.empty() && st.file.contains("sinogram")) sinogram_path = st.file.at("sinogram").get<std::string>();
        if (!phantom_arg.empty())
            cfg.phantom = phantom_from(phantom_arg);
        else if (!sinogram_path.empty())
            cfg.sinogram = io::load_sinogram(sinogram_path);
        else if (st.file.contains("phantom"))
            cfg.phantom = phantom_from(st.file.at("phantom"));
        else
            throw std::invalid_argument("reconstruct needs --phantom or --sinogram");
        if (cfg.sinogram) {
            cfg.vertices = cfg.sinogram->vertices();
            cfg.intervals = cfg.sinogram->intervals();
        }
        const std::string phantom_file = fs::exists(phantom_arg) ? phantom_arg : std::string();
        require_distinct({phantom_file, sinogram_path, st.config}, {out, profiles_out, data_out},
                         {pgm, report == "-" ? std::string() : report});

        const auto res = reconstruct(cfg);
        io::save_image(res.image, out);
        if (!pgm.empty()) io::write_pgm(res.image, pgm);
        if (!profiles_out.empty()) io::save_profiles(res.profiles, profiles_out);
        if (!data_out.empty()) io::save_sinogram(res.data, data_out);

        json r{{"grid", cfg.grid},
               {"vertices", cfg.vertices},
               {"angles", cfg.intervals},
               {"weight", cfg.weight},
               {"method", to_string(cfg.solver.method)},
               {"lambda", cfg.solver.lambda},
               {"noise", cfg.noise},
               {"seed", cfg.seed},
               {"timings_s",
                {{"forward", res.timings.forward_s},
                 {"decompose", res.timings.decompose_s},
                 {"solve", res.timings.solve_s},
                 {"synthesize", res.timings.synthesize_s}}},
               {"orders", orders_json(res.orders)}};
        if (res.relative_error) r["relative_error"] = *res.relative_error;
        if (res.correlation) r["correlation"] = *res.correlation;
        if (!report.empty()) write_report(r, report);
        std::cerr << "reconstructed " << cfg.grid << "x" << cfg.grid;
        if (res.relative_error) std::cerr << ", relative error " << *res.relative_error << ", correlation " << *res.correlation;
        std::cerr << '\n';
    } else if (*verify) {
        bool ok = false;
        write_report(verify_report(max_order, ok), report);
        if (!ok) {
            std::cerr << "verify: at least one check failed\n";
            return 2;
        }
    } else if (*oracle) {
        const auto f = make_radial(RadialProfile{parse_profile_kind(profile), radius});
        std::ofstream file;
        if (!csv.empty()) {
            file.open(csv);
            if (!file) throw std::runtime_error("cannot open '" + csv + "' for writing");
        }
        std::ostream& os = csv.empty() ? std::cout : file;
        os << "n,m,l,psi,alpha_form,rho_form,abs_diff\n" << std::setprecision(17);
        for (int n : {2, 3})
            for (int m : {0, 1})
                for (int l = 0; l <= oracle_order; ++l)
                    for (int k = 0; k < samples; ++k) {
                        const double psi = 0.5 * pi * (k + 0.5) / samples;
                        const double a = glk_alpha_integral(f, n, m, l, psi), b = glk2_rho_integral(f, n, m, l, psi);
                        os << n << ',' << m << ',' << l << ',' << psi << ',' << a << ',' << b << ',' << std::abs(a - b) << '\n';
                    }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

// superbound: command-line driver for the verification checks.

#include "superbound/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace superbound;

namespace {

constexpr int kUsage = 64;

struct Flags {
    std::optional<std::string> algebra, mu, boundary, config, report, lambda;
    std::optional<int> sites, samples, order;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool rational = false, trig = false;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--algebra", f.algebra, "m,n[,distinguished|symmetric]");
    app->add_option("--mu", f.mu, "deformation parameter RE,IM (implies --trig)");
    app->add_option("--boundary", f.boundary, "boundary spec, e.g. identity, kka:1,1,1,1, kdiag:2, nondiag:1");
    app->add_option("--sites", f.sites, "number of quantum sites N");
    app->add_option("--seed", f.seed, "sampler seed (default: SUPERBOUND_SEED or built-in)");
    app->add_option("--samples", f.samples, "number of sampled spectral points");
    app->add_option("--tol", f.tol, "pass tolerance");
    app->add_option("--order", f.order, "1/lambda truncation order");
    app->add_option("--report", f.report, "write the JSON report here");
    app->add_option("--config", f.config, "JSON config file; flags override it");
    app->add_flag("--rational", f.rational, "rational R-matrix (default)");
    app->add_flag("--trig", f.trig, "trigonometric R-matrix");
}

RunConfig resolve(const Flags& f) {
    RunConfig c;
    if (f.config) c = load_config_file(*f.config, c);
    if (f.algebra) parse_algebra(c, *f.algebra);
    if (f.rational && f.trig) throw ConfigError("deformation", "--rational and --trig are exclusive");
    if (f.rational) c.deformation = Deformation::rational;
    if (f.trig) c.deformation = Deformation::trig;
    if (f.mu) {
        c.mu = parse_complex("mu", *f.mu);
        if (!f.rational) c.deformation = Deformation::trig;
    }
    if (f.boundary) c.boundary = *f.boundary;
    if (f.sites) c.sites = *f.sites;
    if (f.seed) c.seed = *f.seed;
    if (f.samples) c.samples = *f.samples;
    if (f.tol) c.tol = *f.tol;
    if (f.order) c.order = *f.order;
    if (f.lambda) c.lambda = parse_complex("lambda", *f.lambda);
    return c;
}

void summarize(const Report& r) {
    const auto& d = r.doc;
    std::cout << d.at("command").get<std::string>() << " " << d.at("equation").get<std::string>() << ": "
              << d.at("status").get<std::string>() << " (max residual " << d.at("max_residual").get<double>()
              << ", tol " << d.at("tolerance").get<double>() << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graded R-matrix and boundary-algebra verification"};
    app.require_subcommand(1);
    Flags f;
    std::string equation;

    auto* check = app.add_subcommand("check", "verify an algebraic identity on seeded samples");
    check->add_option("equation", equation, "ybe | rtt | frt | reflection | twisted | qtwisted | uq-relations")
        ->required()
        ->check(CLI::IsMember({"ybe", "rtt", "frt", "reflection", "twisted", "qtwisted", "uq-relations"}));
    add_common(check, f);
    auto* symmetry = app.add_subcommand("symmetry", "preserved/broken generator table against the prediction");
    add_common(symmetry, f);
    auto* casimir = app.add_subcommand("casimir", "Casimir operators and their commutators");
    add_common(casimir, f);
    auto* spectrum = app.add_subcommand("spectrum", "degeneracy multiplets of t(lambda)");
    add_common(spectrum, f);
    spectrum->add_option("--lambda", f.lambda, "spectral point RE,IM")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        const RunConfig cfg = resolve(f);
        Report rep = check->parsed()      ? cmd_check(equation, cfg)
                     : symmetry->parsed() ? cmd_symmetry(cfg)
                     : casimir->parsed()  ? cmd_casimir(cfg)
                                          : cmd_spectrum(cfg);
        if (f.report) rep.write(*f.report);
        summarize(rep);
        return exit_code(rep.status());
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

// superbound_acceptance: one PASS/FAIL line per acceptance criterion.

#include "superbound/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace superbound;

namespace {

struct Line {
    bool ok = true;
    double worst = 0.0;
    std::vector<std::string> notes;

    void need(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void track(double r) { worst = std::max(worst, r); }
};

const char* const kAlgebras[] = {"1,1", "2,1", "1,2", "2,2"};

RunConfig config(const std::string& algebra, Deformation d, const std::string& boundary = "identity", int sites = 1,
                 int samples = 20) {
    RunConfig c;
    parse_algebra(c, algebra);
    c.deformation = d;
    c.boundary = boundary;
    c.sites = sites;
    c.samples = samples;
    return c;
}

std::string label(const RunConfig& c, const std::string& what) {
    return what + " gl(" + std::to_string(c.m) + "|" + std::to_string(c.n) + ")" +
           (c.scheme == Scheme::symmetric ? " sym" : "") + " " + c.boundary + " N=" + std::to_string(c.sites);
}

/// Runs a report-producing command and records its status and residual.
void expect_pass(Line& line, const Report& r, const std::string& what) {
    line.track(r.doc.at("max_residual").get<double>());
    line.need(r.status() == Status::pass, what + " " + r.doc.at("status").get<std::string>());
}

int max_sites(const Grading& g) { return g.dim() >= 4 ? 2 : 3; }

Line ybe() {
    Line l;
    for (const char* a : kAlgebras)
        for (const auto d : {Deformation::rational, Deformation::trig}) {
            const RunConfig c = config(a, d);
            expect_pass(l, cmd_check("ybe", c), label(c, "ybe " + to_string(d)));
        }
    return l;
}

Line structural() {
    Line l;
    for (const char* a : kAlgebras) {
        const RunConfig c = config(a, Deformation::rational);
        const Grading g = c.grading();
        const Mat p = permutation_P(g), q = projector_Q(g), one = identity(g, 2);
        const double p2 = rel_diff(p * p, one), q2 = rel_diff(q * q, 2.0 * g.rho() * q);
        const double pq = std::max(rel_diff(p * q, q), rel_diff(q * p, q));
        l.track(std::max({p2, q2, pq}));
        l.need(p2 < 1e-12, std::string("P^2 gl ") + a);
        l.need(q2 < 1e-12, std::string("Q^2=2rhoQ gl ") + a);
        l.need(pq < 1e-12, std::string("PQ=QP=Q gl ") + a);
    }
    return l;
}

Line rtt_frt() {
    Line l;
    for (const char* a : kAlgebras) {
        const Grading g = config(a, Deformation::rational).grading();
        for (int n = 1; n <= 3; ++n) {
            const int samples = n <= max_sites(g) ? 20 : 3;
            expect_pass(l, cmd_check("rtt", config(a, Deformation::rational, "identity", n, samples)), "rtt rational");
            expect_pass(l, cmd_check("rtt", config(a, Deformation::trig, "identity", n, samples)), "rtt trig");
            const RunConfig f = config(a, Deformation::trig, "identity", n);
            expect_pass(l, cmd_check("frt", f), label(f, "frt"));
        }
        const auto id = select_L_pm(g, QParams{});
        l.track(deviation(id));
        l.need(deviation(id) < 1e-10, std::string("L+- vs R+- ") + a);
    }
    return l;
}

Line uq() {
    Line l;
    for (const char* a : kAlgebras) {
        const RunConfig c = config(a, Deformation::trig, "identity", 3);
        const Report r = cmd_check("uq-relations", c);
        expect_pass(l, r, label(c, "uq-relations"));
        const auto zeros = r.doc["details"]["cartan_zero_positions"];
        l.need(zeros == nlohmann::json::array({c.m}), label(c, "cartan zero position"));
    }
    return l;
}

std::vector<std::pair<std::string, std::string>> nondiag_families() {
    return {{"1,2,symmetric", "nondiag:1"},         {"2,2,symmetric", "nondiag:1"},
            {"2,2,symmetric", "nondiag:2"},         {"2,1", "nondiag:1,bosonic"},
            {"2,2", "nondiag:1,bosonic"},           {"1,2", "nondiag:2,fermionic"},
            {"2,2", "nondiag:3,fermionic"}};
}

double transfer_commutator(const RunConfig& c, nlohmann::json* fit_details) {
    const Grading g = c.grading();
    const ParsedBoundary pb = parse_boundary(c);
    Sampler s(c.seed);
    const auto dom = detail::sample_domain(c);
    std::vector<cplx> ls;
    for (int i = 0; i < 4; ++i) ls.push_back(s.point(dom.half, dom.exclude));
    std::vector<Mat> ts;
    if (c.deformation == Deformation::rational) {
        for (const cplx x : ls) ts.push_back(transfer_matrix(g, x, pb.rational, {}, c.sites));
    } else {
        const TrigBoundary b = detail::prepared_trig_boundary(c, pb.trig, fit_details);
        for (const cplx x : ls) ts.push_back(open_transfer_trig(g, x, b, c.qparams(), c.sites));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j) worst = std::max(worst, rel_commutator(ts[i], ts[j]));
    return worst;
}

Line commuting() {
    Line l;
    std::vector<RunConfig> cases;
    const std::vector<std::pair<std::string, std::vector<std::string>>> rational{
        {"1,1", {"identity", "kka:1,0,0,1", "linear:0.7"}},
        {"2,1", {"identity", "kka:1,1,1,0", "kka:2,0,0,1", "linear:0.7"}},
        {"1,2", {"identity", "kka:1,0,1,1", "linear:0.7"}},
        {"2,2", {"identity", "kka:1,1,1,1", "linear:0.7"}}};
    for (const auto& [a, bs] : rational)
        for (const auto& b : bs) cases.push_back(config(a, Deformation::rational, b));
    for (const char* a : kAlgebras) {
        const Grading g = config(a, Deformation::trig).grading();
        for (int alpha = 0; alpha <= g.dim(); ++alpha)
            cases.push_back(config(a, Deformation::trig, "kdiag:" + std::to_string(alpha)));
    }
    for (const auto& [a, b] : nondiag_families()) cases.push_back(config(a, Deformation::trig, b));
    for (RunConfig c : cases) {
        for (int n = 2; n <= max_sites(c.grading()); ++n) {
            c.sites = n;
            const double r = transfer_commutator(c, nullptr);
            l.track(r);
            l.need(r < 1e-9, label(c, "[t,t']"));
        }
    }
    return l;
}

Line symmetry() {
    Line l;
    std::vector<RunConfig> cases;
    for (const char* a : kAlgebras) {
        cases.push_back(config(a, Deformation::rational, "identity", 2, 3));
        cases.push_back(config(a, Deformation::trig, "identity", 2, 3));
    }
    for (const char* p : {"kka:1,1,1,0", "kka:2,0,0,1", "kka:1,1,0,1", "kka:0,2,1,0"})
        cases.push_back(config("2,1", Deformation::rational, p, 2, 3));
    for (const char* p : {"kka:1,1,1,1", "kka:2,0,1,1", "kka:1,1,2,0", "kka:0,2,0,2"})
        cases.push_back(config("2,2", Deformation::rational, p, 2, 3));
    for (const char* a : {"2,1", "2,2"}) {
        const int d = config(a, Deformation::trig).grading().dim();
        for (int alpha = 1; alpha < d; ++alpha)
            cases.push_back(config(a, Deformation::trig, "kdiag:" + std::to_string(alpha), 2, 3));
    }
    for (const auto& c : cases) {
        const Report r = cmd_symmetry(c);
        expect_pass(l, r, label(c, "scan"));
        const auto mb = r.doc["details"]["symmetry"]["min_broken_residual"];
        if (!mb.is_null()) l.need(mb.get<double>() > 1e-4, label(c, "broken residual"));
    }
    return l;
}

Line twisted() {
    Line l;
    for (const char* a : {"1,2,symmetric", "2,2,symmetric"}) {
        const RunConfig c = config(a, Deformation::rational, "identity", 2, 10);
        const Report r = cmd_check("twisted", c);
        expect_pass(l, r, label(c, "twisted"));
        const auto& d = r.doc["details"];
        l.need(d["span_rank"] == d["expected_rank"], label(c, "osp span"));
    }
    return l;
}

Line casimir() {
    Line l;
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"1,1", "identity"}, {"2,1", "identity"}, {"2,1", "kka:1,1,1,0"}, {"2,2", "kka:1,1,1,1"},
             {"2,1", "linear:0.7"}}) {
        const RunConfig c = config(a, Deformation::rational, b, 2, 4);
        expect_pass(l, cmd_casimir(c), label(c, "casimir"));
    }
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"1,1", "identity"}, {"2,1", "kdiag:2"}, {"2,2", "kdiag:2"}}) {
        const RunConfig c = config(a, Deformation::trig, b, 2, 4);
        expect_pass(l, cmd_casimir(c), label(c, "q-casimir"));
    }
    return l;
}

Line nondiag() {
    Line l;
    for (const auto& [a, b] : nondiag_families()) {
        const RunConfig c = config(a, Deformation::trig, b, 1, 10);
        const Report r = cmd_check("reflection", c);
        const auto& fit = r.doc["details"]["constraint_fit"];
        l.track(r.doc["max_residual"].get<double>());
        l.need(r.status() == Status::pass && fit["spread"].get<double>() < 1e-8,
               label(c, "reflection") + " (" + fit["message"].get<std::string>() + ")");
    }
    return l;
}

Line qtwisted() {
    Line l;
    for (const char* a : {"1,2,symmetric", "2,2,symmetric"}) {
        const RunConfig c = config(a, Deformation::trig, "identity", 1, 4);
        const Report r = cmd_check("qtwisted", c);
        const auto& d = r.doc["details"];
        l.track(std::max(d["exchange_plus"].get<double>(), d["exchange_minus"].get<double>()));
        l.need(d["exchange_plus"].get<double>() < 1e-9 && d["exchange_minus"].get<double>() < 1e-9,
               label(c, "charge exchange relation"));
        l.need(d["max_charge_commutator"].get<double>() > 1e-3, label(c, "non-symmetry"));
    }
    return l;
}

Line determinism() {
    Line l;
    const std::vector<std::pair<std::string, std::function<Report(const RunConfig&)>>> runs{
        {"check ybe", [](const RunConfig& c) { return cmd_check("ybe", c); }},
        {"symmetry", [](const RunConfig& c) { return cmd_symmetry(c); }}};
    const RunConfig cs[] = {config("2,1", Deformation::rational, "kka:1,1,1,0", 2, 5),
                            config("1,2,symmetric", Deformation::trig, "nondiag:1", 2, 3)};
    for (const auto& [name, f] : runs)
        for (const auto& c : cs)
            if (name != "check ybe" || c.deformation == Deformation::rational)
                l.need(canonical_dump(f(c).doc) == canonical_dump(f(c).doc), label(c, name + " repeat"));
    for (const auto& [a, b, d] : std::vector<std::tuple<std::string, std::string, Deformation>>{
             {"2,1", "kka:1,1,1,0", Deformation::rational},
             {"1,1", "identity", Deformation::rational},
             {"2,1", "kdiag:2", Deformation::trig}}) {
        RunConfig c = config(a, d, b, 2);
        c.lambda = cplx(0.4, 0.3);
        const Report r = cmd_spectrum(c);
        l.track(r.doc["max_residual"].get<double>());
        l.need(r.doc["details"]["pattern_invariant"].get<bool>(), label(c, "spectrum pattern"));
    }
    return l;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria for the superbound library"};
    bool strict = false, verbose = false;
    app.add_flag("--strict", strict, "exit 1 if any criterion fails");
    app.add_flag("-v,--verbose", verbose, "list every failing sub-check");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Line()>>> criteria{
        {"graded YBE, rational and trig", ybe},
        {"P^2 = 1, Q^2 = 2 rho Q, PQ = QP = Q", structural},
        {"RTT, FRT and L+- vs R+-", rtt_frt},
        {"U_q relations and Cartan zero", uq},
        {"commuting transfer matrices", commuting},
        {"symmetry sets", symmetry},
        {"twisted super Yangian", twisted},
        {"Casimir pipeline", casimir},
        {"non-diagonal K catalog", nondiag},
        {"q-twisted charges", qtwisted},
        {"determinism and spectrum", determinism}};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Line line;
        try {
            line = criteria[i].second();
        } catch (const std::exception& e) {
            line.ok = false;
            line.notes.push_back(std::string("exception: ") + e.what());
        }
        failed += line.ok ? 0 : 1;
        std::ostringstream out;
        out << (line.ok ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << criteria[i].first << "  (max residual "
            << fmt(line.worst);
        if (!line.ok) out << "; " << line.notes.size() << " failing: " << line.notes.front();
        out << ")";
        std::cout << out.str() << std::endl;
        if (verbose)
            for (std::size_t k = 1; k < line.notes.size(); ++k) std::cout << "        " << line.notes[k] << '\n';
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
    return strict && failed ? 1 : 0;
}

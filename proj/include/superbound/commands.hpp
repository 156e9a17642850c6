#pragma once

#include "boundary_rational.hpp"
#include "config.hpp"
#include "qdeformed.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "spectrum.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace superbound {

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline nlohmann::json pair_json(const std::pair<cplx, cplx>& p) {
    return {{"lambda1", complex_json(p.first)}, {"lambda2", complex_json(p.second)}};
}

/// Spectral box and excluded points for the configured sector.
struct SampleDomain {
    double half;
    std::vector<cplx> exclude;
};

inline SampleDomain sample_domain(const RunConfig& c) {
    if (c.deformation == Deformation::rational) return {2.0, rational_exclusions()};
    return {1.0, trig_exclusions(c.qparams())};
}

/// Draws (lambda1, lambda2) and evaluates f; singular points are redrawn up to 10 times.
inline double sample_with_retry(Sampler& s, const SampleDomain& dom, std::pair<cplx, cplx>& point,
                                const std::function<double(const std::pair<cplx, cplx>&)>& f) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        point = s.pairs(1, dom.half, dom.exclude).front();
        try {
            return f(point);
        } catch (const std::runtime_error& e) {
            if (std::string(e.what()).find("singular") == std::string::npos) throw;
        }
    }
    throw std::runtime_error("numerical singularity persists after 10 resamples");
}

struct SampleRun {
    std::vector<std::pair<cplx, cplx>> points;
    std::vector<double> residuals;
    double max_residual = 0.0;
};

inline SampleRun run_samples(const RunConfig& c, Sampler& s,
                             const std::function<double(const std::pair<cplx, cplx>&)>& f) {
    SampleRun run;
    const SampleDomain dom = sample_domain(c);
    for (int i = 0; i < c.samples; ++i) {
        std::pair<cplx, cplx> p;
        const double r = sample_with_retry(s, dom, p, f);
        run.points.push_back(p);
        run.residuals.push_back(r);
        run.max_residual = std::max(run.max_residual, r);
    }
    return run;
}

inline void record(Report& rep, const SampleRun& run) {
    for (std::size_t i = 0; i < run.points.size(); ++i) rep.add_sample(pair_json(run.points[i]), run.residuals[i]);
}

inline Status status_of(bool ok) { return ok ? Status::pass : Status::fail; }

inline void require_trig(const RunConfig& c, const std::string& what) {
    if (c.deformation != Deformation::trig) throw ConfigError("deformation", what + " needs the trig deformation");
}

inline void require_symmetric(const RunConfig& c, const std::string& what) {
    if (c.scheme != Scheme::symmetric) throw ConfigError("algebra", what + " needs the symmetric grading");
}

/// Non-diagonal boundaries need their products fitted first; the fit is seeded from the config.
inline TrigBoundary prepared_trig_boundary(const RunConfig& c, const TrigBoundary& b, nlohmann::json* details) {
    if (b.kind != TrigKind::nondiag) return b;
    Sampler s(c.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto excl = trig_exclusions(c.qparams());
    const auto train = s.pairs(3, 1.0, excl), hold = s.pairs(3, 1.0, excl);
    const Grading g = c.grading();
    const CFit fit = solve_c_constraint(g, b.nd, c.qparams(), train, hold);
    if (details) {
        nlohmann::json p = nlohmann::json::array();
        for (std::size_t i = 0; i < fit.p.size(); ++i)
            p.push_back({{"a", fit.indices[i] + 1},
                         {"abar", conjugate_index(g, fit.indices[i]) + 1},
                         {"c_a_c_abar", complex_json(fit.p[i])}});
        (*details)["constraint_fit"] = {{"products", p},
                                        {"residual_train", fit.residual_train},
                                        {"residual_holdout", fit.residual_holdout},
                                        {"spread", fit.spread},
                                        {"free_directions", fit.free_directions},
                                        {"message", fit.message}};
    }
    TrigBoundary out = b;
    out.nd = with_products(b.nd, fit);
    return out;
}

/// Connected index blocks linked by preserved off-diagonal generators.
inline nlohmann::json observed_blocks(int d, const std::vector<std::pair<int, int>>& links) {
    std::vector<int> parent(static_cast<std::size_t>(d));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        return parent[static_cast<std::size_t>(i)] == i ? i : parent[static_cast<std::size_t>(i)] = find(parent[static_cast<std::size_t>(i)]);
    };
    for (const auto& [a, b] : links) parent[static_cast<std::size_t>(find(a))] = find(b);
    std::map<int, std::vector<int>> blocks;
    for (int i = 0; i < d; ++i) blocks[find(i)].push_back(i + 1);
    std::vector<std::vector<int>> sorted;
    for (const auto& [r, v] : blocks) sorted.push_back(v);
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

inline double default_tol(const RunConfig& c, double rational, double trig) {
    if (c.tol) return *c.tol;
    return c.deformation == Deformation::rational ? rational : trig;
}

}  // namespace detail

// ---- check ----

inline Report cmd_check(const std::string& equation, const RunConfig& c) {
    validate(c);
    const auto t0 = detail::Clock::now();
    Report rep("check", equation, c);
    const Grading g = c.grading();
    const QParams qp = c.qparams();
    const bool rat = c.deformation == Deformation::rational;
    const int n = c.sites;
    Sampler sampler(c.seed);
    auto& det = rep.doc["details"];
    det["deformation"] = to_string(c.deformation);

    auto Rx = [&](cplx l) { return rat ? R_rational(g, l) : R_trig(g, l, qp); };
    auto Tx = [&](cplx l) { return rat ? monodromy_T(g, l, n) : monodromy_trig(g, l, qp, n); };

    double tol = 0.0, maxr = 0.0;
    Status st = Status::fail;

    if (equation == "ybe") {
        tol = detail::default_tol(c, 1e-10, 1e-9);
        const auto run = detail::run_samples(c, sampler, [&](const auto& p) {
            const Mat r12 = place(g, Rx(p.first - p.second), {0, 1}, 3);
            const Mat r13 = place(g, Rx(p.first), {0, 2}, 3);
            const Mat r23 = place(g, Rx(p.second), {1, 2}, 3);
            return rel_diff(r12 * r13 * r23, r23 * r13 * r12);
        });
        detail::record(rep, run);
        maxr = run.max_residual;
        st = detail::status_of(maxr < tol);
    } else if (equation == "rtt") {
        tol = detail::default_tol(c, 1e-10, 1e-9);
        const Mat one = identity(g, 2);
        const auto run = detail::run_samples(c, sampler, [&](const auto& p) {
            const Mat r = Rx(p.first - p.second);
            const Mat t1 = Tx(p.first), t2 = Tx(p.second);
            return exchange_residual(g, r, t1, one, t2, t2, one, t1, r);
        });
        detail::record(rep, run);
        maxr = run.max_residual;
        st = detail::status_of(maxr < tol);
    } else if (equation == "frt") {
        detail::require_trig(c, "frt");
        tol = c.tol.value_or(1e-10);
        const RPair r = R_pm(g, qp);
        const auto id = select_L_pm(g, qp);
        const double fund = frt_residual(g, r, id.Lp, id.Lm);
        const double chain = frt_residual(g, r, monodromy_of(g, id.Lp, n), monodromy_of(g, id.Lm, n));
        nlohmann::json gp = nlohmann::json::array(), gm = nlohmann::json::array();
        for (const auto& x : id.gauge_plus) gp.push_back(complex_json(x));
        for (const auto& x : id.gauge_minus) gm.push_back(complex_json(x));
        det["frt_fundamental"] = fund;
        det["frt_sites"] = chain;
        det["weight_convention"] = to_string(id.convention);
        det["L_plus_scale"] = complex_json(id.scale_plus);
        det["L_minus_scale"] = complex_json(id.scale_minus);
        det["gauge_plus"] = gp;
        det["gauge_minus"] = gm;
        det["diagonal_deviation"] = id.diag_deviation;
        det["neighbour_deviation"] = id.block_deviation;
        det["blocks_supplied_from_R"] = id.supplied_blocks;
        det["lax_residual"] = id.lax_residual;
        maxr = std::max({fund, chain, id.diag_deviation, id.block_deviation, id.lax_residual});
        rep.add_sample({{"relation", "fundamental"}}, fund);
        rep.add_sample({{"relation", "sites"}}, chain);
        st = detail::status_of(maxr < tol);
    } else if (equation == "reflection") {
        const ParsedBoundary pb = parse_boundary(c);
        double refl = 0.0, comm = 0.0;
        if (rat) {
            tol = c.tol.value_or(1e-10);
            const BoundarySpec& b = pb.rational;
            const auto run = detail::run_samples(c, sampler, [&](const auto& p) {
                const Mat x1 = double_row_T(g, p.first, b, n), x2 = double_row_T(g, p.second, b, n);
                const Mat a = R_rational(g, p.first - p.second), s = R_rational(g, p.first + p.second);
                const double r = exchange_residual(g, a, x1, s, x2, x2, s, x1, a);
                const double cm = rel_commutator(transfer_matrix(g, p.first, b, {}, n), transfer_matrix(g, p.second, b, {}, n));
                refl = std::max(refl, r);
                comm = std::max(comm, cm);
                return std::max(r, cm);
            });
            detail::record(rep, run);
        } else {
            const TrigBoundary b = detail::prepared_trig_boundary(c, pb.trig, &det);
            tol = c.tol.value_or(b.kind == TrigKind::nondiag ? 1e-8 : 1e-9);
            const auto run = detail::run_samples(c, sampler, [&](const auto& p) {
                const Mat x1 = double_row_trig(g, p.first, b, qp, n), x2 = double_row_trig(g, p.second, b, qp, n);
                const double r = reflection_residual_trig(g, qp, x1, x2, p.first, p.second);
                const double cm = rel_commutator(open_transfer_trig(g, p.first, b, qp, n), open_transfer_trig(g, p.second, b, qp, n));
                refl = std::max(refl, r);
                comm = std::max(comm, cm);
                return std::max(r, cm);
            });
            detail::record(rep, run);
        }
        det["boundary"] = pb.name;
        det["reflection_residual"] = refl;
        det["transfer_commutator"] = comm;
        maxr = std::max(refl, comm);
        st = detail::status_of(maxr < tol);
    } else if (equation == "twisted") {
        detail::require_symmetric(c, "twisted");
        if (!rat) throw ConfigError("deformation", "twisted is the rational twisted Yangian; use qtwisted");
        tol = c.tol.value_or(1e-10);
        const Mat k = Mat::Identity(g.dim(), g.dim());
        const auto run = detail::run_samples(c, sampler, [&](const auto& p) {
            return twisted_equation_residual(g, p.first, p.second, n, k);
        });
        detail::record(rep, run);
        const TwistedCharges tc = twisted_objects(g, n);
        std::vector<cplx> ls;
        for (const auto& p : run.points) ls.push_back(p.first);
        const ScanReport sc = twisted_symmetry_scan(g, n, ls, Tolerances{c.tol.value_or(1e-9), 1e-4});
        det["span_rank"] = tc.span_rank;
        det["expected_rank"] = tc.expected_rank;
        det["closure_residual"] = tc.closure_residual;
        det["charge_commutator"] = sc.max_preserved();
        det["symmetry"] = scan_json(sc);
        maxr = run.max_residual;
        st = detail::status_of(maxr < tol && tc.span_rank == tc.expected_rank && tc.closure_residual < 1e-9 &&
                               sc.max_preserved() < c.tol.value_or(1e-9));
    } else if (equation == "qtwisted") {
        detail::require_trig(c, "qtwisted");
        detail::require_symmetric(c, "qtwisted");
        tol = c.tol.value_or(1e-9);
        const auto dom = detail::sample_domain(c);
        const auto pts = sampler.pairs(c.samples, dom.half, dom.exclude);
        const QTwistedReport q = q_twisted(g, qp, n, pts);
        for (const auto& p : pts) {
            const Mat id = Mat::Identity(g.dim(), g.dim());
            rep.add_sample(detail::pair_json(p), q_twisted_equation_residual(g, qp, id, p.first, p.second));
        }
        const bool nonsym = q.max_charge_commutator > 1e-3;
        det["vtv_residual"] = q.vtv_residual;
        det["equation_residual_identity_K"] = q.equation_residual;
        det["exchange_plus"] = q.exchange_plus;
        det["exchange_minus"] = q.exchange_minus;
        det["max_charge_commutator"] = q.max_charge_commutator;
        det["expectation"] = {{"claim", "charges do not commute with t(lambda)"},
                              {"threshold", 1e-3},
                              {"observed", nonsym}};
        maxr = std::max({q.vtv_residual, q.exchange_plus, q.exchange_minus});
        st = detail::status_of(maxr < tol && nonsym);
    } else if (equation == "uq-relations") {
        detail::require_trig(c, "uq-relations");
        tol = c.tol.value_or(1e-11);
        const auto a = cartan_matrix(g);
        nlohmann::json cm = nlohmann::json::array(), zeros = nlohmann::json::array();
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
            cm.push_back(row);
            if (a(i, i) == 0) zeros.push_back(i + 1);
        }
        det["cartan_matrix"] = cm;
        det["cartan_zero_positions"] = zeros;
        for (int s = 1; s <= n; ++s) {
            const UqGenerators u = uq_fundamental(g, qp, s);
            const auto rr = check_uq_relations(g, qp, u);
            const double cw = check_cartan_weights(g, qp, u);
            rep.add_sample({{"sites", s}, {"worst", rr.worst}, {"cartan_weights", cw}}, std::max(rr.max_residual, cw));
            maxr = std::max({maxr, rr.max_residual, cw});
        }
        st = detail::status_of(maxr < tol);
    } else {
        throw ConfigError("equation", "unknown equation '" + equation + "'");
    }
    rep.finish(st, maxr, tol, detail::seconds_since(t0));
    return rep;
}

// ---- symmetry ----

inline Report cmd_symmetry(const RunConfig& c) {
    validate(c);
    const auto t0 = detail::Clock::now();
    const ParsedBoundary pb = parse_boundary(c);
    Report rep("symmetry", pb.name, c);
    const Grading g = c.grading();
    auto& det = rep.doc["details"];
    Sampler sampler(c.seed);
    const auto dom = detail::sample_domain(c);
    std::vector<cplx> ls;
    for (int i = 0; i < c.samples; ++i) ls.push_back(sampler.point(dom.half, dom.exclude));
    const Tolerances tol{c.tol.value_or(1e-9), 1e-4};
    ScanReport sc;
    std::vector<std::pair<int, int>> links;
    if (c.deformation == Deformation::rational) {
        sc = symmetry_scan(g, pb.rational, {}, c.sites, ls, tol);
        std::size_t row = 0;
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b, ++row)
                if (a != b && sc.rows[row].observed == SymClass::preserved) links.emplace_back(a, b);
    } else {
        const TrigBoundary b = detail::prepared_trig_boundary(c, pb.trig, &det);
        sc = symmetry_scan_q(g, b, c.qparams(), c.sites, ls, tol);
        for (int j = 0; j + 1 < g.dim(); ++j)
            if (sc.rows[static_cast<std::size_t>(g.dim() + 2 * j)].observed == SymClass::preserved &&
                sc.rows[static_cast<std::size_t>(g.dim() + 2 * j + 1)].observed == SymClass::preserved)
                links.emplace_back(j, j + 1);
    }
    det["symmetry"] = scan_json(sc);
    det["observed_blocks"] = detail::observed_blocks(g.dim(), links);
    const Status st = sc.inconclusive() ? Status::inconclusive : detail::status_of(sc.match());
    double maxr = 0.0;
    for (const auto& r : sc.rows) maxr = std::max(maxr, r.residual);
    for (const auto& l : ls) rep.doc["samples"].push_back({{"lambda", complex_json(l)}});
    rep.finish(st, sc.max_preserved(), tol.preserved, detail::seconds_since(t0));
    det["max_residual_any"] = maxr;
    return rep;
}

// ---- casimir ----

namespace detail {

inline std::optional<QCasimirCase> closed_case(const Grading& g, const TrigBoundary& b) {
    if (g.scheme() != Scheme::distinguished) return std::nullopt;
    if (g.m() == 1 && g.n() == 1 && b.kind == TrigKind::identity) return QCasimirCase::gl11_identity;
    if (g.m() == 2 && g.n() == 1 && b.kind == TrigKind::kdiag && b.alpha == 2) return QCasimirCase::gl21_kdiag2;
    if (g.m() == 2 && g.n() == 2 && b.kind == TrigKind::kdiag && b.alpha == 2) return QCasimirCase::gl22_kdiag2;
    return std::nullopt;
}

}  // namespace detail

inline Report cmd_casimir(const RunConfig& c) {
    validate(c);
    const auto t0 = detail::Clock::now();
    const ParsedBoundary pb = parse_boundary(c);
    Report rep("casimir", pb.name, c);
    const Grading g = c.grading();
    const int n = c.sites;
    auto& det = rep.doc["details"];
    Sampler sampler(c.seed);
    const auto dom = detail::sample_domain(c);
    std::vector<cplx> ls;
    for (int i = 0; i < c.samples; ++i) ls.push_back(sampler.point(dom.half, dom.exclude));
    const double tol = c.tol.value_or(1e-9);
    double worst = 0.0;

    if (c.deformation == Deformation::rational) {
        const BoundarySpec& b = pb.rational;
        const auto s = series_double_row(g, b, n, std::max(c.order, 2));
        const ChargeSet ch = extract_charges(g, s, n);
        const GeneratorSet gens = coproduct_generators(g, n);
        det["casimir"] = matrix_json(ch.casimir);
        if (b.kind == BoundaryKind::identity || b.kind == BoundaryKind::diag_kka) {
            const Mat cf = b.kind == BoundaryKind::identity ? casimir_closed_identity(g, gens) : casimir_closed_kka(g, b, gens);
            const double d = rel_diff(ch.casimir, cf);
            det["closed_form_deviation"] = d;
            worst = std::max(worst, d);
        } else {
            det["closed_form_deviation"] = nullptr;
        }
        double ct = 0.0, cg = 0.0, hh = 0.0, ht = 0.0;
        for (const cplx l : ls) {
            const Mat t = transfer_matrix(g, l, b, {}, n);
            const double r = rel_commutator(ch.casimir, t);
            rep.add_sample({{"lambda", complex_json(l)}}, r);
            ct = std::max(ct, r);
            for (const auto& h : ch.higher) ht = std::max(ht, rel_commutator(h, t));
        }
        for (const auto& [ab, x] : gens)
            if (predicted_preserved(g, b, ab.first, ab.second)) cg = std::max(cg, rel_commutator(ch.casimir, x));
        for (std::size_t i = 0; i < ch.higher.size(); ++i)
            for (std::size_t j = i + 1; j < ch.higher.size(); ++j)
                hh = std::max(hh, rel_commutator(ch.higher[i], ch.higher[j]));
        det["order"] = c.order;
        det["commutator_transfer"] = ct;
        det["commutator_preserved_generators"] = cg;
        det["higher_pairwise"] = hh;
        det["higher_transfer"] = ht;
        worst = std::max({worst, ct, cg, hh, ht});
    } else {
        const QParams qp = c.qparams();
        const TrigBoundary b = detail::prepared_trig_boundary(c, pb.trig, &det);
        const auto lpm = select_L_pm(g, qp);
        const QCasimirs cas = q_casimirs(g, boundary_charges(g, b, qp, n, lpm), qp);
        det["casimir_plus"] = matrix_json(cas.plus);
        det["casimir_minus"] = matrix_json(cas.minus);
        double ct = 0.0, cg = 0.0;
        for (const cplx l : ls) {
            const Mat t = open_transfer_trig(g, l, b, qp, n);
            const double r = std::max(rel_commutator(cas.plus, t), rel_commutator(cas.minus, t));
            rep.add_sample({{"lambda", complex_json(l)}}, r);
            ct = std::max(ct, r);
        }
        const UqGenerators u = uq_fundamental(g, qp, n);
        const UqPrediction pred = predicted_uq_symmetry(g, b);
        for (int i = 0; i < g.dim(); ++i)
            if (pred.qeps[static_cast<std::size_t>(i)])
                for (const Mat* x : {&cas.plus, &cas.minus}) cg = std::max(cg, rel_commutator(*x, u.qeps[static_cast<std::size_t>(i)]));
        for (int j = 0; j + 1 < g.dim(); ++j)
            if (pred.ef[static_cast<std::size_t>(j)])
                for (const Mat* x : {&cas.plus, &cas.minus}) {
                    cg = std::max(cg, rel_commutator(*x, u.e[static_cast<std::size_t>(j)]));
                    cg = std::max(cg, rel_commutator(*x, u.f[static_cast<std::size_t>(j)]));
                }
        det["commutator_transfer"] = ct;
        det["commutator_preserved_generators"] = cg;
        worst = std::max({worst, ct, cg});
        if (const auto cs = detail::closed_case(g, b)) {
            nlohmann::json cl = nlohmann::json::array();
            cplx c1p, c1m;
            double dev = 0.0;
            for (int s = 1; s <= 2; ++s) {
                const QCasimirs a = q_casimirs(g, boundary_charges(g, b, qp, s, lpm), qp);
                const QCasimirs f = qcasimir_closed_form(g, qp, s, *cs);
                const auto pp = proportionality(a.plus, f.plus), pm = proportionality(a.minus, f.minus);
                const double sg = s % 2 ? -1.0 : 1.0;
                if (s == 1) {
                    c1p = sg * pp.constant;
                    c1m = sg * pm.constant;
                }
                dev = std::max({dev, pp.residual, pm.residual, std::abs(sg * pp.constant - c1p) / std::abs(c1p),
                                std::abs(sg * pm.constant - c1m) / std::abs(c1m)});
                cl.push_back({{"sites", s},
                              {"constant_plus", complex_json(pp.constant)},
                              {"constant_minus", complex_json(pm.constant)},
                              {"residual_plus", pp.residual},
                              {"residual_minus", pm.residual}});
            }
            det["closed_form"] = cl;
            det["closed_form_deviation"] = dev;
            worst = std::max(worst, dev);
        } else {
            det["closed_form_deviation"] = nullptr;
        }
    }
    rep.finish(detail::status_of(worst < tol), worst, tol, detail::seconds_since(t0));
    return rep;
}

// ---- spectrum ----

inline Report cmd_spectrum(const RunConfig& c) {
    validate(c);
    if (!c.lambda) throw ConfigError("lambda", "spectrum needs --lambda RE,IM");
    const auto t0 = detail::Clock::now();
    const ParsedBoundary pb = parse_boundary(c);
    Report rep("spectrum", pb.name, c);
    const Grading g = c.grading();
    const int n = c.sites;
    auto& det = rep.doc["details"];
    const auto dom = detail::sample_domain(c);
    for (const auto& e : dom.exclude)
        if (std::abs(*c.lambda - e) < 0.1) throw ConfigError("lambda", "too close to an excluded point");
    Sampler sampler(c.seed);
    const cplx l2 = sampler.point(dom.half, dom.exclude);

    std::function<Mat(cplx)> transfer;
    Mat casimir;
    if (c.deformation == Deformation::rational) {
        const BoundarySpec b = pb.rational;
        transfer = [=](cplx l) { return transfer_matrix(g, l, b, {}, n); };
        casimir = extract_charges(g, series_double_row(g, b, n, std::max(c.order, 2)), n).casimir;
    } else {
        const QParams qp = c.qparams();
        const TrigBoundary b = detail::prepared_trig_boundary(c, pb.trig, &det);
        transfer = [=](cplx l) { return open_transfer_trig(g, l, b, qp, n); };
        casimir = q_casimirs(g, boundary_charges(g, b, qp, n, select_L_pm(g, qp)), qp).plus;
    }
    bool ambiguous = false;
    std::vector<std::vector<int>> patterns;
    double spread = 0.0, invariance = 0.0;
    for (const cplx l : {*c.lambda, l2}) {
        const Mat t = transfer(l);
        const Vec ev = Eigen::ComplexEigenSolver<Mat>(t, false).eigenvalues();
        const Spectrum sp = cluster_spectrum(ev);
        ambiguous = ambiguous || sp.ambiguous;
        patterns.push_back(sp.pattern());
        const auto cs = casimir_spread(t, sp, casimir);
        spread = std::max(spread, cs.spread);
        invariance = std::max(invariance, cs.invariance);
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& m : sp.multiplets)
            ms.push_back({{"value", complex_json(m.value)}, {"multiplicity", m.multiplicity}});
        rep.add_sample({{"lambda", complex_json(l)},
                        {"multiplets", ms},
                        {"cluster_threshold", sp.threshold},
                        {"ambiguous", sp.ambiguous}},
                       cs.spread);
    }
    const bool same = patterns[0] == patterns[1];
    det["pattern"] = patterns[0];
    det["pattern_second"] = patterns[1];
    det["pattern_invariant"] = same;
    det["casimir_spread"] = spread;
    det["casimir_invariance"] = invariance;
    const double tol = c.tol.value_or(1e-9);
    const Status st = ambiguous ? Status::inconclusive : detail::status_of(same && spread < tol);
    rep.finish(st, spread, tol, detail::seconds_since(t0));
    return rep;
}

}  // namespace superbound

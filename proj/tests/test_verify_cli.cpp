#include "superbound/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace superbound;

namespace {

RunConfig cfg(const std::string& algebra, Deformation d, const std::string& boundary = "identity", int sites = 1,
              int samples = 4) {
    RunConfig c;
    parse_algebra(c, algebra);
    c.deformation = d;
    c.boundary = boundary;
    c.sites = sites;
    c.samples = samples;
    return c;
}

const auto rat = Deformation::rational;
const auto trig = Deformation::trig;

std::string field_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("superbound_test_" + name);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SUPERBOUND_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

}  // namespace

TEST(Config, JsonRoundTrip) {
    RunConfig c = cfg("2,2,symmetric", trig, "nondiag:1,bosonic,1.3,0.2", 2, 7);
    c.mu = {0.4, -0.05};
    c.seed = 99;
    c.tol = 1e-7;
    c.order = 5;
    c.lambda = cplx(0.2, 0.3);
    const RunConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    EXPECT_EQ(back.scheme, Scheme::symmetric);
    EXPECT_EQ(back.seed, 99u);
    EXPECT_EQ(*back.lambda, cplx(0.2, 0.3));
}

TEST(Config, PartialJsonOverridesBase) {
    RunConfig base = cfg("2,1", rat, "kka:1,1,1,0", 3);
    const RunConfig c = config_from_json(nlohmann::json{{"sites", 2}, {"mu", 0.5}}, base);
    EXPECT_EQ(c.sites, 2);
    EXPECT_EQ(c.boundary, "kka:1,1,1,0");
    EXPECT_EQ(c.mu, cplx(0.5, 0.0));
}

TEST(Config, UnknownKeyNamesTheField) {
    EXPECT_EQ(field_of([] { config_from_json(nlohmann::json{{"sitez", 2}}); }), "sitez");
    EXPECT_EQ(field_of([] { config_from_json(nlohmann::json{{"deformation", "elliptic"}}); }), "deformation");
    EXPECT_EQ(field_of([] { config_from_json(nlohmann::json{{"mu", "x"}}); }), "mu");
    EXPECT_EQ(field_of([] { config_from_json(nlohmann::json::array()); }), "config");
}

TEST(Config, ParseHelpers) {
    EXPECT_EQ(parse_complex("mu", "0.3,0.1"), cplx(0.3, 0.1));
    EXPECT_EQ(parse_complex("mu", "2"), cplx(2.0, 0.0));
    EXPECT_EQ(field_of([] { parse_complex("mu", "1,2,3"); }), "mu");
    EXPECT_EQ(field_of([] { parse_complex("mu", "abc"); }), "mu");
    RunConfig c;
    parse_algebra(c, "1,2,sym");
    EXPECT_EQ(c.scheme, Scheme::symmetric);
    EXPECT_EQ(format_algebra(c), "1,2,symmetric");
    EXPECT_EQ(field_of([&] { parse_algebra(c, "1"); }), "algebra");
    EXPECT_EQ(field_of([&] { parse_algebra(c, "1,2,twisted"); }), "algebra");
}

TEST(Config, ValidateRejectsBadValues) {
    EXPECT_EQ(field_of([] { validate(cfg("2,1", rat, "identity", 0)); }), "sites");
    EXPECT_EQ(field_of([] { validate(cfg("2,1", rat, "identity", 5)); }), "sites");
    EXPECT_EQ(field_of([] { validate(cfg("2,1,symmetric", rat)); }), "algebra");
    EXPECT_EQ(field_of([] { validate(cfg("2,1", rat, "kdiag:1")); }), "boundary");
    EXPECT_EQ(field_of([] { validate(cfg("2,1", trig, "kdiag:4")); }), "boundary");
    EXPECT_EQ(field_of([] { validate(cfg("2,1", rat, "kka:1,1,1")); }), "boundary");
    EXPECT_EQ(field_of([] { validate(cfg("1,2", trig, "nondiag:1")); }), "boundary");
    RunConfig c = cfg("1,1", trig);
    c.mu = {std::numbers::pi / 2.0, 0.0};  // q = -1
    EXPECT_EQ(field_of([&] { validate(c); }), "mu");
    c.mu = {0.3, 0.1};
    c.tol = -1.0;
    EXPECT_EQ(field_of([&] { validate(c); }), "tol");
    EXPECT_EQ(field_of([] { validate(cfg("2,2,symmetric", trig, "nondiag:2,bosonic")); }), "");
}

TEST(Commands, SameSeedSameReport) {
    const RunConfig c = cfg("2,1", rat, "identity", 2);
    EXPECT_EQ(canonical_dump(cmd_check("ybe", c).doc), canonical_dump(cmd_check("ybe", c).doc));
    RunConfig other = c;
    other.seed = c.seed + 1;
    EXPECT_NE(canonical_dump(cmd_check("ybe", c).doc), canonical_dump(cmd_check("ybe", other).doc));
    const RunConfig t = cfg("1,2,symmetric", trig, "nondiag:1", 1, 2);
    EXPECT_EQ(canonical_dump(cmd_symmetry(t).doc), canonical_dump(cmd_symmetry(t).doc));
}

TEST(Commands, ReportSchema) {
    const Report r = cmd_check("rtt", cfg("1,1", rat, "identity", 2));
    for (const char* k : {"schema", "command", "equation", "config", "samples", "details", "max_residual", "tolerance",
                          "status", "pass", "wall_time_s"})
        EXPECT_TRUE(r.doc.contains(k)) << k;
    EXPECT_EQ(r.doc["schema"], report_schema);
    EXPECT_EQ(r.doc["samples"].size(), 4u);
    EXPECT_EQ(r.status(), Status::pass);
}

TEST(Commands, CheckPassesOnValidIdentities) {
    EXPECT_EQ(cmd_check("ybe", cfg("2,2", rat)).status(), Status::pass);
    EXPECT_EQ(cmd_check("ybe", cfg("2,1", trig)).status(), Status::pass);
    EXPECT_EQ(cmd_check("rtt", cfg("2,1", trig, "identity", 2)).status(), Status::pass);
    EXPECT_EQ(cmd_check("frt", cfg("2,1", trig, "identity", 2)).status(), Status::pass);
    EXPECT_EQ(cmd_check("uq-relations", cfg("2,2", trig, "identity", 2)).status(), Status::pass);
    EXPECT_EQ(cmd_check("reflection", cfg("2,2", rat, "kka:1,1,1,1", 2)).status(), Status::pass);
    EXPECT_EQ(cmd_check("reflection", cfg("2,1", rat, "linear:0.7", 1)).status(), Status::pass);
    EXPECT_EQ(cmd_check("reflection", cfg("2,1", trig, "kdiag:2", 2)).status(), Status::pass);
    EXPECT_EQ(cmd_check("reflection", cfg("1,2,symmetric", trig, "nondiag:1", 1)).status(), Status::pass);
    EXPECT_EQ(cmd_check("twisted", cfg("1,2,symmetric", rat, "identity", 2, 3)).status(), Status::pass);
}

TEST(Commands, FrtReportsTheWeightBranch) {
    const Report r = cmd_check("frt", cfg("1,1", trig));
    EXPECT_EQ(r.doc["details"]["weight_convention"], "graded");
    EXPECT_EQ(r.doc["details"]["blocks_supplied_from_R"], 0);
}

TEST(Commands, UqRelationsReportCartanZeros) {
    const Report r = cmd_check("uq-relations", cfg("2,1", trig));
    EXPECT_EQ(r.doc["details"]["cartan_zero_positions"], nlohmann::json::array({2}));
}

TEST(Commands, KnownFailuresAreReportedAsFail) {
    const Report nd = cmd_check("reflection", cfg("2,1", trig, "nondiag:1"));
    EXPECT_EQ(nd.status(), Status::fail);
    EXPECT_EQ(nd.doc["details"]["constraint_fit"]["message"], "family inconsistent at these parameters");
    const Report qt = cmd_check("qtwisted", cfg("1,2,symmetric", trig, "identity", 1, 2));
    EXPECT_EQ(qt.status(), Status::fail);
    EXPECT_TRUE(qt.doc["details"]["expectation"]["observed"].get<bool>());
    EXPECT_LT(qt.doc["details"]["vtv_residual"].get<double>(), 1e-12);
}

TEST(Commands, WrongSectorIsAConfigError) {
    EXPECT_EQ(field_of([] { cmd_check("frt", cfg("2,1", rat)); }), "deformation");
    EXPECT_EQ(field_of([] { cmd_check("twisted", cfg("2,1", rat)); }), "algebra");
    EXPECT_EQ(field_of([] { cmd_check("bogus", cfg("2,1", rat)); }), "equation");
}

TEST(Commands, SymmetryBlocks) {
    const Report r = cmd_symmetry(cfg("2,2", rat, "kka:1,1,1,1", 1, 3));
    EXPECT_EQ(r.status(), Status::pass);
    EXPECT_EQ(r.doc["details"]["observed_blocks"], nlohmann::json::parse("[[1,4],[2,3]]"));
    const Report q = cmd_symmetry(cfg("2,2", trig, "kdiag:2", 2, 3));
    EXPECT_EQ(q.status(), Status::pass);
    EXPECT_EQ(q.doc["details"]["observed_blocks"], nlohmann::json::parse("[[1,2],[3,4]]"));
}

TEST(Commands, CasimirBothSectors) {
    const Report r = cmd_casimir(cfg("2,1", rat, "kka:1,1,1,0", 2, 3));
    EXPECT_EQ(r.status(), Status::pass);
    EXPECT_LT(r.doc["details"]["closed_form_deviation"].get<double>(), 1e-10);
    const Report q = cmd_casimir(cfg("2,1", trig, "kdiag:2", 2, 3));
    EXPECT_EQ(q.status(), Status::pass);
    EXPECT_EQ(q.doc["details"]["closed_form"].size(), 2u);
    const Report g = cmd_casimir(cfg("2,1", rat, "linear:0.7", 1, 2));
    EXPECT_TRUE(g.doc["details"]["closed_form_deviation"].is_null());
}

TEST(Commands, SpectrumPatternIsStable) {
    RunConfig c = cfg("2,1", rat, "kka:1,1,1,0", 2);
    c.lambda = cplx(0.4, 0.3);
    const Report r = cmd_spectrum(c);
    EXPECT_EQ(r.status(), Status::pass);
    EXPECT_TRUE(r.doc["details"]["pattern_invariant"].get<bool>());
    int total = 0;
    for (const auto& k : r.doc["details"]["pattern"]) total += k.get<int>();
    EXPECT_EQ(total, 9);
    c.lambda.reset();
    EXPECT_EQ(field_of([&] { cmd_spectrum(c); }), "lambda");
    c.lambda = cplx(0.0, 0.95);
    EXPECT_EQ(field_of([&] { cmd_spectrum(c); }), "lambda");
}

TEST(Spectrum, Clustering) {
    Vec ev(5);
    ev << 1.0, 1.0 + 1e-13, 2.0, 2.0, 2.0 - 1e-14;
    const Spectrum s = cluster_spectrum(ev);
    EXPECT_EQ(s.multiplets.size(), 2u);
    EXPECT_FALSE(s.ambiguous);
    std::vector<int> pat = s.pattern();
    std::sort(pat.begin(), pat.end());
    EXPECT_EQ(pat, (std::vector<int>{2, 3}));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("check ybe --algebra 2,1 --samples 3"), 0);
    EXPECT_EQ(run_cli("check reflection --algebra 2,1 --mu 0.3,0.1 --boundary nondiag:1 --samples 2"), 1);
    EXPECT_EQ(run_cli("check ybe --algebra 2,1 --sites 9"), 64);
    EXPECT_EQ(run_cli("check nonsense"), 64);
    EXPECT_EQ(run_cli("symmetry --algebra 2,1 --boundary kka:1,1,1,0 --samples 2"), 0);
}

TEST(Cli, FlagsOverrideConfigFile) {
    const auto conf = scratch("config.json"), rep = scratch("report.json");
    {
        std::ofstream out(conf);
        out << R"({"algebra": "2,1", "sites": 1, "samples": 2, "seed": 7})";
    }
    ASSERT_EQ(run_cli("check rtt --config " + conf.string() + " --sites 2 --report " + rep.string()), 0);
    const auto j = read_json(rep);
    EXPECT_EQ(j["config"]["sites"], 2);
    EXPECT_EQ(j["config"]["seed"], 7);
    EXPECT_EQ(j["config"]["algebra"], "2,1,distinguished");
    EXPECT_EQ(j["samples"].size(), 2u);
    {
        std::ofstream out(conf);
        out << R"({"algebra": "2,1", "colour": "red"})";
    }
    EXPECT_EQ(run_cli("check ybe --config " + conf.string()), 64);
    std::filesystem::remove(conf);
    std::filesystem::remove(rep);
}

TEST(Cli, SeedFromEnvironment) {
    const auto a = scratch("env_a.json"), b = scratch("env_b.json");
    ASSERT_EQ(run_cli("check ybe --algebra 1,1 --samples 2 --seed 123 --report " + a.string()), 0);
    const std::string cmd = "SUPERBOUND_SEED=123 " + std::string(SUPERBOUND_CLI) +
                            " check ybe --algebra 1,1 --samples 2 --report " + b.string() + " > /dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(canonical_dump(read_json(a)), canonical_dump(read_json(b)));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

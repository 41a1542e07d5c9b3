#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "scenario.hpp"

using namespace cgur;
using namespace cgur::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "cgur_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string error_location(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.where();
    }
    return "<none>";
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

ScenarioConfig full_config() {
    ScenarioConfig c;
    c.name = "everything";
    c.state = GaussianPreset{.preset = "squeezed", .r = 0.3, .theta = 0.2, .q = 0.1, .p = -0.4, .hbar = 2.0};
    c.pair = PairSpec{.canonical = false, .du = {1, 0.5}, .dv = {0, 1}, .cco = false};
    c.cg_u = StandardSpec{.delta = 0.7, .u_cen = 0.05};
    c.cg_v = StandardSpec{.delta = 0.4, .u_cen = std::nullopt};
    c.alpha = 1.0;
    c.urs = {"heisenberg", "cg_entropic", "cg_variance"};
    c.sweep = SweepSpec{std::nullopt, Range{0.1, 2.0, 3, true}, Range{0.2, 1.0, 2, false}};
    c.outputs = OutputSpec{"r.jsonl", "t.csv"};
    c.seed = 99;
    return c;
}

} // namespace

TEST_CASE("configs round trip through JSON") {
    std::vector<ScenarioConfig> cfgs{full_config()};
    for (const auto& n : bundled_scenario_names()) cfgs.push_back(bundled_scenario(n));
    ScenarioConfig fock;
    fock.name = "fock";
    fock.state = FockSpec{{{0.6, 0}, {0, 0.8}}, 1.0};
    fock.cg_u = PeriodicSpec{0.5, 1.5, 0.1};
    fock.cg_v = PeriodicSpec{0.5, 1.5, 0.0};
    fock.urs = {"shannon"};
    cfgs.push_back(fock);
    for (const auto& c : cfgs) {
        INFO(c.name);
        const auto j = to_json(c);
        CHECK(parse_config(j) == c);
        CHECK(to_json(parse_config(j)).dump(2) == j.dump(2));
        CHECK(parse_config_text(j.dump()) == c);
    }
}

TEST_CASE("embedded scenarios match their source files") {
    for (const auto& n : bundled_scenario_names()) {
        INFO(n);
        CHECK(load_config(fs::path(CGUR_SCENARIO_DIR) / (n + ".json")) == bundled_scenario(n));
    }
}

TEST_CASE("config errors name the offending field") {
    CHECK(error_location(R"({"name": "x", "urs": ["nope"]})") == "urs[0]");
    CHECK(error_location(R"({"name": "x", "urs": ["shannon"], "bogus": 1})") == "bogus");
    CHECK(error_location(R"({"name": "x", "urs": ["shannon"], "alpha": 3})") == "alpha");
    CHECK(error_location(R"({"name": "x", "urs": ["shannon"], "witness_sign": 2})") == "witness_sign");
    CHECK(error_location(R"({"name": "x", "urs": ["shannon"], "cg": {"u": {"standard": {"delta": "wide"}}}})") ==
          "cg.u.standard.delta");
    CHECK(error_location(R"({"name": "x", "urs": ["shannon"], "state": {"kind": "cat"}})") == "state.kind");
    CHECK(error_location(R"({"name": "x", "urs": ["bounds", "shannon"]})") == "urs");
    CHECK(error_location(
              R"({"name": "x", "urs": ["bounds"], "sweep": {"gamma": {"min": 1, "max": 2, "steps": 2}, "delta": {"min": 1, "max": 2, "steps": 2}}})") ==
          "sweep");
    const std::string bad = "{\n  \"name\": ,\n}";
    try {
        parse_config_text(bad);
        FAIL("expected a syntax error");
    } catch (const ConfigError& e) {
        CHECK_THAT(std::string(e.what()), ContainsSubstring("line 2"));
    }
    CHECK_THROWS_AS(bundled_scenario("missing"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("state shorthands") {
    CHECK(std::get<GaussianPreset>(parse_state_shorthand("vacuum")).preset == "vacuum");
    CHECK(std::get<GaussianPreset>(parse_state_shorthand("thermal:2")).nbar == 2.0);
    CHECK(std::get<GaussianPreset>(parse_state_shorthand("squeezed:0.5")).r == 0.5);
    CHECK(std::get<TmsvSpec>(parse_state_shorthand("tmsv:1")).r == 1.0);
    const auto coh = std::get<GaussianExplicit>(parse_state_shorthand("coherent2:2"));
    CHECK(coh.mean == std::vector<double>{2, -2, 1, 0.5});
    const auto obj = parse_state_shorthand(R"({"kind": "two_mode_squeezed", "r": 0.25})");
    CHECK(std::get<TmsvSpec>(obj).r == 0.25);
    CHECK_THROWS_AS(parse_state_shorthand("banana"), ConfigError);
    CHECK_THROWS_AS(parse_state_shorthand("thermal:x"), ConfigError);
    CHECK(parse_state(to_json(obj)) == obj);
}

TEST_CASE("bundled vacuum scenario saturates") {
    const auto res = run_scenario(bundled_scenario("vacuum_saturation"));
    REQUIRE(res.reports.size() == 7);
    for (const auto& r : res.reports) {
        INFO(r.kind);
        CHECK_FALSE(r.violated());
        CHECK(std::abs(r.margin) < 1e-6);
    }
}

TEST_CASE("bundled false-positive scenario") {
    const auto res = run_scenario(bundled_scenario("false_positive"));
    REQUIRE(res.reports.size() == 2);
    CHECK(res.reports[0].verdict == Verdict::Violated);
    CHECK(res.reports[1].verdict == Verdict::TriviallySatisfied);
    CHECK(res.reports[1].kind == "witness_cg_variance");
}

TEST_CASE("bundled bound sweep") {
    const auto res = run_scenario(bundled_scenario("bound_vs_gamma"));
    const auto ls = lines(res.table_csv);
    REQUIRE(ls.size() == 122);
    CHECK(ls[0] == "Gamma,eps_alpha,cg_entropic,cg_entropic_bialynicki,shannon_limit,cg_K,half_R00_sq");
    CHECK(ls[1].rfind("0.001,", 0) == 0);
    CHECK(ls.back().rfind("1000,", 0) == 0);
}

TEST_CASE("runs are byte-for-byte deterministic") {
    for (const auto& name : bundled_scenario_names()) {
        const auto cfg = bundled_scenario(name);
        const auto a = scratch(name + "_a"), b = scratch(name + "_b");
        const auto pa = write_artifacts(cfg, run_scenario(cfg), a);
        const auto pb = write_artifacts(cfg, run_scenario(cfg), b);
        REQUIRE(pa.size() == pb.size());
        for (std::size_t i = 0; i < pa.size(); ++i) {
            CHECK(pa[i].filename() == pb[i].filename());
            CHECK(slurp(pa[i]) == slurp(pb[i]));
        }
    }
    auto cfg = full_config();
    cfg.state = GaussianPreset{.preset = "thermal", .nbar = 0.3};
    CHECK(run_scenario(cfg).table_csv == run_scenario(cfg).table_csv);
}

TEST_CASE("grid CSV states") {
    const auto dir = scratch("grid");
    const double sigma = 0.8;
    const int n = 2048;
    const double dx = 0.01;
    std::ofstream two(dir / "two.csv"), three(dir / "three.csv"), uneven(dir / "uneven.csv");
    two << "x,re\n";
    three << "x,re,im\n";
    for (int i = 0; i < n; ++i) {
        const double x = (i - n / 2 + 0.5) * dx;
        const double a = std::exp(-x * x / (4 * sigma * sigma));
        two << format_double(x) << ',' << format_double(2 * a) << '\n';
        three << format_double(x) << ',' << format_double(a * std::cos(0.3 * x)) << ','
              << format_double(a * std::sin(0.3 * x)) << '\n';
        uneven << format_double(x + (i == 7 ? 0.003 : 0.0)) << ',' << format_double(a) << '\n';
    }
    two.close();
    three.close();
    uneven.close();

    const auto psi2 = load_grid_csv(dir / "two.csv", 1.0);
    CHECK(psi2.size() == static_cast<std::size_t>(n));
    CHECK_THAT(psi2.norm_squared(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(psi2.grid().dx, WithinRel(dx, 1e-9));
    const auto psi3 = load_grid_csv(dir / "three.csv", 1.0);
    CHECK(std::abs(psi3.samples()[n / 2 + 40].imag()) > 0.0);
    CHECK_THROWS(load_grid_csv(dir / "uneven.csv", 1.0));
    CHECK_THROWS(load_grid_csv(dir / "absent.csv", 1.0));

    ScenarioConfig cfg;
    cfg.name = "grid";
    cfg.state = GridCsv{(dir / "two.csv").string(), 1.0};
    cfg.urs = {"shannon"};
    const auto rep = run_scenario(cfg).reports.at(0);
    // sigma_x = 0.8 and the conjugate width 1 / (2 * 0.8): a minimum uncertainty state.
    CHECK_THAT(rep.margin, WithinAbs(0.0, 1e-6));
}

TEST_CASE("R00 table") {
    const auto ls = lines(r00_table(0.5, 5.0, 3, false));
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "x,R00,half_R00_sq,concentration");
    CHECK(ls[1].rfind("0.5,", 0) == 0);
    CHECK(ls[3].rfind("5,0.56031760409", 0) == 0);
    CHECK(lines(r00_table(0.01, 100, 50, true)).size() == 51);
}

TEST_CASE("UR scan") {
    UrScanOptions o;
    o.gamma = Range{0.01, 100, 5, true};
    const auto ls = lines(ur_scan(o));
    CHECK(ls[0] == "index,delta,small_delta,Gamma,kind,lhs,bound,margin,verdict");
    // cg_entropic emits three rows per point, the variance forms one each.
    CHECK(ls.size() == 1 + 5 * 5);
    for (std::size_t i = 1; i < ls.size(); ++i) CHECK_THAT(ls[i], !ContainsSubstring(",Violated"));
}

TEST_CASE("validate smoke set passes") {
    std::ostringstream out;
    CHECK(validate(7, out) == 0);
    const auto ls = lines(out.str());
    CHECK(ls.size() >= 9);
    for (const auto& l : ls)
        if (l.rfind("PASS", 0) != 0 && l.rfind("FAIL", 0) != 0) continue;
        else CHECK(l.rfind("PASS", 0) == 0);
}

TEST_CASE("mub-check subcommand") {
    std::ostringstream out;
    const double t = std::sqrt(2 * std::numbers::pi * 3);
    const auto v = mub_check(MubCheckOptions{.d = 3, .tu = t, .tv = t, .numeric = true, .trials = 3}, out);
    CHECK(v.status == MubVerdict::Status::Unbiased);
    CHECK_THAT(out.str(), ContainsSubstring("verdict=Unbiased"));
    CHECK_THAT(out.str(), ContainsSubstring("max_deviation="));
    std::ostringstream quiet;
    mub_check(MubCheckOptions{.d = 4, .tu = t, .tv = t * 2 / 3}, quiet);
    CHECK_THAT(quiet.str(), !ContainsSubstring("max_deviation"));
}

TEST_CASE("entangle subcommand") {
    const auto j = entangle(EntangleOptions{});
    CHECK(j["entangled"] == true);
    CHECK(j["kind"] == "witness_variance_product");
    EntangleOptions naive{.state = parse_state_shorthand("coherent2:1"), .criterion = "naive", .delta = 10.0, .small_delta = 10.0};
    CHECK(entangle(naive)["entangled"] == true);
    naive.criterion = "variance";
    CHECK(entangle(naive)["entangled"] == false);
    naive.criterion = "entropy";
    CHECK(entangle(naive)["entangled"] == false);
    CHECK_THROWS(entangle(EntangleOptions{.criterion = "entropy", .delta = std::nullopt, .small_delta = std::nullopt}));
    CHECK_THROWS(entangle(EntangleOptions{.criterion = "magic", .delta = std::nullopt, .small_delta = std::nullopt}));
}

TEST_CASE("report JSON keeps non-finite numbers readable") {
    URReport r = make_report("k", 1.0, 0.5);
    r.bound = std::numeric_limits<double>::infinity();
    const auto j = to_json(r);
    CHECK(j["bound"] == "inf");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::nan("")) == "nan");
}

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pusnec/netsim.hpp"

using namespace pusnec;

namespace {

ScenarioConfig disjoint_config(int k, uint64_t trials, uint64_t seed) {
    ScenarioConfig c;
    c.id = "disjoint-test";
    ScenarioConfig::Disjoint d;
    d.n0 = 10;
    d.eta = 5;
    d.bobs = 3;
    c.disjoint = d;
    CodecSpec sp;
    sp.name = "gab11-disjoint";
    sp.w = 1;
    sp.n = 11;
    sp.k = k;
    sp.n0 = 10;
    sp.k0 = 1;
    sp.mu0 = k - 1;
    sp.k1 = 1;
    sp.l = 3;
    c.codec = sp;
    c.trials = trials;
    c.seed = seed;
    c.xi = {1};
    c.passthrough_relays = true;
    return c;
}

}  // namespace

TEST_CASE("reed-solomon: roundtrip, errata, capability boundary") {
    GroundField gf(8);
    ReedSolomon rs(gf, 243, 81);
    Rng rng(5, 0);
    std::vector<uint16_t> msg(81);
    for (auto& m : msg) m = static_cast<uint16_t>(rng.below(256));
    std::vector<uint16_t> cw = rs.encode(msg);
    CHECK(*rs.decode(cw) == msg);

    // errors up to the boundary tau = 81
    for (int tau : {1, 5, 40, 81}) {
        std::vector<uint16_t> word = cw;
        for (int e = 0; e < tau; ++e) {
            int pos = (e * 3) % 243;
            word[static_cast<size_t>(pos)] ^= static_cast<uint16_t>(1 + rng.below(255));
        }
        auto dec = rs.decode(word);
        REQUIRE_MESSAGE(dec.has_value(), "tau=", tau);
        CHECK(*dec == msg);
    }
    // beyond capability: fail or flag, never silently wrong
    {
        std::vector<uint16_t> word = cw;
        for (int e = 0; e < 100; ++e) word[static_cast<size_t>((e * 2) % 243)] ^= static_cast<uint16_t>(1 + rng.below(255));
        auto dec = rs.decode(word);
        CHECK((!dec || *dec == msg));
    }
    // erasures plus errors: 2*tau + rho <= 162
    {
        std::vector<uint16_t> word = cw;
        std::vector<int> erasures;
        for (int e = 0; e < 100; ++e) {
            word[static_cast<size_t>(e)] = static_cast<uint16_t>(rng.below(256));
            erasures.push_back(e);
        }
        for (int t = 0; t < 31; ++t) word[static_cast<size_t>(120 + t)] ^= static_cast<uint16_t>(1 + rng.below(255));
        auto dec = rs.decode(word, erasures);
        REQUIRE(dec.has_value());
        CHECK(*dec == msg);
    }
    // small code sanity
    ReedSolomon small(gf, 15, 7);
    std::vector<uint16_t> m2(7, 3);
    auto cw2 = small.encode(m2);
    cw2[2] ^= 9;
    cw2[10] ^= 77;
    CHECK(*small.decode(cw2) == m2);
}

TEST_CASE("zero rates give zero FER and a point mass at mu = 0") {
    ScenarioConfig c = disjoint_config(3, 200, 7);
    MetricsReport rep = run_scenario(c);
    CHECK(rep.fer == 0.0);
    for (double f : rep.fer_bt) CHECK(f == 0.0);
    CHECK(rep.p_mu.p[0] == doctest::Approx(1.0));
    CHECK(rep.plp == 0.0);
}

TEST_CASE("reproducibility: identical config and seed, any thread count") {
    ScenarioConfig c = disjoint_config(5, 400, 99);
    c.gamma = 0.02;
    c.eps = 0.01;
    MetricsReport a = run_scenario(c);
    MetricsReport b = run_scenario(c);
    CHECK(a.fer == b.fer);
    CHECK(a.mu_hist == b.mu_hist);
    c.threads = 2;
    MetricsReport t2 = run_scenario(c);
    CHECK(a.fer == t2.fer);
    CHECK(a.mu_hist == t2.mu_hist);
    CHECK(a.fer_bt == t2.fer_bt);
}

TEST_CASE("disjoint-path Monte Carlo matches the closed forms") {
    const double gamma = 5e-3, eps = 5e-3;
    const uint64_t trials = 20000;
    for (int k : {3, 6}) {
        ScenarioConfig c = disjoint_config(k, trials, 1234);
        c.gamma = gamma;
        c.eps = eps;
        c.threads = 2;
        MetricsReport rep = run_scenario(c);
        DisjointPathAnalytics an = disjoint_path_analytics(gamma, eps, 5, 10, k, 3, 1);
        double sig_fer = std::sqrt(an.fer * (1 - an.fer) / trials);
        double sig_plp = std::sqrt(an.report.plp * (1 - an.report.plp) / trials);
        CAPTURE(k);
        CHECK(std::abs(rep.fer - an.fer) <= 3 * std::max(sig_fer, 1e-9));
        CHECK(std::abs(rep.plp - an.report.plp) <= 3 * std::max(sig_plp, 1e-9));
    }
}

TEST_CASE("FER rises with k, PLP falls with k on the analytic curves") {
    double prev_fer = -1, prev_plp = 2;
    for (int k = 1; k <= 10; ++k) {
        DisjointPathAnalytics an = disjoint_path_analytics(1e-3, 1e-3, 5, 10, k, 3, 1);
        CHECK(an.fer >= prev_fer - 1e-15);
        CHECK(an.report.plp <= prev_plp + 1e-15);
        prev_fer = an.fer;
        prev_plp = an.report.plp;
    }
}

TEST_CASE("multicast graph scenario end to end") {
    auto nodes = synthetic_cloud(14, 14, 2, 3);
    int aid = -1;
    std::vector<int> bids;
    for (const RealNode& n : nodes) {
        if (n.role == Role::alice) aid = n.id;
        if (n.role == Role::bob) bids.push_back(n.id);
    }
    XHopGrid grid = XHopGrid::build(nodes, aid, bids, 1.0);
    MulticastGraph g = multicast_pathfind(grid, 4, 17);
    ScenarioConfig c;
    c.id = "grid-test";
    c.codec = *find_codec("gab9-4");  // n0 = 6 mismatch prevented below
    c.codec.n0 = 4;
    c.codec.k1 = c.codec.n - 4;
    c.codec.k = 3;
    c.codec.k0 = 2;
    c.codec.mu0 = 1;
    c.codec.name = "gab9-3-n04";
    c.trials = 150;
    c.seed = 5;
    c.xi = {1};

    // clean channel decodes everywhere
    MetricsReport clean = run_scenario(c, g);
    CHECK(clean.fer == 0.0);

    // last-hop erasures within capability still decode:
    // capability n0 - k = 1, single random last-hop erasure events dominate
    c.eps = 0.02;
    MetricsReport noisy = run_scenario(c, g);
    // FER bounded by the probability of >= 2 erased packets at some bob
    CHECK(noisy.fer < 0.05);

    // compromises yield a mu histogram
    c.eps = 0;
    c.gamma = 0.05;
    MetricsReport tapped = run_scenario(c, g);
    CHECK(tapped.p_mu.sum() == doctest::Approx(1.0));
    CHECK(tapped.p_mu.p[0] < 1.0);
}

TEST_CASE("error floor experiment: small run obeys the enumeration") {
    ErrorFloorResult r = error_floor_experiment(4000, 11);
    CHECK(r.rank_failures == 0);
    CHECK(r.exact_probability == doctest::Approx((1.0 / 256) * std::pow(255.0 / 256, 3)).epsilon(1e-9));
    // generous window for the small unit-test run; the acceptance suite
    // runs the full CI check
    double sigma = std::sqrt(r.exact_probability * (1 - r.exact_probability) / 4000);
    CHECK(std::abs(r.baseline_rate - r.exact_probability) <= 4 * sigma);
}

TEST_CASE("hamming baseline mode: clean roundtrip and config guard") {
    auto nodes = synthetic_cloud(14, 14, 2, 3);
    int aid = -1;
    std::vector<int> bids;
    for (const RealNode& n : nodes) {
        if (n.role == Role::alice) aid = n.id;
        if (n.role == Role::bob) bids.push_back(n.id);
    }
    XHopGrid grid = XHopGrid::build(nodes, aid, bids, 1.0);
    MulticastGraph g = multicast_pathfind(grid, 4, 17);
    ScenarioConfig c;
    c.id = "baseline-test";
    c.codec = *find_codec("gab9-4");
    c.codec.n0 = 4;
    c.codec.k1 = c.codec.n - 4;
    c.codec.k = 3;
    c.codec.k0 = 2;
    c.codec.mu0 = 1;
    c.codec.name = "gab9-3-n04";
    c.trials = 60;
    c.seed = 5;
    c.xi = {1};
    // the finite-size effect in miniature: with no channel noise at all,
    // as-drawn RLNC still produces rank deficiencies at the 1/q scale;
    // the byte-level baseline cannot absorb them, the rank decoder can
    c.baseline = "hamming-baseline";
    MetricsReport floor = run_scenario(c, g);
    CHECK(floor.fer > 0.0);
    c.baseline = "rank-metric";
    MetricsReport clean = run_scenario(c, g);
    CHECK(clean.fer == 0.0);
    // the baseline needs enough field symbols for the byte layout
    ScenarioConfig bad = c;
    bad.baseline = "hamming-baseline";
    bad.codec.w = 1;
    bad.codec.n = 11;
    bad.codec.k1 = 11 - 4;
    CHECK_THROWS_AS(run_scenario(bad, g), ConfigError);
    // sample-size guidance
    ScenarioConfig tiny = c;
    tiny.baseline = "rank-metric";
    tiny.gamma = 1e-6;
    CHECK(!tiny.warnings().empty());
    tiny.trials = 100000000ULL;
    CHECK(tiny.warnings().empty());
}

TEST_CASE("rank decoder floor: k = n0 exposes it, k <= n0 - 2 suppresses it") {
    // on a mixing graph with zero channel noise, as-drawn RLNC still loses
    // rank at the 1/q scale; with no correction margin (k = n0) those events
    // are frame errors, while k <= n0 - 2 absorbs them as rank erasures
    auto nodes = synthetic_cloud(18, 18, 2, 9);
    int aid = -1;
    std::vector<int> bids;
    for (const RealNode& n : nodes) {
        if (n.role == Role::alice) aid = n.id;
        if (n.role == Role::bob) bids.push_back(n.id);
    }
    XHopGrid grid = XHopGrid::build(nodes, aid, bids, 1.0);
    MulticastGraph g = multicast_pathfind(grid, 5, 21);
    ScenarioConfig c;
    c.id = "floor-vs-margin";
    CodecSpec sp;
    sp.name = "gab9-n05";
    sp.w = 8;
    sp.n = 9;
    sp.n0 = 5;
    sp.k1 = 4;
    sp.l = 3;
    c.trials = 400;
    c.seed = 31;
    c.xi = {1};

    sp.k = 5;  // no correction capability
    sp.k0 = 4;
    sp.mu0 = 1;
    c.codec = sp;
    MetricsReport bare = run_scenario(c, g);

    sp.k = 3;  // capability n0 - k = 2
    sp.k0 = 3;
    sp.mu0 = 0;
    c.codec = sp;
    MetricsReport margin = run_scenario(c, g);

    CHECK(bare.fer > 0.0);
    CHECK(margin.fer == 0.0);
}

TEST_CASE("csv schema stays pinned") {
    std::string hdr = metrics_csv_header(2, true);
    CHECK(hdr ==
          "scenario_id,k,xi,gamma,eps,eL1,eL2,epsN,trials,FER,FER_B1,FER_B2,PLP,I_L_xi,stderr_FER,stderr_PLP,"
          "FER_analytic,PLP_analytic");
    CHECK(std::string(kCsvSchemaVersion) == "pusnec-csv-1");
}

TEST_CASE("scenario json parsing") {
    std::string text = R"({
        "scenario_id": "demo",
        "disjoint": {"n0": 10, "eta": 5, "bobs": 3},
        "codec": {"name": "d", "w": 1, "n": 11, "k": 4, "n0": 10, "k0": 1, "mu0": 3, "l": 3},
        "rates": {"gamma": 0.001, "eps": 0.002},
        "trials": 500,
        "seed": 42,
        "xi": [1],
        "passthrough_relays": true,
        "sweep": {"param": "k", "values": [1, 2, 3]}
    })";
    ParsedScenario p = parse_scenario_json(text);
    CHECK(p.config.id == "demo");
    CHECK(p.config.codec.k == 4);
    CHECK(p.config.gamma == doctest::Approx(0.001));
    CHECK(p.config.trials == 500);
    REQUIRE(p.sweep.has_value());
    CHECK(p.sweep->param == "k");
    CHECK(p.sweep->values.size() == 3);
    CHECK_THROWS_AS(parse_scenario_json("{nope"), ConfigError);
    // preset lookup
    ParsedScenario q = parse_scenario_json(R"({"codec": "gab9-3", "graph_file": "x"})");
    CHECK(q.config.codec.n == 9);
    CHECK_THROWS_AS(parse_scenario_json(R"({"codec": "gab0-0"})"), ConfigError);
}

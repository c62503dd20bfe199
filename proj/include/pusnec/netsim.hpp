#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pusnec/gabidulin.hpp"
#include "pusnec/pathfind.hpp"
#include "pusnec/rs.hpp"
#include "pusnec/wiretap.hpp"

namespace pusnec {

struct ConfigError : FieldError {
    using FieldError::FieldError;
};

// One simulation run: graph source, codec, rates, trials, seed.
struct ScenarioConfig {
    std::string id = "scenario";

    // graph source: a saved multicast graph, or the disjoint-path model
    std::string graph_file;
    struct Disjoint {
        int n0 = 10;
        int eta = 5;
        int bobs = 3;
    };
    std::optional<Disjoint> disjoint;

    CodecSpec codec;
    double gamma = 0;  // node compromise rate
    double eps = 0;    // last-hop link erasure rate
    double e_l1 = 0;   // last-hop link error rate
    double e_l2 = 0;   // all-link error rate
    double eps_n = 0;  // node erasure rate
    uint64_t trials = 1000;
    uint64_t seed = 1;
    std::vector<int> xi = {1};
    bool passthrough_relays = false;
    bool strict_rank_alice = false;
    int threads = 1;
    std::string baseline = "rank-metric";  // rank-metric | hamming-baseline
    bool collect_timing = false;

    void validate(bool graph_supplied = false) const;

    // advisory sample-size guidance: roughly ten events per estimated rate
    std::vector<std::string> warnings() const;
};

struct MetricsReport {
    std::string scenario_id;
    uint64_t trials = 0;
    int n_bobs = 0;
    double fer = 0;
    std::vector<double> fer_bt;
    std::vector<uint64_t> mu_hist;  // 0..n0
    WiretapDistribution p_mu;
    double plp = 0;
    std::vector<SecrecyReport> lii;  // one per requested xi
    double stderr_fer = 0;
    double stderr_plp = 0;
    double mean_decode_us = 0;
    uint64_t decode_count = 0;
};

MetricsReport run_scenario(const ScenarioConfig& config);
MetricsReport run_scenario(const ScenarioConfig& config, const MulticastGraph& graph);

// Chain scenario of the finite-size error floor: bidiagonal 5-chain transfer
// with a5 possibly zero, a one-symbol error packet on the fourth link, the
// rank decoder on full-length iGab[9,3] against byte-level RS[243,81].
struct ErrorFloorResult {
    uint64_t trials = 0;
    uint64_t baseline_failures = 0;
    uint64_t rank_failures = 0;
    double baseline_rate = 0;
    double rank_fer = 0;
    double exact_probability = 0;  // zero-pattern enumeration
    double ci99_lo = 0;
    double ci99_hi = 0;
};
ErrorFloorResult error_floor_experiment(uint64_t trials, uint64_t seed);

// CSV emission. Columns are versioned; bob columns expand to the graph.
std::string metrics_csv_header(int n_bobs, bool analytic_cols);
std::string metrics_csv_row(const MetricsReport& m, const ScenarioConfig& c, int xi, double fer_analytic,
                            double plp_analytic, bool analytic_cols);
extern const char* const kCsvSchemaVersion;

// Structured-text (JSON) scenario config.
struct SweepSpec {
    std::string param;  // "gamma" | "eps" | "e_l1" | "e_l2" | "eps_n" | "k"
    std::vector<double> values;
};
struct ParsedScenario {
    ScenarioConfig config;
    std::optional<SweepSpec> sweep;
};
ParsedScenario parse_scenario_json(const std::string& text);

}  // namespace pusnec

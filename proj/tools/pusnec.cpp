// pusnec - batch front end for the rank-metric secure-network-coding lab.
// Subcommands: codec | pathfind | simulate | analyze. Every run writes a
// manifest next to its outputs so results can be replayed exactly.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pusnec/netsim.hpp"
#include "pusnec/rlnc.hpp"

using namespace pusnec;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "1.0.0";

enum ExitCode { kOk = 0, kInvariant = 2, kConfig = 3, kPathfind = 4 };

std::string now_iso() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command, const json& params,
                    const std::vector<std::string>& outputs, const json& extra = {}) {
    json m;
    m["tool"] = "pusnec";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["params"] = params;
    m["outputs"] = outputs;
    m["written"] = now_iso();
    if (!extra.empty()) m["results"] = extra;
    fs::create_directories(out_dir);
    std::ofstream(out_dir + "/" + command + ".manifest.json") << m.dump(2) << "\n";
}

struct ErrataPlan {
    int tau = 0;
    int rho = 0;
};

ErrataPlan draw_plan(int capability, Rng& rng) {
    // uniform over the feasible (tau, rho) lattice 2 tau + rho <= capability
    std::vector<ErrataPlan> feas;
    for (int t = 0; 2 * t <= capability; ++t)
        for (int r = 0; 2 * t + r <= capability; ++r) feas.push_back({t, r});
    return feas[static_cast<size_t>(rng.below(feas.size()))];
}

FqMat random_joint_rows(const Field& f, int rows, int cols, Rng& rng) {
    for (;;) {
        FqMat m(rows, cols);
        for (auto& v : m.a) v = static_cast<uint16_t>(rng.below(f.q()));
        if (fq_rank(f.ground(), m) == rows) return m;
    }
}

// one randomized errata trial; returns false on any contract violation
bool codec_trial(const Codec& codec, Rng& rng, bool beyond_capability, std::string& why) {
    const CodecSpec& sp = codec.spec();
    const Field& f = codec.field();
    ExtMat u = codec.random_message(rng);
    ExtMat r = codec.random_mask(rng);
    ExtMat y = codec.encode(codec.pre_encode(u, r));
    ErrataPlan plan;
    if (beyond_capability) {
        plan.tau = sp.capability() / 2 + 1 + static_cast<int>(rng.below(2));
        plan.rho = 0;
        if (plan.tau > sp.n0) plan.tau = sp.n0;
    } else {
        plan = draw_plan(sp.capability(), rng);
    }
    FqMat joint = random_joint_rows(f, plan.tau + plan.rho, sp.n0, rng);
    FqMat b(plan.tau, sp.n0), bh(plan.rho, sp.n0);
    for (int i = 0; i < plan.tau; ++i)
        for (int j = 0; j < sp.n0; ++j) b.at(i, j) = joint.at(i, j);
    for (int i = 0; i < plan.rho; ++i)
        for (int j = 0; j < sp.n0; ++j) bh.at(i, j) = joint.at(plan.tau + i, j);
    for (int comp = 0; comp < sp.l; ++comp) {
        for (int j = 0; j < plan.tau; ++j) {
            Elem val = f.random_elem(rng);
            for (int v = 0; v < sp.n0; ++v)
                if (b.at(j, v)) y.at(comp, v) = f.add(y.at(comp, v), f.scale(val, b.at(j, v)));
        }
        for (int j = 0; j < plan.rho; ++j) {
            Elem val = f.random_elem(rng);
            for (int v = 0; v < sp.n0; ++v)
                if (bh.at(j, v)) y.at(comp, v) = f.add(y.at(comp, v), f.scale(val, bh.at(j, v)));
        }
    }
    DecodeOutput d = codec.decode(y, bh);
    if (beyond_capability) {
        if (d.ok() && !(d.u == u && d.r == r)) {
            why = "silently wrong result beyond capability";
            return false;
        }
        return true;
    }
    if (!d.ok()) {
        why = "decode failed within capability: " + d.reason;
        return false;
    }
    if (!(d.u == u && d.r == r)) {
        why = "wrong message within capability";
        return false;
    }
    return true;
}

int cmd_codec(const std::string& spec_id, const std::string& mode, int count, bool full_length, uint64_t seed,
              const std::string& out_dir, const std::string& verify_file) {
    std::optional<CodecSpec> found = find_codec(spec_id);
    if (!found) {
        std::cerr << "unknown codec spec: " << spec_id << "\n";
        return kConfig;
    }
    CodecSpec sp = *found;
    if (full_length) sp = full_length_spec(sp.w, sp.n, sp.k, sp.l);
    Codec codec = Codec::make(sp);
    json params = {{"spec", spec_id}, {"mode", mode}, {"count", count}, {"seed", seed}, {"full", full_length}};

    if (mode == "roundtrip" || mode == "fuzz") {
        bool beyond = mode == "fuzz";
        Rng rng(seed, 0xC0DEC);
        for (int i = 0; i < count; ++i) {
            std::string why;
            if (!codec_trial(codec, rng, beyond, why)) {
                std::cerr << "invariant violation at trial " << i << ": " << why << "\n";
                return kInvariant;
            }
        }
        std::cout << mode << " ok: " << count << " trials on " << spec_id << (full_length ? " (full length)" : "")
                  << "\n";
        write_manifest(out_dir, "codec", params, {});
        return kOk;
    }
    if (mode == "vectors") {
        if (!verify_file.empty()) {
            std::ifstream in(verify_file);
            if (!in) {
                std::cerr << "cannot open vector file\n";
                return kConfig;
            }
            std::string header, spec_name;
            uint64_t file_seed = 0;
            int n = 0;
            in >> header >> spec_name >> file_seed >> n;
            if (header != "pusnec-vectors-v1" || spec_name != sp.name) {
                std::cerr << "vector file does not match the requested spec\n";
                return kConfig;
            }
            Rng rng(file_seed, 0xFEC);
            for (int i = 0; i < n; ++i) {
                std::string hex;
                in >> hex;
                ExtMat u = codec.random_message(rng);
                ExtMat r = codec.random_mask(rng);
                std::vector<uint8_t> bytes = codec.pack_outer(codec.encode(codec.pre_encode(u, r)));
                std::ostringstream os;
                for (uint8_t bval : bytes) os << std::hex << (bval >> 4) << (bval & 15);
                if (os.str() != hex) {
                    std::cerr << "vector " << i << " mismatch (tampered or stale file)\n";
                    return kInvariant;
                }
            }
            std::cout << "verified " << n << " vectors\n";
            return kOk;
        }
        fs::create_directories(out_dir);
        std::string path = out_dir + "/" + spec_id + ".vectors";
        std::ofstream out(path);
        out << "pusnec-vectors-v1 " << sp.name << " " << seed << " " << count << "\n";
        Rng rng(seed, 0xFEC);
        for (int i = 0; i < count; ++i) {
            ExtMat u = codec.random_message(rng);
            ExtMat r = codec.random_mask(rng);
            std::vector<uint8_t> bytes = codec.pack_outer(codec.encode(codec.pre_encode(u, r)));
            for (uint8_t bval : bytes) out << std::hex << (bval >> 4) << (bval & 15);
            out << "\n";
        }
        std::cout << "wrote " << count << " vectors to " << path << "\n";
        write_manifest(out_dir, "codec", params, {path});
        return kOk;
    }
    std::cerr << "unknown mode: " << mode << "\n";
    return kConfig;
}

int cmd_pathfind(const std::string& graph_file, int grid_w, int grid_h, int bobs, int n0, uint64_t seed,
                 const std::string& out_dir) {
    try {
        MulticastGraph g;
        if (!graph_file.empty()) {
            g = load_graph(graph_file);
        } else {
            std::vector<RealNode> cloud = synthetic_cloud(grid_w, grid_h, bobs, seed);
            int aid = -1;
            std::vector<int> bids;
            for (const RealNode& n : cloud) {
                if (n.role == Role::alice) aid = n.id;
                if (n.role == Role::bob) bids.push_back(n.id);
            }
            XHopGrid grid = XHopGrid::build(cloud, aid, bids, 1.0);
            MulticastGraph virt = multicast_pathfind(grid, n0, seed);
            g = map_to_real(virt, grid, cloud);
            g.n0 = n0;
        }
        fs::create_directories(out_dir);
        std::string gpath = out_dir + "/multicast_graph.txt";
        save_graph(g, gpath);
        json stats;
        stats["links"] = g.links.size();
        stats["nodes"] = g.nodes.size();
        stats["n0"] = g.n0;
        stats["n1"] = g.n1;
        json cert = json::array();
        bool all_ok = true;
        for (size_t b = 0; b < g.bobs.size(); ++b) {
            int flow = g.max_flow(g.alice, g.bobs[b]);
            cert.push_back({{"bob", g.bobs[b]}, {"max_flow", flow}});
            if (flow < g.n0) all_ok = false;
            std::cout << "bob " << g.bobs[b] << ": max-flow " << flow << " (need " << g.n0 << ")\n";
        }
        stats["disjointness_certificate"] = cert;
        std::ofstream(out_dir + "/pathfind_stats.json") << stats.dump(2) << "\n";
        write_manifest(out_dir, "pathfind",
                       {{"grid_w", grid_w}, {"grid_h", grid_h}, {"bobs", bobs}, {"n0", n0}, {"seed", seed}},
                       {gpath, out_dir + "/pathfind_stats.json"}, stats);
        if (!all_ok) {
            std::cerr << "certificate below n0\n";
            return kInvariant;
        }
        std::cout << "graph written to " << gpath << " (links " << g.links.size() << ", n1 " << g.n1 << ")\n";
        return kOk;
    } catch (const PathfindFailure& e) {
        std::cerr << "pathfind failure (bob " << e.failing_bob << "): " << e.what() << "\n";
        return kPathfind;
    } catch (const FieldError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    }
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, int threads) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return kConfig;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        ParsedScenario parsed = parse_scenario_json(buf.str());
        ScenarioConfig base = parsed.config;
        if (threads > 0) base.threads = threads;
        std::vector<ScenarioConfig> points;
        if (parsed.sweep) {
            for (double v : parsed.sweep->values) {
                ScenarioConfig c = base;
                const std::string& p = parsed.sweep->param;
                if (p == "gamma") c.gamma = v;
                else if (p == "eps") c.eps = v;
                else if (p == "e_l1") c.e_l1 = v;
                else if (p == "e_l2") c.e_l2 = v;
                else if (p == "eps_n") c.eps_n = v;
                else if (p == "k") {
                    int k = static_cast<int>(v);
                    c.codec.k = k;
                    c.codec.mu0 = k - c.codec.k0;
                } else
                    throw ConfigError("unknown sweep parameter: " + p);
                points.push_back(c);
            }
        } else {
            points.push_back(base);
        }
        bool analytic = base.disjoint.has_value();
        for (const std::string& w : base.warnings()) std::cerr << "warning: " << w << "\n";
        fs::create_directories(out_dir);
        std::string csv_path = out_dir + "/results.csv";
        std::ofstream csv(csv_path);
        bool first = true;
        double mean_decode_us = 0;
        uint64_t decode_count = 0;
        for (const ScenarioConfig& c : points) {
            MetricsReport rep = run_scenario(c);
            mean_decode_us += rep.mean_decode_us * static_cast<double>(rep.decode_count);
            decode_count += rep.decode_count;
            if (first) {
                csv << "# " << kCsvSchemaVersion << "\n";
                csv << metrics_csv_header(rep.n_bobs, analytic) << "\n";
                first = false;
            }
            for (int xi : c.xi) {
                double fer_an = 0, plp_an = 0;
                if (analytic) {
                    DisjointPathAnalytics an = disjoint_path_analytics(c.gamma, c.eps, c.disjoint->eta,
                                                                       c.disjoint->n0, c.codec.k, c.disjoint->bobs, xi);
                    fer_an = an.fer;
                    plp_an = an.report.plp;
                }
                csv << metrics_csv_row(rep, c, xi, fer_an, plp_an, analytic) << "\n";
            }
        }
        csv.close();
        json timing = {{"mean_decode_us", decode_count ? mean_decode_us / static_cast<double>(decode_count) : 0.0},
                       {"decodes", decode_count}};
        write_manifest(out_dir, "simulate", {{"config", config_path}, {"points", points.size()}}, {csv_path},
                       {{"timing", timing}});
        std::cout << "wrote " << csv_path << " (" << points.size() << " sweep points)\n";
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const FieldError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
}

int cmd_analyze(const std::string& mode, int k, int mu0, int n0, int eta, int n_bobs, int xi_max,
                const std::string& out_dir) {
    if (xi_max < 1) {
        std::cerr << "xi must be >= 1\n";
        return kConfig;
    }
    fs::create_directories(out_dir);
    std::string path = out_dir + "/analyze_" + mode + ".csv";
    std::ofstream csv(path);
    try {
        if (mode == "lii") {
            csv << "k,xi,gamma,PLP,I_R,I_L\n";
            for (int kk = 1; kk <= n0; ++kk) {
                for (int xi = 1; xi <= std::min(xi_max, kk); ++xi) {
                    for (double g = 1e-5; g <= 1.1e-2; g *= 10) {
                        DisjointPathAnalytics an = disjoint_path_analytics(g, 0, eta, n0, kk, n_bobs, xi);
                        csv << kk << "," << xi << "," << g << "," << an.report.plp << "," << an.report.ramp_index
                            << "," << an.report.leakage_index << "\n";
                    }
                }
            }
        } else if (mode == "threshold") {
            csv << "mu,xi,mi_symbols\n";
            for (int mu = 0; mu <= k + 1; ++mu)
                for (int xi = 1; xi <= std::min(xi_max, k - mu0); ++xi)
                    csv << mu << "," << xi << "," << threshold_model_mi(k, mu0, mu, xi) << "\n";
        } else if (mode == "toy-oracle") {
            // the [3,2] ramp code over F_4
            GroundField f4(2);
            FqMat gen(2, 3);
            gen.at(0, 0) = 1;
            gen.at(0, 1) = 1;
            gen.at(0, 2) = 1;
            gen.at(1, 0) = 1;
            gen.at(1, 1) = 2;
            gen.at(1, 2) = 3;
            csv << "taps,subset,mi_bits\n";
            auto row = [&](const std::vector<int>& taps, const std::string& tag) {
                auto table = toy_mi_linear_code(f4, gen, taps, 2);
                for (const ToyMiEntry& e : table) {
                    csv << tag << ",";
                    for (size_t i = 0; i < e.subset.size(); ++i) csv << (i ? "+" : "") << "u" << e.subset[i];
                    csv << "," << e.bits << "\n";
                }
            };
            row({0}, "x0");
            row({0, 1}, "x0x1");
        } else {
            std::cerr << "unknown analyze mode\n";
            return kConfig;
        }
    } catch (const FieldError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    csv.close();
    write_manifest(out_dir, "analyze",
                   {{"mode", mode}, {"k", k}, {"mu0", mu0}, {"n0", n0}, {"eta", eta}, {"xi_max", xi_max}}, {path});
    std::cout << "wrote " << path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pusnec: rank-metric secure network coding laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 0;
    std::string format = "csv";
    app.add_option("--seed", seed, "global random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads for simulation");
    app.add_option("--format", format, "output format (csv)");

    auto* codec = app.add_subcommand("codec", "codec property suites and test vectors");
    std::string spec_id = "gab9-3", mode = "roundtrip", verify_file;
    int count = 1000;
    bool full_length = false;
    codec->add_option("--spec", spec_id, "codec preset id");
    codec->add_option("--mode", mode, "roundtrip | fuzz | vectors");
    codec->add_option("--count", count, "trial / vector count");
    codec->add_flag("--full", full_length, "use the full-length code (n0 = n)");
    codec->add_option("--verify", verify_file, "verify an existing vector file");

    auto* pathfind = app.add_subcommand("pathfind", "multicast path finding on the X-hop grid");
    std::string graph_file, grid_spec = "20x20";
    int bobs = 6, n0 = 5;
    pathfind->add_option("--graph", graph_file, "existing graph file to certify");
    pathfind->add_option("--grid", grid_spec, "synthetic grid WxH");
    pathfind->add_option("--bobs", bobs, "number of bobs");
    pathfind->add_option("--n0", n0, "distribution degree");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo scenario runs");
    std::string config_path;
    simulate->add_option("--config", config_path, "scenario config (json)")->required();

    auto* analyze = app.add_subcommand("analyze", "closed-form curves and toy oracles");
    std::string amode = "lii";
    int ak = 3, amu0 = 0, an0 = 10, aeta = 5, abobs = 3, axi = 1;
    analyze->add_option("--mode", amode, "lii | threshold | toy-oracle");
    analyze->add_option("--k", ak, "message dimension");
    analyze->add_option("--mu0", amu0, "masking symbols");
    analyze->add_option("--n0", an0, "distribution degree");
    analyze->add_option("--eta", aeta, "hops per disjoint path");
    analyze->add_option("--bobs", abobs, "bob count");
    analyze->add_option("--xi", axi, "max submessage size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (codec->parsed()) return cmd_codec(spec_id, mode, count, full_length, seed, out_dir, verify_file);
        if (pathfind->parsed()) {
            int gw = 20, gh = 20;
            if (sscanf(grid_spec.c_str(), "%dx%d", &gw, &gh) != 2) {
                std::cerr << "bad --grid, expected WxH\n";
                return kConfig;
            }
            return cmd_pathfind(graph_file, gw, gh, bobs, n0, seed, out_dir);
        }
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir, threads);
        if (analyze->parsed()) return cmd_analyze(amode, ak, amu0, an0, aeta, abobs, axi, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}

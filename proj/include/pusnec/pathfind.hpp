#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pusnec/ffield.hpp"
#include "pusnec/rng.hpp"

namespace pusnec {

struct PathfindFailure : FieldError {
    int failing_bob = -1;
    explicit PathfindFailure(const std::string& what, int bob = -1) : FieldError(what), failing_bob(bob) {}
};
struct DisconnectedGraph : FieldError {
    using FieldError::FieldError;
};

enum class Role { alice, charlie, bob };

struct RealNode {
    int id = 0;
    double x = 0, y = 0;
    Role role = Role::charlie;
};

// Virtual grid: integer lattice with diagonal (X-shaped) links, at most four
// per node. Terminals sit off-lattice and bridge the two diagonal parity
// classes through links to their nearest grid nodes.
class XHopGrid {
public:
    // Builds a grid covering the real node cloud; every virtual node must
    // claim a distinct real node within grid_constant or be removed.
    static XHopGrid build(const std::vector<RealNode>& nodes, int alice_id, const std::vector<int>& bob_ids,
                          double grid_constant);

    int width() const { return width_; }
    int height() const { return height_; }
    bool present(int gx, int gy) const;
    int grid_index(int gx, int gy) const { return gy * width_ + gx; }
    int assigned_real(int gx, int gy) const;

    int alice_real_id() const { return alice_id_; }
    const std::vector<int>& bob_real_ids() const { return bob_ids_; }          // sorted near-to-far
    const std::vector<std::pair<int, int>>& terminal_cells() const { return term_cells_; }  // [0]=alice
    const std::vector<std::vector<int>>& terminal_neighbors() const { return term_neighbors_; }

    double grid_constant() const { return grid_constant_; }
    double origin_x() const { return ox_; }
    double origin_y() const { return oy_; }
    int removed_nodes() const { return removed_; }

private:
    int width_ = 0, height_ = 0;
    double ox_ = 0, oy_ = 0, grid_constant_ = 1;
    std::vector<int> assigned_;  // real id per cell, -1 = removed
    int alice_id_ = -1;
    std::vector<int> bob_ids_;
    std::vector<std::pair<int, int>> term_cells_;
    std::vector<std::vector<int>> term_neighbors_;  // grid node ids, nearest first, up to 8
    int removed_ = 0;
};

struct GraphNode {
    int id = 0;
    double x = 0, y = 0;
    Role role = Role::charlie;
};
struct GraphLink {
    int src = 0, dst = 0;
};

struct MulticastGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphLink> links;                      // directed, oriented away from Alice
    int alice = -1;
    std::vector<int> bobs;                             // in designation order (Bob 1..N)
    std::vector<std::vector<std::vector<int>>> paths;  // per bob: n0 node-id sequences
    int n0 = 0;
    int n1 = 0;

    int indegree(int node) const;
    int max_flow(int from, int to) const;  // unit link capacities
};

// RAPUS for one Bob against an established graph; returns n0 link-disjoint
// Alice->Bob paths as grid-node sequences (terminal sentinels included).
struct RapusResult {
    std::vector<std::vector<int>> paths;
    int new_links = 0;
};

class PathFinder {
public:
    PathFinder(const XHopGrid& grid, int n0, uint64_t seed);

    // Full main flow over all Bobs; throws PathfindFailure naming the Bob.
    MulticastGraph run();

    // Single-Bob search against the current established graph (exposed for
    // tests and the certificate tooling).
    RapusResult rapus(int bob_index);
    void commit(int bob_index, const RapusResult& r);

private:
    struct LinkKey {
        int a, b;  // undirected, a < b
        bool operator<(const LinkKey& o) const { return a != o.a ? a < o.a : b < o.b; }
        bool operator==(const LinkKey&) const = default;
    };
    static LinkKey key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

    int alice_node() const { return term_base_; }
    int bob_node(int bob_index) const { return term_base_ + 1 + bob_index; }
    bool is_terminal(int node) const { return node >= term_base_; }
    std::vector<int> neighbors(int node) const;
    std::pair<double, double> node_pos(int node) const;

    struct SearchPath {
        std::vector<int> nodes;
        int new_links = 0;
        int hops = 0;
        int turns = 0;
        bool found = false;
    };
    SearchPath best_path(int from, int to, const std::vector<LinkKey>& extra_taboo,
                         const std::vector<std::pair<int, int>>& extra_oriented);
    std::vector<std::vector<int>> support_rings(int bob_index) const;

    const XHopGrid& grid_;
    int n0_;
    Rng rng_;
    int term_base_;
    // established state
    std::vector<std::pair<int, int>> est_links_;  // directed
    std::vector<char> est_node_;                  // membership flags
    std::vector<int> est_indeg_;
    std::vector<LinkKey> taboo_;  // per-bob scratch, rebuilt in rapus
    MulticastGraph out_;
    std::vector<char> bob_done_;
};

MulticastGraph multicast_pathfind(const XHopGrid& grid, int n0, uint64_t seed);

// Substitutes assigned real node ids and runs the collinear smoothing pass
// over branch-free chains of degree-2 Charlies.
MulticastGraph map_to_real(const MulticastGraph& virt, const XHopGrid& grid, const std::vector<RealNode>& nodes);

// Plain text graph I/O: node/link/path records.
void save_graph(const MulticastGraph& g, const std::string& path);
MulticastGraph load_graph(const std::string& path);

// Synthetic uniform node cloud covering a w x h grid (ids 0.., alice center-left,
// bobs spread on the right half), for the batch CLI.
std::vector<RealNode> synthetic_cloud(int w, int h, int n_bobs, uint64_t seed);

}  // namespace pusnec

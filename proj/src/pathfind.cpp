#include "pusnec/pathfind.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace pusnec {

namespace {

double dist2(double ax, double ay, double bx, double by) {
    double dx = ax - bx, dy = ay - by;
    return dx * dx + dy * dy;
}

}  // namespace

XHopGrid XHopGrid::build(const std::vector<RealNode>& nodes, int alice_id, const std::vector<int>& bob_ids,
                         double grid_constant) {
    XHopGrid g;
    g.grid_constant_ = grid_constant;
    if (nodes.empty()) throw FieldError("build_grid: empty node set");
    double minx = nodes[0].x, maxx = nodes[0].x, miny = nodes[0].y, maxy = nodes[0].y;
    for (const RealNode& n : nodes) {
        minx = std::min(minx, n.x);
        maxx = std::max(maxx, n.x);
        miny = std::min(miny, n.y);
        maxy = std::max(maxy, n.y);
    }
    g.ox_ = minx;
    g.oy_ = miny;
    g.width_ = static_cast<int>(std::floor((maxx - minx) / grid_constant)) + 1;
    g.height_ = static_cast<int>(std::floor((maxy - miny) / grid_constant)) + 1;
    g.assigned_.assign(static_cast<size_t>(g.width_) * g.height_, -1);

    const RealNode* alice = nullptr;
    std::vector<const RealNode*> bobs;
    std::vector<const RealNode*> charlies;
    for (const RealNode& n : nodes) {
        if (n.id == alice_id) alice = &n;
        else if (std::find(bob_ids.begin(), bob_ids.end(), n.id) != bob_ids.end()) bobs.push_back(&n);
        else charlies.push_back(&n);
    }
    if (!alice || bobs.size() != bob_ids.size()) throw FieldError("build_grid: alice/bob ids not in node set");

    // each virtual node claims the closest unassigned candidate within the
    // grid constant; unassignable nodes are removed with their links
    std::vector<char> used(charlies.size(), 0);
    for (int gy = 0; gy < g.height_; ++gy) {
        for (int gx = 0; gx < g.width_; ++gx) {
            double cx = g.ox_ + gx * grid_constant, cy = g.oy_ + gy * grid_constant;
            int best = -1;
            double bestd = grid_constant * grid_constant;
            for (size_t i = 0; i < charlies.size(); ++i) {
                if (used[i]) continue;
                double d = dist2(cx, cy, charlies[i]->x, charlies[i]->y);
                if (d <= bestd + 1e-12 && (best < 0 || d < bestd)) {
                    best = static_cast<int>(i);
                    bestd = d;
                }
            }
            if (best >= 0) {
                used[static_cast<size_t>(best)] = 1;
                g.assigned_[static_cast<size_t>(g.grid_index(gx, gy))] = charlies[static_cast<size_t>(best)]->id;
            } else {
                ++g.removed_;
            }
        }
    }

    g.alice_id_ = alice_id;
    // bobs numbered from closest to farthest from Alice
    std::vector<const RealNode*> sorted_bobs = bobs;
    std::sort(sorted_bobs.begin(), sorted_bobs.end(), [&](const RealNode* a, const RealNode* b) {
        double da = dist2(a->x, a->y, alice->x, alice->y);
        double db = dist2(b->x, b->y, alice->x, alice->y);
        return da != db ? da < db : a->id < b->id;
    });
    for (const RealNode* b : sorted_bobs) g.bob_ids_.push_back(b->id);

    auto snap = [&](const RealNode* t) {
        int gx = static_cast<int>(std::lround((t->x - g.ox_) / grid_constant));
        int gy = static_cast<int>(std::lround((t->y - g.oy_) / grid_constant));
        gx = std::clamp(gx, 0, g.width_ - 1);
        gy = std::clamp(gy, 0, g.height_ - 1);
        return std::pair<int, int>{gx, gy};
    };
    auto neighbors_of = [&](const RealNode* t) {
        std::vector<std::pair<double, int>> cand;
        auto [sx, sy] = snap(t);
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                int gx = sx + dx, gy = sy + dy;
                if (gx < 0 || gy < 0 || gx >= g.width_ || gy >= g.height_) continue;
                if (!g.present(gx, gy)) continue;
                double cx = g.ox_ + gx * grid_constant, cy = g.oy_ + gy * grid_constant;
                cand.push_back({dist2(t->x, t->y, cx, cy), g.grid_index(gx, gy)});
            }
        }
        std::sort(cand.begin(), cand.end());
        std::vector<int> out;
        for (size_t i = 0; i < cand.size() && i < 8; ++i) out.push_back(cand[i].second);
        return out;
    };

    g.term_cells_.push_back(snap(alice));
    g.term_neighbors_.push_back(neighbors_of(alice));
    for (int id : g.bob_ids_) {
        const RealNode* b = nullptr;
        for (const RealNode* p : bobs)
            if (p->id == id) b = p;
        g.term_cells_.push_back(snap(b));
        g.term_neighbors_.push_back(neighbors_of(b));
    }

    // connectivity check over grid + terminal links
    {
        int total = g.width_ * g.height_ + 1 + static_cast<int>(g.bob_ids_.size());
        std::vector<char> vis(static_cast<size_t>(total), 0);
        std::queue<int> bfs;
        int alice_node = g.width_ * g.height_;
        bfs.push(alice_node);
        vis[static_cast<size_t>(alice_node)] = 1;
        while (!bfs.empty()) {
            int u = bfs.front();
            bfs.pop();
            std::vector<int> nb;
            if (u >= g.width_ * g.height_) {
                nb = g.term_neighbors_[static_cast<size_t>(u - g.width_ * g.height_)];
            } else {
                int gx = u % g.width_, gy = u / g.width_;
                if (g.present(gx, gy)) {
                    for (int dy : {-1, 1})
                        for (int dx : {-1, 1}) {
                            int nx = gx + dx, ny = gy + dy;
                            if (nx >= 0 && ny >= 0 && nx < g.width_ && ny < g.height_ && g.present(nx, ny))
                                nb.push_back(g.grid_index(nx, ny));
                        }
                    for (size_t t = 0; t < g.term_neighbors_.size(); ++t)
                        if (std::find(g.term_neighbors_[t].begin(), g.term_neighbors_[t].end(), u) !=
                            g.term_neighbors_[t].end())
                            nb.push_back(g.width_ * g.height_ + static_cast<int>(t));
                }
            }
            for (int v : nb) {
                if (!vis[static_cast<size_t>(v)]) {
                    vis[static_cast<size_t>(v)] = 1;
                    bfs.push(v);
                }
            }
        }
        for (size_t t = 0; t < g.bob_ids_.size(); ++t) {
            if (!vis[static_cast<size_t>(g.width_ * g.height_ + 1 + static_cast<int>(t))])
                throw DisconnectedGraph("build_grid: a Bob is unreachable from Alice after pruning");
        }
    }
    return g;
}

bool XHopGrid::present(int gx, int gy) const {
    if (gx < 0 || gy < 0 || gx >= width_ || gy >= height_) return false;
    return assigned_[static_cast<size_t>(grid_index(gx, gy))] >= 0;
}

int XHopGrid::assigned_real(int gx, int gy) const {
    return assigned_[static_cast<size_t>(grid_index(gx, gy))];
}

int MulticastGraph::indegree(int node) const {
    int d = 0;
    for (const GraphLink& l : links)
        if (l.dst == node) ++d;
    return d;
}

int MulticastGraph::max_flow(int from, int to) const {
    // unit-capacity Edmonds-Karp on the directed link set
    std::map<std::pair<int, int>, int> cap;
    std::map<int, std::vector<int>> adj;
    for (const GraphLink& l : links) {
        cap[{l.src, l.dst}] += 1;
        adj[l.src].push_back(l.dst);
        adj[l.dst].push_back(l.src);  // residual
    }
    int flow = 0;
    for (;;) {
        std::map<int, int> parent;
        std::queue<int> bfs;
        bfs.push(from);
        parent[from] = from;
        while (!bfs.empty() && !parent.count(to)) {
            int u = bfs.front();
            bfs.pop();
            for (int v : adj[u]) {
                if (parent.count(v)) continue;
                auto it = cap.find({u, v});
                if (it == cap.end() || it->second <= 0) continue;
                parent[v] = u;
                bfs.push(v);
            }
        }
        if (!parent.count(to)) break;
        int v = to;
        while (v != from) {
            int u = parent[v];
            cap[{u, v}] -= 1;
            cap[{v, u}] += 1;
            v = u;
        }
        ++flow;
    }
    return flow;
}

PathFinder::PathFinder(const XHopGrid& grid, int n0, uint64_t seed)
    : grid_(grid), n0_(n0), rng_(seed, 0x5041544846ULL), term_base_(grid.width() * grid.height()) {
    int total = term_base_ + 1 + static_cast<int>(grid.bob_real_ids().size());
    est_node_.assign(static_cast<size_t>(total), 0);
    est_indeg_.assign(static_cast<size_t>(total), 0);
    est_node_[static_cast<size_t>(alice_node())] = 1;
    bob_done_.assign(grid.bob_real_ids().size(), 0);
    out_.n0 = n0;
    out_.paths.resize(grid.bob_real_ids().size());
}

std::vector<int> PathFinder::neighbors(int node) const {
    std::vector<int> nb;
    if (is_terminal(node)) {
        return grid_.terminal_neighbors()[static_cast<size_t>(node - term_base_)];
    }
    int gx = node % grid_.width(), gy = node / grid_.width();
    for (int dy : {-1, 1})
        for (int dx : {-1, 1}) {
            int nx = gx + dx, ny = gy + dy;
            if (grid_.present(nx, ny)) nb.push_back(grid_.grid_index(nx, ny));
        }
    for (size_t t = 0; t < grid_.terminal_neighbors().size(); ++t) {
        const std::vector<int>& tn = grid_.terminal_neighbors()[t];
        if (std::find(tn.begin(), tn.end(), node) != tn.end()) nb.push_back(term_base_ + static_cast<int>(t));
    }
    return nb;
}

std::pair<double, double> PathFinder::node_pos(int node) const {
    if (is_terminal(node)) {
        auto [gx, gy] = grid_.terminal_cells()[static_cast<size_t>(node - term_base_)];
        return {grid_.origin_x() + gx * grid_.grid_constant(), grid_.origin_y() + gy * grid_.grid_constant()};
    }
    int gx = node % grid_.width(), gy = node / grid_.width();
    return {grid_.origin_x() + gx * grid_.grid_constant(), grid_.origin_y() + gy * grid_.grid_constant()};
}

std::vector<std::vector<int>> PathFinder::support_rings(int bob_index) const {
    // concentric squares around the Bob's snapped cell; each ring lists the
    // established-graph nodes it contains. Expanding outward lets later
    // paths fall back to farther supports when the taboo list blocks the
    // nearest ones; the final ring is Alice herself (direct search).
    auto [bx, by] = grid_.terminal_cells()[static_cast<size_t>(1 + bob_index)];
    int maxr = std::max(grid_.width(), grid_.height());
    auto on_established = [&](int node) { return est_node_[static_cast<size_t>(node)] != 0; };
    std::vector<std::vector<int>> rings;
    for (int r = 1; r <= maxr; ++r) {
        std::vector<int> found;
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                int gx = bx + dx, gy = by + dy;
                if (grid_.present(gx, gy) && on_established(grid_.grid_index(gx, gy)))
                    found.push_back(grid_.grid_index(gx, gy));
            }
        }
        if (!found.empty()) rings.push_back(std::move(found));
    }
    rings.push_back({alice_node()});
    return rings;
}

PathFinder::SearchPath PathFinder::best_path(int from, int to, const std::vector<LinkKey>& extra_taboo,
                                             const std::vector<std::pair<int, int>>& extra_oriented) {
    // lexicographic Dijkstra over (new links, hops, turns) with a seeded
    // hash tiebreak; state = (node, incoming direction)
    struct Cost {
        int nl, hops, turns;
        uint64_t tie;
        bool operator>(const Cost& o) const {
            if (nl != o.nl) return nl > o.nl;
            if (hops != o.hops) return hops > o.hops;
            if (turns != o.turns) return turns > o.turns;
            return tie > o.tie;
        }
    };
    const int ndirs = 5;  // 4 diagonals + terminal/start
    auto dir_of = [&](int u, int v) {
        if (is_terminal(u) || is_terminal(v)) return 4;
        int ux = u % grid_.width(), uy = u / grid_.width();
        int vx = v % grid_.width(), vy = v / grid_.width();
        int dx = vx - ux, dy = vy - uy;
        return (dx > 0 ? 1 : 0) + (dy > 0 ? 2 : 0);
    };
    std::set<LinkKey> taboo(taboo_.begin(), taboo_.end());
    taboo.insert(extra_taboo.begin(), extra_taboo.end());
    std::set<std::pair<int, int>> est(est_links_.begin(), est_links_.end());
    est.insert(extra_oriented.begin(), extra_oriented.end());
    std::vector<int> extra_indeg(est_indeg_.size(), 0);
    for (const auto& [u, v] : extra_oriented)
        if (!std::count(est_links_.begin(), est_links_.end(), std::pair<int, int>{u, v}))
            ++extra_indeg[static_cast<size_t>(v)];

    const int nstates = (term_base_ + 1 + static_cast<int>(grid_.bob_real_ids().size())) * ndirs;
    std::vector<Cost> best(static_cast<size_t>(nstates), Cost{INT32_MAX, 0, 0, 0});
    std::vector<int> prev(static_cast<size_t>(nstates), -1);
    using QE = std::pair<Cost, int>;
    auto cmp = [](const QE& a, const QE& b) { return a.first > b.first; };
    std::priority_queue<QE, std::vector<QE>, decltype(cmp)> pq(cmp);
    uint64_t salt = rng_.next();
    auto tie_hash = [&](int state) {
        uint64_t z = salt ^ (static_cast<uint64_t>(state) * 0x9e3779b97f4a7c15ULL);
        z ^= z >> 29;
        z *= 0xbf58476d1ce4e5b9ULL;
        return z ^ (z >> 32);
    };
    int s0 = from * ndirs + 4;
    best[static_cast<size_t>(s0)] = Cost{0, 0, 0, tie_hash(s0)};
    pq.push({best[static_cast<size_t>(s0)], s0});
    std::vector<char> done(static_cast<size_t>(nstates), 0);
    while (!pq.empty()) {
        auto [c, s] = pq.top();
        pq.pop();
        if (done[static_cast<size_t>(s)]) continue;
        done[static_cast<size_t>(s)] = 1;
        int u = s / ndirs, din = s % ndirs;
        if (u == to) break;
        if (is_terminal(u) && u != from) continue;  // terminals do not relay
        for (int v : neighbors(u)) {
            LinkKey k = key(u, v);
            if (taboo.count(k)) continue;
            if (is_terminal(v) && v != to) continue;
            bool in_est = est.count({u, v}) > 0;
            bool reversed = est.count({v, u}) > 0;
            if (reversed) continue;  // links carry flow one way
            if (!in_est && !is_terminal(v) && v != to) {
                if (est_indeg_[static_cast<size_t>(v)] + extra_indeg[static_cast<size_t>(v)] >= 2) continue;
            }
            int dout = dir_of(u, v);
            Cost nc = c;
            nc.nl += in_est ? 0 : 1;
            nc.hops += 1;
            nc.turns += (din != 4 && dout != 4 && din != dout) ? 1 : 0;
            int ns = v * ndirs + dout;
            nc.tie = tie_hash(ns);
            if (best[static_cast<size_t>(ns)].nl == INT32_MAX || best[static_cast<size_t>(ns)] > nc) {
                best[static_cast<size_t>(ns)] = nc;
                prev[static_cast<size_t>(ns)] = s;
                pq.push({nc, ns});
            }
        }
    }
    SearchPath sp;
    int goal = -1;
    Cost gc{INT32_MAX, 0, 0, 0};
    for (int d = 0; d < ndirs; ++d) {
        int s = to * ndirs + d;
        if (best[static_cast<size_t>(s)].nl != INT32_MAX && (goal < 0 || gc > best[static_cast<size_t>(s)])) {
            goal = s;
            gc = best[static_cast<size_t>(s)];
        }
    }
    if (goal < 0) return sp;
    std::vector<int> rev_nodes;
    for (int s = goal; s >= 0; s = prev[static_cast<size_t>(s)]) rev_nodes.push_back(s / ndirs);
    std::reverse(rev_nodes.begin(), rev_nodes.end());
    // reject degenerate walks that reuse an undirected link
    std::set<LinkKey> seen;
    for (size_t i = 0; i + 1 < rev_nodes.size(); ++i) {
        if (!seen.insert(key(rev_nodes[i], rev_nodes[i + 1])).second) return sp;
    }
    sp.nodes = std::move(rev_nodes);
    sp.new_links = gc.nl;
    sp.hops = gc.hops;
    sp.turns = gc.turns;
    sp.found = true;
    return sp;
}

RapusResult PathFinder::rapus(int bob_index) {
    RapusResult result;
    taboo_.clear();
    int bob = bob_node(bob_index);
    std::vector<std::pair<int, int>> accepted_links;
    std::vector<std::vector<int>> rings = support_rings(bob_index);
    for (int p = 0; p < n0_; ++p) {
        SearchPath best_sp;
        bool have = false;
        for (const std::vector<int>& supports : rings) {
            if (have) break;  // nearest connecting ring wins
        for (int v : supports) {
            SearchPath cand;
            if (v == alice_node()) {
                cand = best_path(alice_node(), bob, {}, accepted_links);
            } else {
                SearchPath leg_b = best_path(v, bob, {}, accepted_links);
                if (!leg_b.found) continue;
                std::vector<LinkKey> leg_b_keys;
                std::vector<std::pair<int, int>> oriented = accepted_links;
                for (size_t i = 0; i + 1 < leg_b.nodes.size(); ++i) {
                    leg_b_keys.push_back(key(leg_b.nodes[i], leg_b.nodes[i + 1]));
                    oriented.push_back({leg_b.nodes[i], leg_b.nodes[i + 1]});
                }
                SearchPath leg_a = best_path(alice_node(), v, leg_b_keys, oriented);
                if (!leg_a.found) continue;
                cand.found = true;
                cand.nodes = leg_a.nodes;
                cand.nodes.insert(cand.nodes.end(), leg_b.nodes.begin() + 1, leg_b.nodes.end());
                cand.new_links = leg_a.new_links + leg_b.new_links;
                cand.hops = leg_a.hops + leg_b.hops;
                cand.turns = leg_a.turns + leg_b.turns;
                // joint legs may still collide on a link; drop such candidates
                std::set<LinkKey> seen;
                bool dup = false;
                for (size_t i = 0; i + 1 < cand.nodes.size(); ++i)
                    if (!seen.insert(key(cand.nodes[i], cand.nodes[i + 1])).second) dup = true;
                if (dup) continue;
            }
            if (!cand.found) continue;
            if (!have) {
                best_sp = cand;
                have = true;
                continue;
            }
            auto rank = [](const SearchPath& s) { return std::tuple<int, int, int>(s.new_links, s.turns, s.hops); };
            if (rank(cand) < rank(best_sp) || (rank(cand) == rank(best_sp) && rng_.below(2) == 0)) best_sp = cand;
        }
        }
        if (!have) throw PathfindFailure("rapus: fewer than n0 link-disjoint paths exist", bob_index);
        for (size_t i = 0; i + 1 < best_sp.nodes.size(); ++i) {
            taboo_.push_back(key(best_sp.nodes[i], best_sp.nodes[i + 1]));
            accepted_links.push_back({best_sp.nodes[i], best_sp.nodes[i + 1]});
        }
        result.paths.push_back(best_sp.nodes);
    }
    std::set<std::pair<int, int>> est(est_links_.begin(), est_links_.end());
    std::set<std::pair<int, int>> newly;
    for (const auto& l : accepted_links)
        if (!est.count(l)) newly.insert(l);
    result.new_links = static_cast<int>(newly.size());
    return result;
}

void PathFinder::commit(int bob_index, const RapusResult& r) {
    std::set<std::pair<int, int>> est(est_links_.begin(), est_links_.end());
    for (const std::vector<int>& path : r.paths) {
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            std::pair<int, int> l{path[i], path[i + 1]};
            if (est.insert(l).second) {
                est_links_.push_back(l);
                est_node_[static_cast<size_t>(l.first)] = 1;
                est_node_[static_cast<size_t>(l.second)] = 1;
                ++est_indeg_[static_cast<size_t>(l.second)];
            }
        }
    }
    out_.paths[static_cast<size_t>(bob_index)] = r.paths;
    bob_done_[static_cast<size_t>(bob_index)] = 1;
}

MulticastGraph PathFinder::run() {
    const int nbobs = static_cast<int>(grid_.bob_real_ids().size());
    std::vector<int> remaining;
    for (int i = 0; i < nbobs; ++i) remaining.push_back(i);
    std::vector<int> order;
    while (!remaining.empty()) {
        int best_bob = -1;
        RapusResult best_r;
        for (int b : remaining) {
            RapusResult r = rapus(b);
            if (best_bob < 0 || r.new_links < best_r.new_links ||
                (r.new_links == best_r.new_links && rng_.below(2) == 0)) {
                best_bob = b;
                best_r = std::move(r);
            }
        }
        commit(best_bob, best_r);
        order.push_back(best_bob);
        remaining.erase(std::find(remaining.begin(), remaining.end(), best_bob));
    }

    std::set<int> used_nodes;
    for (const auto& [u, v] : est_links_) {
        used_nodes.insert(u);
        used_nodes.insert(v);
    }
    out_.alice = alice_node();
    for (int b : order) out_.bobs.push_back(bob_node(b));
    for (int u : used_nodes) {
        GraphNode n;
        n.id = u;
        auto [x, y] = node_pos(u);
        n.x = x;
        n.y = y;
        n.role = u == alice_node() ? Role::alice : (is_terminal(u) ? Role::bob : Role::charlie);
        out_.nodes.push_back(n);
    }
    for (const auto& [u, v] : est_links_) out_.links.push_back({u, v});
    out_.n1 = 0;
    for (const auto& [u, v] : est_links_)
        if (u == alice_node()) ++out_.n1;
    // paths recorded per designation order
    std::vector<std::vector<std::vector<int>>> paths_in_order;
    for (int b : order) paths_in_order.push_back(out_.paths[static_cast<size_t>(b)]);
    out_.paths = std::move(paths_in_order);
    return out_;
}

MulticastGraph multicast_pathfind(const XHopGrid& grid, int n0, uint64_t seed) {
    PathFinder pf(grid, n0, seed);
    return pf.run();
}

MulticastGraph map_to_real(const MulticastGraph& virt, const XHopGrid& grid, const std::vector<RealNode>& nodes) {
    MulticastGraph g = virt;
    const int term_base = grid.width() * grid.height();
    auto real_of = [&](int vid) {
        if (vid >= term_base) {
            int t = vid - term_base;
            return t == 0 ? grid.alice_real_id() : grid.bob_real_ids()[static_cast<size_t>(t - 1)];
        }
        return grid.assigned_real(vid % grid.width(), vid / grid.width());
    };
    auto pos_of = [&](int rid) -> std::pair<double, double> {
        for (const RealNode& n : nodes)
            if (n.id == rid) return {n.x, n.y};
        return {0, 0};
    };
    for (GraphNode& n : g.nodes) {
        n.id = real_of(n.id);
        auto [x, y] = pos_of(n.id);
        n.x = x;
        n.y = y;
    }
    for (GraphLink& l : g.links) {
        l.src = real_of(l.src);
        l.dst = real_of(l.dst);
    }
    g.alice = real_of(g.alice);
    for (int& b : g.bobs) b = real_of(b);
    for (auto& paths : g.paths)
        for (auto& p : paths)
            for (int& v : p) v = real_of(v);

    // collinear smoothing over branch-free chains of degree-2 Charlies
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<int, std::vector<int>> in, outl;
        for (size_t i = 0; i < g.links.size(); ++i) {
            in[g.links[i].dst].push_back(static_cast<int>(i));
            outl[g.links[i].src].push_back(static_cast<int>(i));
        }
        for (const GraphNode& n : g.nodes) {
            if (n.role != Role::charlie) continue;
            if (in[n.id].size() != 1 || outl[n.id].size() != 1) continue;
            const GraphLink a = g.links[static_cast<size_t>(in[n.id][0])];
            const GraphLink b = g.links[static_cast<size_t>(outl[n.id][0])];
            auto [ux, uy] = pos_of(a.src);
            auto [wx, wy] = pos_of(b.dst);
            double cross = (n.x - ux) * (wy - n.y) - (n.y - uy) * (wx - n.x);
            double dot = (n.x - ux) * (wx - n.x) + (n.y - uy) * (wy - n.y);
            if (std::abs(cross) > 1e-9 || dot <= 0) continue;
            // drop n, connect a.src -> b.dst
            std::vector<GraphLink> nl;
            for (const GraphLink& l : g.links)
                if (!((l.src == a.src && l.dst == n.id) || (l.src == n.id && l.dst == b.dst))) nl.push_back(l);
            nl.push_back({a.src, b.dst});
            g.links = std::move(nl);
            std::vector<GraphNode> nn;
            for (const GraphNode& m : g.nodes)
                if (m.id != n.id) nn.push_back(m);
            g.nodes = std::move(nn);
            for (auto& paths : g.paths)
                for (auto& p : paths) p.erase(std::remove(p.begin(), p.end(), n.id), p.end());
            changed = true;
            break;
        }
    }
    return g;
}

void save_graph(const MulticastGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FieldError("cannot write graph: " + path);
    out << "pusnec-graph v1\n";
    out << "meta n0 " << g.n0 << " n1 " << g.n1 << " alice " << g.alice << "\n";
    for (const GraphNode& n : g.nodes) {
        const char* role = n.role == Role::alice ? "alice" : (n.role == Role::bob ? "bob" : "charlie");
        out << "node " << n.id << " " << n.x << " " << n.y << " " << role << "\n";
    }
    for (int b : g.bobs) out << "bob " << b << "\n";
    for (const GraphLink& l : g.links) out << "link " << l.src << " " << l.dst << "\n";
    for (size_t b = 0; b < g.paths.size(); ++b) {
        for (const std::vector<int>& p : g.paths[b]) {
            out << "path " << b << " " << p.size();
            for (int v : p) out << " " << v;
            out << "\n";
        }
    }
}

MulticastGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FieldError("cannot read graph: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "pusnec-graph v1") throw FieldError("bad graph header: " + path);
    MulticastGraph g;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "meta") {
            std::string kw;
            ls >> kw >> g.n0 >> kw >> g.n1 >> kw >> g.alice;
        } else if (tag == "node") {
            GraphNode n;
            std::string role;
            ls >> n.id >> n.x >> n.y >> role;
            n.role = role == "alice" ? Role::alice : (role == "bob" ? Role::bob : Role::charlie);
            g.nodes.push_back(n);
        } else if (tag == "bob") {
            int b;
            ls >> b;
            g.bobs.push_back(b);
        } else if (tag == "link") {
            GraphLink l;
            ls >> l.src >> l.dst;
            g.links.push_back(l);
        } else if (tag == "path") {
            size_t bob;
            size_t len;
            ls >> bob >> len;
            if (g.paths.size() <= bob) g.paths.resize(bob + 1);
            std::vector<int> p(len);
            for (size_t i = 0; i < len; ++i) ls >> p[i];
            g.paths[bob].push_back(std::move(p));
        }
    }
    return g;
}

std::vector<RealNode> synthetic_cloud(int w, int h, int n_bobs, uint64_t seed) {
    Rng rng(seed, 0xC10D);
    std::vector<RealNode> nodes;
    int id = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) nodes.push_back({id++, static_cast<double>(x), static_cast<double>(y), Role::charlie});
    RealNode alice{id++, 1.0 + 0.2, h / 2.0 + 0.1, Role::alice};
    nodes.push_back(alice);
    for (int b = 0; b < n_bobs; ++b) {
        double fy = (b + 1.0) / (n_bobs + 1.0);
        double fx = 0.6 + 0.35 * ((b % 3) / 2.0);
        double jitter = (rng.unit() - 0.5) * 0.3;
        nodes.push_back({id++, fx * (w - 1) + jitter, fy * (h - 1) + jitter, Role::bob});
    }
    return nodes;
}

}  // namespace pusnec

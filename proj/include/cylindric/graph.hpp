/*
 * Copyright 2026 The cylindric Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cylindric/common.hpp>

#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace cylindric {

/**
 * Finite simple graph. The edge relation is irreflexive and symmetric and is
 * stored as sorted (i, j) pairs with i < j. Values are immutable once built.
 */
class Graph {
  public:
    Graph() = default;

    Graph(std::size_t node_count, std::vector<std::pair<std::size_t, std::size_t>> edges) : n_(node_count) {
        std::set<std::pair<std::size_t, std::size_t>> canon;
        for (auto [a, b] : edges) {
            if (a >= n_ || b >= n_) throw InvalidArgument("graph edge endpoint out of range");
            if (a == b) throw InvalidArgument("graph edges must be irreflexive");
            canon.emplace(std::min(a, b), std::max(a, b));
        }
        edges_.assign(canon.begin(), canon.end());
        adj_.assign(n_, std::vector<bool>(n_, false));
        for (auto [a, b] : edges_) adj_[a][b] = adj_[b][a] = true;
    }

    std::size_t node_count() const noexcept { return n_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
    bool adjacent(std::size_t a, std::size_t b) const { return adj_[a][b]; }

    std::vector<std::size_t> neighbours(std::size_t v) const {
        std::vector<std::size_t> out;
        for (std::size_t u = 0; u < n_; ++u)
            if (adj_[v][u]) out.push_back(u);
        return out;
    }

    /// Image of the graph under a node bijection perm (perm[old] = new).
    Graph relabelled(const std::vector<std::size_t>& perm) const {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (auto [a, b] : edges_) e.emplace_back(perm[a], perm[b]);
        return Graph(n_, e);
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

    /// `graph G { i -- j; }`, one edge per line.
    std::string to_dot() const {
        std::ostringstream os;
        os << "graph G {\n";
        for (std::size_t v = 0; v < n_; ++v) os << "  " << v << ";\n";
        for (auto [a, b] : edges_) os << "  " << a << " -- " << b << ";\n";
        os << "}\n";
        return os.str();
    }

  private:
    std::size_t n_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<bool>> adj_;
};

inline Graph complete_graph(std::size_t n) {
    if (n == 0) throw InvalidArgument("complete graph needs n >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, e);
}

inline Graph cycle_graph(std::size_t k) {
    if (k == 0) throw InvalidArgument("cycle needs k >= 1");
    if (k < 3) return complete_graph(k);  // C1, C2 degenerate to K1, K2
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k);
    return Graph(k, e);
}

/// count disjoint copies of K_size.
inline Graph clique_union(std::size_t count, std::size_t size) {
    if (count == 0 || size == 0) throw InvalidArgument("clique_union needs count, size >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = i + 1; j < size; ++j) e.emplace_back(c * size + i, c * size + j);
    return Graph(count * size, e);
}

/// Nodes 0..M-1 with i ~ j iff 0 < |i-j| < N: the band graph truncated to M nodes.
inline Graph band_graph(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw InvalidArgument("band graph needs M, N >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m && j - i < n; ++j) e.emplace_back(i, j);
    return Graph(m, e);
}

/// Parses "complete:4", "cycle:5", "clique_union:2,3", "band:6,2".
inline Graph make_graph(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw InvalidArgument("graph spec must be kind:params, got '" + spec + "'");
    std::string kind = spec.substr(0, colon);
    std::vector<std::size_t> params;
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            long v = std::stol(tok);
            if (v < 0) throw InvalidArgument("negative graph parameter");
            params.push_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad graph parameter '" + tok + "'");
        }
    }
    auto need = [&](std::size_t k) {
        if (params.size() != k) throw InvalidArgument("graph kind '" + kind + "' takes " + std::to_string(k) + " parameter(s)");
    };
    if (kind == "complete") return need(1), complete_graph(params[0]);
    if (kind == "cycle") return need(1), cycle_graph(params[0]);
    if (kind == "clique_union") return need(2), clique_union(params[0], params[1]);
    if (kind == "band") return need(2), band_graph(params[0], params[1]);
    throw InvalidArgument("unknown graph kind '" + kind + "'");
}

/// True iff colouring is total on nodes and every edge has distinct endpoint colours.
inline bool is_colouring(const Graph& g, const std::map<std::size_t, std::size_t>& f) {
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (!f.count(v)) throw InvalidArgument("colouring is not total: node " + std::to_string(v) + " uncoloured");
    for (auto [a, b] : g.edges())
        if (f.at(a) == f.at(b)) return false;
    return true;
}

inline bool is_colouring(const Graph& g, const std::vector<std::size_t>& f) {
    if (f.size() != g.node_count()) throw InvalidArgument("colouring is not total");
    for (auto [a, b] : g.edges())
        if (f[a] == f[b]) return false;
    return true;
}

namespace detail {

// Colour nodes in `order`; colour classes are introduced in increasing order so
// symmetric assignments are not revisited.
inline bool colour_within(const Graph& g, const std::vector<std::size_t>& order, std::size_t idx, std::size_t k,
                          std::size_t used, std::vector<std::size_t>& col) {
    if (idx == order.size()) return true;
    std::size_t v = order[idx];
    std::size_t limit = std::min(k, used + 1);
    for (std::size_t c = 0; c < limit; ++c) {
        bool ok = true;
        for (std::size_t u = 0; u < g.node_count() && ok; ++u)
            if (g.adjacent(u, v) && col[u] == c) ok = false;
        if (!ok) continue;
        col[v] = c;
        if (colour_within(g, order, idx + 1, k, std::max(used, c + 1), col)) return true;
        col[v] = std::numeric_limits<std::size_t>::max();
    }
    return false;
}

}  // namespace detail

/// An optimal colouring (node -> colour index); empty for the empty graph.
inline std::vector<std::size_t> optimal_colouring(const Graph& g) {
    std::size_t n = g.node_count();
    if (n == 0) return {};
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.neighbours(a).size() > g.neighbours(b).size(); });

    // greedy upper bound in degree order
    std::vector<std::size_t> greedy(n, 0);
    std::vector<bool> done(n, false);
    std::size_t upper = 0;
    for (std::size_t v : order) {
        std::vector<bool> taken(n + 1, false);
        for (std::size_t u : g.neighbours(v))
            if (done[u]) taken[greedy[u]] = true;
        std::size_t c = 0;
        while (taken[c]) ++c;
        greedy[v] = c;
        done[v] = true;
        upper = std::max(upper, c + 1);
    }

    std::vector<std::size_t> best = greedy;
    for (std::size_t k = upper - 1; k >= 1; --k) {
        std::vector<std::size_t> col(n, std::numeric_limits<std::size_t>::max());
        if (!detail::colour_within(g, order, 0, k, 0, col)) break;
        best = col;
    }
    return best;
}

/// Exact chromatic number; 0 for the graph with no nodes.
inline std::size_t chromatic_number(const Graph& g) {
    auto col = optimal_colouring(g);
    std::size_t k = 0;
    for (auto c : col) k = std::max(k, c + 1);
    return k;
}

inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

/// Length of the shortest cycle, or kInfinity for forests.
inline std::size_t girth(const Graph& g) {
    std::size_t best = kInfinity;
    std::size_t n = g.node_count();
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> dist(n, kInfinity), parent(n, kInfinity);
        std::queue<std::size_t> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop();
            for (std::size_t u : g.neighbours(v)) {
                if (dist[u] == kInfinity) {
                    dist[u] = dist[v] + 1;
                    parent[u] = v;
                    q.push(u);
                } else if (parent[v] != u) {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    return best;
}

inline std::string natural_or_inf(std::size_t v) { return v == kInfinity ? "inf" : std::to_string(v); }

}  // namespace cylindric

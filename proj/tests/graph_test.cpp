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

#include <cylindric/graph.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cylindric;

namespace {

// Oracle: try every assignment of k colours, smallest k first.
std::size_t brute_chromatic(const Graph& g) {
    std::size_t n = g.node_count();
    if (n == 0) return 0;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> f(n, 0);
        while (true) {
            if (is_colouring(g, f)) return k;
            std::size_t p = 0;
            while (p < n && ++f[p] == k) f[p++] = 0;
            if (p == n) break;
        }
    }
    return n;
}

// Oracle: shortest u-v path avoiding edge uv, plus one, minimised over edges.
std::size_t edge_removal_girth(const Graph& g) {
    std::size_t best = kInfinity;
    for (auto [u, v] : g.edges()) {
        std::vector<std::size_t> dist(g.node_count(), kInfinity);
        std::vector<std::size_t> q{u};
        dist[u] = 0;
        for (std::size_t h = 0; h < q.size(); ++h) {
            std::size_t x = q[h];
            for (std::size_t y : g.neighbours(x)) {
                if ((x == u && y == v) || (x == v && y == u)) continue;
                if (dist[y] == kInfinity) {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        if (dist[v] != kInfinity) best = std::min(best, dist[v] + 1);
    }
    return best;
}

Graph random_graph(std::mt19937& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) e.emplace_back(i, j);
    return Graph(n, e);
}

}  // namespace

TEST(Graph, Generators) {
    EXPECT_EQ(complete_graph(3).edges().size(), 3u);
    auto cu = clique_union(2, 3);
    EXPECT_EQ(cu.node_count(), 6u);
    EXPECT_EQ(cu.edges().size(), 6u);
    EXPECT_FALSE(cu.adjacent(2, 3));

    auto band = band_graph(6, 2);
    std::vector<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j)
            if (j - i > 0 && j - i < 2) expected.emplace_back(i, j);
    EXPECT_EQ(band.edges(), expected);
}

TEST(Graph, MakeGraphParses) {
    EXPECT_EQ(make_graph("complete:4"), complete_graph(4));
    EXPECT_EQ(make_graph("clique_union:2,3"), clique_union(2, 3));
    EXPECT_EQ(make_graph("band:6,2"), band_graph(6, 2));
    EXPECT_THROW(make_graph("complete:0"), InvalidArgument);
    EXPECT_THROW(make_graph("clique_union:0,3"), InvalidArgument);
    EXPECT_THROW(make_graph("wheel:5"), InvalidArgument);
    EXPECT_THROW(make_graph("complete"), InvalidArgument);
}

TEST(Graph, RejectsBadEdges) {
    EXPECT_THROW(Graph(2, {{0, 0}}), InvalidArgument);
    EXPECT_THROW(Graph(2, {{0, 2}}), InvalidArgument);
}

TEST(Graph, ChromaticNumberExamples) {
    for (std::size_t n = 1; n <= 6; ++n) { EXPECT_EQ(chromatic_number(complete_graph(n)), n); }
    EXPECT_EQ(chromatic_number(clique_union(4, 3)), 3u);
    EXPECT_EQ(chromatic_number(cycle_graph(5)), brute_chromatic(cycle_graph(5)));
    EXPECT_EQ(chromatic_number(cycle_graph(5)), 3u);
    EXPECT_EQ(chromatic_number(Graph(0, {})), 0u);
    EXPECT_EQ(chromatic_number(Graph(3, {})), 1u);
}

TEST(Graph, ChromaticNumberMatchesBruteForce) {
    std::mt19937 rng(7);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 1 + rng() % 8;
        auto g = random_graph(rng, n, 0.5);
        std::size_t chi = chromatic_number(g);
        EXPECT_EQ(chi, brute_chromatic(g));
        auto col = optimal_colouring(g);
        EXPECT_TRUE(is_colouring(g, col));
        std::size_t used = 0;
        for (auto c : col) used = std::max(used, c + 1);
        EXPECT_EQ(used, chi);
    }
}

TEST(Graph, ChromaticNumberInvariantUnderRelabelling) {
    std::mt19937 rng(11);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 2 + rng() % 9;
        auto g = random_graph(rng, n, 0.4);
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_EQ(chromatic_number(g), chromatic_number(g.relabelled(perm)));
    }
}

TEST(Graph, Girth) {
    EXPECT_EQ(girth(complete_graph(3)), 3u);
    EXPECT_EQ(girth(band_graph(6, 2)), kInfinity);
    EXPECT_EQ(girth(cycle_graph(7)), 7u);
    EXPECT_EQ(natural_or_inf(girth(band_graph(6, 2))), "inf");
    for (std::size_t s = 1; s <= 4; ++s)
        EXPECT_EQ(girth(clique_union(3, s)), s >= 3 ? 3u : kInfinity) << "size " << s;
}

TEST(Graph, GirthMatchesEdgeRemovalOracle) {
    std::mt19937 rng(3);
    for (int t = 0; t < 60; ++t) {
        auto g = random_graph(rng, 2 + rng() % 9, 0.3);
        EXPECT_EQ(girth(g), edge_removal_girth(g));
    }
}

TEST(Graph, IsColouring) {
    auto k2 = complete_graph(2);
    EXPECT_TRUE(is_colouring(k2, std::map<std::size_t, std::size_t>{{0, 0}, {1, 1}}));
    EXPECT_FALSE(is_colouring(k2, std::map<std::size_t, std::size_t>{{0, 4}, {1, 4}}));
    EXPECT_THROW(is_colouring(k2, std::map<std::size_t, std::size_t>{{0, 0}}), InvalidArgument);
    auto c5 = cycle_graph(5);
    for (std::size_t m = 0; m < 32; ++m) {
        std::vector<std::size_t> f(5);
        for (std::size_t v = 0; v < 5; ++v) f[v] = (m >> v) & 1U;
        EXPECT_FALSE(is_colouring(c5, f));
    }
}

TEST(Graph, DotExport) {
    auto dot = complete_graph(2).to_dot();
    EXPECT_NE(dot.find("graph G {"), std::string::npos);
    EXPECT_NE(dot.find("0 -- 1;"), std::string::npos);
}

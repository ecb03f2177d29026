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

#include <cylindric/json_io.hpp>
#include <cylindric/set_algebra.hpp>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cylindric;

namespace {

template <class T, class F>
void expect_round_trip(const T& x, F from) {
    Json j = to_json(x);
    auto text = dump_stable(j);
    T y = from(Json::parse(text));
    EXPECT_EQ(dump_stable(to_json(y)), text);
}

}  // namespace

TEST(Json, GraphRoundTrip) {
    for (auto& g : {complete_graph(4), cycle_graph(5), clique_union(2, 3), Graph(1, {})}) {
        expect_round_trip(g, graph_from_json);
        EXPECT_EQ(graph_from_json(to_json(g)), g);
    }
}

TEST(Json, AtomStructureRoundTrip) {
    std::mt19937 rng(41);
    for (int k = 0; k < 30; ++k) {
        auto S = testsupport::random_structure(rng, 3, 1 + rng() % 6);
        auto back = atom_structure_from_json(Json::parse(dump_stable(to_json(S))));
        EXPECT_EQ(back, S);
        EXPECT_EQ(dump_stable(to_json(back)), dump_stable(to_json(S)));
    }
    auto M = basic_matrices(alpha_of_graph(complete_graph(3), 3), 3);
    ASSERT_FALSE(M.names().empty());
    auto back = atom_structure_from_json(to_json(M));
    EXPECT_EQ(back, M);
    EXPECT_EQ(back.names(), M.names());
}

TEST(Json, RaAtomStructureRoundTrip) {
    for (auto& R : {rybh_algebra(2), alpha_of_graph(complete_graph(3), 3), split_atom(rybh_algebra(2), "r:0", 2)}) {
        auto back = ra_atom_structure_from_json(to_json(R));
        EXPECT_EQ(back.names(), R.names());
        EXPECT_EQ(back.forbidden_list(), R.forbidden_list());
        EXPECT_EQ(back.converse_table(), R.converse_table());
        EXPECT_EQ(back.identity_table(), R.identity_table());
    }
}

TEST(Json, NetworkRoundTrip) {
    Network N(2, 3, {0, 1, 2, 1, 0, 2, 2, 2, 0});
    EXPECT_EQ(network_from_json(to_json(N)), N);
    expect_round_trip(N, network_from_json);
}

TEST(Json, GameResultsRoundTripAndReplay) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    AtomStructure bad(2, 2, {{{0, 0}, {1, 0}}, {{0, 0}, {1, 1}}}, {{{0, 1}, {0}}});
    for (auto* s : {&S, &bad})
        for (auto kind : {GameKind::G, GameKind::F}) {
            auto g = solve_atomic_game(*s, GameSpec{kind, 3, 2, false});
            ASSERT_NE(g.winner, Winner::unknown);
            auto back = game_result_from_json(Json::parse(dump_stable(to_json(g))));
            EXPECT_EQ(back.winner, g.winner);
            EXPECT_EQ(dump_stable(to_json(back)), dump_stable(to_json(g)));
            EXPECT_TRUE(verify_certificate(*s, back).ok);
        }
}

TEST(Json, RainbowCertificateRoundTrip) {
    RainbowStructure R(RainbowSig::plain(4, 3, 3));
    auto c = non_membership_certificate(R, 6, 10);
    ASSERT_TRUE(c);
    auto text = dump_stable(to_json(*c));
    auto back = certificate_from_json(Json::parse(text));
    EXPECT_EQ(dump_stable(to_json(back)), text);
    EXPECT_EQ(back.statement(), c->statement());
    EXPECT_TRUE(verify_certificate(R.structure(), back.game).ok);
    // same inputs, same bytes
    EXPECT_EQ(dump_stable(to_json(*non_membership_certificate(R, 6, 10))), text);
}

TEST(Json, ModelRoundTrip) {
    std::mt19937_64 rng(43);
    for (int k = 0; k < 20; ++k) {
        auto M = random_model(rng, 1 + rng() % 4, {{"P", 1}, {"R", 2}, {"T", 3}});
        EXPECT_EQ(finite_model_from_json(to_json(M)), M);
    }
}

TEST(Json, WrongSchemaAndMalformedInputRejected) {
    auto g = to_json(complete_graph(3));
    EXPECT_THROW(atom_structure_from_json(g), InvalidArgument);
    g["edges"] = "nope";
    EXPECT_THROW(graph_from_json(g), InvalidArgument);
    Json n = to_json(Network(2, 2, {0, 0, 0, 0}));
    n["labels"] = Json::array({0, 0});
    EXPECT_THROW(network_from_json(n), InvalidArgument);
}

TEST(Json, ReportCarriesWitnesses) {
    Report r{"subject", {{"C1", true, "", {}, ""}, {"C2", false, "atoms", {{"atom", 3}}, "detail"}}};
    auto j = to_json(r);
    EXPECT_EQ(j["passed"], false);
    EXPECT_EQ(j["checks"][1]["witness"]["atom"], 3);
    EXPECT_EQ(j["schema"], schema_tag("report"));
}

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

#include <cylindric/certificate.hpp>
#include <cylindric/ef_game.hpp>
#include <cylindric/lyndon.hpp>
#include <cylindric/monk.hpp>
#include <cylindric/rep_game.hpp>
#include <cylindric/set_algebra.hpp>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cylindric;
using testsupport::random_structure;
using testsupport::small_corpus;

namespace {

Atom atom_named(const AtomStructure& S, const std::string& name) {
    const auto& names = S.names();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::runtime_error("no atom " + name);
    return static_cast<Atom>(it - names.begin());
}

// Three sum-free cosets of the quartic residues colour Z_13 \ {0}.
int z13_colour(int d) {
    d = ((d % 13) + 13) % 13;
    for (int c : {1, 5, 8, 12})
        if (d == c) return 0;
    for (int c : {2, 3, 10, 11})
        if (d == c) return 1;
    return 2;
}

std::string z13_entry(int x, int y) { return x == y ? "Id" : "g0:" + std::to_string(z13_colour(y - x)); }

// The network on the given points of Z_13 read off the coloured differences.
Network z13_network(const AtomStructure& S, const std::vector<int>& pts) {
    std::size_t s = pts.size();
    Network shape(3, s, std::vector<Atom>(ipow(s, 3), 0));
    std::vector<Atom> lab(shape.tuple_count());
    for (std::size_t c = 0; c < lab.size(); ++c) {
        Tuple t = shape.tuple(c);
        int a = pts[t[0]], b = pts[t[1]], d = pts[t[2]];
        lab[c] = atom_named(S, z13_entry(a, b) + " " + z13_entry(a, d) + " " + z13_entry(b, d));
    }
    return Network(3, s, lab);
}

AtomStructure ramsey_matrices() { return basic_matrices(alpha_of_graph(clique_union(1, 1), 3), 3); }
}  // namespace

TEST(Network, SingleNodeBelowAllDiagonals) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    // atom 0 is the sequence (0,0), below d_01
    ASSERT_TRUE(S.in_diagonal(0, 1, 0));
    Network N(2, 1, {0});
    EXPECT_TRUE(is_network(S, N));
}

TEST(Network, DiagonalViolationHasWitness) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    Atom off = 0;
    while (S.in_diagonal(0, 1, off)) ++off;
    Network N(2, 1, {off});
    auto v = network_violation(S, N);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->condition, "diagonal");
    EXPECT_EQ(v->x, (Tuple{0, 0}));
}

TEST(Network, Z13PointsGiveNetworks) {
    auto S = ramsey_matrices();
    std::mt19937 rng(5);
    for (int t = 0; t < 30; ++t) {
        std::vector<int> pts(13);
        std::iota(pts.begin(), pts.end(), 0);
        std::shuffle(pts.begin(), pts.end(), rng);
        pts.resize(2 + t % 4);
        Network N = z13_network(S, pts);
        EXPECT_TRUE(is_network(S, N)) << N.to_string(S);
    }
}

TEST(Network, Z13AnswersEveryChallenge) {
    // exists can always answer from inside Z_13, so the solver must let her win
    auto S = ramsey_matrices();
    std::vector<int> pts{0, 1, 4};
    Network N = z13_network(S, pts);
    for (std::size_t c = 0; c < N.tuple_count(); ++c)
        for (std::size_t i = 0; i < 3; ++i)
            for (Atom a : S.successors(i, N.label_at(c))) {
                Tuple x = N.tuple(c);
                bool found = false;
                for (int w = 0; w < 13 && !found; ++w) {
                    std::vector<int> p3{pts[x[0]], pts[x[1]], pts[x[2]]};
                    p3[i] = w;
                    std::string name = z13_entry(p3[0], p3[1]) + " " + z13_entry(p3[0], p3[2]) + " " + z13_entry(p3[1], p3[2]);
                    found = S.name(a) == name;
                }
                EXPECT_TRUE(found) << S.name(a);
            }
    auto g = solve_atomic_game(S, GameSpec{GameKind::G, 5, 3, false});
    EXPECT_EQ(g.winner, Winner::exists);
    EXPECT_TRUE(verify_certificate(S, g).ok);
}

TEST(Network, FastAndNaiveExtensionsAgree) {
    std::mt19937 rng(3);
    std::size_t compared = 0;
    std::vector<AtomStructure> corpus{atom_structure_of(ops_on(full_space(2, 3)))};
    for (int t = 0; t < 40; ++t) corpus.push_back(random_structure(rng, 2, 3 + t % 2, 0.7));
    for (auto& S : corpus) {
        NetworkContext ctx(S);
        for (Atom a = 0; a < S.atom_count(); ++a) {
            for (auto& N : openings(ctx, a)) {
                std::size_t n = S.dim();
                Tuple x(n, 0);
                for (std::size_t i = 0; i < n; ++i)
                    for (Atom b : S.successors(i, N.label(x))) {
                        Tuple z = x;
                        z[i] = N.node_count();
                        auto fast = extensions(ctx, N, {{z, b}});
                        std::sort(fast.begin(), fast.end());
                        EXPECT_EQ(fast, naive_extensions(S, N, z, b));
                        for (auto& M : fast) EXPECT_TRUE(is_network(S, M));
                        ++compared;
                    }
                EXPECT_EQ(naive_networks(S, N.node_count(), kernel_of(S, a), a), [&] {
                    auto o = openings(ctx, a);
                    std::sort(o.begin(), o.end());
                    return o;
                }());
            }
        }
    }
    EXPECT_GT(compared, 20u);
}

TEST(Network, CanonicalFormIgnoresNodeNames) {
    auto S = ramsey_matrices();
    std::mt19937 rng(9);
    for (int t = 0; t < 20; ++t) {
        std::vector<int> pts{0, 1, 3, 7};
        Network N = z13_network(S, pts);
        auto perm = testsupport::random_perm(rng, 4);
        std::vector<std::size_t> p(perm.begin(), perm.end());
        Network M = N.renamed(p);
        EXPECT_EQ(canonical_form(N), canonical_form(M));
        EXPECT_EQ(canonical_form(canonical_form(N)), canonical_form(N));
    }
}

TEST(AtomicGame, NoRoundsIsAnExistsWin) {
    std::mt19937 rng(1);
    auto S = random_structure(rng, 2, 3);
    auto g = solve_atomic_game(S, GameSpec{GameKind::G, 3, 0, false});
    EXPECT_EQ(g.winner, Winner::exists);
    EXPECT_TRUE(verify_certificate(S, g).ok);
}

TEST(AtomicGame, FullSquareSetAlgebraSurvivesOmega) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    auto g = solve_atomic_game(S, GameSpec{GameKind::G, 3, std::nullopt, false});
    ASSERT_EQ(g.winner, Winner::exists);
    EXPECT_TRUE(verify_certificate(S, g).ok);
    EXPECT_FALSE(g.exists->table.empty());
}

TEST(AtomicGame, MissingOpeningLosesAtOnce) {
    // atom 1 lies in no T_0 class with itself, so no network holds it
    AtomStructure S(2, 2, {{{0, 0}, {1, 0}}, {{0, 0}, {1, 1}}}, {{{0, 1}, {0}}});
    auto g = solve_atomic_game(S, GameSpec{GameKind::G, 3, 1, false});
    ASSERT_EQ(g.winner, Winner::forall);
    EXPECT_EQ(g.forall->opening, 1u);
    EXPECT_TRUE(g.forall->replies.empty());
    EXPECT_TRUE(verify_certificate(S, g).ok);
}

TEST(AtomicGame, CertificatesReplay) {
    for (auto& [name, S] : small_corpus())
        for (std::size_t m = S.dim(); m <= 4; ++m)
            for (std::size_t k = 1; k <= 3; ++k)
                for (auto kind : {GameKind::G, GameKind::F}) {
                    GameSpec spec{kind, m, k, false};
                    auto g = solve_atomic_game(S, spec);
                    ASSERT_NE(g.winner, Winner::unknown) << name;
                    auto v = verify_certificate(S, g);
                    EXPECT_TRUE(v.ok) << name << " " << spec.to_string() << ": " << v.detail;
                }
}

TEST(AtomicGame, TamperedCertificateIsRejected) {
    std::mt19937 rng(21);
    bool tried = false;
    for (int t = 0; t < 50 && !tried; ++t) {
        auto S = random_structure(rng, 2, 3, 0.6);
        auto g = solve_atomic_game(S, GameSpec{GameKind::G, 3, 3, false});
        if (g.winner != Winner::forall || g.forall->replies.empty()) continue;
        tried = true;
        auto bad = g;
        bad.forall->replies.pop_back();
        EXPECT_FALSE(verify_certificate(S, bad).ok);
        auto worse = g;
        worse.spec.rounds = 1;
        if (g.rounds_used > 1) {
            EXPECT_FALSE(verify_certificate(S, worse).ok);
        }
    }
    EXPECT_TRUE(tried);
}

TEST(AtomicGame, ExistsTableTamperingIsRejected) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    auto g = solve_atomic_game(S, GameSpec{GameKind::G, 3, 3, false});
    ASSERT_EQ(g.winner, Winner::exists);
    auto bad = g;
    bad.exists->openings.erase(bad.exists->openings.begin());
    EXPECT_FALSE(verify_certificate(S, bad).ok);
}

TEST(AtomicGame, RoundMonotonicity) {
    for (auto& [name, S] : small_corpus())
        for (std::size_t m = S.dim(); m <= 4; ++m) {
            std::optional<std::size_t> first_loss;
            for (std::size_t k = 0; k <= 4; ++k) {
                auto g = solve_atomic_game(S, GameSpec{GameKind::G, m, k, false});
                if (g.winner == Winner::forall && !first_loss) first_loss = k;
                if (first_loss) {
                    EXPECT_EQ(g.winner, Winner::forall) << name << " m=" << m << " k=" << k;
                }
            }
        }
}

TEST(AtomicGame, FixpointAgreesWithRounds) {
    for (auto& [name, S] : small_corpus())
        for (std::size_t m = S.dim(); m <= 4; ++m) {
            auto w = solve_atomic_game(S, GameSpec{GameKind::G, m, std::nullopt, false});
            ASSERT_NE(w.winner, Winner::unknown);
            bool all = true;
            for (std::size_t k = 0; k <= 5; ++k)
                all &= solve_atomic_game(S, GameSpec{GameKind::G, m, k, false}).winner == Winner::exists;
            if (w.winner == Winner::exists) {
                EXPECT_TRUE(all) << name << " m=" << m;
            }
            if (w.winner == Winner::forall) {
                // the fixpoint loss is realised within the rounds it reports
                auto k = w.rounds_used;
                EXPECT_EQ(solve_atomic_game(S, GameSpec{GameKind::G, m, k, false}).winner, Winner::forall) << name;
            }
        }
}

TEST(AtomicGame, PositionalMatchesExactHistory) {
    for (auto& [name, S] : small_corpus())
        for (std::size_t m = S.dim(); m <= 3; ++m)
            for (std::size_t k = 0; k <= 3; ++k) {
                auto p = solve_atomic_game(S, GameSpec{GameKind::G, m, k, false});
                auto h = solve_atomic_game(S, GameSpec{GameKind::G, m, k, true});
                EXPECT_EQ(p.winner, h.winner) << name << " m=" << m << " k=" << k;
                EXPECT_TRUE(verify_certificate(S, h).ok) << name;
            }
}

TEST(AtomicGame, ForallNodeMonotonicityInF) {
    for (auto& [name, S] : small_corpus())
        for (std::size_t m = S.dim(); m < 4; ++m) {
            auto a = solve_atomic_game(S, GameSpec{GameKind::F, m, 3, false});
            if (a.winner != Winner::forall) continue;
            auto b = solve_atomic_game(S, GameSpec{GameKind::F, m + 1, 3, false});
            EXPECT_EQ(b.winner, Winner::forall) << name << " m=" << m;
        }
}

TEST(AtomicGame, StateCapGivesUnknown) {
    auto S = ramsey_matrices();
    GameLimits lim;
    lim.state_cap = 3;
    auto g = solve_atomic_game(S, GameSpec{GameKind::G, 5, 4, false}, lim);
    EXPECT_EQ(g.winner, Winner::unknown);
    EXPECT_NE(g.note.find("cap"), std::string::npos);
}

TEST(Scripted, RainbowFourThreeFallsToTheConeScript) {
    RainbowStructure R(RainbowSig::plain(4, 3, 3));
    auto res = scripted_forall_rainbow(R, 6, 10);
    ASSERT_TRUE(res.forall_wins) << res.note;
    EXPECT_EQ(res.game.spec.kind, GameKind::F);
    EXPECT_EQ(res.game.spec.m, 6u);
    auto v = verify_certificate(R.structure(), res.game);
    EXPECT_TRUE(v.ok) << v.detail;
}

TEST(Scripted, BalancedRainbowIsInconclusive) {
    RainbowStructure R(RainbowSig::plain(3, 3, 3));
    auto res = scripted_forall_rainbow(R, 6, 3);
    EXPECT_FALSE(res.forall_wins);
}

TEST(Scripted, DepthZeroIsInconclusive) {
    RainbowStructure R(RainbowSig::plain(4, 3, 3));
    auto res = scripted_forall_rainbow(R, 6, 0);
    EXPECT_FALSE(res.forall_wins);
    EXPECT_EQ(res.replies_explored, 0u);
}

TEST(Certificate, RainbowNonMembership) {
    RainbowStructure R(RainbowSig::plain(4, 3, 3));
    auto c = non_membership_certificate(R, 6, 10);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->claim, Claim::not_neat_embeddable);
    EXPECT_TRUE(c->verified);
    EXPECT_EQ(c->n, 3u);
    EXPECT_NE(c->statement().find("S Nr_3 CA_6"), std::string::npos);
}

TEST(Certificate, FullSetAlgebraIsSquareRepresentable) {
    auto A = ops_on(full_space(2, 3));
    for (std::size_t m = 3; m <= 5; ++m) {
        auto c = non_membership_certificate(A, m);
        ASSERT_TRUE(c.has_value());
        EXPECT_EQ(c->claim, Claim::square_representable);
        EXPECT_TRUE(c->verified);
    }
}

TEST(Certificate, TwoElementAlgebraWinsEverything) {
    auto A = ops_on(full_space(1, 3));
    ASSERT_EQ(A.atom_count(), 1u);
    auto c = non_membership_certificate(A, 4);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->claim, Claim::square_representable);
    auto S = atom_structure_of(A);
    for (std::size_t k = 0; k <= 4; ++k)
        for (auto kind : {GameKind::G, GameKind::F})
            EXPECT_EQ(solve_atomic_game(S, GameSpec{kind, 4, k, false}).winner, Winner::exists);
}

TEST(EfGame, IdentityStrategyWins) {
    for (auto& g : {complete_graph(3), cycle_graph(5), clique_union(2, 2), band_graph(2, 3)})
        for (std::size_t p = 1; p <= 3; ++p)
            for (std::size_t r = 0; r <= 4; ++r) {
                EXPECT_TRUE(ef_game(g, g, p, r).exists_wins);
                EXPECT_TRUE(ef_game(g, g, p, r, {true}).exists_wins);
            }
}

TEST(EfGame, CliqueIntoSmallerClique) {
    for (std::size_t n = 2; n <= 4; ++n) {
        EXPECT_FALSE(ef_game(complete_graph(n + 1), complete_graph(n), n + 1, n + 1).exists_wins) << n;
        EXPECT_TRUE(ef_game(complete_graph(n + 1), complete_graph(n), n + 1, n - 1).exists_wins) << n;
        // n pebbles never pin n+1 distinct nodes at once
        EXPECT_TRUE(ef_game(complete_graph(n + 1), complete_graph(n), n, 8).exists_wins) << n;
    }
}

TEST(EfGame, BackAndForthSeesMore) {
    // forth only: every node of K_2 maps into K_3
    EXPECT_TRUE(ef_game(complete_graph(2), complete_graph(3), 3, 4).exists_wins);
    EXPECT_FALSE(ef_game(complete_graph(2), complete_graph(3), 3, 4, {true}).exists_wins);
}

TEST(Lyndon, FullSetAlgebrasPass) {
    for (auto A : {ops_on(full_space(2, 2)), ops_on(full_space(2, 3)), ops_on(full_space(3, 2))}) {
        auto r = lyndon_check(atom_structure_of(A), 6, 9);
        EXPECT_TRUE(r.complete) << r.note;
        EXPECT_FALSE(r.failed_at.has_value());
        EXPECT_EQ(r.verdicts.size(), 6u);
    }
}

TEST(Lyndon, NoNetworkFailsAtOne) {
    AtomStructure S(2, 2, {{{0, 0}, {1, 0}}, {{0, 0}, {1, 1}}}, {{{0, 1}, {0}}});
    auto r = lyndon_check(S, 4, 6);
    ASSERT_TRUE(r.failed_at.has_value());
    EXPECT_EQ(*r.failed_at, 1u);
    EXPECT_TRUE(r.replay_ok);
}

TEST(Lyndon, BudgetLimitedLossIsNotARefutation) {
    // with one node forall wins G(1, 2) on any dim-2 structure needing a second node
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    auto r = lyndon_check(S, 3, 1);
    EXPECT_FALSE(r.failed_at.has_value());
    EXPECT_FALSE(r.complete);
    ASSERT_FALSE(r.verdicts.empty());
    EXPECT_TRUE(r.verdicts.back().budget_limited);
}

TEST(Lyndon, RamseyMatricesSurviveSmallK) {
    // representable on Z_13, so no failure can be found
    auto r = lyndon_check(ramsey_matrices(), 3, 8);
    EXPECT_FALSE(r.failed_at.has_value());
    EXPECT_TRUE(r.complete);
}

TEST(RepGame, TwoElementAlgebra) {
    auto A = ops_on(full_space(1, 3));
    auto p = rep_play(A);
    ASSERT_TRUE(p.exists_survived);
    auto rep = extract_representation(A, p);
    EXPECT_TRUE(rep.check.ok) << rep.check.failure;
    EXPECT_EQ(rep.image.at(A.one()).size(), p.final_network.tuple_count());
    EXPECT_EQ(rep_game(A, 3).winner, Winner::exists);
}

TEST(RepGame, FullSetAlgebraEmbeds) {
    auto A = ops_on(full_space(2, 3));
    auto p = rep_play(A);
    ASSERT_TRUE(p.exists_survived) << p.note;
    EXPECT_TRUE(p.saturated);
    std::vector<AtomSet> gens;
    for (Atom a = 0; a < 4; ++a) gens.push_back(A.atom(a));
    auto rep = extract_representation(A, p, gens);
    EXPECT_TRUE(rep.check.ok) << rep.check.failure;
    EXPECT_EQ(rep.check.elements, generated_subalgebra(A, gens).size());
    for (auto& N : {p.final_network}) EXPECT_FALSE(element_network_violation(A, N).has_value());
}

TEST(RepGame, AnswersKeepNetworks) {
    auto A = ops_on(full_space(2, 2));
    ElementNetwork N = initial_element_network(A);
    ASSERT_FALSE(element_network_violation(A, N).has_value());
    for (auto& b : A.elements())
        for (std::size_t i = 0; i < 2; ++i)
            for (auto& [ans, M] : legal_answers(A, N, RepMove{Tuple{0, 0}, i, b}, 4)) {
                EXPECT_FALSE(element_network_violation(A, M).has_value()) << to_string(ans.kind);
                for (std::size_t c = 0; c < N.tuple_count(); ++c) EXPECT_TRUE(M.label(N.tuple(c)).subset_of(N.label_at(c)));
            }
}

TEST(RepGame, BrokenHomomorphismIsCaught) {
    auto A = ops_on(full_space(2, 2));
    auto p = rep_play(A);
    ASSERT_TRUE(p.exists_survived);
    // coarsen one label so it is no longer an atom
    auto labels = p.final_network.labels();
    labels[0] = A.one();
    p.final_network = ElementNetwork(2, p.final_network.node_count(), labels);
    auto rep = extract_representation(A, p);
    EXPECT_FALSE(rep.check.ok);
}

TEST(RepGame, LosesWhereForallWinsTheAtomicGame) {
    // atom 1 is reachable from the diagonal along T_0 but not T_1-reflexive
    AtomStructure S(2, 2, {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{0, 0}}}, {{{0, 1}, {0}}});
    auto atomic = solve_atomic_game(S, GameSpec{GameKind::G, 4, 3, false});
    ASSERT_EQ(atomic.winner, Winner::forall);
    auto A = complex_algebra(S);
    bool lost = false;
    for (std::size_t k = 1; k <= 3 && !lost; ++k) lost = rep_game(A, k).winner == Winner::forall;
    EXPECT_TRUE(lost);
}

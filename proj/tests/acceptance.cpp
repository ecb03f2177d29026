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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <cylindric/cylindric.hpp>
#include <cylindric/json_io.hpp>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "corrupted_structures.hpp"
#include "test_support.hpp"

using namespace cylindric;

namespace {

// Pinned limits.
constexpr std::size_t kRainbowDepth = 10;
constexpr std::size_t kEfMax = 6;
constexpr int kRandomStructures = 100;
constexpr std::size_t kMaxRandomAtoms = 6;
constexpr int kGuardInstances = 500;
constexpr std::size_t kLyndonK = 12;
constexpr std::size_t kLyndonNodes = 3 + kLyndonK - 1;
constexpr std::size_t kLyndonStateCap = 200;
constexpr std::size_t kCorpusMaxNodes = 4;
constexpr std::size_t kCorpusMaxRounds = 4;

struct Outcome {
    bool pass = false;
    std::string detail;
};

long long w(const Check& c, const char* key) { return c.witness.at(key); }

// Recomputes the failure named by a witness directly in the complex algebra.
bool witness_holds(const FiniteBao& A, const Check& c) {
    auto i = [&] { return static_cast<std::size_t>(w(c, "i")); };
    if (c.name == "C2") {
        Atom a = static_cast<Atom>(w(c, "atom"));
        return !A.c(i(), A.atom(a)).test(a);
    }
    if (c.name == "C3") {
        AtomSet x = A.atom(static_cast<Atom>(w(c, "a"))), y = A.atom(static_cast<Atom>(w(c, "b")));
        AtomSet z = A.atom(static_cast<Atom>(w(c, "c")));
        for (auto& p : {x, y, z})
            for (auto& q : {x, y, z})
                if (A.c(i(), p & A.c(i(), q)) != (A.c(i(), p) & A.c(i(), q))) return true;
        return false;
    }
    if (c.name == "C4") {
        auto j = static_cast<std::size_t>(w(c, "j"));
        AtomSet a = A.atom(static_cast<Atom>(w(c, "atom")));
        return A.c(i(), A.c(j, a)) != A.c(j, A.c(i(), a));
    }
    if (c.name == "C6") {
        auto j = static_cast<std::size_t>(w(c, "j")), m = static_cast<std::size_t>(w(c, "m"));
        auto a = static_cast<std::size_t>(w(c, "atom"));
        return A.d(j, m).test(a) != A.c(i(), A.d(j, i()) & A.d(i(), m)).test(a);
    }
    if (c.name == "C7") {
        auto j = static_cast<std::size_t>(w(c, "j"));
        AtomSet x = A.atom(static_cast<Atom>(w(c, "b1")));
        AtomSet both = A.c(i(), A.d(i(), j) & x) & A.c(i(), A.d(i(), j) & x.complement());
        return both.test(static_cast<std::size_t>(w(c, "atom")));
    }
    return false;
}

Outcome rainbow_certificate() {
    RainbowStructure R(RainbowSig::plain(4, 3, 3));
    auto c = non_membership_certificate(R, 6, kRainbowDepth);
    if (!c) return {false, "no certificate within depth " + std::to_string(kRainbowDepth)};
    std::ostringstream os;
    os << c->statement() << ", rounds used " << c->game.rounds_used << ", replay " << (c->verified ? "ok" : "rejected");
    return {c->verified && c->claim == Claim::not_neat_embeddable, os.str()};
}

Outcome ef_cliques() {
    for (std::size_t n = 2; n <= 4; ++n)
        if (ef_game(complete_graph(n + 1), complete_graph(n), n + 1, n + 1).exists_wins)
            return {false, "exists survives K" + std::to_string(n + 1) + " vs K" + std::to_string(n)};
    for (std::size_t n = 2; n <= 4; ++n)
        for (std::size_t p = 1; p <= kEfMax; ++p)
            for (std::size_t r = 1; r <= kEfMax; ++r)
                if (!ef_game(complete_graph(n), complete_graph(n), p, r).exists_wins)
                    return {false, "forall wins K" + std::to_string(n) + " vs itself"};
    return {true, "forall wins K(n+1) vs K(n) with n+1 pairs, n = 2..4; exists wins K(n) vs K(n) for p, r <= 6"};
}

Outcome axioms() {
    std::vector<std::pair<std::string, FiniteBao>> good;
    for (std::size_t u = 1; u <= 3; ++u)
        for (std::size_t n = 1; n <= 3; ++n)
            good.emplace_back("full " + std::to_string(u) + "^" + std::to_string(n), ops_on(full_space(u, n)));
    good.emplace_back("rainbow", complex_algebra(rainbow_atom_structure(RainbowSig::plain(4, 3, 3))));
    good.emplace_back("matrices K3", complex_algebra(basic_matrices(alpha_of_graph(complete_graph(3), 3), 3)));
    good.emplace_back("matrices 2K3", complex_algebra(basic_matrices(alpha_of_graph(clique_union(2, 3), 3), 3)));
    for (auto& [name, A] : good) {
        auto r = check_ca_axioms(A);
        if (!r.passed()) return {false, name + " fails:\n" + r.to_text()};
    }
    std::string caught;
    for (auto& bad : testsupport::corrupted_structures) {
        auto A = complex_algebra(atom_structure_from_json(Json::parse(bad.json)));
        auto r = check_ca_axioms(A);
        const Check& target = r.at(bad.axiom);
        if (target.passed) return {false, std::string(bad.what) + ": " + bad.axiom + " not caught"};
        for (auto& c : r.checks)
            if (!c.passed && !witness_holds(A, c)) return {false, std::string(bad.what) + ": bad " + c.name + " witness"};
        caught += std::string(caught.empty() ? "" : ", ") + bad.axiom;
    }
    return {true, std::to_string(good.size()) + " algebras pass; corruptions caught with checked witnesses: " + caught};
}

Outcome monk_iso() {
    for (auto g : {complete_graph(3), clique_union(2, 3)})
        if (!iso_atom_structures(monk_ca_atom_structure(g, 3), basic_matrices(alpha_of_graph(g, 3), 3)))
            return {false, "direct and matrix structures differ"};
    return {true, "K3 and 2K3 direct structures match the basic matrices"};
}

Outcome complex_round_trip() {
    std::mt19937 rng(5150);
    for (int t = 0; t < kRandomStructures; ++t) {
        auto S = testsupport::random_structure(rng, 3, 1 + rng() % kMaxRandomAtoms, 0.4);
        if (!iso_atom_structures(atom_structure_of(complex_algebra(S)), S))
            return {false, "structure " + std::to_string(t) + " not recovered"};
    }
    return {true, std::to_string(kRandomStructures) + " random structures recovered up to isomorphism"};
}

Outcome guard_dual() {
    std::mt19937_64 rng(2026);
    int truths = 0;
    for (int k = 0; k < kGuardInstances; ++k) {
        auto g = testsupport::random_guard_instance(rng);
        bool lhs = eval_generalized(g.model, g.admissible, g.s, g.phi);
        bool rhs = eval(expand_with_guard(g.model, g.admissible, "G"), g.s, guard_translate(g.phi, "G", g.dim));
        if (lhs != rhs) return {false, "instance " + std::to_string(k) + ": " + to_string(g.phi)};
        truths += lhs;
    }
    return {true, std::to_string(kGuardInstances) + " instances agree, " + std::to_string(truths) + " true"};
}

Outcome rep_embedding() {
    auto A = ops_on(full_space(2, 3));
    auto p = rep_play(A);
    if (!p.exists_survived || !p.saturated) return {false, "play stopped: " + p.note};
    std::vector<AtomSet> gens;
    for (Atom a = 0; a < 4; ++a) gens.push_back(A.atom(a));
    auto rep = extract_representation(A, p, gens);
    if (!rep.check.ok) return {false, rep.check.failure};
    return {true, "embedding checked on " + std::to_string(rep.check.elements) + " elements, " +
                      std::to_string(p.final_network.node_count()) + " nodes"};
}

Outcome lyndon_failure() {
    auto S = basic_matrices(alpha_of_graph(clique_union(1, 1), 3), 3);
    auto r = lyndon_check(S, kLyndonK, kLyndonNodes, GameLimits{kLyndonStateCap});
    std::string last = r.verdicts.empty() ? "none" : "k = " + std::to_string(r.verdicts.back().k) + " " + to_string(r.verdicts.back().winner);
    if (!r.failed_at) return {false, "no failing k up to " + std::to_string(kLyndonK) + " (last verdict " + last + "; " + r.note + ")"};
    return {r.replay_ok, "fails at k = " + std::to_string(*r.failed_at) + (r.replay_ok ? ", replay ok" : ", replay rejected")};
}

Outcome split_table() {
    for (std::size_t p : {1u, 2u, 3u}) {
        auto S = split_atom(rybh_algebra(2), "r:0", p);
        if (!check_ra_atom_structure(S).passed()) return {false, "p = " + std::to_string(p) + " fails the atom axioms"};
        std::set<testsupport::NameTriple> got;
        for (auto& t : S.forbidden_list()) got.insert({S.name(t[0]), S.name(t[1]), S.name(t[2])});
        if (got != testsupport::hand_split_table(p)) return {false, "p = " + std::to_string(p) + " table differs"};
    }
    return {true, "p = 1, 2, 3 match the hand table"};
}

Outcome positional_vs_history() {
    std::size_t games = 0;
    for (auto& [name, S] : testsupport::small_corpus())
        for (std::size_t m = S.dim(); m <= kCorpusMaxNodes; ++m)
            for (std::size_t k = 0; k <= kCorpusMaxRounds; ++k) {
                auto p = solve_atomic_game(S, GameSpec{GameKind::G, m, k, false});
                auto h = solve_atomic_game(S, GameSpec{GameKind::G, m, k, true});
                ++games;
                if (p.winner != h.winner || p.winner == Winner::unknown) {
                    std::cout << dump_stable(to_json(p)) << dump_stable(to_json(h));
                    return {false, name + " m=" + std::to_string(m) + " k=" + std::to_string(k) + ": " + to_string(p.winner) +
                                       " vs " + to_string(h.winner)};
                }
            }
    return {true, std::to_string(games) + " games agree"};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rainbow non-membership certificate", rainbow_certificate},
        {"EF clique separation", ef_cliques},
        {"axiom checker", axioms},
        {"direct vs matrix structures", monk_iso},
        {"atom structure of complex algebra", complex_round_trip},
        {"guarded dual evaluation", guard_dual},
        {"representation game embedding", rep_embedding},
        {"Lyndon failure on Z_13 matrices", lyndon_failure},
        {"split atom table", split_table},
        {"positional vs exact-history games", positional_vs_history},
    };
    bool all = true;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[c].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all &= o.pass;
        std::cout << "criterion " << c + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[c].first << "  ("
                  << o.detail << ") [" << std::fixed << std::setprecision(2) << secs << " s]" << std::endl;
    }
    return all ? 0 : 1;
}

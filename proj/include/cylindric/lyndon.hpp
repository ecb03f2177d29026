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

#include <cylindric/atomic_game.hpp>

namespace cylindric {

struct LyndonVerdict {
    std::size_t k = 0;
    std::size_t m = 0;             // node budget used for this k
    Winner winner = Winner::unknown;
    bool budget_limited = false;   // m < n + k - 1, so a forall win is not conclusive
    std::size_t states = 0;
};

struct LyndonReport {
    std::vector<LyndonVerdict> verdicts;
    std::optional<std::size_t> failed_at;  // least k where forall wins with enough nodes
    std::optional<GameResult> refutation;
    bool replay_ok = false;                // refutation re-verified
    bool complete = true;                  // every k up to k_max decided without caveat
    std::string note;
};

/**
 * Bounded check of the Lyndon conditions: exists must win G_k for each
 * k <= k_max. A k-round play opens on at most n nodes and adds at most one per
 * later round, so G_k with unbounded nodes is G(n + k - 1, k). With a smaller
 * node budget an exists win still counts, while a forall win is only recorded
 * as budget-limited. Passing every k is evidence, not proof.
 */
inline LyndonReport lyndon_check(const AtomStructure& S, std::size_t k_max, std::size_t node_budget,
                                 const GameLimits& limits = {}) {
    LyndonReport rep;
    std::size_t n = S.dim();
    for (std::size_t k = 1; k <= k_max; ++k) {
        LyndonVerdict v;
        v.k = k;
        std::size_t need = n + k - 1;
        v.m = std::min(node_budget, need);
        v.budget_limited = v.m < need;
        if (v.m == 0) throw InvalidArgument("node budget must be positive");
        GameResult g = solve_atomic_game(S, GameSpec{GameKind::G, v.m, k, false}, limits);
        v.winner = g.winner;
        v.states = g.states;
        rep.verdicts.push_back(v);
        if (g.winner == Winner::unknown) {
            rep.complete = false;
            rep.note = "k = " + std::to_string(k) + ": " + g.note;
            return rep;
        }
        if (g.winner == Winner::forall) {
            if (v.budget_limited) {
                rep.complete = false;
                rep.note = "k = " + std::to_string(k) + ": forall wins only under the node budget";
                return rep;
            }
            rep.failed_at = k;
            rep.replay_ok = verify_certificate(S, g).ok;
            rep.refutation = std::move(g);
            rep.note = "Lyndon condition " + std::to_string(k) + " fails";
            return rep;
        }
    }
    rep.note = "exists wins G_k for every k <= " + std::to_string(k_max);
    return rep;
}

}  // namespace cylindric

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
#include <cylindric/rainbow.hpp>

namespace cylindric {

struct ScriptOptions {
    /// Play the tints from green_hi down instead of from green_lo up.
    bool decreasing = false;
};

struct ScriptedResult {
    bool forall_wins = false;  // false means inconclusive
    GameResult game;           // spec F(m, rounds) with the refutation tree when forall wins
    std::size_t replies_explored = 0;
    std::string note;
};

/**
 * forall's cone script: open with the cone of the first tint over the white
 * base, then demand a cone of each further tint over the same base (tuple
 * base + first apex, index n-1). Every reply of exists is followed. The
 * script never deletes nodes, so a win is a win in both G(m, .) and F(m, .).
 */
inline ScriptedResult scripted_forall_rainbow(const RainbowStructure& R, std::size_t m, std::size_t depth,
                                              const ScriptOptions& opt = {}) {
    const RainbowSig& sig = R.sig();
    const AtomStructure& S = R.structure();
    std::size_t n = sig.n();
    ScriptedResult out;
    out.game.spec = GameSpec{GameKind::F, m, std::nullopt, false};
    if (depth == 0) {
        out.note = "depth 0: no cylindrifier moves";
        return out;
    }
    std::vector<int> tints;
    for (int t = sig.green_lo(); t <= sig.green_hi(); ++t) tints.push_back(t);
    if (opt.decreasing) std::reverse(tints.begin(), tints.end());
    auto base = white_base(sig);
    Tuple ident(n);
    for (std::size_t p = 0; p < n; ++p) ident[p] = p;
    std::vector<Atom> cone_atoms;
    for (int t : tints) {
        auto a = R.atom_of(cone(sig, base, t), ident);
        if (!a) throw InvalidArgument("cone over the white base is not an atom");
        cone_atoms.push_back(*a);
    }

    NetworkContext ctx(S);
    bool inconclusive = false;
    std::size_t longest = 0;
    // forall's move number t (1-based) on network N; nullptr if exists escapes
    std::function<ForallNodePtr(const Network&, std::size_t)> play = [&](const Network& N, std::size_t t) -> ForallNodePtr {
        if (t >= cone_atoms.size() || t > depth) {
            inconclusive = true;
            return nullptr;
        }
        auto node = std::make_shared<ForallNode>();
        node->position = {N};
        node->move = Move{0, std::nullopt, ident, n - 1, cone_atoms[t]};
        std::vector<Network> replies;
        if (witness_node(N, ident, n - 1, cone_atoms[t])) {
            replies.push_back(N);
        } else if (N.node_count() < m) {
            Tuple z = ident;
            z[n - 1] = N.node_count();
            replies = extensions(ctx, N, {{z, cone_atoms[t]}});
        } else {
            // the script never deletes, so a full network ends it
            inconclusive = true;
            return nullptr;
        }
        longest = std::max(longest, t + 1);
        for (auto& M : replies) {
            ++out.replies_explored;
            auto next = play(M, t + 1);
            if (!next) return nullptr;
            node->replies.push_back({M, next});
        }
        return node;
    };

    ForallCertificate cert;
    cert.opening = cone_atoms[0];
    for (auto& N : openings(ctx, cone_atoms[0])) {
        if (N.node_count() > m) continue;
        // the identity tuple must be the class tuple of the opening
        ++out.replies_explored;
        auto next = play(N, 1);
        if (!next) {
            out.note = "exists survives the script" + std::string(inconclusive ? " within the tint supply or depth" : "");
            return out;
        }
        cert.replies.push_back({N, next});
    }
    out.forall_wins = true;
    out.game.winner = Winner::forall;
    out.game.rounds_used = longest;
    out.game.spec.rounds = longest;
    out.game.forall = std::move(cert);
    out.game.note = "cone script, " + std::to_string(tints.size()) + " tints";
    return out;
}

}  // namespace cylindric

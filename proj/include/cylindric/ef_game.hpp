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

#include <cylindric/graph.hpp>
#include <cylindric/report.hpp>

namespace cylindric {

struct EfOptions {
    /// forall may also place in the second graph.
    bool back_and_forth = false;
    std::size_t state_cap = 2'000'000;
};

struct EfResult {
    bool exists_wins = true;
    std::size_t states = 0;
};

/**
 * Pebble game with p pairs and r rounds. Each round forall places a pebble
 * (a fresh one while some are unused, or lifts a placed pair) on a node of g1
 * and exists answers with its partner in g2. She loses as soon as the placed
 * pairs stop being a partial isomorphism: equality and adjacency are
 * preserved both ways. Positions are memoised as sorted lists of pairs.
 */
class EfSolver {
  public:
    EfSolver(const Graph& g1, const Graph& g2, std::size_t pairs, const EfOptions& opt)
        : g1_(g1), g2_(g2), p_(pairs), opt_(opt) {}

    EfResult solve(std::size_t rounds) {
        EfResult r;
        r.exists_wins = wins({}, rounds);
        r.states = memo_.size();
        return r;
    }

  private:
    using Pair = std::pair<std::size_t, std::size_t>;
    using Placed = std::vector<Pair>;

    bool consistent(const Placed& P, const Pair& q) const {
        for (auto& [a, b] : P) {
            if ((a == q.first) != (b == q.second)) return false;
            if (g1_.adjacent(a, q.first) != g2_.adjacent(b, q.second)) return false;
        }
        return true;
    }

    bool wins(const Placed& P, std::size_t r) {
        if (r == 0 || p_ == 0) return true;
        auto key = std::make_pair(P, r);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= opt_.state_cap) throw ResourceLimit("pebble game states", opt_.state_cap);
        // which placed pair is lifted first; P.size() means a fresh pebble
        std::vector<std::size_t> lifts;
        if (P.size() < p_) lifts.push_back(P.size());
        for (std::size_t j = 0; j < P.size(); ++j)
            if (j == 0 || P[j] != P[j - 1]) lifts.push_back(j);
        bool result = true;
        for (std::size_t side = 0; side < (opt_.back_and_forth ? 2u : 1u) && result; ++side) {
            const Graph& mine = side == 0 ? g1_ : g2_;
            const Graph& theirs = side == 0 ? g2_ : g1_;
            for (std::size_t lift : lifts) {
                Placed rest = P;
                if (lift < rest.size()) rest.erase(rest.begin() + static_cast<long>(lift));
                for (std::size_t x = 0; x < mine.node_count() && result; ++x) {
                    bool answered = false;
                    for (std::size_t y = 0; y < theirs.node_count() && !answered; ++y) {
                        Pair q = side == 0 ? Pair{x, y} : Pair{y, x};
                        if (!consistent(rest, q)) continue;
                        Placed next = rest;
                        next.insert(std::upper_bound(next.begin(), next.end(), q), q);
                        answered = wins(next, r - 1);
                    }
                    if (!answered) result = false;
                }
                if (!result) break;
            }
        }
        memo_[key] = result;
        return result;
    }

    const Graph& g1_;
    const Graph& g2_;
    std::size_t p_;
    EfOptions opt_;
    std::map<std::pair<Placed, std::size_t>, bool> memo_;
};

inline EfResult ef_game(const Graph& g1, const Graph& g2, std::size_t pairs, std::size_t rounds, const EfOptions& opt = {}) {
    EfSolver s(g1, g2, pairs, opt);
    return s.solve(rounds);
}

}  // namespace cylindric

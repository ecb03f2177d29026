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

#include <cylindric/network.hpp>

#include <memory>
#include <set>
#include <tuple>

namespace cylindric {

/**
 * Atomic network games on a finite atom structure.
 *
 * G(m, k): networks on at most m nodes, k rounds. Round 0 is the opening:
 * forall names an atom a and exists plays a network on the kernel classes of
 * a whose class tuple is labelled a. Each later round forall picks a played
 * network N, a tuple x, an index i and an atom a with N(x) T_i a; exists must
 * answer with N' extending N (one new node z at most) such that N'(x[i/z]) = a.
 * F(m, k) additionally lets forall delete a node outside x before the move.
 * Rounds are ω when no bound is given.
 *
 * Room: in G a challenge on a full network (m nodes) with no witness is lost
 * by exists, since she must stay within m nodes. In F that challenge is not a
 * legal move; forall frees a node by deleting first, so he never wins for
 * lack of room there.
 *
 * Positional mode lets forall play on the current network only; exact-history
 * mode keeps every played network as state.
 *
 * When some node w already has N(x[i/w]) = a, exists answers with N itself.
 * Any extension restricts back to N, so no other answer serves her better.
 */
enum class GameKind { G, F };

inline std::string to_string(GameKind k) { return k == GameKind::G ? "G" : "F"; }

struct GameSpec {
    GameKind kind = GameKind::G;
    std::size_t m = 3;
    std::optional<std::size_t> rounds;  // nullopt = ω
    bool exact_history = false;

    std::string to_string() const {
        return cylindric::to_string(kind) + "(" + std::to_string(m) + ", " +
               (rounds ? std::to_string(*rounds) : std::string("omega")) + ")" + (exact_history ? " exact-history" : "");
    }
};

struct GameLimits {
    std::size_t state_cap = 2'000'000;
};

enum class Winner { exists, forall, unknown };

inline std::string to_string(Winner w) {
    return w == Winner::exists ? "exists" : w == Winner::forall ? "forall" : "unknown";
}

/// forall's cylindrifier move on position network `from`, after optionally deleting a node.
struct Move {
    std::size_t from = 0;
    std::optional<std::size_t> deleted;
    Tuple x;
    std::size_t i = 0;
    Atom a = 0;
};

/// A position: the networks forall may play on, each in canonical form, sorted.
using Position = std::vector<Network>;

struct ForallNode;
using ForallNodePtr = std::shared_ptr<const ForallNode>;

struct Reply {
    Network network;
    ForallNodePtr next;
};

/// forall's move at a position with every legal reply of exists and his continuation.
struct ForallNode {
    Position position;
    Move move;
    std::vector<Reply> replies;
};

struct ForallCertificate {
    Atom opening = 0;
    std::vector<Reply> replies;  // every opening network, each with a continuation
};

/// Positions from which exists survives the given number of further rounds
/// (SIZE_MAX for ω), and an opening network for every atom.
struct ExistsCertificate {
    std::map<Position, std::size_t> table;
    std::map<Atom, Network> openings;
};

struct GameResult {
    Winner winner = Winner::unknown;
    GameSpec spec;
    std::optional<ForallCertificate> forall;
    std::optional<ExistsCertificate> exists;
    std::size_t states = 0;
    std::size_t rounds_used = 0;  // for a forall win: rounds on the longest branch, opening included
    std::string note;
};

namespace detail {

inline constexpr std::size_t kOmega = SIZE_MAX;

inline Position next_position(const Position& P, const Network& reply, bool exact_history) {
    Network c = canonical_form(reply);
    if (!exact_history) return {c};
    Position out = P;
    if (!std::binary_search(out.begin(), out.end(), c)) out.insert(std::upper_bound(out.begin(), out.end(), c), c);
    return out;
}

inline Network base_of(const Network& N, const Move& mv) { return mv.deleted ? N.without(*mv.deleted) : N; }

inline std::size_t tree_depth(const ForallNodePtr& node, std::map<const ForallNode*, std::size_t>& memo) {
    if (!node) return 0;
    auto it = memo.find(node.get());
    if (it != memo.end()) return it->second;
    std::size_t d = 1;
    for (auto& r : node->replies) d = std::max(d, 1 + tree_depth(r.next, memo));
    memo[node.get()] = d;
    return d;
}

class AtomicGameSolver {
  public:
    AtomicGameSolver(const AtomStructure& S, const GameSpec& spec, const GameLimits& lim)
        : S_(S), ctx_(S), spec_(spec), lim_(lim) {}

    GameResult solve() {
        GameResult res;
        res.spec = spec_;
        try {
            if (!spec_.rounds) {
                if (spec_.exact_history) throw InvalidArgument("exact-history mode needs a finite round count");
                solve_omega(res);
            } else {
                solve_finite(*spec_.rounds, res);
            }
        } catch (const ResourceLimit& e) {
            res.winner = Winner::unknown;
            res.forall.reset();
            res.exists.reset();
            res.note = e.what();
        }
        res.states = memo_.size() + fix_states_;
        return res;
    }

  private:
    struct Entry {
        std::size_t win_max = 0;          // exists survives r <= win_max
        std::size_t lose_min = kOmega;    // forall wins for r >= lose_min
        Move winning_move;
    };

    bool move_has_room(const Network& base, const Tuple& x, std::size_t i, Atom a) const {
        return spec_.kind == GameKind::G || base.node_count() < spec_.m || witness_node(base, x, i, a).has_value();
    }

    template <typename F>
    bool for_each_move(const Position& P, F&& f) {
        std::size_t n = S_.dim();
        for (std::size_t from = 0; from < P.size(); ++from) {
            const Network& N = P[from];
            std::vector<std::optional<std::size_t>> dels{std::nullopt};
            if (spec_.kind == GameKind::F)
                for (std::size_t v = 0; v < N.node_count(); ++v) dels.push_back(v);
            for (auto del : dels) {
                Network base = del ? N.without(*del) : N;
                // x and x' differing only at i make the same demand; keep the first legal one
                std::set<std::tuple<std::size_t, std::size_t, Atom>> seen;
                for (std::size_t c = 0; c < base.tuple_count(); ++c) {
                    Tuple x = base.tuple(c);
                    for (std::size_t i = 0; i < n; ++i) {
                        std::size_t rest = c - x[i] * ipow(base.node_count(), i);
                        for (Atom a : S_.successors(i, base.label_at(c))) {
                            if (!seen.emplace(rest, i, a).second) continue;
                            if (!move_has_room(base, x, i, a)) continue;
                            Move mv{from, del, x, i, a};
                            if (!f(mv, base)) return false;
                        }
                    }
                }
            }
        }
        return true;
    }

    // exists survives r further rounds from P
    bool exists_wins(const Position& P, std::size_t r) {
        if (r == 0) return true;
        auto it = memo_.find(P);
        if (it != memo_.end()) {
            if (r <= it->second.win_max) return true;
            if (r >= it->second.lose_min) return false;
        }
        if (memo_.size() >= lim_.state_cap) throw ResourceLimit("game states", lim_.state_cap);
        std::optional<Move> killer;
        for_each_move(P, [&](const Move& mv, const Network& base) {
            if (!answerable(P, mv, base, r)) {
                killer = mv;
                return false;
            }
            return true;
        });
        Entry& e = memo_[P];
        if (killer) {
            if (r < e.lose_min) {
                e.lose_min = r;
                e.winning_move = *killer;
            }
            return false;
        }
        e.win_max = std::max(e.win_max, r);
        return true;
    }

    bool answerable(const Position& P, const Move& mv, const Network& base, std::size_t r) {
        std::size_t next_r = r == kOmega ? kOmega : r - 1;
        if (witness_node(base, mv.x, mv.i, mv.a)) {
            if (!mv.deleted) return true;
            return exists_wins(next_position(P, base, spec_.exact_history), next_r);
        }
        if (base.node_count() >= spec_.m) return false;
        Tuple z = mv.x;
        z[mv.i] = base.node_count();
        bool found = false;
        for_each_extension(ctx_, base, {{z, mv.a}}, [&](const Network& M) {
            found = next_r == 0 || exists_wins(next_position(P, M, spec_.exact_history), next_r);
            return !found;
        });
        return found;
    }

    std::vector<Network> replies_to(const Network& base, const Move& mv) {
        if (witness_node(base, mv.x, mv.i, mv.a)) return {base};
        if (base.node_count() >= spec_.m) return {};
        Tuple z = mv.x;
        z[mv.i] = base.node_count();
        return extensions(ctx_, base, {{z, mv.a}});
    }

    ForallNodePtr build_forall(const Position& P, std::size_t r) {
        auto key = std::make_pair(P, r);
        auto it = built_.find(key);
        if (it != built_.end()) return it->second;
        const Entry& e = memo_.at(P);
        auto node = std::make_shared<ForallNode>();
        node->position = P;
        node->move = e.winning_move;
        Network base = base_of(P[node->move.from], node->move);
        for (auto& M : replies_to(base, node->move)) {
            Position next = next_position(P, M, spec_.exact_history);
            std::size_t next_r = r == kOmega ? kOmega : r - 1;
            bool w = exists_wins(next, next_r);
            if (w) throw std::logic_error("forall certificate reached an exists-won reply");
            std::size_t rr = std::min(next_r, memo_.at(next).lose_min);
            node->replies.push_back({M, build_forall(next, rr)});
        }
        built_[key] = node;
        return node;
    }

    std::vector<Network> openings_within_m(Atom a) {
        std::vector<Network> out;
        Tuple cls = kernel_of(S_, a);
        std::size_t classes = *std::max_element(cls.begin(), cls.end()) + 1;
        if (classes > spec_.m) return out;
        return openings(ctx_, a);
    }

    void solve_finite(std::size_t k, GameResult& res) {
        if (k == 0) {
            res.winner = Winner::exists;
            res.exists = ExistsCertificate{};
            res.note = "no rounds";
            return;
        }
        ExistsCertificate cert;
        for (Atom a = 0; a < S_.atom_count(); ++a) {
            std::optional<Network> good;
            for (auto& N : openings_within_m(a))
                if (exists_wins({canonical_form(N)}, k - 1)) {
                    good = N;
                    break;
                }
            if (!good) {
                ForallCertificate fc;
                fc.opening = a;
                std::map<const ForallNode*, std::size_t> dm;
                std::size_t depth = 0;
                for (auto& N : openings_within_m(a)) {
                    Position P{canonical_form(N)};
                    auto node = build_forall(P, std::min(k - 1, memo_.at(P).lose_min));
                    depth = std::max(depth, tree_depth(node, dm));
                    fc.replies.push_back({N, node});
                }
                res.winner = Winner::forall;
                res.forall = std::move(fc);
                res.rounds_used = depth + 1;
                return;
            }
            cert.openings[a] = *good;
        }
        for (auto& [P, e] : memo_)
            if (e.win_max > 0) cert.table[P] = e.win_max;
        res.winner = Winner::exists;
        res.exists = std::move(cert);
    }

    // Greatest fixpoint over all canonical networks on at most m nodes.
    void solve_omega(GameResult& res) {
        std::set<Network> all;
        std::vector<Network> layer{Network(S_.dim(), 0, {})};
        for (std::size_t s = 1; s <= spec_.m; ++s) {
            std::set<Network> next;
            for (auto& N : layer)
                for_each_extension(ctx_, N, {}, [&](const Network& M) {
                    next.insert(canonical_form(M));
                    if (all.size() + next.size() > lim_.state_cap) throw ResourceLimit("game states", lim_.state_cap);
                    return true;
                });
            layer.assign(next.begin(), next.end());
            all.insert(next.begin(), next.end());
        }
        fix_states_ = all.size();
        std::set<Network> W = all;
        std::map<Network, std::size_t> removed_at;
        for (std::size_t round = 1;; ++round) {
            std::vector<Network> drop;
            for (auto& N : W) {
                bool ok = for_each_move(Position{N}, [&](const Move& mv, const Network& base) {
                    if (witness_node(base, mv.x, mv.i, mv.a)) return !mv.deleted || W.count(canonical_form(base)) > 0;
                    if (base.node_count() >= spec_.m) return false;
                    Tuple z = mv.x;
                    z[mv.i] = base.node_count();
                    bool found = false;
                    for_each_extension(ctx_, base, {{z, mv.a}}, [&](const Network& M) {
                        found = W.count(canonical_form(M)) > 0;
                        return !found;
                    });
                    return found;
                });
                if (!ok) drop.push_back(N);
            }
            if (drop.empty()) break;
            for (auto& N : drop) {
                W.erase(N);
                removed_at[N] = round;
            }
        }
        ExistsCertificate cert;
        std::size_t worst = 0;
        std::optional<Atom> lost;
        for (Atom a = 0; a < S_.atom_count() && !lost; ++a) {
            std::optional<Network> good;
            std::size_t best_rank = 0;
            for (auto& N : openings_within_m(a)) {
                Network c = canonical_form(N);
                if (W.count(c)) {
                    good = N;
                    break;
                }
                best_rank = std::max(best_rank, removed_at.at(c));
            }
            if (!good) {
                lost = a;
                worst = best_rank;
            } else {
                cert.openings[a] = *good;
            }
        }
        if (!lost) {
            for (auto& N : W) cert.table[{N}] = kOmega;
            res.winner = Winner::exists;
            res.exists = std::move(cert);
            return;
        }
        // A network dropped in round t loses within t moves; replay as a finite game for the tree.
        std::size_t k = worst + 1;
        solve_finite(k, res);
        if (res.winner != Winner::forall) throw std::logic_error("fixpoint and finite solver disagree");
        res.note = "forall wins within " + std::to_string(k) + " rounds";
    }

    const AtomStructure& S_;
    NetworkContext ctx_;
    GameSpec spec_;
    GameLimits lim_;
    std::map<Position, Entry> memo_;
    std::map<std::pair<Position, std::size_t>, ForallNodePtr> built_;
    std::size_t fix_states_ = 0;
};

}  // namespace detail

inline GameResult solve_atomic_game(const AtomStructure& S, const GameSpec& spec, const GameLimits& limits = {}) {
    if (spec.m == 0) throw InvalidArgument("games need m >= 1");
    detail::AtomicGameSolver solver(S, spec, limits);
    return solver.solve();
}

struct VerifyResult {
    bool ok = true;
    std::string detail;
    std::size_t checked = 0;
};

namespace detail {

class CertificateVerifier {
  public:
    CertificateVerifier(const AtomStructure& S, const GameSpec& spec) : S_(S), spec_(spec) {}

    VerifyResult verify(const GameResult& r) {
        try {
            if (r.winner == Winner::forall) {
                if (!r.forall) fail("forall win without a certificate");
                verify_forall(*r.forall);
            } else if (r.winner == Winner::exists) {
                if (!r.exists) fail("exists win without a certificate");
                verify_exists(*r.exists);
            } else {
                fail("no winner to verify");
            }
        } catch (const Failure& f) {
            return {false, f.what, checked_};
        }
        return {true, "ok", checked_};
    }

  private:
    struct Failure {
        std::string what;
    };
    [[noreturn]] void fail(const std::string& why) { throw Failure{why}; }

    std::vector<Network> legal_openings(Atom a) {
        // every network on the kernel classes with the class tuple labelled a
        Tuple cls = kernel_of(S_, a);
        std::size_t classes = *std::max_element(cls.begin(), cls.end()) + 1;
        if (classes > spec_.m) return {};
        return naive_networks(S_, classes, cls, a);
    }

    // (legal move?, every reply exists may give)
    std::vector<Network> check_move_and_replies(const Position& P, const Move& mv) {
        if (mv.from >= P.size()) fail("move refers to a network outside the position");
        const Network& N = P[mv.from];
        if (auto v = network_violation(S_, N)) fail("position holds a non-network (" + v->condition + ")");
        if (mv.deleted && spec_.kind != GameKind::F) fail("deletion outside an F game");
        if (mv.deleted && *mv.deleted >= N.node_count()) fail("deleted node out of range");
        Network base = mv.deleted ? N.without(*mv.deleted) : N;
        if (mv.x.size() != S_.dim() || mv.i >= S_.dim()) fail("malformed move");
        for (auto v : mv.x)
            if (v >= base.node_count()) fail("move tuple leaves the network");
        if (!S_.related(mv.i, base.label(mv.x), mv.a)) fail("challenge atom not below c_i of the tuple label");
        if (witness_node(base, mv.x, mv.i, mv.a)) return {base};
        if (base.node_count() >= spec_.m) {
            if (spec_.kind == GameKind::F) fail("F move on a full network needs a deletion first");
            return {};
        }
        Tuple z = mv.x;
        z[mv.i] = base.node_count();
        return naive_extensions(S_, base, z, mv.a);
    }

    bool same_position(const Position& got, const Position& P, const Network& reply) {
        Position want = next_position(P, reply, spec_.exact_history);
        if (got == want) return true;
        if (!spec_.exact_history) return got.size() == 1 && got[0] == reply;
        return false;
    }

    std::size_t walk(const ForallNodePtr& node, std::size_t r) {
        if (!node) fail("missing continuation");
        if (r == 0) fail("forall certificate needs more rounds than the game has");
        auto key = std::make_pair(node.get(), r);
        if (auto it = seen_.find(key); it != seen_.end()) return it->second;
        ++checked_;
        auto legal = check_move_and_replies(node->position, node->move);
        std::vector<Network> listed;
        for (auto& rep : node->replies) listed.push_back(rep.network);
        std::sort(listed.begin(), listed.end());
        if (listed != legal)
            fail("certificate replies (" + std::to_string(listed.size()) + ") differ from the legal replies (" +
                 std::to_string(legal.size()) + ")");
        std::size_t depth = 1;
        for (auto& rep : node->replies) {
            if (!rep.next) fail("reply without continuation");
            if (!same_position(rep.next->position, node->position, rep.network)) fail("continuation position mismatch");
            depth = std::max(depth, 1 + walk(rep.next, r == kOmega ? kOmega : r - 1));
        }
        seen_[key] = depth;
        return depth;
    }

    void verify_forall(const ForallCertificate& c) {
        std::size_t k = spec_.rounds ? *spec_.rounds : kOmega;
        if (k == 0) fail("forall cannot win a game with no rounds");
        if (c.opening >= S_.atom_count()) fail("opening atom out of range");
        auto legal = legal_openings(c.opening);
        std::vector<Network> listed;
        for (auto& rep : c.replies) listed.push_back(rep.network);
        std::sort(listed.begin(), listed.end());
        if (listed != legal) fail("opening replies differ from the legal openings");
        for (auto& rep : c.replies) {
            if (!rep.next) fail("opening reply without continuation");
            if (!same_position(rep.next->position, {}, rep.network) &&
                !(rep.next->position.size() == 1 && rep.next->position[0] == canonical_form(rep.network)))
                fail("opening continuation position mismatch");
            walk(rep.next, k == kOmega ? kOmega : k - 1);
        }
    }

    void verify_exists(const ExistsCertificate& c) {
        std::size_t k = spec_.rounds ? *spec_.rounds : kOmega;
        if (k == 0) return;
        auto level = [&](const Position& P) -> std::optional<std::size_t> {
            auto it = c.table.find(P);
            if (it == c.table.end()) return std::nullopt;
            return it->second;
        };
        for (Atom a = 0; a < S_.atom_count(); ++a) {
            auto it = c.openings.find(a);
            if (it == c.openings.end()) fail("no opening answer for atom " + std::to_string(a));
            auto legal = legal_openings(a);
            if (!std::binary_search(legal.begin(), legal.end(), it->second)) fail("opening answer is not legal");
            if (k > 1) {
                auto lv = level({canonical_form(it->second)});
                if (!lv || *lv < k - 1) fail("opening answer not covered by the table");
            }
        }
        for (auto& [P, r] : c.table) {
            ++checked_;
            std::size_t need = r == kOmega ? kOmega : r - 1;
            for (auto& N : P)
                if (auto v = network_violation(S_, N)) fail("table holds a non-network (" + v->condition + ")");
            if (r == 0) continue;
            for (std::size_t from = 0; from < P.size(); ++from) {
                const Network& N = P[from];
                std::vector<std::optional<std::size_t>> dels{std::nullopt};
                if (spec_.kind == GameKind::F)
                    for (std::size_t v = 0; v < N.node_count(); ++v) dels.push_back(v);
                for (auto del : dels) {
                    Network base = del ? N.without(*del) : N;
                    // moves differing only at x_i share their replies
                    std::set<std::tuple<std::size_t, std::size_t, Atom>> answered;
                    for (std::size_t code = 0; code < base.tuple_count(); ++code)
                        for (std::size_t i = 0; i < S_.dim(); ++i)
                            for (Atom a : S_.successors(i, base.label_at(code))) {
                                Move mv{from, del, base.tuple(code), i, a};
                                std::size_t rest = code - mv.x[i] * ipow(base.node_count(), i);
                                if (!answered.emplace(rest, i, a).second) continue;
                                bool ok = false;
                                auto good = [&](const Network& M) {
                                    if (need == 0) return true;
                                    auto lv = level(next_position(P, M, spec_.exact_history));
                                    return lv && *lv >= need;
                                };
                                if (!S_.related(i, base.label_at(code), a)) fail("successor list disagrees with relation");
                                if (witness_node(base, mv.x, i, a)) {
                                    ok = good(base);
                                } else if (base.node_count() >= spec_.m) {
                                    ok = spec_.kind == GameKind::F;  // not a legal F move
                                } else {
                                    Tuple z = mv.x;
                                    z[i] = base.node_count();
                                    for_each_naive_extension(S_, base, z, a, [&](const Network& M) {
                                        ok = good(M);
                                        return !ok;
                                    });
                                }
                                if (!ok) fail("table position has an unanswered move");
                            }
                }
            }
        }
    }

    const AtomStructure& S_;
    GameSpec spec_;
    std::map<std::pair<const ForallNode*, std::size_t>, std::size_t> seen_;
    std::size_t checked_ = 0;
};

}  // namespace detail

/// Re-walks a certificate with an independent naive enumeration of replies.
inline VerifyResult verify_certificate(const AtomStructure& S, const GameResult& r) {
    detail::CertificateVerifier v(S, r.spec);
    return v.verify(r);
}

}  // namespace cylindric

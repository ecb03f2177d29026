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
#include <cylindric/subalgebra.hpp>

namespace cylindric {

/// A map from n-tuples over {0..nodes-1} to elements of a finite algebra, coded as Network.
class ElementNetwork {
  public:
    ElementNetwork() = default;
    ElementNetwork(std::size_t dim, std::size_t nodes, std::vector<AtomSet> labels)
        : dim_(dim), nodes_(nodes), labels_(std::move(labels)) {
        if (labels_.size() != ipow(nodes_, dim_)) throw InvalidArgument("element network label count must be nodes^dim");
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t node_count() const noexcept { return nodes_; }
    std::size_t tuple_count() const noexcept { return labels_.size(); }
    const std::vector<AtomSet>& labels() const noexcept { return labels_; }

    std::size_t code(const Tuple& t) const {
        std::size_t c = 0, place = 1;
        for (std::size_t p = 0; p < dim_; ++p) {
            if (t[p] >= nodes_) throw InvalidArgument("tuple entry is not a node");
            c += t[p] * place;
            place *= nodes_;
        }
        return c;
    }

    Tuple tuple(std::size_t code) const {
        Tuple t(dim_);
        for (std::size_t p = 0; p < dim_; ++p) {
            t[p] = code % nodes_;
            code /= nodes_;
        }
        return t;
    }

    const AtomSet& label(const Tuple& t) const { return labels_[code(t)]; }
    const AtomSet& label_at(std::size_t c) const { return labels_[c]; }
    void set_label(const Tuple& t, AtomSet x) { labels_[code(t)] = std::move(x); }

    bool operator==(const ElementNetwork& o) const {
        return dim_ == o.dim_ && nodes_ == o.nodes_ && labels_ == o.labels_;
    }
    bool operator<(const ElementNetwork& o) const {
        return std::tie(dim_, nodes_, labels_) < std::tie(o.dim_, o.nodes_, o.labels_);
    }

  private:
    std::size_t dim_ = 0;
    std::size_t nodes_ = 0;
    std::vector<AtomSet> labels_;
};

/// Product of d_jk over the positions where t repeats a node.
inline AtomSet diagonal_meet(const FiniteBao& A, const Tuple& t) {
    AtomSet out = A.one();
    for (std::size_t j = 0; j < t.size(); ++j)
        for (std::size_t k = j + 1; k < t.size(); ++k)
            if (t[j] == t[k]) out &= A.d(j, k);
    return out;
}

/**
 * Network conditions on element labels: N(x) <= d_ij exactly when x_i = x_j,
 * and N(x) . c_i N(y) != 0 whenever x and y agree off i (x = y included, so
 * labels are nonzero).
 */
inline std::optional<NetworkViolation> element_network_violation(const FiniteBao& A, const ElementNetwork& N) {
    std::size_t n = A.dim();
    for (std::size_t c = 0; c < N.tuple_count(); ++c) {
        Tuple x = N.tuple(c);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (N.label_at(c).subset_of(A.d(i, j)) != (x[i] == x[j])) return NetworkViolation{"diagonal", x, {}, i, j};
        for (std::size_t i = 0; i < n; ++i) {
            AtomSet ci = A.c(i, N.label_at(c));
            for (std::size_t v = 0; v < N.node_count(); ++v) {
                Tuple y = x;
                y[i] = v;
                if (!N.label(y).intersects(ci)) return NetworkViolation{"cylindrifier", y, x, i, 0};
            }
        }
    }
    return std::nullopt;
}

/// The one-node network whose single tuple is labelled by the meet of all diagonals.
inline ElementNetwork initial_element_network(const FiniteBao& A) {
    return ElementNetwork(A.dim(), 1, {diagonal_meet(A, Tuple(A.dim(), 0))});
}

/// forall's challenge: tuple x, index i, element a.
struct RepMove {
    Tuple x;
    std::size_t i = 0;
    AtomSet a;
};

enum class RepAnswerKind { reject, accept_new, accept_existing };

inline std::string to_string(RepAnswerKind k) {
    return k == RepAnswerKind::reject ? "reject" : k == RepAnswerKind::accept_new ? "accept-new" : "accept-existing";
}

struct RepAnswer {
    RepAnswerKind kind = RepAnswerKind::reject;
    std::size_t node = 0;  // the witness node for accept-existing
};

/**
 * exists' answer applied to N. Reject meets N(x) with -c_i a. Accept-new adds
 * a node z, labels x[i/z] by a times the diagonals it repeats, meets N(x) with
 * c_i a and gives every other new tuple its diagonal meet. Accept-existing
 * uses node w in place of z: N(x[i/w]) is met with a and N(x) with c_i a.
 */
inline ElementNetwork apply_answer(const FiniteBao& A, const ElementNetwork& N, const RepMove& mv, const RepAnswer& ans) {
    std::size_t n = A.dim();
    AtomSet ca = A.c(mv.i, mv.a);
    if (ans.kind == RepAnswerKind::reject) {
        ElementNetwork out = N;
        out.set_label(mv.x, N.label(mv.x) & ca.complement());
        return out;
    }
    if (ans.kind == RepAnswerKind::accept_existing) {
        if (ans.node >= N.node_count()) throw InvalidArgument("witness node out of range");
        ElementNetwork out = N;
        Tuple z = mv.x;
        z[mv.i] = ans.node;
        out.set_label(mv.x, out.label(mv.x) & ca);
        out.set_label(z, out.label(z) & mv.a);
        return out;
    }
    std::size_t s = N.node_count() + 1;
    ElementNetwork out(n, s, std::vector<AtomSet>(ipow(s, n), A.one()));
    for (std::size_t c = 0; c < out.tuple_count(); ++c) {
        Tuple y = out.tuple(c);
        bool old = std::all_of(y.begin(), y.end(), [&](std::size_t v) { return v < N.node_count(); });
        out.set_label(y, old ? N.label(y) : diagonal_meet(A, y));
    }
    Tuple z = mv.x;
    z[mv.i] = N.node_count();
    out.set_label(z, mv.a & diagonal_meet(A, z));
    out.set_label(mv.x, N.label(mv.x) & ca);
    return out;
}

/// Answers that leave a network, in the order existing (x_i first), new, reject.
inline std::vector<std::pair<RepAnswer, ElementNetwork>> legal_answers(const FiniteBao& A, const ElementNetwork& N,
                                                                      const RepMove& mv, std::size_t node_budget) {
    std::vector<std::pair<RepAnswer, ElementNetwork>> out;
    auto consider = [&](const RepAnswer& ans) {
        ElementNetwork M = apply_answer(A, N, mv, ans);
        if (!element_network_violation(A, M)) out.emplace_back(ans, std::move(M));
    };
    consider({RepAnswerKind::accept_existing, mv.x[mv.i]});
    for (std::size_t w = 0; w < N.node_count(); ++w)
        if (w != mv.x[mv.i]) consider({RepAnswerKind::accept_existing, w});
    if (N.node_count() < node_budget) consider({RepAnswerKind::accept_new, 0});
    consider({RepAnswerKind::reject, 0});
    return out;
}

struct RepGameLimits {
    std::size_t node_budget = 8;
    std::size_t state_cap = 200'000;
    /// forall challenges with every element while 2^atoms stays within this; atoms only beyond it.
    std::size_t element_cap = 1024;
};

struct RepGameResult {
    Winner winner = Winner::unknown;
    std::size_t rounds = 0;
    std::size_t states = 0;
    std::optional<RepMove> opening_challenge;  // a winning first challenge when forall wins
    std::string note;
};

namespace detail {

class RepGameSolver {
  public:
    RepGameSolver(const FiniteBao& A, const RepGameLimits& lim) : A_(A), lim_(lim) {
        if (A.size_hint() <= lim.element_cap) {
            elements_ = A.elements();
        } else {
            for (Atom a = 0; a < A.atom_count(); ++a) elements_.push_back(A.atom(a));
            atoms_only_ = true;
        }
    }

    RepGameResult solve(std::size_t k) {
        RepGameResult res;
        res.rounds = k;
        try {
            ElementNetwork N0 = initial_element_network(A_);
            if (element_network_violation(A_, N0)) {
                res.winner = Winner::forall;
                res.note = "no initial network";
            } else {
                std::optional<RepMove> killer;
                res.winner = survives(N0, k, &killer) ? Winner::exists : Winner::forall;
                res.opening_challenge = killer;
            }
        } catch (const ResourceLimit& e) {
            res.winner = Winner::unknown;
            res.note = e.what();
        }
        if (atoms_only_) res.note += (res.note.empty() ? "" : "; ") + std::string("challenges restricted to atoms");
        res.states = memo_.size();
        return res;
    }

  private:
    bool survives(const ElementNetwork& N, std::size_t r, std::optional<RepMove>* killer = nullptr) {
        if (r == 0) return true;
        auto key = std::make_pair(N, r);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= lim_.state_cap) throw ResourceLimit("representation game states", lim_.state_cap);
        bool ok = true;
        for (std::size_t c = 0; c < N.tuple_count() && ok; ++c)
            for (std::size_t i = 0; i < A_.dim() && ok; ++i)
                for (auto& a : elements_) {
                    RepMove mv{N.tuple(c), i, a};
                    bool answered = false;
                    for (auto& [ans, M] : legal_answers(A_, N, mv, lim_.node_budget))
                        if (survives(M, r - 1)) {
                            answered = true;
                            break;
                        }
                    if (!answered) {
                        ok = false;
                        if (killer) *killer = mv;
                        break;
                    }
                }
        memo_[key] = ok;
        return ok;
    }

    const FiniteBao& A_;
    RepGameLimits lim_;
    std::vector<AtomSet> elements_;
    bool atoms_only_ = false;
    std::map<std::pair<ElementNetwork, std::size_t>, bool> memo_;
};

}  // namespace detail

/// Exact k-round representation game from the one-node start, positional.
inline RepGameResult rep_game(const FiniteBao& A, std::size_t k, const RepGameLimits& limits = {}) {
    detail::RepGameSolver s(A, limits);
    return s.solve(k);
}

struct RepPlay {
    bool exists_survived = false;
    bool saturated = false;  // no open challenge is left
    ElementNetwork final_network;
    std::vector<std::pair<RepMove, RepAnswer>> trace;
    std::size_t states = 0;
    std::string note;
};

/**
 * A scheduled play. forall always issues the first open challenge (x, i, a)
 * with a an atom, in tuple code, index and atom order. A challenge is open
 * while N(x) meets c_i a without lying below it, or lies below it with no
 * node w having N(x[i/w]) <= a. exists backtracks over her answers until the
 * schedule runs dry, the node budget blocks every answer, or the state
 * budget is spent.
 */
inline RepPlay rep_play(const FiniteBao& A, const RepGameLimits& limits = {}) {
    RepPlay play;
    std::size_t n = A.dim();
    auto open_challenge = [&](const ElementNetwork& N) -> std::optional<RepMove> {
        for (std::size_t c = 0; c < N.tuple_count(); ++c) {
            const AtomSet& lx = N.label_at(c);
            Tuple x = N.tuple(c);
            for (std::size_t i = 0; i < n; ++i)
                for (Atom a = 0; a < A.atom_count(); ++a) {
                    AtomSet ca = A.c(i, A.atom(a));
                    if (!lx.intersects(ca)) continue;
                    if (!lx.subset_of(ca)) return RepMove{x, i, A.atom(a)};
                    bool witnessed = false;
                    for (std::size_t w = 0; w < N.node_count() && !witnessed; ++w) {
                        Tuple z = x;
                        z[i] = w;
                        witnessed = N.label(z).subset_of(A.atom(a));
                    }
                    if (!witnessed) return RepMove{x, i, A.atom(a)};
                }
        }
        return std::nullopt;
    };
    std::vector<std::pair<RepMove, RepAnswer>> trace;
    bool out_of_states = false;
    std::function<bool(const ElementNetwork&)> rec = [&](const ElementNetwork& N) {
        if (play.states >= limits.state_cap) {
            out_of_states = true;
            return false;
        }
        ++play.states;
        auto mv = open_challenge(N);
        if (!mv) {
            play.final_network = N;
            return true;
        }
        for (auto& [ans, M] : legal_answers(A, N, *mv, limits.node_budget)) {
            trace.emplace_back(*mv, ans);
            if (rec(M)) return true;
            trace.pop_back();
            if (out_of_states) return false;
        }
        return false;
    };
    ElementNetwork N0 = initial_element_network(A);
    if (element_network_violation(A, N0)) {
        play.note = "no initial network";
        return play;
    }
    bool ok = rec(N0);
    play.exists_survived = ok;
    play.saturated = ok;
    play.trace = std::move(trace);
    if (!ok) play.note = out_of_states ? "state budget spent" : "every answer loses within the node budget";
    return play;
}

struct HomomorphismCheck {
    bool ok = true;
    std::string failure;
    std::size_t elements = 0;
};

struct Representation {
    ElementNetwork network;
    /// h(b) = tuples (by code) whose label lies below b, for each checked element b.
    std::map<AtomSet, std::vector<std::size_t>> image;
    HomomorphismCheck check;
};

/**
 * h(b) = {x : N(x) <= b} on the final network, tested against the square
 * set algebra on its nodes: joins, complements, c_i, d_ij and injectivity on
 * every element (pair) of the subalgebra generated by `generators`.
 */
inline Representation extract_representation(const FiniteBao& A, const RepPlay& play,
                                              const std::vector<AtomSet>& generators) {
    Representation rep;
    rep.network = play.final_network;
    const ElementNetwork& N = rep.network;
    std::size_t n = A.dim(), T = N.tuple_count();
    if (!play.exists_survived) {
        rep.check = {false, "exists did not survive the schedule", 0};
        return rep;
    }
    std::vector<AtomSet> elems = generated_subalgebra(A, generators).carrier();
    auto h = [&](const AtomSet& b) {
        std::vector<char> in(T, 0);
        for (std::size_t c = 0; c < T; ++c) in[c] = N.label_at(c).subset_of(b);
        return in;
    };
    std::map<AtomSet, std::vector<char>> img;
    for (auto& b : elems) img[b] = h(b);
    HomomorphismCheck& chk = rep.check;
    chk.elements = elems.size();
    auto fail = [&](std::string why) {
        chk.ok = false;
        chk.failure = std::move(why);
    };
    std::vector<Tuple> tuples(T);
    for (std::size_t c = 0; c < T; ++c) tuples[c] = N.tuple(c);
    for (std::size_t i = 0; i < n && chk.ok; ++i)
        for (std::size_t j = 0; j < n && chk.ok; ++j) {
            auto got = h(A.d(i, j));
            for (std::size_t c = 0; c < T; ++c)
                if (static_cast<bool>(got[c]) != (tuples[c][i] == tuples[c][j])) {
                    fail("d_" + std::to_string(i) + std::to_string(j) + " not sent to its diagonal");
                    break;
                }
        }
    for (auto& b : elems) {
        if (!chk.ok) break;
        const auto& hb = img[b];
        auto hc = h(b.complement());
        for (std::size_t c = 0; c < T; ++c)
            if (static_cast<bool>(hc[c]) == static_cast<bool>(hb[c])) {
                fail("complement not preserved");
                break;
            }
        for (std::size_t i = 0; i < n && chk.ok; ++i) {
            auto hci = h(A.c(i, b));
            for (std::size_t c = 0; c < T && chk.ok; ++c) {
                bool want = false;
                for (std::size_t v = 0; v < N.node_count() && !want; ++v) {
                    Tuple y = tuples[c];
                    y[i] = v;
                    want = hb[N.code(y)];
                }
                if (static_cast<bool>(hci[c]) != want) fail("c_" + std::to_string(i) + " not preserved");
            }
        }
    }
    for (auto& b : elems) {
        if (!chk.ok) break;
        for (auto& b2 : elems) {
            auto hj = h(b | b2);
            const auto& x = img[b];
            const auto& y = img[b2];
            for (std::size_t c = 0; c < T; ++c)
                if (static_cast<bool>(hj[c]) != (x[c] || y[c])) {
                    fail("join not preserved");
                    break;
                }
            if (!chk.ok) break;
            if (b != b2 && x == y) fail("two elements share an image");
            if (!chk.ok) break;
        }
    }
    for (auto& [b, in] : img) {
        std::vector<std::size_t> codes;
        for (std::size_t c = 0; c < T; ++c)
            if (in[c]) codes.push_back(c);
        rep.image[b] = std::move(codes);
    }
    return rep;
}

/// Every element of A when it is small enough, else the subalgebra on the first four atoms.
inline Representation extract_representation(const FiniteBao& A, const RepPlay& play) {
    std::vector<AtomSet> gens;
    for (Atom a = 0; a < A.atom_count(); ++a) gens.push_back(A.atom(a));
    if (gens.size() > 10) gens.resize(4);
    return extract_representation(A, play, gens);
}

}  // namespace cylindric

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

#include <cylindric/atom_structure.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <sstream>

namespace cylindric {

using Tuple = std::vector<std::size_t>;

/// Atom-labelled network: every n-tuple over the nodes 0..size-1 carries an atom.
/// Tuples are coded little-endian, code = sum t_p size^p.
class Network {
  public:
    Network() = default;
    Network(std::size_t dim, std::size_t nodes, std::vector<Atom> labels)
        : dim_(dim), nodes_(nodes), labels_(std::move(labels)) {
        if (labels_.size() != ipow(nodes_, dim_)) throw InvalidArgument("network label count must be nodes^dim");
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t node_count() const noexcept { return nodes_; }
    const std::vector<Atom>& labels() const noexcept { return labels_; }
    std::size_t tuple_count() const noexcept { return labels_.size(); }

    std::size_t code(const Tuple& t) const {
        if (t.size() != dim_) throw InvalidArgument("tuple length differs from dimension");
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

    Atom label(const Tuple& t) const { return labels_[code(t)]; }
    Atom label_at(std::size_t code) const { return labels_[code]; }

    /// Labels on the tuples over `keep`, renumbered in the order given.
    Network restrict(const std::vector<std::size_t>& keep) const {
        Network out;
        out.dim_ = dim_;
        out.nodes_ = keep.size();
        out.labels_.resize(ipow(keep.size(), dim_));
        for (std::size_t c = 0; c < out.labels_.size(); ++c) {
            Tuple t = out.tuple(c);
            for (auto& v : t) v = keep[v];
            out.labels_[c] = label(t);
        }
        return out;
    }

    /// Drops one node; nodes above it shift down by one.
    Network without(std::size_t node) const {
        std::vector<std::size_t> keep;
        for (std::size_t v = 0; v < nodes_; ++v)
            if (v != node) keep.push_back(v);
        return restrict(keep);
    }

    /// Renames node v to perm[v].
    Network renamed(const std::vector<std::size_t>& perm) const {
        std::vector<std::size_t> inverse(nodes_);
        for (std::size_t v = 0; v < nodes_; ++v) inverse[perm[v]] = v;
        return restrict(inverse);
    }

    bool operator==(const Network& o) const { return dim_ == o.dim_ && nodes_ == o.nodes_ && labels_ == o.labels_; }
    bool operator<(const Network& o) const {
        return std::tie(dim_, nodes_, labels_) < std::tie(o.dim_, o.nodes_, o.labels_);
    }

    std::string to_string(const AtomStructure& S) const {
        std::ostringstream os;
        for (std::size_t c = 0; c < labels_.size(); ++c) {
            Tuple t = tuple(c);
            os << "(";
            for (std::size_t p = 0; p < dim_; ++p) os << (p ? "," : "") << t[p];
            os << ") " << S.name(labels_[c]) << "\n";
        }
        return os.str();
    }

  private:
    std::size_t dim_ = 0;
    std::size_t nodes_ = 0;
    std::vector<Atom> labels_;
};

struct NetworkHash {
    std::size_t operator()(const Network& n) const noexcept {
        std::uint64_t h = 1469598103934665603ULL ^ n.node_count();
        for (Atom a : n.labels()) {
            h ^= a;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Why a labelling is not a network.
struct NetworkViolation {
    std::string condition;  // "diagonal" or "cylindrifier"
    Tuple x;
    Tuple y;
    std::size_t i = 0;
    std::size_t j = 0;
};

/**
 * Checks label(x) <= d_ij iff x_i = x_j, and x =_i y implies label(x) T_i label(y),
 * over every tuple and every i-neighbour.
 */
inline std::optional<NetworkViolation> network_violation(const AtomStructure& S, const Network& N) {
    if (N.dim() != S.dim()) throw InvalidArgument("network and structure dimensions differ");
    std::size_t n = S.dim();
    for (std::size_t c = 0; c < N.tuple_count(); ++c) {
        Atom a = N.label_at(c);
        if (a >= S.atom_count()) throw InvalidArgument("network label out of range");
        Tuple x = N.tuple(c);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (S.in_diagonal(i, j, a) != (x[i] == x[j])) return NetworkViolation{"diagonal", x, x, i, j};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t v = 0; v < N.node_count(); ++v) {
                Tuple y = x;
                y[i] = v;
                if (!S.related(i, a, N.label(y))) return NetworkViolation{"cylindrifier", x, y, i, 0};
            }
    }
    return std::nullopt;
}

inline bool is_network(const AtomStructure& S, const Network& N) { return !network_violation(S, N).has_value(); }

/// A node w with label(x[i/w]) = a, if any.
inline std::optional<std::size_t> witness_node(const Network& N, const Tuple& x, std::size_t i, Atom a) {
    Tuple y = x;
    for (std::size_t w = 0; w < N.node_count(); ++w) {
        y[i] = w;
        if (N.label(y) == a) return w;
    }
    return std::nullopt;
}

/// Positions p ~ q iff a <= d_pq, as class indices in first-occurrence order.
inline Tuple kernel_of(const AtomStructure& S, Atom a) {
    std::size_t n = S.dim();
    Tuple cls(n, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (cls[p] != SIZE_MAX) continue;
        cls[p] = next;
        for (std::size_t q = p + 1; q < n; ++q)
            if (S.in_diagonal(p, q, a)) {
                if (cls[q] != SIZE_MAX) throw InvalidArgument("diagonals of atom " + std::to_string(a) + " are not an equivalence");
                cls[q] = next;
            }
        ++next;
    }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (p != q && (cls[p] == cls[q]) != S.in_diagonal(std::min(p, q), std::max(p, q), a))
                throw InvalidArgument("diagonals of atom " + std::to_string(a) + " are not an equivalence");
    return cls;
}

/**
 * Precomputed tables for extending networks by one node. compatible(i, b)
 * holds the atoms a with a T_i b and b T_i a.
 */
class NetworkContext {
  public:
    explicit NetworkContext(const AtomStructure& S) : S_(&S) {
        std::size_t k = S.atom_count();
        compat_.resize(S.dim());
        reflexive_ = AtomSet(k);
        for (Atom a = 0; a < k; ++a) {
            bool r = true;
            for (std::size_t i = 0; i < S.dim() && r; ++i) r = S.related(i, a, a);
            if (r) reflexive_.set(a);
        }
        for (std::size_t i = 0; i < S.dim(); ++i) {
            compat_[i].assign(k, AtomSet(k));
            for (Atom b = 0; b < k; ++b)
                for (Atom a : S.successors(i, b))
                    if (S.related(i, a, b)) compat_[i][b].set(a);
        }
    }

    const AtomStructure& structure() const noexcept { return *S_; }
    const AtomSet& compatible(std::size_t i, Atom b) const { return compat_[i][b]; }

    /// Atoms T_i-related to themselves for every i, with the diagonal pattern of t.
    const AtomSet& pattern_atoms(const Tuple& t) const {
        std::uint64_t key = 0;
        std::size_t n = S_->dim();
        for (std::size_t p = 0, bit = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q, ++bit)
                if (t[p] == t[q]) key |= std::uint64_t{1} << bit;
        auto it = patterns_.find(key);
        if (it != patterns_.end()) return it->second;
        AtomSet s(S_->atom_count());
        for (Atom a = 0; a < S_->atom_count(); ++a) {
            bool ok = reflexive_.test(a);
            for (std::size_t p = 0; p < n && ok; ++p)
                for (std::size_t q = p + 1; q < n && ok; ++q) ok = S_->in_diagonal(p, q, a) == (t[p] == t[q]);
            if (ok) s.set(a);
        }
        return patterns_.emplace(key, std::move(s)).first->second;
    }

  private:
    const AtomStructure* S_;
    std::vector<std::vector<AtomSet>> compat_;
    AtomSet reflexive_;
    mutable std::map<std::uint64_t, AtomSet> patterns_;
};

struct ForcedLabel {
    Tuple tuple;  // over the extended node set
    Atom atom;
};

/**
 * Calls `visit` on every network on N's nodes plus one new node (numbered
 * N.node_count()) that agrees with N and satisfies `forced`. Forced tuples
 * are fixed first; then the open tuple with the fewest candidate atoms
 * (lowest code on ties) is branched on, atoms in increasing order. The
 * enumeration order is deterministic. `visit` returns false to stop early.
 */
inline void for_each_extension(const NetworkContext& ctx, const Network& N, const std::vector<ForcedLabel>& forced,
                               const std::function<bool(const Network&)>& visit) {
    const AtomStructure& S = ctx.structure();
    std::size_t n = S.dim(), s = N.node_count(), s1 = s + 1;
    std::size_t total = ipow(s1, n);
    std::vector<std::size_t> place(n);
    place[0] = 1;
    for (std::size_t p = 1; p < n; ++p) place[p] = place[p - 1] * s1;
    std::vector<Atom> lab(total, 0);
    std::vector<char> set(total, 0);
    std::vector<std::size_t> digits(n);
    auto decode = [&](std::size_t c, std::vector<std::size_t>& t) {
        for (std::size_t p = 0; p < n; ++p) {
            t[p] = c % s1;
            c /= s1;
        }
    };
    for (std::size_t c = 0; c < N.tuple_count(); ++c) {
        std::size_t r = c, c1 = 0;
        for (std::size_t p = 0; p < n; ++p) {
            c1 += (r % s) * place[p];
            r /= s;
        }
        lab[c1] = N.label_at(c);
        set[c1] = 1;
    }
    std::vector<long long> forced_at(total, -1);
    std::vector<std::size_t> order;
    for (auto& f : forced) {
        if (f.tuple.size() != n) throw InvalidArgument("forced tuple has wrong length");
        std::size_t c = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if (f.tuple[p] >= s1) throw InvalidArgument("forced tuple leaves the extended network");
            c += f.tuple[p] * place[p];
        }
        if (set[c]) {
            if (lab[c] != f.atom) return;
            continue;
        }
        if (forced_at[c] >= 0 && static_cast<Atom>(forced_at[c]) != f.atom) return;
        if (forced_at[c] < 0) order.push_back(c);
        forced_at[c] = f.atom;
    }
    for (std::size_t c = 0; c < total; ++c)
        if (!set[c] && forced_at[c] < 0) order.push_back(c);

    std::size_t forced_count = 0;
    for (auto c : order)
        if (forced_at[c] >= 0) ++forced_count;
    auto fill_domain = [&](std::size_t c, AtomSet& d) {
        decode(c, digits);
        d = ctx.pattern_atoms(digits);
        for (std::size_t i = 0; i < n && d.any(); ++i) {
            std::size_t base = c - digits[i] * place[i];
            for (std::size_t v = 0; v < s1; ++v) {
                std::size_t other = base + v * place[i];
                if (other != c && set[other]) d &= ctx.compatible(i, lab[other]);
            }
        }
    };

    // forced tuples, checked against N and each other
    AtomSet scratch;
    for (std::size_t h = 0; h < forced_count; ++h) {
        std::size_t c = order[h];
        fill_domain(c, scratch);
        if (!scratch.test(static_cast<std::size_t>(forced_at[c]))) return;
        lab[c] = static_cast<Atom>(forced_at[c]);
        set[c] = 1;
    }
    std::vector<std::size_t> open(order.begin() + static_cast<long>(forced_count), order.end());
    if (open.empty()) {
        visit(Network(n, s1, lab));
        for (std::size_t h = 0; h < forced_count; ++h) set[order[h]] = 0;
        return;
    }
    // forward checking: domains of open tuples shrink as neighbours are fixed
    std::vector<AtomSet> dom(total);
    std::vector<std::size_t> cnt(total, 0);
    for (auto c : open) {
        fill_domain(c, dom[c]);
        cnt[c] = dom[c].count();
        if (cnt[c] == 0) {
            for (std::size_t h = 0; h < forced_count; ++h) set[order[h]] = 0;
            return;
        }
    }
    struct Saved {
        std::size_t code;
        AtomSet domain;
        std::size_t count;
    };
    std::vector<Saved> trail;

    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (stop) return;
        if (depth == open.size()) {
            if (!visit(Network(n, s1, lab))) stop = true;
            return;
        }
        std::size_t best_pos = depth;
        for (std::size_t p = depth + 1; p < open.size(); ++p) {
            std::size_t c = open[p], b = open[best_pos];
            if (cnt[c] < cnt[b] || (cnt[c] == cnt[b] && c < b)) best_pos = p;
        }
        std::swap(open[depth], open[best_pos]);
        std::size_t c = open[depth];
        std::vector<std::size_t> dg(n);
        decode(c, dg);
        AtomSet choices = dom[c];
        choices.for_each([&](std::size_t a) {
            if (stop) return;
            std::size_t mark = trail.size();
            bool dead = false;
            for (std::size_t i = 0; i < n && !dead; ++i) {
                std::size_t base = c - dg[i] * place[i];
                const AtomSet& comp = ctx.compatible(i, static_cast<Atom>(a));
                for (std::size_t v = 0; v < s1; ++v) {
                    std::size_t o = base + v * place[i];
                    if (o == c || set[o]) continue;
                    if (dom[o].subset_of(comp)) continue;
                    trail.push_back({o, dom[o], cnt[o]});
                    dom[o] &= comp;
                    cnt[o] = dom[o].count();
                    if (cnt[o] == 0) {
                        dead = true;
                        break;
                    }
                }
            }
            if (!dead) {
                lab[c] = static_cast<Atom>(a);
                set[c] = 1;
                rec(depth + 1);
                set[c] = 0;
            }
            while (trail.size() > mark) {
                dom[trail.back().code] = std::move(trail.back().domain);
                cnt[trail.back().code] = trail.back().count;
                trail.pop_back();
            }
        });
        // restore the slot order so sibling branches see the same sequence
        std::swap(open[depth], open[best_pos]);
    };
    rec(0);
    for (std::size_t h = 0; h < forced_count; ++h) set[order[h]] = 0;
}

inline std::vector<Network> extensions(const NetworkContext& ctx, const Network& N, const std::vector<ForcedLabel>& forced,
                                       std::size_t cap = 1'000'000) {
    std::vector<Network> out;
    for_each_extension(ctx, N, forced, [&](const Network& M) {
        out.push_back(M);
        if (out.size() > cap) throw ResourceLimit("network extensions", cap);
        return true;
    });
    return out;
}

/// Networks answering an opening with atom a: nodes are the kernel classes of a and the class tuple is labelled a.
inline void for_each_opening(const NetworkContext& ctx, Atom a, const std::function<bool(const Network&)>& visit) {
    const AtomStructure& S = ctx.structure();
    Tuple cls = kernel_of(S, a);
    std::size_t classes = *std::max_element(cls.begin(), cls.end()) + 1;
    // grow from the empty network one node at a time; the forced label sits on the last step
    std::function<bool(const Network&)> grow = [&](const Network& N) -> bool {
        if (N.node_count() == classes) return visit(N);
        std::vector<ForcedLabel> forced;
        if (N.node_count() + 1 == classes) forced.push_back({cls, a});
        bool go = true;
        for_each_extension(ctx, N, forced, [&](const Network& M) {
            go = grow(M);
            return go;
        });
        return go;
    };
    grow(Network(S.dim(), 0, std::vector<Atom>(S.dim() == 0 ? 1 : 0)));
}

inline std::vector<Network> openings(const NetworkContext& ctx, Atom a) {
    std::vector<Network> out;
    for_each_opening(ctx, a, [&](const Network& N) {
        out.push_back(N);
        return true;
    });
    return out;
}

namespace detail {

// Tuples over s1 nodes and their i-neighbours (itself excluded), shared per shape.
struct NaiveShape {
    std::vector<Tuple> tuples;
    std::vector<std::vector<std::vector<std::size_t>>> nbrs;
};

inline const NaiveShape& naive_shape(std::size_t n, std::size_t s1) {
    thread_local std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<NaiveShape>> cache;
    auto& slot = cache[{n, s1}];
    if (!slot) {
        slot = std::make_unique<NaiveShape>();
        std::size_t total = ipow(s1, n);
        Network shape(n, s1, std::vector<Atom>(total, 0));
        slot->tuples.resize(total);
        for (std::size_t c = 0; c < total; ++c) slot->tuples[c] = shape.tuple(c);
        slot->nbrs.assign(total, std::vector<std::vector<std::size_t>>(n));
        for (std::size_t c = 0; c < total; ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t v = 0; v < s1; ++v) {
                    Tuple y = slot->tuples[c];
                    y[i] = v;
                    std::size_t o = shape.code(y);
                    if (o != c) slot->nbrs[c][i].push_back(o);
                }
    }
    return *slot;
}

// Naive labelling of every tuple over s1 nodes left at -1 in `lab`.
inline void naive_fill(const AtomStructure& S, std::size_t s1, std::vector<long long> lab,
                       const std::optional<Tuple>& forced_tuple, std::optional<Atom> forced_atom,
                       const std::function<bool(const Network&)>& visit) {
    std::size_t n = S.dim(), total = ipow(s1, n);
    Network shape(n, s1, std::vector<Atom>(total, 0));
    std::vector<std::size_t> fresh;
    for (std::size_t c = 0; c < total; ++c)
        if (lab[c] < 0) fresh.push_back(c);
    std::optional<std::size_t> forced_code;
    if (forced_atom && forced_tuple) forced_code = shape.code(*forced_tuple);
    const NaiveShape& ns = naive_shape(n, s1);
    const auto& tuples = ns.tuples;
    const auto& nbrs = ns.nbrs;

    auto fits = [&](std::size_t c, Atom a) {
        const Tuple& x = tuples[c];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (S.in_diagonal(i, j, a) != (x[i] == x[j])) return false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!S.related(i, a, a)) return false;
            for (std::size_t o : nbrs[c][i]) {
                long long b = lab[o];
                if (b >= 0 && (!S.related(i, a, static_cast<Atom>(b)) || !S.related(i, static_cast<Atom>(b), a))) return false;
            }
        }
        return true;
    };

    // fitting candidates for an open tuple; all atoms are tried only when no neighbour is fixed
    auto candidates = [&](std::size_t c, std::vector<Atom>& out) {
        out.clear();
        if (forced_code && *forced_code == c) {
            if (fits(c, *forced_atom)) out.push_back(*forced_atom);
            return;
        }
        const std::vector<Atom>* best = nullptr;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t o : nbrs[c][i])
                if (lab[o] >= 0) {
                    const auto& succ = S.successors(i, static_cast<Atom>(lab[o]));
                    if (!best || succ.size() < best->size()) best = &succ;
                }
        if (best) {
            for (Atom a : *best)
                if (fits(c, a)) out.push_back(a);
        } else {
            for (Atom a = 0; a < S.atom_count(); ++a)
                if (fits(c, a)) out.push_back(a);
        }
    };
    // candidate lists, narrowed as neighbours are labelled
    std::vector<std::vector<Atom>> cand(total);
    for (std::size_t c : fresh) {
        candidates(c, cand[c]);
        if (cand[c].empty()) return;
    }
    std::vector<std::pair<std::size_t, std::vector<Atom>>> trail;

    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t h) {
        if (stop) return;
        if (h == fresh.size()) {
            std::vector<Atom> l(total);
            for (std::size_t c = 0; c < total; ++c) l[c] = static_cast<Atom>(lab[c]);
            if (!visit(Network(n, s1, std::move(l)))) stop = true;
            return;
        }
        std::size_t pick = h;
        for (std::size_t p = h + 1; p < fresh.size(); ++p) {
            std::size_t c = fresh[p], b = fresh[pick];
            if (cand[c].size() < cand[b].size() || (cand[c].size() == cand[b].size() && c < b)) pick = p;
        }
        std::swap(fresh[h], fresh[pick]);
        std::size_t c = fresh[h];
        std::vector<Atom> mine = cand[c];
        for (Atom a : mine) {
            if (stop) break;
            std::size_t mark = trail.size();
            bool dead = false;
            for (std::size_t i = 0; i < n && !dead; ++i)
                for (std::size_t o : nbrs[c][i]) {
                    if (lab[o] >= 0) continue;
                    std::vector<Atom> kept;
                    for (Atom b : cand[o])
                        if (S.related(i, a, b) && S.related(i, b, a)) kept.push_back(b);
                    if (kept.size() == cand[o].size()) continue;
                    trail.emplace_back(o, std::move(cand[o]));
                    cand[o] = std::move(kept);
                    if (cand[o].empty()) {
                        dead = true;
                        break;
                    }
                }
            if (!dead) {
                lab[c] = a;
                rec(h + 1);
                lab[c] = -1;
            }
            while (trail.size() > mark) {
                cand[trail.back().first] = std::move(trail.back().second);
                trail.pop_back();
            }
        }
        std::swap(fresh[h], fresh[pick]);
    };
    rec(0);
}

}  // namespace detail

/**
 * Naive enumeration for replay: candidate lists start from successor lists of
 * fixed neighbours filtered by every network condition checked directly on
 * the structure, and shrink as neighbours are labelled; the tuple with the
 * shortest list is labelled next.
 * `visit` returns false to stop.
 */
inline void for_each_naive_extension(const AtomStructure& S, const Network& N, const Tuple& forced_tuple,
                                     std::optional<Atom> forced_atom, const std::function<bool(const Network&)>& visit) {
    std::size_t s1 = N.node_count() + 1;
    Network shape(S.dim(), s1, std::vector<Atom>(ipow(s1, S.dim()), 0));
    std::vector<long long> lab(shape.tuple_count(), -1);
    for (std::size_t c = 0; c < N.tuple_count(); ++c) lab[shape.code(N.tuple(c))] = N.label_at(c);
    detail::naive_fill(S, s1, std::move(lab), forced_tuple, forced_atom, visit);
}

/// Every network on `nodes` nodes whose tuple x is labelled a, by the naive enumerator, sorted.
inline std::vector<Network> naive_networks(const AtomStructure& S, std::size_t nodes, const Tuple& x, Atom a) {
    std::vector<Network> out;
    if (nodes == 0) return out;
    detail::naive_fill(S, nodes, std::vector<long long>(ipow(nodes, S.dim()), -1), x, a, [&](const Network& M) {
        out.push_back(M);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Network> naive_extensions(const AtomStructure& S, const Network& N, const Tuple& forced_tuple,
                                             std::optional<Atom> forced_atom) {
    std::vector<Network> out;
    for_each_naive_extension(S, N, forced_tuple, forced_atom, [&](const Network& M) {
        out.push_back(M);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

/**
 * Canonical representative under node renaming: nodes are ordered by an
 * invariant and the lexicographically least relabelling over the orderings
 * that respect it is taken. When those orderings exceed perm_cap the
 * invariant order alone is used, which keeps equal keys isomorphic but may
 * miss some symmetric pairs.
 */
inline Network canonical_form(const Network& N, std::size_t perm_cap = 720) {
    std::size_t s = N.node_count(), n = N.dim();
    if (s <= 1) return N;
    std::vector<std::vector<Atom>> inv(s);
    for (std::size_t v = 0; v < s; ++v) {
        Tuple diag(n, v);
        inv[v].push_back(N.label(diag));
    }
    for (std::size_t c = 0; c < N.tuple_count(); ++c) {
        Tuple t = N.tuple(c);
        for (std::size_t p = 0; p < n; ++p)
            if (std::count(t.begin(), t.end(), t[p]) == 1) inv[t[p]].push_back(N.label_at(c) * static_cast<Atom>(n) + static_cast<Atom>(p));
    }
    for (auto& v : inv) std::sort(v.begin() + 1, v.end());
    std::vector<std::size_t> order(s);
    for (std::size_t v = 0; v < s; ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inv[a] < inv[b]; });
    // groups of equal invariant
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    std::size_t count = 1;
    for (std::size_t p = 0; p < s;) {
        std::size_t q = p;
        while (q < s && inv[order[q]] == inv[order[p]]) ++q;
        groups.emplace_back(p, q);
        for (std::size_t r = 2; r <= q - p && count <= perm_cap; ++r) count *= r;
        p = q;
    }
    auto relabel = [&](const std::vector<std::size_t>& ord) { return N.restrict(ord); };
    if (count > perm_cap) return relabel(order);
    // digit table: the node at each position of every tuple code
    std::size_t total = N.tuple_count();
    std::vector<std::size_t> digit(total * n);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t r = c;
        for (std::size_t p = 0; p < n; ++p) {
            digit[c * n + p] = r % s;
            r /= s;
        }
    }
    std::vector<std::size_t> place(n, 1);
    for (std::size_t p = 1; p < n; ++p) place[p] = place[p - 1] * s;
    std::vector<Atom> best_labels = relabel(order).labels();
    std::vector<Atom> cand(total);
    auto old_code = [&](std::size_t c) {
        std::size_t o = 0;
        for (std::size_t p = 0; p < n; ++p) o += order[digit[c * n + p]] * place[p];
        return o;
    };
    auto try_order = [&] {
        // lexicographic comparison with the best so far, abandoned once larger
        std::size_t c = 0;
        for (; c < total; ++c) {
            Atom a = N.label_at(old_code(c));
            if (a != best_labels[c]) {
                if (a > best_labels[c]) return;
                break;
            }
            cand[c] = a;
        }
        if (c == total) return;
        for (; c < total; ++c) cand[c] = N.label_at(old_code(c));
        best_labels.swap(cand);
        std::copy(best_labels.begin(), best_labels.end(), cand.begin());
    };
    std::function<void(std::size_t)> rec = [&](std::size_t g) {
        if (g == groups.size()) {
            try_order();
            return;
        }
        auto [lo, hi] = groups[g];
        std::sort(order.begin() + static_cast<long>(lo), order.begin() + static_cast<long>(hi));
        do {
            rec(g + 1);
        } while (std::next_permutation(order.begin() + static_cast<long>(lo), order.begin() + static_cast<long>(hi)));
    };
    rec(0);
    return Network(n, s, std::move(best_labels));
}

/// DOT rendering: one node per network node, tuple labels listed in a note.
inline std::string to_dot(const Network& N, const AtomStructure& S) {
    std::ostringstream os;
    os << "digraph network {\n  rankdir=LR;\n";
    for (std::size_t v = 0; v < N.node_count(); ++v) os << "  n" << v << " [label=\"" << v << "\"];\n";
    os << "  labels [shape=note, label=\"";
    for (std::size_t c = 0; c < N.tuple_count(); ++c) {
        Tuple t = N.tuple(c);
        os << "(";
        for (std::size_t p = 0; p < t.size(); ++p) os << (p ? "," : "") << t[p];
        os << "): " << S.name(N.label_at(c)) << "\\l";
    }
    os << "\"];\n}\n";
    return os.str();
}

}  // namespace cylindric

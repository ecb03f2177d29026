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
#include <cylindric/formula.hpp>
#include <cylindric/set_algebra.hpp>

namespace cylindric {

/**
 * Relativized representation of an atomic algebra of dimension n: each
 * n-tuple over the universe carries at most one atom label. Unlabelled
 * tuples lie outside the unit. Tuples are coded little-endian.
 */
class LabelledModel {
  public:
    LabelledModel(std::size_t universe, std::size_t dim, std::vector<std::optional<Atom>> labels)
        : universe_(universe), dim_(dim), labels_(std::move(labels)) {
        if (universe == 0 || dim == 0) throw InvalidArgument("labelled model needs universe and dim >= 1");
        if (labels_.size() != ipow(universe, dim)) throw InvalidArgument("label table has wrong size");
    }

    std::size_t universe() const noexcept { return universe_; }
    std::size_t dim() const noexcept { return dim_; }

    std::size_t code(const Sequence& t) const {
        std::size_t c = 0, place = 1;
        for (auto x : t) c += x * place, place *= universe_;
        return c;
    }
    const std::optional<Atom>& label(const Sequence& t) const { return labels_.at(code(t)); }
    const std::optional<Atom>& label_at(std::size_t c) const { return labels_.at(c); }
    void set_label(const Sequence& t, std::optional<Atom> a) { labels_.at(code(t)) = a; }

    Sequence tuple(std::size_t c) const {
        Sequence t(dim_);
        for (auto& x : t) x = c % universe_, c /= universe_;
        return t;
    }

  private:
    std::size_t universe_;
    std::size_t dim_;
    std::vector<std::optional<Atom>> labels_;
};

/// The identity representation of ops_on(V): each sequence is labelled by its own atom.
inline LabelledModel classical_representation(const SetAlgebraSpace& V) {
    std::vector<std::optional<Atom>> labels(ipow(V.base(), V.dim()));
    for (std::size_t p = 0; p < V.size(); ++p) labels[V.unit()[p]] = static_cast<Atom>(p);
    return LabelledModel(V.base(), V.dim(), std::move(labels));
}

inline std::string diagonal_symbol(std::size_t i, std::size_t j) { return "d" + std::to_string(i) + "_" + std::to_string(j); }
inline std::string atom_symbol(Atom a) { return "a" + std::to_string(a); }

/**
 * First-order view of a labelled model: "1" is the unit, "0" is empty, dI_J
 * the diagonals, aK the atoms, and each named element x holds of the tuples
 * whose label lies in x.
 */
inline FiniteModel to_finite_model(const FiniteBao& A, const LabelledModel& M,
                                   const std::map<std::string, AtomSet>& elements = {}) {
    if (A.dim() != M.dim()) throw InvalidArgument("model and algebra differ in dimension");
    std::size_t n = A.dim();
    std::map<std::string, AtomSet> named;
    named["1"] = A.one();
    named["0"] = A.zero();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) named[diagonal_symbol(i, j)] = A.d(i, j);
    for (Atom a = 0; a < A.atom_count(); ++a) named[atom_symbol(a)] = A.atom(a);
    for (auto& [k, x] : elements) {
        if (named.count(k)) throw InvalidArgument("element name " + k + " clashes with a built-in symbol");
        if (x.width() != A.atom_count()) throw InvalidArgument("element of wrong width");
        named[k] = x;
    }
    FiniteModel out(M.universe());
    for (auto& [k, x] : named) {
        std::set<Sequence> ts;
        for (std::size_t c = 0; c < ipow(M.universe(), n); ++c) {
            auto& l = M.label_at(c);
            if (l && *l < A.atom_count() && x.test(*l)) ts.insert(M.tuple(c));
        }
        out.add_relation(k, n, ts);
    }
    return out;
}

/// s is in C^n(M) when every n-tuple over positions of s, repeats allowed, is in `top`.
inline bool in_clique_set(const FiniteModel& M, const std::string& top, const Sequence& s) {
    std::size_t n = M.arity(top), m = s.size();
    Sequence t(n);
    for (std::size_t f = 0; f < ipow(m, n); ++f) {
        std::size_t r = f;
        for (auto& x : t) x = s[r % m], r /= m;
        if (!M.holds(top, t)) return false;
    }
    return true;
}

/// C^n(M) as a sorted list of m-tuples.
inline std::vector<Sequence> clique_set(const FiniteModel& M, const std::string& top, std::size_t m,
                                        std::size_t cap = std::size_t{1} << 20) {
    if (ipow(M.universe(), m) > cap) throw ResourceLimit("clique set candidates", cap);
    std::vector<Sequence> out;
    Sequence s(m);
    for (std::size_t c = 0; c < ipow(M.universe(), m); ++c) {
        std::size_t r = c;
        for (std::size_t k = m; k-- > 0;) s[k] = r % M.universe(), r /= M.universe();
        if (in_clique_set(M, top, s)) out.push_back(s);
    }
    return out;
}

/**
 * Clique guarded truth: atoms and connectives as usual, quantifier v ranges
 * over t in C^n(M) with t =_v s. Requires s in C^n(M).
 */
inline bool clique_guarded_eval(const FiniteModel& M, const std::string& top, const Sequence& s, const Formula& f) {
    detail::check_against(M, f, s);
    if (!in_clique_set(M, top, s)) throw InvalidArgument("precondition: assignment is not in the clique set");
    Sequence w = s;
    auto range = [&](Sequence& a, std::size_t v, const auto& visit) {
        std::size_t old = a[v];
        for (std::size_t x = 0; x < M.universe(); ++x) {
            a[v] = x;
            if (in_clique_set(M, top, a) && visit()) break;
        }
        a[v] = old;
    };
    return detail::eval_with(M, w, f, range);
}

struct SquareWitness {
    Sequence s;
    Atom atom = 0;
    std::size_t i = 0;
    std::vector<std::size_t> l;
};

struct SquareReport {
    bool square = true;
    std::size_t points = 0;
    std::optional<SquareWitness> witness;
};

namespace detail {
/// Points of C^n(M) for a labelled model, with i-neighbour classes.
struct CliqueIndex {
    std::vector<Sequence> points;
    std::map<Sequence, std::size_t> where;
    std::vector<std::vector<std::size_t>> cls;            // cls[i][p]: class id of p under =_i
    std::vector<std::vector<std::vector<std::size_t>>> members;  // members[i][class]

    CliqueIndex(const LabelledModel& M, std::size_t m, std::size_t cap) {
        std::size_t u = M.universe(), n = M.dim();
        if (ipow(u, m) > cap) throw ResourceLimit("clique set candidates", cap);
        Sequence s(m), t(n);
        for (std::size_t c = 0; c < ipow(u, m); ++c) {
            std::size_t r = c;
            for (std::size_t k = m; k-- > 0;) s[k] = r % u, r /= u;
            bool ok = true;
            for (std::size_t f = 0; f < ipow(m, n) && ok; ++f) {
                std::size_t q = f;
                for (auto& x : t) x = s[q % m], q /= m;
                ok = M.label(t).has_value();
            }
            if (ok) where[s] = points.size(), points.push_back(s);
        }
        cls.assign(m, std::vector<std::size_t>(points.size()));
        members.assign(m, {});
        for (std::size_t i = 0; i < m; ++i) {
            std::map<Sequence, std::size_t> ids;
            for (std::size_t p = 0; p < points.size(); ++p) {
                Sequence key = points[p];
                key[i] = 0;
                auto [it, fresh] = ids.emplace(key, ids.size());
                if (fresh) members[i].emplace_back();
                cls[i][p] = it->second;
                members[i][it->second].push_back(p);
            }
        }
    }

    AtomSet cyl(std::size_t i, const AtomSet& X) const {
        AtomSet out(points.size());
        std::vector<char> hit(members[i].size(), 0);
        X.for_each([&](std::size_t p) { hit[cls[i][p]] = 1; });
        for (std::size_t c = 0; c < hit.size(); ++c)
            if (hit[c])
                for (auto p : members[i][c]) out.set(p);
        return out;
    }
};

inline void check_model_fits(const FiniteBao& A, const LabelledModel& M, std::size_t m) {
    if (A.dim() != M.dim()) throw InvalidArgument("model and algebra differ in dimension");
    if (m < A.dim()) throw InvalidArgument("m must be at least the dimension");
    for (std::size_t c = 0; c < ipow(M.universe(), M.dim()); ++c)
        if (M.label_at(c) && *M.label_at(c) >= A.atom_count()) throw InvalidArgument("label outside the atom range");
}

inline std::vector<std::vector<std::size_t>> injections(std::size_t n, std::size_t m) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> l(n);
    for (std::size_t f = 0; f < ipow(m, n); ++f) {
        std::size_t r = f;
        for (auto& x : l) x = r % m, r /= m;
        std::set<std::size_t> seen(l.begin(), l.end());
        if (seen.size() == n) out.push_back(l);
    }
    return out;
}

inline SquareReport square_check(const FiniteBao& A, const LabelledModel& M, std::size_t m, const CliqueIndex& C) {
    SquareReport rep;
    rep.points = C.points.size();
    std::size_t n = A.dim();
    Sequence u(n), t(n);
    for (auto& l : injections(n, m))
        for (std::size_t p = 0; p < C.points.size(); ++p) {
            auto& s = C.points[p];
            for (std::size_t k = 0; k < n; ++k) u[k] = s[l[k]];
            Atom here = *M.label(u);
            for (std::size_t i = 0; i < n; ++i) {
                for (Atom a = 0; a < A.atom_count(); ++a) {
                    auto& img = A.image(i, a);
                    if (!std::binary_search(img.begin(), img.end(), here)) continue;
                    bool found = false;
                    for (auto q : C.members[l[i]][C.cls[l[i]][p]]) {
                        for (std::size_t k = 0; k < n; ++k) t[k] = C.points[q][l[k]];
                        if (*M.label(t) == a) {
                            found = true;
                            break;
                        }
                    }
                    if (!found) {
                        rep.square = false;
                        rep.witness = SquareWitness{s, a, i, l};
                        return rep;
                    }
                }
            }
        }
    return rep;
}
}  // namespace detail

/**
 * M is m-square when for s in C^n(M), injective l: n -> m, i < n and atom a
 * with M |= c_i a(s o l) there is t in C^n(M), t =_{l(i)} s, M |= a(t o l).
 * Checking atoms suffices since c_i is additive.
 */
inline SquareReport is_m_square_model(const FiniteBao& A, const LabelledModel& M, std::size_t m,
                                      std::size_t cap = std::size_t{1} << 20) {
    detail::check_model_fits(A, M, m);
    detail::CliqueIndex C(M, m, cap);
    return detail::square_check(A, M, m, C);
}

struct FlatWitness {
    Sequence s;
    std::size_t i = 0;
    std::size_t j = 0;
    std::string detail;
};

struct FlatReport {
    SquareReport square;
    bool flat = false;
    std::size_t depth = 0;
    std::size_t blocks = 0;
    std::optional<FlatWitness> witness;
    /// Always true: only formulas of quantifier depth <= depth are covered.
    bool bounded = true;
    std::string note;
};

/**
 * Bounded m-flatness. The family is every formula over the atom symbols and
 * equality in m variables with quantifier depth at most `depth`, under the
 * clique guarded semantics. Meanings of that family form a finite Boolean
 * algebra of subsets of C^n(M); cylindrification is additive, so commuting
 * on its atoms decides commuting on the whole family.
 */
inline FlatReport is_m_flat_model(const FiniteBao& A, const LabelledModel& M, std::size_t m, std::size_t depth,
                                  std::size_t cap = std::size_t{1} << 20) {
    detail::check_model_fits(A, M, m);
    detail::CliqueIndex C(M, m, cap);
    FlatReport rep;
    rep.depth = depth;
    rep.square = detail::square_check(A, M, m, C);
    std::size_t P = C.points.size(), n = A.dim();
    rep.note = "checked all formulas of quantifier depth <= " + std::to_string(depth) + " in " + std::to_string(m) +
               " variables";
    if (!rep.square.square) {
        rep.note += "; not square";
        return rep;
    }
    if (P == 0) {
        rep.flat = true;
        return rep;
    }

    std::vector<std::size_t> block(P, 0);
    auto refine = [&](const AtomSet& X) {
        std::map<std::pair<std::size_t, bool>, std::size_t> ids;
        for (std::size_t p = 0; p < P; ++p) block[p] = ids.emplace(std::make_pair(block[p], X.test(p)), ids.size()).first->second;
    };
    auto blocks = [&] {
        std::size_t nb = 0;
        for (auto b : block) nb = std::max(nb, b + 1);
        std::vector<AtomSet> out(nb, AtomSet(P));
        for (std::size_t p = 0; p < P; ++p) out[block[p]].set(p);
        return out;
    };

    Sequence t(n);
    for (std::size_t f = 0; f < ipow(m, n); ++f) {
        std::vector<AtomSet> by_atom(A.atom_count(), AtomSet(P));
        for (std::size_t p = 0; p < P; ++p) {
            std::size_t r = f;
            for (auto& x : t) x = C.points[p][r % m], r /= m;
            by_atom[*M.label(t)].set(p);
        }
        for (auto& X : by_atom) refine(X);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            AtomSet X(P);
            for (std::size_t p = 0; p < P; ++p)
                if (C.points[p][i] == C.points[p][j]) X.set(p);
            refine(X);
        }
    for (std::size_t d = 0; d < depth; ++d) {
        auto bs = blocks();
        for (auto& X : bs)
            for (std::size_t i = 0; i < m; ++i) refine(C.cyl(i, X));
    }

    auto bs = blocks();
    rep.blocks = bs.size();
    rep.flat = true;
    for (std::size_t b = 0; b < bs.size() && rep.flat; ++b)
        for (std::size_t i = 0; i < m && rep.flat; ++i)
            for (std::size_t j = i + 1; j < m && rep.flat; ++j) {
                AtomSet ij = C.cyl(i, C.cyl(j, bs[b])), ji = C.cyl(j, C.cyl(i, bs[b]));
                if (ij == ji) continue;
                rep.flat = false;
                std::size_t p = ((ij & ji.complement()) | (ji & ij.complement())).members().front();
                rep.witness = FlatWitness{C.points[p], i, j, "block " + std::to_string(b) + " of " + std::to_string(bs.size())};
            }
    return rep;
}

}  // namespace cylindric

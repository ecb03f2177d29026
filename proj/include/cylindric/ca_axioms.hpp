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
#include <cylindric/report.hpp>

#include <map>

namespace cylindric {

struct AxiomOptions {
    /// Quantify over every element (and pair of elements) instead of atoms.
    bool exhaustive = false;
    /// Exhaustive mode is refused above this many atoms.
    std::size_t exhaustive_atom_cap = 12;
};

namespace detail {

// R = T_i with a R b iff a <= c_i{b}; succ_c lists {b : a R b} per a.
struct OperatorRelation {
    std::vector<std::vector<Atom>> pred;  // c_i{b}
    std::vector<std::vector<Atom>> succ;
    std::vector<AtomSet> pred_set;

    OperatorRelation(const FiniteBao& A, std::size_t i) {
        std::size_t k = A.atom_count();
        pred.resize(k);
        succ.resize(k);
        for (Atom b = 0; b < k; ++b) {
            pred[b] = A.image(i, b);
            for (Atom a : pred[b]) succ[a].push_back(b);
        }
        for (Atom b = 0; b < k; ++b) {
            AtomSet s(k);
            for (Atom a : pred[b]) s.set(a);
            pred_set.push_back(std::move(s));
        }
    }
    bool related(Atom a, Atom b) const { return pred_set[b].test(a); }

    // Exact partition test in linear time: R is reflexive and every atom of
    // c_i{b} has the same image as the least atom of c_i{b}, which itself
    // has that image.
    bool is_equivalence() const {
        std::size_t k = pred.size();
        for (Atom b = 0; b < k; ++b) {
            const auto& img = pred[b];
            if (img.empty() || !pred_set[b].test(b)) return false;
            Atom lead = img.front();
            if (pred[lead] != img) return false;
            for (Atom a : img)
                if (pred[a].empty() || pred[a].front() != lead || pred[a].size() != img.size()) return false;
        }
        return true;
    }
};

inline Check check_c1(const FiniteBao& A) {
    Check c{"C1", true, "additivity: c_i 0 is the empty union", {}, ""};
    for (std::size_t i = 0; i < A.dim(); ++i)
        if (A.c(i, A.zero()).any()) {
            c.passed = false;
            c.witness = {{"i", static_cast<long long>(i)}};
            return c;
        }
    return c;
}

inline Check check_c2(const FiniteBao& A) {
    Check c{"C2", true, "atoms: a <= c_i a for every atom a", {}, ""};
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (Atom a = 0; a < A.atom_count(); ++a) {
            const auto& img = A.image(i, a);
            if (!std::binary_search(img.begin(), img.end(), a)) {
                c.passed = false;
                c.witness = {{"i", static_cast<long long>(i)}, {"atom", a}};
                return c;
            }
        }
    return c;
}

// With R as above, c_i(x . c_i y) = c_i x . c_i y for all x, y iff
//   a R b and c R a imply c R b, and
//   c R a and c R b imply a R b.
// Both directions follow by expanding x and y into atoms.
inline Check check_c3(const FiniteBao& A) {
    Check c{"C3", true, "atom pairs: R-successors of each atom are R-related; c_i of a related atom is contained", {}, ""};
    for (std::size_t i = 0; i < A.dim(); ++i) {
        OperatorRelation R(A, i);
        // an equivalence satisfies both conditions outright
        if (R.is_equivalence()) continue;
        for (Atom a = 0; a < A.atom_count(); ++a) {
            for (Atom b : R.succ[a])
                for (Atom x : R.pred[a])
                    if (!R.related(x, b)) {
                        c.passed = false;
                        c.witness = {{"i", static_cast<long long>(i)}, {"a", a}, {"b", b}, {"c", x}};
                        c.detail = "a <= c_i b but c_i a not <= c_i b";
                        return c;
                    }
            const auto& s = R.succ[a];
            for (Atom p : s)
                for (Atom q : s)
                    if (!R.related(p, q)) {
                        c.passed = false;
                        c.witness = {{"i", static_cast<long long>(i)}, {"a", p}, {"b", q}, {"c", a}};
                        c.detail = "c_i a and c_i b meet but a not <= c_i b";
                        return c;
                    }
        }
    }
    return c;
}

// c_i c_j {a} depends only on the list c_j {a}; atoms sharing it share the result.
inline Check check_c4(const FiniteBao& A) {
    Check c{"C4", true, "atoms: c_i c_j a = c_j c_i a for every atom a (additivity)", {}, ""};
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = i + 1; j < A.dim(); ++j) {
            std::map<const std::vector<Atom>*, AtomSet> ij, ji;
            std::map<std::vector<Atom>, const std::vector<Atom>*> canon_j, canon_i;
            auto through = [&](std::size_t outer, std::size_t inner, Atom a,
                               std::map<std::vector<Atom>, const std::vector<Atom>*>& canon,
                               std::map<const std::vector<Atom>*, AtomSet>& memo) -> const AtomSet& {
                const auto& img = A.image(inner, a);
                const auto* key = canon.emplace(img, &img).first->second;
                auto it = memo.find(key);
                if (it != memo.end()) return it->second;
                AtomSet r(A.atom_count());
                for (Atom b : img)
                    for (Atom x : A.image(outer, b)) r.set(x);
                return memo.emplace(key, std::move(r)).first->second;
            };
            for (Atom a = 0; a < A.atom_count(); ++a)
                if (through(i, j, a, canon_j, ij) != through(j, i, a, canon_i, ji)) {
                    c.passed = false;
                    c.witness = {{"i", static_cast<long long>(i)}, {"j", static_cast<long long>(j)}, {"atom", a}};
                    return c;
                }
        }
    return c;
}

inline Check check_c5(const FiniteBao& A) {
    Check c{"C5", true, "direct: d_ii = 1", {}, ""};
    for (std::size_t i = 0; i < A.dim(); ++i)
        if (A.d(i, i) != A.one()) {
            c.passed = false;
            c.witness = {{"i", static_cast<long long>(i)}};
            return c;
        }
    return c;
}

inline Check check_c6(const FiniteBao& A) {
    Check c{"C6", true, "direct: d_jm = c_i(d_ji . d_im) for i not in {j, m}", {}, ""};
    std::size_t n = A.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m) {
                if (i == j || i == m) continue;
                AtomSet lhs = A.d(j, m);
                AtomSet rhs = A.c(i, A.d(j, i) & A.d(i, m));
                if (lhs != rhs) {
                    AtomSet diff = (lhs & rhs.complement()) | (rhs & lhs.complement());
                    c.passed = false;
                    c.witness = {{"i", static_cast<long long>(i)},
                                 {"j", static_cast<long long>(j)},
                                 {"m", static_cast<long long>(m)},
                                 {"atom", static_cast<long long>(diff.first())}};
                    return c;
                }
            }
    return c;
}

// c_i(d_ij . x) . c_i(d_ij . -x) = 0 for all x iff no atom lies below c_i of two
// distinct atoms of d_ij.
inline Check check_c7(const FiniteBao& A) {
    Check c{"C7", true, "atoms: each atom is below c_i b for at most one atom b <= d_ij", {}, ""};
    std::size_t n = A.dim();
    for (std::size_t i = 0; i < n; ++i) {
        OperatorRelation R(A, i);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            AtomSet dij = A.d(i, j);
            for (Atom a = 0; a < A.atom_count(); ++a) {
                long long first = -1;
                for (Atom b : R.succ[a]) {
                    if (!dij.test(b)) continue;
                    if (first < 0) {
                        first = b;
                    } else {
                        c.passed = false;
                        c.witness = {{"i", static_cast<long long>(i)}, {"j", static_cast<long long>(j)},
                                     {"atom", a}, {"b1", first}, {"b2", b}};
                        return c;
                    }
                }
            }
        }
    }
    return c;
}

inline long long element_code(const AtomSet& x) { return static_cast<long long>(x.words().empty() ? 0 : x.words()[0]); }

// Element-level checks; witnesses x and y are bitmask codes over atoms.
inline std::vector<Check> exhaustive_checks(const FiniteBao& A) {
    auto elems = A.elements();
    std::size_t n = A.dim();
    std::vector<Check> out;
    auto ii = [](std::size_t v) { return static_cast<long long>(v); };

    Check c1{"C1", true, "exhaustive", {}, ""};
    for (std::size_t i = 0; i < n && c1.passed; ++i)
        if (A.c(i, A.zero()).any()) c1 = {"C1", false, "exhaustive", {{"i", ii(i)}}, ""};
    out.push_back(c1);

    Check c2{"C2", true, "exhaustive", {}, ""};
    for (std::size_t i = 0; i < n && c2.passed; ++i)
        for (auto& x : elems)
            if (!x.subset_of(A.c(i, x))) {
                c2 = {"C2", false, "exhaustive", {{"i", ii(i)}, {"x", element_code(x)}}, ""};
                break;
            }
    out.push_back(c2);

    Check c3{"C3", true, "exhaustive", {}, ""};
    for (std::size_t i = 0; i < n && c3.passed; ++i) {
        std::vector<AtomSet> cx;
        for (auto& x : elems) cx.push_back(A.c(i, x));
        for (std::size_t xi = 0; xi < elems.size() && c3.passed; ++xi)
            for (std::size_t yi = 0; yi < elems.size(); ++yi)
                if (A.c(i, elems[xi] & cx[yi]) != (cx[xi] & cx[yi])) {
                    c3 = {"C3", false, "exhaustive",
                          {{"i", ii(i)}, {"x", element_code(elems[xi])}, {"y", element_code(elems[yi])}}, ""};
                    break;
                }
    }
    out.push_back(c3);

    Check c4{"C4", true, "exhaustive", {}, ""};
    for (std::size_t i = 0; i < n && c4.passed; ++i)
        for (std::size_t j = i + 1; j < n && c4.passed; ++j)
            for (auto& x : elems)
                if (A.c(i, A.c(j, x)) != A.c(j, A.c(i, x))) {
                    c4 = {"C4", false, "exhaustive", {{"i", ii(i)}, {"j", ii(j)}, {"x", element_code(x)}}, ""};
                    break;
                }
    out.push_back(c4);

    auto c5 = check_c5(A);
    c5.reduction = "exhaustive";
    out.push_back(c5);
    auto c6 = check_c6(A);
    c6.reduction = "exhaustive";
    out.push_back(c6);

    Check c7{"C7", true, "exhaustive", {}, ""};
    for (std::size_t i = 0; i < n && c7.passed; ++i)
        for (std::size_t j = 0; j < n && c7.passed; ++j) {
            if (i == j) continue;
            for (auto& x : elems)
                if ((A.c(i, A.d(i, j) & x) & A.c(i, A.d(i, j) & x.complement())).any()) {
                    c7 = {"C7", false, "exhaustive", {{"i", ii(i)}, {"j", ii(j)}, {"x", element_code(x)}}, ""};
                    break;
                }
        }
    out.push_back(c7);
    return out;
}

}  // namespace detail

/**
 * Checks the seven cylindric-algebra postulates C1-C7 on a finite algebra.
 *
 * The default mode quantifies over atoms; every reduction is exact because the
 * operators are completely additive. Each check records the reduction used.
 */
inline Report check_ca_axioms(const FiniteBao& A, const AxiomOptions& opt = {}) {
    Report r;
    r.subject = "CA axioms (" + std::to_string(A.dim()) + "-dimensional, " + std::to_string(A.atom_count()) + " atoms" +
                (A.provenance().empty() ? "" : ", " + A.provenance()) + ")";
    if (opt.exhaustive) {
        if (A.atom_count() > opt.exhaustive_atom_cap) throw ResourceLimit("exhaustive axiom check atoms", opt.exhaustive_atom_cap);
        r.checks = detail::exhaustive_checks(A);
        return r;
    }
    r.checks = {detail::check_c1(A), detail::check_c2(A), detail::check_c3(A), detail::check_c4(A),
                detail::check_c5(A), detail::check_c6(A), detail::check_c7(A)};
    return r;
}

}  // namespace cylindric

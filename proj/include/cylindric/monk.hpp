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
#include <cylindric/graph.hpp>
#include <cylindric/report.hpp>

#include <array>
#include <functional>
#include <map>
#include <set>

namespace cylindric {

using Triple = std::array<Atom, 3>;

/**
 * Relation-algebra atom structure presented by forbidden triples. (a, b, c) is
 * consistent, i.e. c <= a;b, unless it is listed. The list must be closed under
 * the Peircean transforms; construction rejects lists that are not.
 */
class RaAtomStructure {
  public:
    RaAtomStructure() = default;

    RaAtomStructure(std::vector<std::string> names, std::vector<bool> identity, std::vector<Atom> converse,
                    const std::vector<Triple>& forbidden)
        : names_(std::move(names)), identity_(std::move(identity)), converse_(std::move(converse)) {
        std::size_t k = names_.size();
        if (identity_.size() != k || converse_.size() != k) throw InvalidArgument("RA atom tables have mismatched sizes");
        for (Atom a = 0; a < k; ++a) {
            if (converse_[a] >= k) throw InvalidArgument("converse out of range");
            index_[names_[a]] = a;
        }
        if (index_.size() != k) throw InvalidArgument("atom names must be distinct");
        cube_.assign(k * k * k, false);
        for (auto& t : forbidden) {
            for (Atom x : t)
                if (x >= k) throw InvalidArgument("forbidden triple atom out of range");
            cube_[cell(t)] = true;
        }
        for (auto& t : forbidden)
            for (auto& p : peircean_transforms(t))
                if (!cube_[cell(p)])
                    throw InvalidArgument("forbidden triples not closed under Peircean transforms: (" + name(t[0]) + ", " +
                                          name(t[1]) + ", " + name(t[2]) + ") listed but (" + name(p[0]) + ", " +
                                          name(p[1]) + ", " + name(p[2]) + ") is not");
    }

    std::size_t atom_count() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(Atom a) const { return names_.at(a); }
    bool is_identity(Atom a) const { return identity_.at(a); }
    Atom converse(Atom a) const { return converse_.at(a); }
    const std::vector<Atom>& converse_table() const noexcept { return converse_; }
    const std::vector<bool>& identity_table() const noexcept { return identity_; }

    Atom atom(const std::string& n) const {
        auto it = index_.find(n);
        if (it == index_.end()) throw InvalidArgument("unknown atom '" + n + "'");
        return it->second;
    }

    std::vector<Atom> identities() const {
        std::vector<Atom> out;
        for (Atom a = 0; a < identity_.size(); ++a)
            if (identity_[a]) out.push_back(a);
        return out;
    }

    bool forbidden(Atom a, Atom b, Atom c) const { return cube_[cell({a, b, c})]; }
    bool consistent(Atom a, Atom b, Atom c) const { return !forbidden(a, b, c); }
    bool forbidden(const std::string& a, const std::string& b, const std::string& c) const {
        return forbidden(atom(a), atom(b), atom(c));
    }

    /// Sorted list of every forbidden triple.
    std::vector<Triple> forbidden_list() const {
        std::vector<Triple> out;
        std::size_t k = atom_count();
        for (Atom a = 0; a < k; ++a)
            for (Atom b = 0; b < k; ++b)
                for (Atom c = 0; c < k; ++c)
                    if (forbidden(a, b, c)) out.push_back({a, b, c});
        return out;
    }

    /// The five other members of the Peircean orbit of (a, b, c) (c <= a;b).
    std::array<Triple, 5> peircean_transforms(const Triple& t) const {
        Atom a = t[0], b = t[1], c = t[2];
        Atom ca = converse_[a], cb = converse_[b], cc = converse_[c];
        return {Triple{ca, c, b}, Triple{c, cb, a}, Triple{cb, ca, cc}, Triple{cc, a, cb}, Triple{b, cc, ca}};
    }

  private:
    std::size_t cell(const Triple& t) const {
        std::size_t k = names_.size();
        return (t[0] * k + t[1]) * k + t[2];
    }

    std::vector<std::string> names_;
    std::vector<bool> identity_;
    std::vector<Atom> converse_;
    std::vector<bool> cube_;
    std::map<std::string, Atom> index_;
};

/// Closes a triple list under Peircean transforms, given the converse table.
inline std::vector<Triple> peircean_closure(const std::vector<Atom>& converse, std::vector<Triple> triples) {
    std::set<Triple> seen(triples.begin(), triples.end());
    for (std::size_t h = 0; h < triples.size(); ++h) {
        Triple t = triples[h];
        Atom a = t[0], b = t[1], c = t[2];
        Atom ca = converse[a], cb = converse[b], cc = converse[c];
        for (Triple p : {Triple{ca, c, b}, Triple{c, cb, a}, Triple{cb, ca, cc}, Triple{cc, a, cb}, Triple{b, cc, ca}})
            if (seen.insert(p).second) triples.push_back(p);
    }
    return {seen.begin(), seen.end()};
}

/**
 * The Monk-style atom structure of a graph: atoms Id and (v, i) for nodes v and
 * colours i < n, all self-converse. A triple is consistent when one member is
 * Id and the other two are equal, or it has no Id and either the colours are
 * not all equal or the three nodes span at least one edge.
 */
inline RaAtomStructure alpha_of_graph(const Graph& g, std::size_t n) {
    if (n == 0) throw InvalidArgument("alpha_of_graph needs n >= 1");
    std::vector<std::string> names{"Id"};
    std::vector<std::pair<std::size_t, std::size_t>> node_colour{{0, 0}};
    for (std::size_t v = 0; v < g.node_count(); ++v)
        for (std::size_t i = 0; i < n; ++i) {
            names.push_back("g" + std::to_string(v) + ":" + std::to_string(i));
            node_colour.emplace_back(v, i);
        }
    std::size_t k = names.size();
    std::vector<bool> identity(k, false);
    identity[0] = true;
    std::vector<Atom> converse(k);
    for (Atom a = 0; a < k; ++a) converse[a] = a;

    auto consistent = [&](Atom a, Atom b, Atom c) {
        int ids = (a == 0) + (b == 0) + (c == 0);
        if (ids > 0) return (a == 0 && b == c) || (b == 0 && a == c) || (c == 0 && a == b);
        auto [va, ia] = node_colour[a];
        auto [vb, ib] = node_colour[b];
        auto [vc, ic] = node_colour[c];
        if (!(ia == ib && ib == ic)) return true;
        return g.adjacent(va, vb) || g.adjacent(vb, vc) || g.adjacent(va, vc);
    };
    std::vector<Triple> forbidden;
    for (Atom a = 0; a < k; ++a)
        for (Atom b = 0; b < k; ++b)
            for (Atom c = 0; c < k; ++c)
                if (!consistent(a, b, c)) forbidden.push_back({a, b, c});
    return RaAtomStructure(names, identity, converse, forbidden);
}

/// Atoms Id, r:i, y:i, b:i (i < M); forbidden: (Id, x, y) for x != y and (c(i), c(i), c(j)) for i <= j, with permutations.
inline RaAtomStructure rybh_algebra(std::size_t M) {
    if (M == 0) throw InvalidArgument("rybh_algebra needs M >= 1");
    std::vector<std::string> names{"Id"};
    for (char colour : {'r', 'y', 'b'})
        for (std::size_t i = 0; i < M; ++i) names.push_back(std::string(1, colour) + ":" + std::to_string(i));
    std::size_t k = names.size();
    std::vector<bool> identity(k, false);
    identity[0] = true;
    std::vector<Atom> converse(k);
    for (Atom a = 0; a < k; ++a) converse[a] = a;
    auto at = [&](std::size_t colour, std::size_t i) { return static_cast<Atom>(1 + colour * M + i); };

    std::vector<Triple> forbidden;
    auto add_perms = [&](Triple t) {
        std::sort(t.begin(), t.end());
        do {
            forbidden.push_back(t);
        } while (std::next_permutation(t.begin(), t.end()));
    };
    for (Atom x = 0; x < k; ++x)
        for (Atom y = 0; y < k; ++y)
            if (x != y) add_perms({0, x, y});
    for (std::size_t colour = 0; colour < 3; ++colour)
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = i; j < M; ++j) add_perms({at(colour, i), at(colour, i), at(colour, j)});
    std::sort(forbidden.begin(), forbidden.end());
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
    return RaAtomStructure(names, identity, converse, forbidden);
}

/**
 * Replaces a self-converse non-identity atom by `parts` copies. A triple of the
 * new structure is forbidden iff its image under the projection onto the old
 * atoms is forbidden, or it is an identity triple (e, x, y) / (x, e, y) /
 * (x, y, e) whose two other members are distinct copies (identity law).
 *
 * Copies of "r:0" are named "r0:0", "r0:1", ...
 */
inline RaAtomStructure split_atom(const RaAtomStructure& R, Atom target, std::size_t parts) {
    if (target >= R.atom_count()) throw InvalidArgument("split target out of range");
    if (R.is_identity(target)) throw InvalidArgument("cannot split an identity atom");
    if (R.converse(target) != target) throw InvalidArgument("split target must be self-converse");
    if (parts == 0) throw InvalidArgument("split needs at least one part");

    std::vector<std::string> names;
    std::vector<bool> identity;
    std::vector<Atom> origin;  // projection onto the old atoms
    std::string stem = R.name(target);
    stem.erase(std::remove(stem.begin(), stem.end(), ':'), stem.end());
    for (Atom a = 0; a < R.atom_count(); ++a) {
        if (a == target) {
            for (std::size_t p = 0; p < parts; ++p) {
                names.push_back(stem + ":" + std::to_string(p));
                identity.push_back(false);
                origin.push_back(a);
            }
        } else {
            names.push_back(R.name(a));
            identity.push_back(R.is_identity(a));
            origin.push_back(a);
        }
    }
    std::size_t k = names.size();
    // old converse composed with the projection; copies are their own converses
    std::vector<Atom> converse(k);
    for (Atom x = 0; x < k; ++x) {
        if (origin[x] == target) {
            converse[x] = x;
        } else {
            Atom want = R.converse(origin[x]);
            converse[x] = static_cast<Atom>(std::find(origin.begin(), origin.end(), want) - origin.begin());
        }
    }
    std::vector<Triple> forbidden;
    for (Atom a = 0; a < k; ++a)
        for (Atom b = 0; b < k; ++b)
            for (Atom c = 0; c < k; ++c) {
                bool bad = R.forbidden(origin[a], origin[b], origin[c]);
                if (identity[a] && b != c) bad = true;
                if (identity[b] && a != c) bad = true;
                if (identity[c] && a != converse[b]) bad = true;
                if (bad) forbidden.push_back({a, b, c});
            }
    return RaAtomStructure(names, identity, converse, forbidden);
}

inline RaAtomStructure split_atom(const RaAtomStructure& R, const std::string& target, std::size_t parts) {
    return split_atom(R, R.atom(target), parts);
}

/// Identity law, converse involution, nonempty identity, Peircean closure, and atom-level associativity.
inline Report check_ra_atom_structure(const RaAtomStructure& R) {
    Report r;
    r.subject = "RA atom structure (" + std::to_string(R.atom_count()) + " atoms)";
    std::size_t k = R.atom_count();
    auto L = [](Atom a) { return static_cast<long long>(a); };

    Check inv{"converse-involution", true, "every atom: converse(converse(a)) = a; identities self-converse", {}, ""};
    for (Atom a = 0; a < k && inv.passed; ++a)
        if (R.converse(R.converse(a)) != a || (R.is_identity(a) && R.converse(a) != a)) {
            inv.passed = false;
            inv.witness = {{"atom", L(a)}};
        }
    r.checks.push_back(inv);

    Check nonempty{"identity-nonempty", !R.identities().empty(), "direct", {}, ""};
    r.checks.push_back(nonempty);

    Check id{"identity-law", true, "atoms: (e,a,b), (a,e,b) consistent only for a = b; each a has a domain and a range identity", {}, ""};
    for (Atom e : R.identities())
        for (Atom a = 0; a < k && id.passed; ++a)
            for (Atom b = 0; b < k && id.passed; ++b)
                if (a != b && (R.consistent(e, a, b) || R.consistent(a, e, b))) {
                    id.passed = false;
                    id.witness = {{"e", L(e)}, {"a", L(a)}, {"b", L(b)}};
                }
    for (Atom a = 0; a < k && id.passed; ++a) {
        bool dom = false, ran = false;
        for (Atom e : R.identities()) {
            dom |= R.consistent(e, a, a);
            ran |= R.consistent(a, e, a);
        }
        if (!dom || !ran) {
            id.passed = false;
            id.witness = {{"atom", L(a)}};
            id.detail = dom ? "no range identity" : "no domain identity";
        }
    }
    r.checks.push_back(id);

    Check closed{"peircean-closure", true, "all triples: consistency invariant under the Peircean transforms", {}, ""};
    for (Atom a = 0; a < k && closed.passed; ++a)
        for (Atom b = 0; b < k && closed.passed; ++b)
            for (Atom c = 0; c < k && closed.passed; ++c)
                for (auto& p : R.peircean_transforms({a, b, c}))
                    if (R.forbidden(a, b, c) != R.forbidden(p[0], p[1], p[2])) {
                        closed.passed = false;
                        closed.witness = {{"a", L(a)}, {"b", L(b)}, {"c", L(c)}};
                        break;
                    }
    r.checks.push_back(closed);

    // (a;b);c and a;(b;c) contain the same atoms d
    Check assoc{"associativity", true, "atoms: exists x with (a,b,x), (x,c,d) iff exists y with (b,c,y), (a,y,d)", {}, ""};
    for (Atom a = 0; a < k && assoc.passed; ++a)
        for (Atom b = 0; b < k && assoc.passed; ++b)
            for (Atom c = 0; c < k && assoc.passed; ++c)
                for (Atom d = 0; d < k && assoc.passed; ++d) {
                    bool left = false, right = false;
                    for (Atom x = 0; x < k && !left; ++x) left = R.consistent(a, b, x) && R.consistent(x, c, d);
                    for (Atom y = 0; y < k && !right; ++y) right = R.consistent(b, c, y) && R.consistent(a, y, d);
                    if (left != right) {
                        assoc.passed = false;
                        assoc.witness = {{"a", L(a)}, {"b", L(b)}, {"c", L(c)}, {"d", L(d)}};
                    }
                }
    r.checks.push_back(assoc);
    return r;
}

/// An n x n basic matrix, row-major.
using BasicMatrix = std::vector<Atom>;

/**
 * All n x n basic matrices over R: identity diagonal, m_ji = converse(m_ij), and
 * every (m_ij, m_jk, m_ik) consistent. Enumerated by backtracking over the
 * upper triangle in lexicographic order.
 */
inline std::vector<BasicMatrix> basic_matrix_list(const RaAtomStructure& R, std::size_t n, std::size_t cap = 200'000) {
    if (n == 0) throw InvalidArgument("basic matrices need n >= 1");
    std::vector<BasicMatrix> out;
    BasicMatrix m(n * n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i) cells.emplace_back(i, i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) cells.emplace_back(i, j);
    std::vector<bool> set(n * n, false);

    auto ok_with = [&](std::size_t p, std::size_t q) {
        // every triangle (i, j, k) whose three cells are set and that involves (p, q) or (q, p)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) {
                    bool touches = (i == p && j == q) || (i == q && j == p) || (j == p && l == q) || (j == q && l == p) ||
                                   (i == p && l == q) || (i == q && l == p);
                    if (!touches) continue;
                    if (!set[i * n + j] || !set[j * n + l] || !set[i * n + l]) continue;
                    if (R.forbidden(m[i * n + j], m[j * n + l], m[i * n + l])) return false;
                }
        return true;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t h) {
        if (h == cells.size()) {
            out.push_back(m);
            if (out.size() > cap) throw ResourceLimit("basic matrices", cap);
            return;
        }
        auto [i, j] = cells[h];
        for (Atom a = 0; a < R.atom_count(); ++a) {
            if (i == j && !R.is_identity(a)) continue;
            m[i * n + j] = a;
            m[j * n + i] = R.converse(a);
            set[i * n + j] = set[j * n + i] = true;
            if (ok_with(i, j)) rec(h + 1);
            set[i * n + j] = set[j * n + i] = false;
        }
    };
    rec(0);
    return out;
}

/// Mat_n(R) as an n-dimensional atom structure: T_i is agreement off row and column i, D_ij is m_ij in Id.
inline AtomStructure basic_matrices(const RaAtomStructure& R, std::size_t n, std::size_t cap = 200'000) {
    auto mats = basic_matrix_list(R, n, cap);
    std::vector<std::vector<std::uint32_t>> class_of(n, std::vector<std::uint32_t>(mats.size()));
    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::vector<Atom>, std::uint32_t> ids;
        for (Atom a = 0; a < mats.size(); ++a) {
            std::vector<Atom> key;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                    if (p != i && q != i) key.push_back(mats[a][p * n + q]);
            class_of[i][a] = ids.emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
        }
    }
    std::vector<AtomSet> diag;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            AtomSet d(mats.size());
            for (Atom a = 0; a < mats.size(); ++a)
                if (R.is_identity(mats[a][i * n + j])) d.set(a);
            diag.push_back(d);
        }
    auto S = AtomStructure::from_classes(n, mats.size(), class_of, diag);
    std::vector<std::string> names;
    for (auto& m : mats) {
        std::string s;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += (s.empty() ? "" : " ") + R.name(m[i * n + j]);
        names.push_back(s);
    }
    S.set_names(std::move(names));
    return S;
}

/**
 * The CA atom structure built straight from n-point configurations: a kernel
 * on positions 0..n-1 and one label (v, i) in G x n per pair of distinct
 * classes, with every three-class triangle obeying the graph rule (colours
 * not all equal, or an edge among the three nodes).
 */
inline AtomStructure monk_ca_atom_structure(const Graph& g, std::size_t n, std::size_t cap = 200'000) {
    if (n == 0) throw InvalidArgument("monk structure needs n >= 1");
    std::size_t labels = g.node_count() * n;
    auto node = [&](std::size_t l) { return l / n; };
    auto colour = [&](std::size_t l) { return l % n; };
    auto triangle_ok = [&](std::size_t a, std::size_t b, std::size_t c) {
        if (!(colour(a) == colour(b) && colour(b) == colour(c))) return true;
        return g.adjacent(node(a), node(b)) || g.adjacent(node(b), node(c)) || g.adjacent(node(a), node(c));
    };
    struct Config {
        std::vector<std::uint8_t> kernel;
        std::size_t classes;
        std::vector<std::size_t> lab;  // classes x classes, symmetric
    };
    std::vector<Config> configs;
    for (auto& kernel : kernel_partitions(n)) {
        std::size_t c = *std::max_element(kernel.begin(), kernel.end()) + 1u;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t u = 0; u < c; ++u)
            for (std::size_t v = u + 1; v < c; ++v) pairs.emplace_back(u, v);
        std::vector<std::size_t> lab(c * c, 0);
        std::function<void(std::size_t)> rec = [&](std::size_t h) {
            if (h == pairs.size()) {
                configs.push_back({kernel, c, lab});
                if (configs.size() > cap) throw ResourceLimit("monk configurations", cap);
                return;
            }
            auto [u, v] = pairs[h];
            for (std::size_t l = 0; l < labels; ++l) {
                lab[u * c + v] = lab[v * c + u] = l;
                bool ok = true;
                for (std::size_t w = 0; w < u && ok; ++w) ok = triangle_ok(lab[w * c + u], l, lab[w * c + v]);
                if (ok) rec(h + 1);
            }
        };
        rec(0);
    }
    std::vector<std::vector<std::uint32_t>> class_of(n, std::vector<std::uint32_t>(configs.size()));
    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::vector<std::size_t>, std::uint32_t> ids;
        for (Atom a = 0; a < configs.size(); ++a) {
            const auto& cf = configs[a];
            // positions other than i: equality pattern and labels between them
            std::vector<std::size_t> key;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) {
                    if (p == i || q == i) continue;
                    std::size_t cp = cf.kernel[p], cq = cf.kernel[q];
                    key.push_back(cp == cq ? SIZE_MAX : cf.lab[cp * cf.classes + cq]);
                }
            class_of[i][a] = ids.emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
        }
    }
    std::vector<AtomSet> diag;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            AtomSet d(configs.size());
            for (Atom a = 0; a < configs.size(); ++a)
                if (configs[a].kernel[i] == configs[a].kernel[j]) d.set(a);
            diag.push_back(d);
        }
    return AtomStructure::from_classes(n, configs.size(), class_of, diag);
}

}  // namespace cylindric

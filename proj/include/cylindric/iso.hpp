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

#include <map>
#include <optional>

namespace cylindric {

namespace detail {

// Joint colour refinement of two structures. Colours are ids into a dictionary
// shared by both sides, so equal colours mean equal refinement histories.
class JointRefiner {
  public:
    JointRefiner(const AtomStructure& a, const AtomStructure& b) : s_{&a, &b} {}

    using Colouring = std::vector<std::uint32_t>;

    std::pair<Colouring, Colouring> initial() const {
        std::map<std::vector<std::uint64_t>, std::uint32_t> dict;
        std::vector<std::vector<std::uint64_t>> sig[2];
        for (int side = 0; side < 2; ++side) {
            const auto& s = *s_[side];
            for (Atom x = 0; x < s.atom_count(); ++x) {
                std::vector<std::uint64_t> v;
                for (std::size_t i = 0; i < s.dim(); ++i) {
                    v.push_back(s.successors(i, x).size());
                    v.push_back(s.predecessors(i, x).size());
                    v.push_back(s.related(i, x, x));
                    for (std::size_t j = i + 1; j < s.dim(); ++j) v.push_back(s.in_diagonal(i, j, x));
                }
                sig[side].push_back(std::move(v));
            }
        }
        return assign(dict, sig);
    }

    // One refinement step; returns false when neither colouring split further.
    // Equivalence dimensions are summarised once per class: every member of a
    // class sees the same neighbourhood.
    bool refine(Colouring& ca, Colouring& cb) const {
        std::vector<std::vector<std::uint64_t>> sig[2];
        const Colouring* cols[2] = {&ca, &cb};
        std::vector<std::vector<std::uint64_t>> class_hist[2];
        std::map<std::vector<std::uint32_t>, std::uint64_t> hist_dict;
        for (int side = 0; side < 2; ++side) {
            const auto& s = *s_[side];
            const auto& col = *cols[side];
            class_hist[side].resize(s.dim());
            for (std::size_t i = 0; i < s.dim(); ++i) {
                if (!s.is_equivalence(i)) continue;
                std::vector<std::vector<std::uint32_t>> members;
                for (Atom x = 0; x < s.atom_count(); ++x) {
                    auto c = *s.class_index(i, x);
                    if (c >= members.size()) members.resize(c + 1);
                    members[c].push_back(col[x]);
                }
                for (auto& m : members) {
                    std::sort(m.begin(), m.end());
                    auto it = hist_dict.emplace(std::move(m), hist_dict.size()).first;
                    class_hist[side][i].push_back(it->second);
                }
            }
        }
        for (int side = 0; side < 2; ++side) {
            const auto& s = *s_[side];
            const auto& col = *cols[side];
            for (Atom x = 0; x < s.atom_count(); ++x) {
                std::vector<std::uint64_t> v{col[x]};
                for (std::size_t i = 0; i < s.dim(); ++i) {
                    if (s.is_equivalence(i)) {
                        v.push_back(UINT64_MAX - 1);
                        v.push_back(class_hist[side][i][*s.class_index(i, x)]);
                        continue;
                    }
                    for (const auto* nb : {&s.successors(i, x), &s.predecessors(i, x)}) {
                        std::vector<std::uint32_t> cs;
                        cs.reserve(nb->size());
                        for (Atom y : *nb) cs.push_back(col[y]);
                        std::sort(cs.begin(), cs.end());
                        v.push_back(UINT64_MAX);
                        v.insert(v.end(), cs.begin(), cs.end());
                    }
                }
                sig[side].push_back(std::move(v));
            }
        }
        std::map<std::vector<std::uint64_t>, std::uint32_t> dict;
        auto [na, nb] = assign(dict, sig);
        bool split = classes(na) != classes(ca) || classes(nb) != classes(cb);
        ca = std::move(na);
        cb = std::move(nb);
        return split;
    }

    static std::size_t classes(const Colouring& c) {
        std::vector<std::uint32_t> u(c);
        std::sort(u.begin(), u.end());
        return static_cast<std::size_t>(std::unique(u.begin(), u.end()) - u.begin());
    }

  private:
    static std::pair<Colouring, Colouring> assign(std::map<std::vector<std::uint64_t>, std::uint32_t>& dict,
                                                  std::vector<std::vector<std::uint64_t>> (&sig)[2]) {
        for (int side = 0; side < 2; ++side)
            for (auto& v : sig[side]) dict.emplace(v, 0);
        std::uint32_t next = 0;
        for (auto& [k, id] : dict) id = next++;
        Colouring out[2];
        for (int side = 0; side < 2; ++side)
            for (auto& v : sig[side]) out[side].push_back(dict.at(v));
        return {out[0], out[1]};
    }

    const AtomStructure* s_[2];
};

inline bool is_isomorphism(const AtomStructure& a, const AtomStructure& b, const std::vector<Atom>& f) {
    if (a.dim() != b.dim() || a.atom_count() != b.atom_count() || f.size() != a.atom_count()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (Atom x = 0; x < a.atom_count(); ++x) {
            const auto& sa = a.successors(i, x);
            const auto& sb = b.successors(i, f[x]);
            if (sa.size() != sb.size()) return false;
            for (Atom y : sa)
                if (!b.related(i, f[x], f[y])) return false;
        }
        for (std::size_t j = i + 1; j < a.dim(); ++j)
            for (Atom x = 0; x < a.atom_count(); ++x)
                if (a.in_diagonal(i, j, x) != b.in_diagonal(i, j, f[x])) return false;
    }
    return true;
}

inline bool histograms_match(const std::vector<std::uint32_t>& ca, const std::vector<std::uint32_t>& cb) {
    std::vector<std::uint32_t> a(ca), b(cb);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

inline std::optional<std::vector<Atom>> iso_search(const JointRefiner& r, const AtomStructure& a,
                                                   const AtomStructure& b, std::vector<std::uint32_t> ca,
                                                   std::vector<std::uint32_t> cb, std::uint32_t fresh,
                                                   std::size_t& nodes, std::size_t node_cap) {
    if (++nodes > node_cap) throw ResourceLimit("isomorphism search nodes", node_cap);
    while (true) {
        if (!histograms_match(ca, cb)) return std::nullopt;
        if (!r.refine(ca, cb)) break;
    }
    if (!histograms_match(ca, cb)) return std::nullopt;

    // smallest non-singleton cell on the left
    std::map<std::uint32_t, std::vector<Atom>> cells;
    for (Atom x = 0; x < ca.size(); ++x) cells[ca[x]].push_back(x);
    const std::vector<Atom>* target = nullptr;
    std::uint32_t target_colour = 0;
    for (auto& [c, members] : cells)
        if (members.size() > 1 && (!target || members.size() < target->size())) {
            target = &members;
            target_colour = c;
        }
    if (!target) {
        std::map<std::uint32_t, Atom> right;
        for (Atom y = 0; y < cb.size(); ++y) right[cb[y]] = y;
        std::vector<Atom> f(ca.size());
        for (Atom x = 0; x < ca.size(); ++x) f[x] = right.at(ca[x]);
        if (is_isomorphism(a, b, f)) return f;
        return std::nullopt;
    }
    Atom v = target->front();
    for (Atom w = 0; w < cb.size(); ++w) {
        if (cb[w] != target_colour) continue;
        auto na = ca, nb = cb;
        na[v] = fresh;
        nb[w] = fresh;
        if (auto f = iso_search(r, a, b, na, nb, fresh + 1, nodes, node_cap)) return f;
    }
    return std::nullopt;
}

}  // namespace detail

/**
 * An isomorphism f: S1 -> S2 (a T_i b iff f(a) T_i f(b), D_ij preserved), or
 * nullopt. The search is complete: colour refinement only prunes candidates
 * that no isomorphism can use, and every leaf is checked in full.
 */
inline std::optional<std::vector<Atom>> find_isomorphism(const AtomStructure& s1, const AtomStructure& s2,
                                                         std::size_t node_cap = 1'000'000) {
    if (s1.dim() != s2.dim() || s1.atom_count() != s2.atom_count()) return std::nullopt;
    if (s1.atom_count() == 0) return std::vector<Atom>{};
    detail::JointRefiner r(s1, s2);
    auto [ca, cb] = r.initial();
    // Individualised colours start above any refinement id.
    std::uint32_t fresh = static_cast<std::uint32_t>(1U << 30);
    std::size_t nodes = 0;
    return detail::iso_search(r, s1, s2, ca, cb, fresh, nodes, node_cap);
}

inline bool iso_atom_structures(const AtomStructure& s1, const AtomStructure& s2) {
    return find_isomorphism(s1, s2).has_value();
}

}  // namespace cylindric

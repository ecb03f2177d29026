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

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace cylindric {

using ColourId = std::uint16_t;

struct Colour {
    enum Kind : std::uint8_t { green, tinted, white, red };
    Kind kind;
    int a = 0;  // green/white index, tint, or first red index
    int b = 0;  // second red index

    std::string name() const {
        switch (kind) {
            case green: return "g:" + std::to_string(a);
            case tinted: return "g0:" + std::to_string(a);
            case white: return "w:" + std::to_string(a);
            case red: return "r:" + std::to_string(a) + "," + std::to_string(b);
        }
        return "?";
    }
    bool is_green() const { return kind == green || kind == tinted; }
};

struct RainbowAtom;

/**
 * Colour inventory for dimension n. Greens are g_i (1 <= i <= n-2) and tinted
 * g0:t for t in the green index window; whites w_i (i <= n-2); reds r_{j,k} for
 * distinct j, k of the red window, read as the oriented edge j -> k.
 *
 * Ordered mode adds the order-preserving rule for two tinted greens and a red.
 */
class RainbowSig {
  public:
    RainbowSig(std::size_t n, int green_lo, int green_hi, int red_lo, int red_hi, bool ordered = false)
        : n_(n), green_lo_(green_lo), green_hi_(green_hi), red_lo_(red_lo), red_hi_(red_hi), ordered_(ordered) {
        if (n < 2) throw InvalidArgument("rainbow dimension must be >= 2");
        if (green_hi < green_lo) throw InvalidArgument("empty green index window");
        if (red_hi < red_lo) throw InvalidArgument("empty red index window");
        for (std::size_t i = 1; i + 1 < n; ++i) add({Colour::green, static_cast<int>(i), 0});
        for (int t = green_lo; t <= green_hi; ++t) add({Colour::tinted, t, 0});
        for (std::size_t i = 0; i + 1 < n; ++i) add({Colour::white, static_cast<int>(i), 0});
        for (int j = red_lo; j <= red_hi; ++j)
            for (int k = red_lo; k <= red_hi; ++k)
                if (j != k) add({Colour::red, j, k});
        converse_.resize(colours_.size());
        for (ColourId c = 0; c < colours_.size(); ++c) {
            const auto& col = colours_[c];
            converse_[c] = col.kind == Colour::red ? id(Colour{Colour::red, col.b, col.a}) : c;
        }
    }

    /// Unordered parameters: tints 0..G-1, reds 0..R-1.
    static RainbowSig plain(std::size_t greens, std::size_t reds, std::size_t n) {
        if (greens == 0 || reds == 0) throw InvalidArgument("rainbow needs at least one tint and one red index");
        return RainbowSig(n, 0, static_cast<int>(greens) - 1, 0, static_cast<int>(reds) - 1, false);
    }

    std::size_t n() const noexcept { return n_; }
    bool ordered() const noexcept { return ordered_; }
    int green_lo() const noexcept { return green_lo_; }
    int green_hi() const noexcept { return green_hi_; }
    int red_lo() const noexcept { return red_lo_; }
    int red_hi() const noexcept { return red_hi_; }
    std::size_t colour_count() const noexcept { return colours_.size(); }
    const Colour& colour(ColourId c) const {
        check(c);
        return colours_[c];
    }
    ColourId converse(ColourId c) const {
        check(c);
        return converse_[c];
    }

    ColourId id(const Colour& c) const {
        auto it = ids_.find(key(c));
        if (it == ids_.end()) throw InvalidArgument("colour " + c.name() + " is not in this signature");
        return it->second;
    }

    /// Parses "g:i", "g0:i", "w:i", "r:j,k".
    ColourId parse(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw InvalidArgument("unknown colour '" + name + "'");
        return it->second;
    }

    ColourId tinted(int t) const { return id({Colour::tinted, t, 0}); }
    ColourId green(int i) const { return id({Colour::green, i, 0}); }
    ColourId white(int i) const { return id({Colour::white, i, 0}); }
    ColourId red(int j, int k) const { return id({Colour::red, j, k}); }

    /// Number of yellow shades for (n-1)-node subsets; 0 disables yellows.
    std::size_t yellow_shades = 0;
    /// Extra consistency condition on whole atoms (applied after the triangle rules).
    std::function<bool(const RainbowAtom&)> yellow_consistent;

    void check(ColourId c) const {
        if (c >= colours_.size()) throw InvalidArgument("colour id " + std::to_string(c) + " is not in this signature");
    }

  private:
    static std::uint64_t key(const Colour& c) {
        return (static_cast<std::uint64_t>(c.kind) << 48) | (static_cast<std::uint64_t>(c.a + 0x8000) << 24) |
               static_cast<std::uint64_t>(c.b + 0x8000);
    }
    void add(Colour c) {
        ids_[key(c)] = static_cast<ColourId>(colours_.size());
        by_name_[c.name()] = static_cast<ColourId>(colours_.size());
        colours_.push_back(c);
    }

    std::size_t n_;
    int green_lo_, green_hi_, red_lo_, red_hi_;
    bool ordered_;
    std::vector<Colour> colours_;
    std::vector<ColourId> converse_;
    std::map<std::uint64_t, ColourId> ids_;
    std::map<std::string, ColourId> by_name_;
};

/**
 * True iff the triangle x, y, z with labels l(x,y) = c1, l(y,z) = c2, l(x,z) = c3
 * is forbidden. Labels are oriented; the answer does not depend on how the
 * three nodes are named.
 */
inline bool is_forbidden_triple(const RainbowSig& sig, ColourId c1, ColourId c2, ColourId c3) {
    ColourId lab[3][3];
    lab[0][1] = c1;
    lab[1][2] = c2;
    lab[0][2] = c3;
    lab[1][0] = sig.converse(c1);
    lab[2][1] = sig.converse(c2);
    lab[2][0] = sig.converse(c3);
    auto col = [&](int u, int v) -> const Colour& { return sig.colour(lab[u][v]); };

    if (col(0, 1).is_green() && col(1, 2).is_green() && col(0, 2).is_green()) return true;

    static constexpr int edges[3][3] = {{0, 1, 2}, {1, 2, 0}, {0, 2, 1}};  // u, v, third node
    for (auto& e : edges) {
        int u = e[0], v = e[1], w = e[2];
        const Colour& uv = col(u, v);
        const Colour& wu = col(w, u);
        const Colour& wv = col(w, v);
        if (uv.kind == Colour::white) {
            if (uv.a >= 1 && wu.kind == Colour::green && wv.kind == Colour::green && wu.a == uv.a && wv.a == uv.a)
                return true;
            if (uv.a == 0 && wu.kind == Colour::tinted && wv.kind == Colour::tinted) return true;
        }
        if (sig.ordered() && uv.kind == Colour::red && wu.kind == Colour::tinted && wv.kind == Colour::tinted) {
            // {(tint(w,u), red value of u), (tint(w,v), red value of v)} must be order preserving
            int tu = wu.a, tv = wv.a, k = uv.a, l = uv.b;
            if (tu == tv || (tu < tv) != (k < l)) return true;
        }
    }

    if (col(0, 1).kind == Colour::red && col(1, 2).kind == Colour::red && col(0, 2).kind == Colour::red) {
        // r_{ij}, r_{j'k'}, r_{i*k*}: allowed only when i = i*, j = j', k' = k*
        const Colour &xy = col(0, 1), &yz = col(1, 2), &xz = col(0, 2);
        if (!(xy.a == xz.a && xy.b == yz.a && yz.b == xz.b)) return true;
    }
    return false;
}

inline bool is_forbidden_triple(const RainbowSig& sig, const std::string& c1, const std::string& c2, const std::string& c3) {
    return is_forbidden_triple(sig, sig.parse(c1), sig.parse(c2), sig.parse(c3));
}

/// Complete graph with oriented edge colours and optional shades on (n-1)-node subsets.
class ColouredGraph {
  public:
    static constexpr int kUnlabelled = -1;

    explicit ColouredGraph(std::size_t nodes = 0) : n_(nodes), lab_(nodes * nodes, kUnlabelled) {}

    std::size_t node_count() const noexcept { return n_; }

    void set(const RainbowSig& sig, std::size_t u, std::size_t v, ColourId c) {
        if (u == v || u >= n_ || v >= n_) throw InvalidArgument("edge endpoints must be distinct nodes");
        sig.check(c);
        lab_[u * n_ + v] = c;
        lab_[v * n_ + u] = sig.converse(c);
    }

    std::optional<ColourId> label(std::size_t u, std::size_t v) const {
        int c = lab_[u * n_ + v];
        if (c == kUnlabelled) return std::nullopt;
        return static_cast<ColourId>(c);
    }

    bool complete() const {
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v)
                if (u != v && lab_[u * n_ + v] == kUnlabelled) return false;
        return true;
    }

    /// First forbidden triangle among fully labelled ones, as (x, y, z).
    std::optional<std::array<std::size_t, 3>> forbidden_triangle(const RainbowSig& sig) const {
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t y = x + 1; y < n_; ++y)
                for (std::size_t z = y + 1; z < n_; ++z) {
                    auto a = label(x, y), b = label(y, z), c = label(x, z);
                    if (a && b && c && is_forbidden_triple(sig, *a, *b, *c)) return std::array<std::size_t, 3>{x, y, z};
                }
        return std::nullopt;
    }

    bool consistent(const RainbowSig& sig) const { return !forbidden_triangle(sig).has_value(); }

    std::size_t green_edges(const RainbowSig& sig) const {
        std::size_t g = 0;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v) {
                auto c = label(u, v);
                if (c && sig.colour(*c).is_green()) ++g;
            }
        return g;
    }

    std::map<std::vector<std::size_t>, std::uint16_t>& shades() { return shades_; }
    const std::map<std::vector<std::size_t>, std::uint16_t>& shades() const { return shades_; }

    std::string to_dot(const RainbowSig& sig) const {
        std::ostringstream os;
        os << "graph G {\n";
        for (std::size_t u = 0; u < n_; ++u) os << "  " << u << ";\n";
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v) {
                auto c = label(u, v);
                if (!c) continue;
                const auto& col = sig.colour(*c);
                const char* colour = col.is_green() ? "green" : col.kind == Colour::white ? "gray" : "red";
                os << "  " << u << " -- " << v << " [label=\"" << col.name() << "\", color=" << colour << "];\n";
            }
        os << "}\n";
        return os.str();
    }

  private:
    std::size_t n_;
    std::vector<int> lab_;
    std::map<std::vector<std::size_t>, std::uint16_t> shades_;
};

/**
 * An atom: a surjection from positions 0..n-1 onto a coloured graph, kept as a
 * kernel (restricted growth string, so graph nodes are ordered by their first
 * preimage) plus oriented labels on class pairs u < v. That ordering makes the
 * representative unique.
 */
struct RainbowAtom {
    std::vector<std::uint8_t> kernel;
    std::uint8_t classes = 0;
    std::vector<ColourId> labels;  // row-major over pairs u < v
    std::vector<std::uint16_t> shades;  // one per (n-1)-subset of classes, in lexicographic order

    static std::size_t pair_index(std::size_t u, std::size_t v, std::size_t c) {
        // position of (u, v), u < v, in the row-major list of pairs of c classes
        return u * c - u * (u + 1) / 2 + (v - u - 1);
    }

    ColourId label(const RainbowSig& sig, std::size_t u, std::size_t v) const {
        if (u < v) return labels[pair_index(u, v, classes)];
        return sig.converse(labels[pair_index(v, u, classes)]);
    }

    ColouredGraph graph(const RainbowSig& sig) const {
        ColouredGraph g(classes);
        for (std::size_t u = 0; u < classes; ++u)
            for (std::size_t v = u + 1; v < classes; ++v) g.set(sig, u, v, labels[pair_index(u, v, classes)]);
        return g;
    }

    std::vector<std::uint32_t> key() const {
        std::vector<std::uint32_t> k(kernel.begin(), kernel.end());
        k.push_back(0xFFFFFFFFu);
        k.insert(k.end(), labels.begin(), labels.end());
        k.push_back(0xFFFFFFFFu);
        k.insert(k.end(), shades.begin(), shades.end());
        return k;
    }

    std::string name(const RainbowSig& sig) const {
        std::string s = "[";
        for (auto c : kernel) s += std::to_string(c);
        s += "]";
        for (std::size_t u = 0; u < classes; ++u)
            for (std::size_t v = u + 1; v < classes; ++v)
                s += " " + std::to_string(u) + std::to_string(v) + "=" + sig.colour(label(sig, u, v)).name();
        return s;
    }
};

namespace detail {

inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t v = from; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace detail

/// All consistent atoms, sorted by canonical key.
inline std::vector<RainbowAtom> enumerate_atoms(const RainbowSig& sig, std::size_t cap = 50'000) {
    std::size_t n = sig.n();
    std::vector<RainbowAtom> out;
    for (auto& kernel : kernel_partitions(n)) {
        std::size_t c = *std::max_element(kernel.begin(), kernel.end()) + 1u;
        std::size_t pairs = c * (c - 1) / 2;
        auto yellow_sets = sig.yellow_shades > 0 && c + 1 >= n && n >= 2 ? detail::subsets_of_size(c, n - 1)
                                                                         : std::vector<std::vector<std::size_t>>{};
        RainbowAtom atom;
        atom.kernel = kernel;
        atom.classes = static_cast<std::uint8_t>(c);
        atom.labels.assign(pairs, 0);

        auto emit = [&]() {
            if (yellow_sets.empty()) {
                atom.shades.clear();
                if (!sig.yellow_consistent || sig.yellow_consistent(atom)) out.push_back(atom);
            } else {
                std::vector<std::uint16_t> sh(yellow_sets.size(), 0);
                while (true) {
                    atom.shades = sh;
                    if (!sig.yellow_consistent || sig.yellow_consistent(atom)) out.push_back(atom);
                    std::size_t p = 0;
                    while (p < sh.size() && ++sh[p] == sig.yellow_shades) sh[p++] = 0;
                    if (p == sh.size()) break;
                }
            }
            if (out.size() > cap) throw ResourceLimit("rainbow atoms", cap);
        };

        // Fill pairs in row-major order; a triangle (u, v, w) is complete once (v, w) is set.
        std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t u, std::size_t v) {
            if (u + 1 >= c) {
                emit();
                return;
            }
            std::size_t nu = u, nv = v + 1;
            if (nv == c) {
                nu = u + 1;
                nv = u + 2;
            }
            for (ColourId col = 0; col < sig.colour_count(); ++col) {
                atom.labels[RainbowAtom::pair_index(u, v, c)] = col;
                bool ok = true;
                // triangles (x, u, v) with x < u are complete now
                for (std::size_t x = 0; x < u && ok; ++x)
                    if (is_forbidden_triple(sig, atom.labels[RainbowAtom::pair_index(x, u, c)], col,
                                            atom.labels[RainbowAtom::pair_index(x, v, c)]))
                        ok = false;
                if (ok) fill(nu, nv);
            }
        };
        if (c == 1) {
            emit();
        } else {
            fill(0, 1);
        }
    }
    std::sort(out.begin(), out.end(), [](const RainbowAtom& a, const RainbowAtom& b) { return a.key() < b.key(); });
    return out;
}

/// Rainbow atoms together with their atom structure and a lookup from graphs to atoms.
class RainbowStructure {
  public:
    RainbowStructure(RainbowSig sig, std::size_t cap = 50'000) : sig_(std::move(sig)) {
        atoms_ = enumerate_atoms(sig_, cap);
        for (Atom a = 0; a < atoms_.size(); ++a) index_[atoms_[a].key()] = a;
        std::size_t n = sig_.n();
        std::vector<std::vector<std::uint32_t>> class_of(n, std::vector<std::uint32_t>(atoms_.size()));
        for (std::size_t i = 0; i < n; ++i) {
            std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
            for (Atom a = 0; a < atoms_.size(); ++a) {
                auto k = restriction_key(atoms_[a], i);
                auto it = ids.emplace(k, static_cast<std::uint32_t>(ids.size())).first;
                class_of[i][a] = it->second;
            }
        }
        std::vector<AtomSet> diag;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                AtomSet d(atoms_.size());
                for (Atom a = 0; a < atoms_.size(); ++a)
                    if (atoms_[a].kernel[i] == atoms_[a].kernel[j]) d.set(a);
                diag.push_back(d);
            }
        structure_ = AtomStructure::from_classes(n, atoms_.size(), class_of, diag);
        std::vector<std::string> names;
        for (auto& a : atoms_) names.push_back(a.name(sig_));
        structure_.set_names(std::move(names));
    }

    const RainbowSig& sig() const noexcept { return sig_; }
    const std::vector<RainbowAtom>& atoms() const noexcept { return atoms_; }
    const AtomStructure& structure() const noexcept { return structure_; }

    /// The atom of the tuple x (node indices into g), or nullopt if that subgraph is inconsistent.
    std::optional<Atom> atom_of(const ColouredGraph& g, const std::vector<std::size_t>& x) const {
        if (x.size() != sig_.n()) throw InvalidArgument("tuple length must equal the dimension");
        RainbowAtom a;
        std::vector<std::size_t> nodes;
        for (auto v : x) {
            auto it = std::find(nodes.begin(), nodes.end(), v);
            if (it == nodes.end()) {
                a.kernel.push_back(static_cast<std::uint8_t>(nodes.size()));
                nodes.push_back(v);
            } else {
                a.kernel.push_back(static_cast<std::uint8_t>(it - nodes.begin()));
            }
        }
        a.classes = static_cast<std::uint8_t>(nodes.size());
        for (std::size_t u = 0; u < nodes.size(); ++u)
            for (std::size_t v = u + 1; v < nodes.size(); ++v) {
                auto c = g.label(nodes[u], nodes[v]);
                if (!c) return std::nullopt;
                a.labels.push_back(*c);
            }
        if (sig_.yellow_shades > 0 && nodes.size() + 1 >= sig_.n()) {
            for (auto& sub : detail::subsets_of_size(nodes.size(), sig_.n() - 1)) {
                std::vector<std::size_t> real;
                for (auto s : sub) real.push_back(nodes[s]);
                std::sort(real.begin(), real.end());
                auto it = g.shades().find(real);
                a.shades.push_back(it == g.shades().end() ? 0 : it->second);
            }
        }
        auto it = index_.find(a.key());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

  private:
    // Restriction of the map to positions other than i, renormalised.
    std::vector<std::uint32_t> restriction_key(const RainbowAtom& a, std::size_t i) const {
        std::vector<std::uint8_t> order;  // classes in order of first appearance off i
        std::vector<std::uint32_t> key;
        for (std::size_t p = 0; p < a.kernel.size(); ++p) {
            if (p == i) continue;
            auto cls = a.kernel[p];
            auto it = std::find(order.begin(), order.end(), cls);
            if (it == order.end()) {
                key.push_back(static_cast<std::uint32_t>(order.size()));
                order.push_back(cls);
            } else {
                key.push_back(static_cast<std::uint32_t>(it - order.begin()));
            }
        }
        key.push_back(0xFFFFFFFFu);
        for (std::size_t u = 0; u < order.size(); ++u)
            for (std::size_t v = u + 1; v < order.size(); ++v) key.push_back(a.label(sig_, order[u], order[v]));
        if (!a.shades.empty()) {
            // shades on (n-1)-subsets lying inside the restriction
            std::vector<std::uint32_t> inner;
            auto subs = detail::subsets_of_size(a.classes, sig_.n() - 1);
            for (std::size_t s = 0; s < subs.size(); ++s) {
                bool inside = std::all_of(subs[s].begin(), subs[s].end(), [&](std::size_t cls) {
                    return std::find(order.begin(), order.end(), cls) != order.end();
                });
                if (!inside) continue;
                std::vector<std::uint32_t> renamed;
                for (auto cls : subs[s])
                    renamed.push_back(static_cast<std::uint32_t>(std::find(order.begin(), order.end(), cls) - order.begin()));
                std::sort(renamed.begin(), renamed.end());
                inner.insert(inner.end(), renamed.begin(), renamed.end());
                inner.push_back(a.shades[s]);
            }
            if (!inner.empty()) {
                key.push_back(0xFFFFFFFFu);
                key.insert(key.end(), inner.begin(), inner.end());
            }
        }
        return key;
    }

    RainbowSig sig_;
    std::vector<RainbowAtom> atoms_;
    std::map<std::vector<std::uint32_t>, Atom> index_;
    AtomStructure structure_;
};

inline AtomStructure rainbow_atom_structure(const RainbowSig& sig, std::size_t cap = 50'000) {
    return RainbowStructure(sig, cap).structure();
}

inline AtomStructure rainbow_atom_structure(std::size_t greens, std::size_t reds, std::size_t n, std::size_t cap = 50'000) {
    return rainbow_atom_structure(RainbowSig::plain(greens, reds, n), cap);
}

/**
 * The i-cone over a base: nodes 0..n-2 carry base_labels (an (n-1)x(n-1)
 * matrix, only u < v entries read), node n-1 is the apex z with
 * M(x_0, z) = g0:tint and M(x_j, z) = g_j.
 */
inline ColouredGraph cone(const RainbowSig& sig, const std::vector<std::vector<ColourId>>& base_labels, int tint) {
    std::size_t n = sig.n();
    if (tint < sig.green_lo() || tint > sig.green_hi()) throw InvalidArgument("tint outside the green index set");
    if (base_labels.size() != n - 1) throw InvalidArgument("cone base must have n-1 nodes");
    ColouredGraph g(n);
    for (std::size_t u = 0; u + 1 < n; ++u)
        for (std::size_t v = u + 1; v + 1 < n; ++v) {
            if (sig.colour(base_labels[u][v]).is_green()) throw InvalidArgument("cone base edges must not be green");
            g.set(sig, u, v, base_labels[u][v]);
        }
    g.set(sig, 0, n - 1, sig.tinted(tint));
    for (std::size_t j = 1; j + 1 < n; ++j) g.set(sig, j, n - 1, sig.green(static_cast<int>(j)));
    return g;
}

/// Base of n-1 nodes with every edge w_0: the base the scripted player uses.
inline std::vector<std::vector<ColourId>> white_base(const RainbowSig& sig) {
    std::size_t m = sig.n() - 1;
    return std::vector<std::vector<ColourId>>(m, std::vector<ColourId>(m, sig.white(0)));
}

}  // namespace cylindric

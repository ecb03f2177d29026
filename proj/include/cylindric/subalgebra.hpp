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

#include <optional>
#include <set>

namespace cylindric {

/**
 * A subalgebra of a finite BAO, stored by its atoms ("blocks"): a partition of
 * the parent's atoms. Carrier elements are exactly the unions of blocks.
 */
class Subalgebra {
  public:
    Subalgebra(FiniteBao parent, std::vector<AtomSet> blocks) : parent_(std::move(parent)), blocks_(std::move(blocks)) {
        std::sort(blocks_.begin(), blocks_.end(), [](const AtomSet& a, const AtomSet& b) { return a.first() < b.first(); });
        validate();
    }

    /// Builds from an explicit carrier; throws InvalidArgument if it is not a subalgebra.
    static Subalgebra from_elements(const FiniteBao& parent, const std::vector<AtomSet>& carrier) {
        std::set<AtomSet> elems(carrier.begin(), carrier.end());
        for (auto& x : carrier)
            if (x.width() != parent.atom_count()) throw InvalidArgument("carrier element of wrong width");
        if (!elems.count(parent.zero()) || !elems.count(parent.one()))
            throw InvalidArgument("carrier does not contain 0 and 1");
        for (auto& x : elems) {
            if (!elems.count(x.complement())) throw InvalidArgument("carrier not closed under complement");
            for (auto& y : elems)
                if (!elems.count(x | y)) throw InvalidArgument("carrier not closed under join");
            for (std::size_t i = 0; i < parent.dim(); ++i)
                if (!elems.count(parent.c(i, x))) throw InvalidArgument("carrier not closed under c_" + std::to_string(i));
        }
        for (std::size_t i = 0; i < parent.dim(); ++i)
            for (std::size_t j = 0; j < parent.dim(); ++j)
                if (!elems.count(parent.d(i, j))) throw InvalidArgument("carrier misses a diagonal");
        std::vector<AtomSet> blocks;
        for (auto& x : elems) {
            if (x.none()) continue;
            bool minimal = true;
            for (auto& y : elems)
                if (y.any() && y != x && y.subset_of(x)) {
                    minimal = false;
                    break;
                }
            if (minimal) blocks.push_back(x);
        }
        return Subalgebra(parent, blocks);
    }

    const FiniteBao& parent() const noexcept { return parent_; }
    const std::vector<AtomSet>& blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }

    /// Number of carrier elements, 2^blocks.
    std::size_t size() const {
        if (blocks_.size() >= 63) throw ResourceLimit("subalgebra size", 63);
        return std::size_t{1} << blocks_.size();
    }

    bool contains(const AtomSet& x) const {
        for (auto& b : blocks_)
            if (b.intersects(x) && !b.subset_of(x)) return false;
        return true;
    }

    std::vector<AtomSet> carrier(std::size_t cap_blocks = 20) const {
        if (blocks_.size() > cap_blocks) throw ResourceLimit("subalgebra carrier enumeration (blocks)", cap_blocks);
        std::vector<AtomSet> out;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << blocks_.size()); ++m) {
            AtomSet s(parent_.atom_count());
            for (std::size_t b = 0; b < blocks_.size(); ++b)
                if ((m >> b) & 1U) s |= blocks_[b];
            out.push_back(std::move(s));
        }
        return out;
    }

    /// The subalgebra as an algebra in its own right, over its blocks.
    FiniteBao as_bao() const {
        std::size_t k = blocks_.size();
        std::size_t n = parent_.dim();
        std::vector<std::vector<std::vector<Atom>>> images(n, std::vector<std::vector<Atom>>(k));
        for (std::size_t i = 0; i < n; ++i)
            for (Atom b = 0; b < k; ++b) images[i][b] = blocks_below(parent_.c(i, blocks_[b]));
        std::vector<AtomSet> diag;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                AtomSet d(k);
                for (Atom b : blocks_below(parent_.d(i, j))) d.set(b);
                diag.push_back(d);
            }
        return FiniteBao(n, k, std::move(images), std::move(diag), "subalgebra of " + parent_.provenance());
    }

    std::vector<Atom> blocks_below(const AtomSet& x) const {
        std::vector<Atom> out;
        for (Atom b = 0; b < blocks_.size(); ++b)
            if (blocks_[b].subset_of(x)) out.push_back(b);
        return out;
    }

  private:
    void validate() const {
        AtomSet seen(parent_.atom_count());
        for (auto& b : blocks_) {
            if (b.none() || b.intersects(seen)) throw InvalidArgument("subalgebra blocks must be disjoint and nonempty");
            seen |= b;
        }
        if (seen != parent_.one()) throw InvalidArgument("subalgebra blocks must cover the unit");
        for (std::size_t i = 0; i < parent_.dim(); ++i) {
            for (auto& b : blocks_)
                if (!contains(parent_.c(i, b))) throw InvalidArgument("not a subalgebra: c_" + std::to_string(i) + " escapes");
            for (std::size_t j = 0; j < parent_.dim(); ++j)
                if (!contains(parent_.d(i, j))) throw InvalidArgument("not a subalgebra: diagonal missing");
        }
    }

    FiniteBao parent_;
    std::vector<AtomSet> blocks_;
};

namespace detail {

// Splits every block by x; returns true if anything split.
inline bool split_by(std::vector<AtomSet>& blocks, const AtomSet& x) {
    bool changed = false;
    std::vector<AtomSet> next;
    for (auto& b : blocks) {
        AtomSet in = b & x;
        AtomSet out = b;
        out.subtract(x);
        if (in.any() && out.any()) {
            next.push_back(std::move(in));
            next.push_back(std::move(out));
            changed = true;
        } else {
            next.push_back(b);
        }
    }
    blocks = std::move(next);
    return changed;
}

}  // namespace detail

/// Least subalgebra containing gens and every d_ij, by partition refinement.
inline Subalgebra generated_subalgebra(const FiniteBao& A, const std::vector<AtomSet>& gens) {
    std::vector<AtomSet> blocks{A.one()};
    for (auto& g : gens) {
        if (g.width() != A.atom_count()) throw InvalidArgument("generator of wrong width");
        detail::split_by(blocks, g);
    }
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = i + 1; j < A.dim(); ++j) detail::split_by(blocks, A.d(i, j));
    bool changed = true;
    while (changed) {
        changed = false;
        auto snapshot = blocks;
        for (auto& b : snapshot)
            for (std::size_t i = 0; i < A.dim(); ++i) changed |= detail::split_by(blocks, A.c(i, b));
    }
    return Subalgebra(A, blocks);
}

/// A derived algebra together with the parent element each of its atoms denotes.
struct DerivedAlgebra {
    FiniteBao algebra;
    std::vector<AtomSet> atoms_in_parent;
    bool closed = true;
    std::string note;
};

/**
 * Nr_n B: elements fixed by every c_i with n <= i < dim B, with operations of
 * index < n. Closure is verified, not assumed; closed = false means the fixed
 * points do not form a subalgebra and `algebra` is empty.
 */
inline DerivedAlgebra neat_reduct(const FiniteBao& B, std::size_t n) {
    std::size_t m = B.dim();
    if (n >= m) throw InvalidArgument("neat_reduct needs n < dim");
    if (n == 0) throw InvalidArgument("neat_reduct needs n >= 1");
    std::size_t k = B.atom_count();
    auto fixed = [&](const AtomSet& x) {
        for (std::size_t i = n; i < m; ++i)
            if (B.c(i, x) != x) return false;
        return true;
    };
    // least fixed point above each atom, then check they partition the unit
    std::vector<AtomSet> blocks;
    AtomSet covered(k);
    DerivedAlgebra out;
    out.note = "Nr_" + std::to_string(n) + " of " + std::to_string(m) + "-dimensional algebra";
    for (Atom a = 0; a < k; ++a) {
        if (covered.test(a)) continue;
        AtomSet x = B.atom(a);
        while (true) {
            AtomSet y = x;
            for (std::size_t i = n; i < m; ++i) y |= B.c(i, y);
            if (y == x) break;
            x = std::move(y);
        }
        if (x.intersects(covered) || !fixed(x)) {
            out.closed = false;
            out.note += ": fixed points are not closed under complement";
            return out;
        }
        covered |= x;
        blocks.push_back(std::move(x));
    }
    std::vector<std::vector<std::vector<Atom>>> images(n, std::vector<std::vector<Atom>>(blocks.size()));
    auto express = [&](const AtomSet& x, std::vector<Atom>& into) {
        for (Atom b = 0; b < blocks.size(); ++b) {
            if (blocks[b].subset_of(x)) {
                into.push_back(b);
            } else if (blocks[b].intersects(x)) {
                return false;
            }
        }
        return true;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (Atom b = 0; b < blocks.size(); ++b)
            if (!express(B.c(i, blocks[b]), images[i][b])) {
                out.closed = false;
                out.note += ": not closed under c_" + std::to_string(i);
                return out;
            }
    std::vector<AtomSet> diag;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Atom> below;
            if (!express(B.d(i, j), below)) {
                out.closed = false;
                out.note += ": diagonal not fixed";
                return out;
            }
            AtomSet d(blocks.size());
            for (Atom b : below) d.set(b);
            diag.push_back(d);
        }
    out.algebra = FiniteBao(n, blocks.size(), std::move(images), std::move(diag), out.note);
    out.atoms_in_parent = std::move(blocks);
    return out;
}

/// Rl_x A: elements below x with every operation followed by meet with x.
inline DerivedAlgebra relativize(const FiniteBao& A, const AtomSet& x) {
    if (x.width() != A.atom_count()) throw InvalidArgument("relativizing element of wrong width");
    if (x.none()) throw InvalidArgument("cannot relativize to 0");
    auto below = x.members();
    std::vector<std::int64_t> index(A.atom_count(), -1);
    for (std::size_t p = 0; p < below.size(); ++p) index[below[p]] = static_cast<std::int64_t>(p);
    std::size_t n = A.dim();
    std::vector<std::vector<std::vector<Atom>>> images(n, std::vector<std::vector<Atom>>(below.size()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < below.size(); ++p)
            for (Atom a : A.image(i, below[p]))
                if (index[a] >= 0) images[i][p].push_back(static_cast<Atom>(index[a]));
    std::vector<AtomSet> diag;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            AtomSet d(below.size());
            A.d(i, j).for_each([&](std::size_t a) {
                if (index[a] >= 0) d.set(static_cast<std::size_t>(index[a]));
            });
            diag.push_back(d);
        }
    DerivedAlgebra out;
    out.note = "relativization to " + x.to_string();
    out.algebra = FiniteBao(n, below.size(), std::move(images), std::move(diag), out.note);
    for (Atom a : below) out.atoms_in_parent.push_back(A.atom(a));
    return out;
}

/// Witness atom of B with no nonzero element of the subalgebra below it.
inline std::optional<AtomSet> density_witness(const Subalgebra& A) {
    for (auto& b : A.blocks())
        if (b.count() > 1) return A.parent().atom(static_cast<Atom>(b.first()));
    return std::nullopt;
}

/// Every nonzero b in B has a nonzero a in A below it. Checked on atoms of B.
inline bool is_dense_subalgebra(const Subalgebra& A, const FiniteBao& B) {
    if (A.parent().atom_count() != B.atom_count() || A.parent().dim() != B.dim())
        throw InvalidArgument("subalgebra is over a different parent");
    return !density_witness(A).has_value();
}

/// Finite joins are the only joins, so every subalgebra of a finite algebra is complete.
inline bool is_complete_subalgebra(const Subalgebra& A, const FiniteBao& B) {
    if (A.parent().atom_count() != B.atom_count() || A.parent().dim() != B.dim())
        throw InvalidArgument("subalgebra is over a different parent");
    return true;
}

/// x is a rectangle iff the product of c_i x over i < dim equals x.
inline bool is_rectangle(const FiniteBao& A, const AtomSet& x) {
    AtomSet p = A.one();
    for (std::size_t i = 0; i < A.dim(); ++i) p &= A.c(i, x);
    return p == x;
}

/// Below every nonzero element there is a nonzero rectangle; equivalent to every atom being one.
inline std::optional<Atom> rectangular_density_witness(const FiniteBao& A) {
    for (Atom a = 0; a < A.atom_count(); ++a)
        if (!is_rectangle(A, A.atom(a))) return a;
    return std::nullopt;
}

inline bool rectangularly_dense(const FiniteBao& A) { return !rectangular_density_witness(A).has_value(); }

}  // namespace cylindric

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

#include <set>

namespace cylindric {

using Sequence = std::vector<std::size_t>;

/**
 * A unit V of n-ary sequences over the base {0..u-1}. Sequences are coded
 * little-endian: code(s) = sum s_k u^k. Atom p of ops_on(V) is unit()[p].
 */
class SetAlgebraSpace {
  public:
    SetAlgebraSpace(std::size_t base, std::size_t dim, std::vector<std::uint64_t> unit)
        : base_(base), dim_(dim), unit_(std::move(unit)) {
        if (base == 0 || dim == 0) throw InvalidArgument("set algebra needs base >= 1 and dim >= 1");
        if (ipow(base, dim) > (std::size_t{1} << 24)) throw ResourceLimit("set algebra sequences", std::size_t{1} << 24);
        std::sort(unit_.begin(), unit_.end());
        unit_.erase(std::unique(unit_.begin(), unit_.end()), unit_.end());
        if (unit_.empty()) throw InvalidArgument("unit must be nonempty");
        if (unit_.back() >= ipow(base, dim)) throw InvalidArgument("unit sequence out of range");
    }

    std::size_t base() const noexcept { return base_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::uint64_t>& unit() const noexcept { return unit_; }
    std::size_t size() const noexcept { return unit_.size(); }

    std::uint64_t encode(const Sequence& s) const {
        if (s.size() != dim_) throw InvalidArgument("sequence length differs from dimension");
        std::uint64_t code = 0, place = 1;
        for (std::size_t k = 0; k < dim_; ++k) {
            if (s[k] >= base_) throw InvalidArgument("sequence entry outside base");
            code += s[k] * place;
            place *= base_;
        }
        return code;
    }

    Sequence decode(std::uint64_t code) const {
        Sequence s(dim_);
        for (std::size_t k = 0; k < dim_; ++k) {
            s[k] = code % base_;
            code /= base_;
        }
        return s;
    }

    bool contains(const Sequence& s) const { return std::binary_search(unit_.begin(), unit_.end(), encode(s)); }

    /// Atom index of s, or -1 when s is not in the unit.
    long long index_of(const Sequence& s) const {
        auto code = encode(s);
        auto it = std::lower_bound(unit_.begin(), unit_.end(), code);
        if (it == unit_.end() || *it != code) return -1;
        return static_cast<long long>(it - unit_.begin());
    }

    AtomSet element(const std::vector<Sequence>& seqs) const {
        AtomSet x(size());
        for (auto& s : seqs) {
            long long p = index_of(s);
            if (p < 0) throw InvalidArgument("sequence not in unit");
            x.set(static_cast<std::size_t>(p));
        }
        return x;
    }

    std::vector<Sequence> sequences(const AtomSet& x) const {
        std::vector<Sequence> out;
        x.for_each([&](std::size_t p) { out.push_back(decode(unit_[p])); });
        return out;
    }

  private:
    std::size_t base_;
    std::size_t dim_;
    std::vector<std::uint64_t> unit_;
};

inline SetAlgebraSpace full_space(std::size_t base, std::size_t dim) {
    if (base == 0 || dim == 0) throw InvalidArgument("full_space needs base >= 1 and dim >= 1");
    std::vector<std::uint64_t> all(ipow(base, dim));
    for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
    return SetAlgebraSpace(base, dim, all);
}

/// V = union over blocks P of ^dim P, the blocks partitioning a subset of the base.
inline SetAlgebraSpace union_of_squares(std::size_t base, std::size_t dim, const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<std::uint64_t> unit;
    SetAlgebraSpace probe = full_space(base, dim);
    for (auto& blk : blocks) {
        if (blk.empty()) throw InvalidArgument("empty square block");
        for (std::size_t c = 0; c < ipow(blk.size(), dim); ++c) {
            Sequence s(dim);
            std::size_t r = c;
            for (std::size_t k = 0; k < dim; ++k) {
                s[k] = blk[r % blk.size()];
                r /= blk.size();
            }
            unit.push_back(probe.encode(s));
        }
    }
    return SetAlgebraSpace(base, dim, unit);
}

/// Powerset of V with C_i X = {s in V : some t in X has t =_i s} and D_ij = {s in V : s_i = s_j}.
inline FiniteBao ops_on(const SetAlgebraSpace& V) {
    std::size_t n = V.dim(), k = V.size();
    std::vector<Sequence> seqs;
    for (auto c : V.unit()) seqs.push_back(V.decode(c));
    std::vector<std::vector<std::vector<Atom>>> images(n, std::vector<std::vector<Atom>>(k));
    for (std::size_t i = 0; i < n; ++i) {
        // group sequences by their restriction to positions other than i
        std::map<Sequence, std::vector<Atom>> groups;
        for (Atom p = 0; p < k; ++p) {
            Sequence key = seqs[p];
            key[i] = 0;
            groups[key].push_back(p);
        }
        for (auto& [key, members] : groups)
            for (Atom p : members) images[i][p] = members;
    }
    std::vector<AtomSet> diag;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            AtomSet d(k);
            for (Atom p = 0; p < k; ++p)
                if (seqs[p][i] == seqs[p][j]) d.set(p);
            diag.push_back(d);
        }
    return FiniteBao(n, k, std::move(images), std::move(diag),
                     "set algebra base " + std::to_string(V.base()) + " dim " + std::to_string(n) +
                         " unit size " + std::to_string(k));
}

enum class UnitClosure { diagonalizable, locally_square };

inline std::string to_string(UnitClosure c) { return c == UnitClosure::diagonalizable ? "diagonalizable" : "locally_square"; }

/// s o tau, i.e. position k receives s[tau[k]].
inline Sequence compose(const Sequence& s, const std::vector<std::size_t>& tau) {
    Sequence out(tau.size());
    for (std::size_t k = 0; k < tau.size(); ++k) out[k] = s[tau[k]];
    return out;
}

/// The replacement [i|j]: i goes to j, everything else fixed.
inline std::vector<std::size_t> replacement(std::size_t n, std::size_t i, std::size_t j) {
    std::vector<std::size_t> tau(n);
    for (std::size_t k = 0; k < n; ++k) tau[k] = k;
    tau[i] = j;
    return tau;
}

inline std::vector<std::size_t> transposition(std::size_t n, std::size_t i, std::size_t j) {
    std::vector<std::size_t> tau(n);
    for (std::size_t k = 0; k < n; ++k) tau[k] = k;
    std::swap(tau[i], tau[j]);
    return tau;
}

/// Each closure condition is tested directly and reported independently.
inline std::set<UnitClosure> unit_closure_kind(const SetAlgebraSpace& V) {
    std::size_t n = V.dim();
    std::set<UnitClosure> out;
    bool diag = true;
    for (auto c : V.unit()) {
        Sequence s = V.decode(c);
        for (std::size_t i = 0; i < n && diag; ++i)
            for (std::size_t j = 0; j < n && diag; ++j)
                if (i != j && !V.contains(compose(s, replacement(n, i, j)))) diag = false;
    }
    if (diag) out.insert(UnitClosure::diagonalizable);
    bool square = true;
    std::vector<std::size_t> tau(n, 0);
    for (auto c : V.unit()) {
        Sequence s = V.decode(c);
        for (std::size_t t = 0; t < ipow(n, n) && square; ++t) {
            std::size_t r = t;
            for (std::size_t k = 0; k < n; ++k) {
                tau[k] = r % n;
                r /= n;
            }
            if (!V.contains(compose(s, tau))) square = false;
        }
        if (!square) break;
    }
    if (square) out.insert(UnitClosure::locally_square);
    return out;
}

/// S_sigma X = {s in V : s o sigma in X}. Maps sigma are total maps n -> n.
inline AtomSet substitution_op(const SetAlgebraSpace& V, const std::vector<std::size_t>& sigma, const AtomSet& X) {
    if (sigma.size() != V.dim()) throw InvalidArgument("substitution map has wrong length");
    for (auto v : sigma)
        if (v >= V.dim()) throw InvalidArgument("substitution map leaves the dimension");
    if (X.width() != V.size()) throw InvalidArgument("element of wrong width");
    AtomSet out(V.size());
    for (std::size_t p = 0; p < V.size(); ++p) {
        long long q = V.index_of(compose(V.decode(V.unit()[p]), sigma));
        if (q >= 0 && X.test(static_cast<std::size_t>(q))) out.set(p);
    }
    return out;
}

/**
 * d_ij . c_i c_j (d_ij . x) = d_ij . c_j c_i (d_ij . x) for all x and i != j,
 * checked on atoms. When V is locally square the commuting witness is a
 * transposition of an existing sequence, so this holds even where C4 fails.
 */
inline Check check_diagonal_commutativity(const FiniteBao& A) {
    Check c{"C4-diagonal", true, "atoms below d_ij, compared below d_ij", {}, ""};
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) {
            if (i == j) continue;
            AtomSet dij = A.d(i, j);
            for (Atom a : dij.members()) {
                AtomSet x = A.atom(a);
                if ((A.c(i, A.c(j, x)) & dij) != (A.c(j, A.c(i, x)) & dij)) {
                    c.passed = false;
                    c.witness = {{"i", static_cast<long long>(i)}, {"j", static_cast<long long>(j)}, {"atom", a}};
                    return c;
                }
            }
        }
    return c;
}

}  // namespace cylindric

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

#include <cylindric/common.hpp>

#include <map>
#include <memory>
#include <optional>
#include <utility>

namespace cylindric {

/**
 * An n-dimensional atom structure: atoms 0..k-1, one binary accessibility
 * relation T_i per dimension and unary sets D_ij for i < j.
 *
 * a T_i b is read "a lies below c_i of b". D_ij is symmetric in (i, j) and
 * D_ii is the full set.
 */
class AtomStructure {
  public:
    using Pairs = std::vector<std::pair<Atom, Atom>>;

    AtomStructure() = default;

    AtomStructure(std::size_t dim, std::size_t atom_count, const std::vector<Pairs>& T,
                  const std::map<std::pair<std::size_t, std::size_t>, std::vector<Atom>>& D)
        : dim_(dim), k_(atom_count) {
        if (dim == 0) throw InvalidArgument("atom structure dimension must be >= 1");
        if (T.size() != dim) throw InvalidArgument("need one accessibility relation per dimension");
        succ_.assign(dim, std::vector<std::vector<Atom>>(k_));
        pred_.assign(dim, std::vector<std::vector<Atom>>(k_));
        for (std::size_t i = 0; i < dim; ++i) {
            for (auto [a, b] : T[i]) {
                if (a >= k_ || b >= k_) throw InvalidArgument("accessibility pair out of atom range");
                succ_[i][a].push_back(b);
                pred_[i][b].push_back(a);
            }
        }
        init_diagonals();
        for (auto& [key, atoms] : D) {
            auto [i, j] = key;
            if (i >= dim || j >= dim || i == j) throw InvalidArgument("diagonal index out of range");
            AtomSet s(k_);
            for (Atom a : atoms) {
                if (a >= k_) throw InvalidArgument("diagonal atom out of range");
                s.set(a);
            }
            diag_[i * dim_ + j] = s;
            diag_[j * dim_ + i] = s;
        }
        normalise();
    }

    /// Builds a structure whose T_i are equivalence relations given by class labels.
    static AtomStructure from_classes(std::size_t dim, std::size_t atom_count,
                                      const std::vector<std::vector<std::uint32_t>>& class_of,
                                      const std::vector<AtomSet>& diag_upper) {
        AtomStructure s;
        s.dim_ = dim;
        s.k_ = atom_count;
        s.succ_.assign(dim, std::vector<std::vector<Atom>>(atom_count));
        for (std::size_t i = 0; i < dim; ++i) {
            std::map<std::uint32_t, std::vector<Atom>> members;
            for (Atom a = 0; a < atom_count; ++a) members[class_of[i][a]].push_back(a);
            for (auto& [cls, atoms] : members)
                for (Atom a : atoms) s.succ_[i][a] = atoms;
        }
        s.pred_ = s.succ_;
        s.init_diagonals();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j, ++idx) {
                s.diag_[i * dim + j] = diag_upper[idx];
                s.diag_[j * dim + i] = diag_upper[idx];
            }
        s.normalise();
        return s;
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t atom_count() const noexcept { return k_; }

    /// {b : a T_i b}, sorted.
    const std::vector<Atom>& successors(std::size_t i, Atom a) const { return succ_[i][a]; }
    /// {a : a T_i b}, sorted.
    const std::vector<Atom>& predecessors(std::size_t i, Atom b) const { return pred_[i][b]; }

    bool related(std::size_t i, Atom a, Atom b) const {
        if (!class_of_.empty() && !class_of_[i].empty()) return class_of_[i][a] == class_of_[i][b];
        const auto& s = succ_[i][a];
        return std::binary_search(s.begin(), s.end(), b);
    }

    /// D_ij as a set of atoms; D_ii is everything.
    const AtomSet& diagonal(std::size_t i, std::size_t j) const { return diag_[i * dim_ + j]; }
    bool in_diagonal(std::size_t i, std::size_t j, Atom a) const { return diag_[i * dim_ + j].test(a); }

    /// Class index of a when T_i is an equivalence relation, otherwise nullopt.
    std::optional<std::uint32_t> class_index(std::size_t i, Atom a) const {
        if (class_of_.empty() || class_of_[i].empty()) return std::nullopt;
        return class_of_[i][a];
    }
    bool is_equivalence(std::size_t i) const { return !class_of_.empty() && !class_of_[i].empty(); }

    Pairs pairs(std::size_t i) const {
        Pairs out;
        for (Atom a = 0; a < k_; ++a)
            for (Atom b : succ_[i][a]) out.emplace_back(a, b);
        return out;
    }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<Atom>> diagonal_map() const {
        std::map<std::pair<std::size_t, std::size_t>, std::vector<Atom>> out;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j) out[{i, j}] = diagonal(i, j).members();
        return out;
    }

    /// Optional human-readable atom names; empty when not provided.
    const std::vector<std::string>& names() const noexcept { return names_; }
    void set_names(std::vector<std::string> names) {
        if (!names.empty() && names.size() != k_) throw InvalidArgument("atom name count mismatch");
        names_ = std::move(names);
    }
    std::string name(Atom a) const { return names_.empty() ? std::to_string(a) : names_[a]; }

    friend bool operator==(const AtomStructure& x, const AtomStructure& y) {
        return x.dim_ == y.dim_ && x.k_ == y.k_ && x.succ_ == y.succ_ && x.diag_ == y.diag_;
    }

  private:
    void init_diagonals() {
        diag_.assign(dim_ * dim_, AtomSet(k_));
        for (std::size_t i = 0; i < dim_; ++i) diag_[i * dim_ + i] = AtomSet::full(k_);
    }

    void normalise() {
        for (std::size_t i = 0; i < dim_; ++i)
            for (Atom a = 0; a < k_; ++a) {
                for (auto* v : {&succ_[i][a], &pred_[i][a]}) {
                    std::sort(v->begin(), v->end());
                    v->erase(std::unique(v->begin(), v->end()), v->end());
                }
            }
        // Record class ids for relations that are equivalences; lookups then skip the search.
        class_of_.assign(dim_, {});
        for (std::size_t i = 0; i < dim_; ++i) {
            std::vector<std::uint32_t> cls(k_, UINT32_MAX);
            bool equivalence = true;
            std::uint32_t next = 0;
            for (Atom a = 0; a < k_ && equivalence; ++a) {
                if (cls[a] != UINT32_MAX) continue;
                const auto& s = succ_[i][a];
                if (!std::binary_search(s.begin(), s.end(), a)) equivalence = false;
                for (Atom b : s) {
                    if (cls[b] != UINT32_MAX || succ_[i][b] != s) {
                        equivalence = false;
                        break;
                    }
                    cls[b] = next;
                }
                ++next;
            }
            if (equivalence) class_of_[i] = std::move(cls);
        }
    }

    std::size_t dim_ = 0;
    std::size_t k_ = 0;
    std::vector<std::vector<std::vector<Atom>>> succ_;
    std::vector<std::vector<std::vector<Atom>>> pred_;
    std::vector<AtomSet> diag_;
    std::vector<std::vector<std::uint32_t>> class_of_;
    std::vector<std::string> names_;
};

/**
 * A finite Boolean algebra with operators over an atom universe. Elements are
 * AtomSets; the Boolean reduct is the full powerset. Each c_i is completely
 * additive and fixed by its values on atoms: image(i, b) = c_i({b}).
 */
class FiniteBao {
  public:
    FiniteBao() = default;

    FiniteBao(std::size_t dim, std::size_t atom_count, std::vector<std::vector<std::vector<Atom>>> images,
              std::vector<AtomSet> diagonals, std::string provenance = "")
        : dim_(dim), k_(atom_count), images_(std::move(images)), diag_(std::move(diagonals)),
          provenance_(std::move(provenance)) {
        if (images_.size() != dim_ || diag_.size() != dim_ * dim_) throw InvalidArgument("operator table shape mismatch");
        for (auto& per_i : images_) {
            if (per_i.size() != k_) throw InvalidArgument("operator table shape mismatch");
            for (auto& v : per_i) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            }
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t atom_count() const noexcept { return k_; }
    const std::string& provenance() const noexcept { return provenance_; }

    AtomSet zero() const { return AtomSet(k_); }
    AtomSet one() const { return AtomSet::full(k_); }
    AtomSet atom(Atom a) const { return AtomSet::singleton(k_, a); }
    AtomSet d(std::size_t i, std::size_t j) const { return diag_[i * dim_ + j]; }

    AtomSet join(const AtomSet& x, const AtomSet& y) const { return x | y; }
    AtomSet meet(const AtomSet& x, const AtomSet& y) const { return x & y; }
    AtomSet complement(const AtomSet& x) const { return x.complement(); }

    AtomSet c(std::size_t i, const AtomSet& x) const {
        AtomSet r(k_);
        x.for_each([&](std::size_t b) {
            for (Atom a : images_[i][b]) r.set(a);
        });
        return r;
    }

    /// c_i({b}) as a sorted atom list.
    const std::vector<Atom>& image(std::size_t i, Atom b) const { return images_[i][b]; }

    /// Number of elements, 2^atoms (saturating).
    std::size_t size_hint() const { return k_ >= 63 ? SIZE_MAX : (std::size_t{1} << k_); }

    /// Every element, in binary counting order. Callers bound atom_count.
    std::vector<AtomSet> elements() const {
        if (k_ > 20) throw ResourceLimit("element enumeration (atoms)", 20);
        std::vector<AtomSet> out;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << k_); ++m) {
            AtomSet s(k_);
            for (std::size_t b = 0; b < k_; ++b)
                if ((m >> b) & 1U) s.set(b);
            out.push_back(std::move(s));
        }
        return out;
    }

    FiniteBao with_provenance(std::string p) const {
        FiniteBao copy = *this;
        copy.provenance_ = std::move(p);
        return copy;
    }

  private:
    std::size_t dim_ = 0;
    std::size_t k_ = 0;
    std::vector<std::vector<std::vector<Atom>>> images_;
    std::vector<AtomSet> diag_;
    std::string provenance_;
};

/// Cm S: the powerset of atoms with c_i X = {a : a T_i b for some b in X}.
inline FiniteBao complex_algebra(const AtomStructure& s) {
    std::vector<std::vector<std::vector<Atom>>> images(s.dim(), std::vector<std::vector<Atom>>(s.atom_count()));
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (Atom b = 0; b < s.atom_count(); ++b) images[i][b] = s.predecessors(i, b);
    std::vector<AtomSet> diag;
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.dim(); ++j) diag.push_back(s.diagonal(i, j));
    return FiniteBao(s.dim(), s.atom_count(), std::move(images), std::move(diag), "complex algebra");
}

/// At A: a T_i b iff a <= c_i {b}; a in D_ij iff a <= d_ij.
inline AtomStructure atom_structure_of(const FiniteBao& A) {
    std::vector<AtomStructure::Pairs> T(A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (Atom b = 0; b < A.atom_count(); ++b)
            for (Atom a : A.image(i, b)) T[i].emplace_back(a, b);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Atom>> D;
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = i + 1; j < A.dim(); ++j) D[{i, j}] = A.d(i, j).members();
    return AtomStructure(A.dim(), A.atom_count(), T, D);
}

}  // namespace cylindric

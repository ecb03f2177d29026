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

#include <cylindric/ca_axioms.hpp>
#include <cylindric/iso.hpp>
#include <cylindric/set_algebra.hpp>
#include <cylindric/subalgebra.hpp>

#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

using namespace cylindric;
using namespace testsupport;

namespace {

// Random relativized set algebras: a mix of CA-shaped and broken operators.
FiniteBao random_relativized(std::mt19937& rng, std::size_t base, std::size_t dim) {
    std::vector<std::uint64_t> unit;
    std::bernoulli_distribution coin(0.6);
    for (std::uint64_t c = 0; c < ipow(base, dim); ++c)
        if (coin(rng)) unit.push_back(c);
    if (unit.empty()) unit.push_back(0);
    return ops_on(SetAlgebraSpace(base, dim, unit));
}

// Oracle closure: breadth-first over all operations until nothing new appears.
std::set<AtomSet> naive_closure(const FiniteBao& A, std::vector<AtomSet> gens) {
    std::set<AtomSet> seen;
    gens.push_back(A.zero());
    gens.push_back(A.one());
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) gens.push_back(A.d(i, j));
    std::vector<AtomSet> frontier;
    for (auto& g : gens)
        if (seen.insert(g).second) frontier.push_back(g);
    while (!frontier.empty()) {
        std::vector<AtomSet> next;
        auto add = [&](AtomSet x) {
            if (seen.insert(x).second) next.push_back(x);
        };
        std::vector<AtomSet> snapshot(seen.begin(), seen.end());
        for (auto& x : frontier) {
            add(x.complement());
            for (std::size_t i = 0; i < A.dim(); ++i) add(A.c(i, x));
            for (auto& y : snapshot) add(x | y);
        }
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace

TEST(AtomStructure, OneAtomAlgebra) {
    AtomStructure s(2, 1, {{{0, 0}}, {{0, 0}}}, {{{0, 1}, {0}}});
    auto A = complex_algebra(s);
    EXPECT_EQ(A.size_hint(), 2u);
    EXPECT_EQ(A.c(0, A.one()), A.one());
    EXPECT_EQ(atom_structure_of(A).atom_count(), 1u);
    EXPECT_TRUE(check_ca_axioms(A).passed());
}

TEST(AtomStructure, ComplexAlgebraOperatorLaw) {
    std::mt19937 rng(1);
    for (int t = 0; t < 20; ++t) {
        auto s = random_structure(rng, 3, 5);
        auto A = complex_algebra(s);
        for (std::uint64_t m = 0; m < 32; ++m) {
            auto X = from_mask(5, m);
            for (std::size_t i = 0; i < 3; ++i) {
                AtomSet expect(5);
                for (Atom a = 0; a < 5; ++a)
                    for (Atom b = 0; b < 5; ++b)
                        if (X.test(b) && s.related(i, a, b)) expect.set(a);
                EXPECT_EQ(A.c(i, X), expect);
            }
        }
    }
}

TEST(AtomStructure, Additivity) {
    std::mt19937 rng(2);
    for (int t = 0; t < 5; ++t) {
        auto A = complex_algebra(random_structure(rng, 2, 10, 0.2));
        for (int trial = 0; trial < 2000; ++trial) {
            auto X = from_mask(10, rng() & 1023U), Y = from_mask(10, rng() & 1023U);
            for (std::size_t i = 0; i < 2; ++i) { EXPECT_EQ(A.c(i, X | Y), A.c(i, X) | A.c(i, Y)); }
        }
    }
}

TEST(AtomStructure, RoundTripUpToIsomorphism) {
    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto s = random_structure(rng, 3, 1 + rng() % 6);
        auto back = atom_structure_of(complex_algebra(s));
        EXPECT_TRUE(iso_atom_structures(s, back));
        EXPECT_TRUE(brute_isomorphic(s, back));
    }
}

TEST(AtomStructure, FullSetAlgebraAtoms) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    EXPECT_EQ(S.atom_count(), 4u);
}

TEST(Isomorphism, AgreesWithBruteForce) {
    std::mt19937 rng(9);
    int iso = 0, non = 0;
    for (int t = 0; t < 300; ++t) {
        std::size_t k = 1 + rng() % 6;
        auto a = random_structure(rng, 2, k, 0.3);
        AtomStructure b = (t % 2 == 0) ? permuted(a, random_perm(rng, k)) : random_structure(rng, 2, k, 0.3);
        if (t % 4 == 1) {
            // perturb one pair of a permuted copy: near misses
            auto p = permuted(a, random_perm(rng, k));
            auto T0 = p.pairs(0);
            if (!T0.empty()) T0.pop_back();
            b = AtomStructure(2, k, {T0, p.pairs(1)}, p.diagonal_map());
        }
        bool want = brute_isomorphic(a, b);
        auto f = find_isomorphism(a, b);
        EXPECT_EQ(f.has_value(), want);
        if (f) { EXPECT_TRUE(detail::is_isomorphism(a, b, *f)); }
        (want ? iso : non)++;
    }
    EXPECT_GT(iso, 50);
    EXPECT_GT(non, 50);
}

TEST(Isomorphism, HandlesSymmetricStructures) {
    // every T_i total: refinement gives no information, the search must branch
    for (std::size_t k : {4u, 7u, 9u}) {
        std::vector<AtomStructure::Pairs> T(2);
        for (Atom a = 0; a < k; ++a)
            for (Atom b = 0; b < k; ++b) T[0].emplace_back(a, b);
        for (Atom a = 0; a < k; ++a) T[1].emplace_back(a, (a + 1) % k);
        AtomStructure s(2, k, T, {});
        std::mt19937 rng(k);
        EXPECT_TRUE(iso_atom_structures(s, permuted(s, random_perm(rng, k))));
    }
}

TEST(Axioms, FullSetAlgebra) {
    auto r = check_ca_axioms(ops_on(full_space(2, 3)));
    EXPECT_TRUE(r.passed()) << r.to_text();
    EXPECT_EQ(r.checks.size(), 7u);
    for (auto& c : r.checks) { EXPECT_FALSE(c.reduction.empty()); }
}

TEST(Axioms, AtomReductionsAgreeWithExhaustiveMode) {
    std::mt19937 rng(21);
    std::map<std::string, int> failures;
    for (int t = 0; t < 400; ++t) {
        FiniteBao A;
        if (t % 3 == 0) {
            A = complex_algebra(random_structure(rng, 3, 1 + rng() % 5, 0.5));
        } else {
            A = random_relativized(rng, 2 + (t % 2), 2);
            if (A.atom_count() > 8) continue;
        }
        auto fast = check_ca_axioms(A);
        auto slow = check_ca_axioms(A, {true});
        for (std::size_t c = 0; c < 7; ++c) {
            EXPECT_EQ(fast.checks[c].passed, slow.checks[c].passed) << fast.checks[c].name << "\n" << slow.to_text();
            if (!fast.checks[c].passed) failures[fast.checks[c].name]++;
        }
    }
    // the corpus exercises failures of the quantified axioms
    EXPECT_GT(failures["C2"], 0);
    EXPECT_GT(failures["C3"], 0);
    EXPECT_GT(failures["C4"], 0);
    EXPECT_GT(failures["C7"], 0);
}

TEST(Axioms, CorruptedReflexivityGivesWitness) {
    auto S = atom_structure_of(ops_on(full_space(2, 2)));
    auto T0 = S.pairs(0);
    T0.erase(std::remove(T0.begin(), T0.end(), std::pair<Atom, Atom>{1, 1}), T0.end());
    AtomStructure bad(2, 4, {T0, S.pairs(1)}, S.diagonal_map());
    auto A = complex_algebra(bad);
    auto r = check_ca_axioms(A);
    const auto& c2 = r.at("C2");
    ASSERT_FALSE(c2.passed);
    Atom a = static_cast<Atom>(c2.witness.at("atom"));
    std::size_t i = static_cast<std::size_t>(c2.witness.at("i"));
    EXPECT_FALSE(A.atom(a).subset_of(A.c(i, A.atom(a))));
}

TEST(Axioms, ExhaustiveModeRespectsCap) {
    EXPECT_THROW(check_ca_axioms(ops_on(full_space(2, 4)), {true}), ResourceLimit);
}

TEST(Subalgebra, GeneratedMatchesNaiveClosure) {
    std::mt19937 rng(4);
    auto A = ops_on(full_space(2, 2));
    auto D01 = A.d(0, 1);
    auto sub = generated_subalgebra(A, {D01});
    EXPECT_EQ(sub.size(), naive_closure(A, {D01}).size());
    for (int t = 0; t < 40; ++t) {
        FiniteBao B = (t % 2) ? random_relativized(rng, 3, 2) : complex_algebra(random_structure(rng, 2, 6, 0.3));
        if (B.atom_count() > 8) continue;
        std::vector<AtomSet> gens;
        for (int g = 0; g < t % 3; ++g) gens.push_back(from_mask(B.atom_count(), rng() & ((1U << B.atom_count()) - 1)));
        auto s = generated_subalgebra(B, gens);
        auto oracle = naive_closure(B, gens);
        auto carrier = s.carrier();
        EXPECT_EQ(std::set<AtomSet>(carrier.begin(), carrier.end()), oracle);
    }
}

TEST(Subalgebra, AtomsGenerateEverything) {
    auto A = ops_on(full_space(2, 3));
    std::vector<AtomSet> atoms;
    for (Atom a = 0; a < A.atom_count(); ++a) atoms.push_back(A.atom(a));
    auto s = generated_subalgebra(A, atoms);
    EXPECT_EQ(s.block_count(), A.atom_count());
    EXPECT_TRUE(is_dense_subalgebra(s, A));
    EXPECT_TRUE(is_complete_subalgebra(s, A));
}

TEST(Subalgebra, MinimalSubalgebraIsNotDense) {
    auto A = ops_on(full_space(2, 2));
    auto s = generated_subalgebra(A, {});
    auto w = density_witness(s);
    ASSERT_TRUE(w.has_value());
    for (auto& x : s.carrier())
        if (x.any()) { EXPECT_FALSE(x.subset_of(*w)); }
    EXPECT_FALSE(is_dense_subalgebra(s, A));
    EXPECT_TRUE(is_complete_subalgebra(s, A));
}

TEST(Subalgebra, DenseImpliesComplete) {
    std::mt19937 rng(8);
    for (int t = 0; t < 30; ++t) {
        auto B = complex_algebra(random_structure(rng, 2, 5, 0.3));
        auto s = generated_subalgebra(B, {from_mask(5, rng() & 31U)});
        if (is_dense_subalgebra(s, B)) { EXPECT_TRUE(is_complete_subalgebra(s, B)); }
    }
}

TEST(Subalgebra, FromElementsRejectsNonSubalgebra) {
    auto A = ops_on(full_space(2, 2));
    EXPECT_THROW(Subalgebra::from_elements(A, {A.zero(), A.one()}), InvalidArgument);  // misses d_01
    auto s = generated_subalgebra(A, {});
    auto again = Subalgebra::from_elements(A, s.carrier());
    EXPECT_EQ(again.block_count(), s.block_count());
}

TEST(NeatReduct, FixedPointsOfFullSpace) {
    auto B = ops_on(full_space(2, 3));
    auto nr = neat_reduct(B, 2);
    ASSERT_TRUE(nr.closed);
    // oracle: count elements X with C_2 X = X directly
    std::size_t fixed = 0;
    for (std::uint64_t m = 0; m < 256; ++m) {
        auto X = from_mask(8, m);
        if (B.c(2, X) == X) ++fixed;
    }
    EXPECT_EQ(fixed, 16u);
    EXPECT_EQ(std::size_t{1} << nr.algebra.atom_count(), fixed);
    EXPECT_TRUE(check_ca_axioms(nr.algebra).passed());
    EXPECT_THROW(neat_reduct(B, 3), InvalidArgument);
}

TEST(NeatReduct, ClosedUnderOperationsAndContainsDiagonals) {
    auto B = ops_on(full_space(3, 3));
    auto nr = neat_reduct(B, 2);
    ASSERT_TRUE(nr.closed);
    auto fixed = [&](const AtomSet& x) { return B.c(2, x) == x; };
    std::vector<AtomSet> blocks = nr.atoms_in_parent;
    for (auto& b : blocks) {
        EXPECT_TRUE(fixed(b));
        EXPECT_TRUE(fixed(B.c(0, b)));
        EXPECT_TRUE(fixed(B.c(1, b)));
        EXPECT_TRUE(fixed(b.complement()));
    }
    EXPECT_TRUE(fixed(B.d(0, 1)));
}

TEST(Relativize, UnitIsIdentity) {
    auto A = ops_on(full_space(2, 2));
    auto r = relativize(A, A.one());
    EXPECT_EQ(r.algebra.atom_count(), A.atom_count());
    for (Atom a = 0; a < A.atom_count(); ++a)
        for (std::size_t i = 0; i < 2; ++i) { EXPECT_EQ(r.algebra.image(i, a), A.image(i, a)); }
    EXPECT_THROW(relativize(A, A.zero()), InvalidArgument);
}

TEST(Relativize, DiagonalCarrier) {
    auto A = ops_on(full_space(3, 2));
    auto r = relativize(A, A.d(0, 1));
    EXPECT_EQ(r.algebra.atom_count(), A.d(0, 1).count());
}

TEST(Relativize, CanBreakCommutativity) {
    // search for a relativizing element of the 2x2 full space that breaks C4
    auto A = ops_on(full_space(2, 2));
    bool found = false;
    for (std::uint64_t m = 1; m < 16 && !found; ++m) {
        auto r = relativize(A, from_mask(4, m));
        auto rep = check_ca_axioms(r.algebra);
        if (!rep.at("C4").passed) {
            found = true;
            EXPECT_TRUE(rep.at("C2").passed);
            EXPECT_TRUE(rep.at("C7").passed);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Rectangles, Basics) {
    auto V = full_space(3, 2);
    auto A = ops_on(V);
    EXPECT_TRUE(is_rectangle(A, A.one()));
    // A_0 x A_1 with A_0 = {0, 2}, A_1 = {1}
    auto X = V.element({{0, 1}, {2, 1}});
    EXPECT_TRUE(is_rectangle(A, X));
    auto Y = V.element({{0, 1}, {2, 0}});
    EXPECT_FALSE(is_rectangle(A, Y));
    EXPECT_TRUE(rectangularly_dense(A));
}

TEST(Rectangles, DensityMatchesElementDefinition) {
    std::mt19937 rng(12);
    for (int t = 0; t < 40; ++t) {
        auto A = complex_algebra(random_structure(rng, 2, 4, 0.5));
        bool oracle = true;
        for (std::uint64_t y = 1; y < 16 && oracle; ++y) {
            bool has = false;
            for (std::uint64_t r = 1; r < 16 && !has; ++r)
                if ((r & ~y) == 0 && is_rectangle(A, from_mask(4, r))) has = true;
            oracle = has;
        }
        EXPECT_EQ(rectangularly_dense(A), oracle);
    }
}

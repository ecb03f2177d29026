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

#include <cylindric/atomic_game.hpp>
#include <cylindric/scripted.hpp>

namespace cylindric {

enum class Claim {
    not_neat_embeddable,  // A is not in S Nr_n CA_m
    square_representable  // A has an m-square representation
};

inline std::string to_string(Claim c) {
    return c == Claim::not_neat_embeddable ? "not-in-S-Nr-CA" : "m-square-representation";
}

/// A game verdict together with the statement it supports. `verified` is the
/// outcome of replaying the game certificate on the atom structure.
struct Certificate {
    Claim claim = Claim::not_neat_embeddable;
    std::size_t n = 0;
    std::size_t m = 0;
    GameResult game;
    bool verified = false;
    std::string method;

    std::string statement() const {
        if (claim == Claim::not_neat_embeddable)
            return "not in S Nr_" + std::to_string(n) + " CA_" + std::to_string(m) + " (forall wins " + game.spec.to_string() + ")";
        return "has a " + std::to_string(m) + "-square representation (exists wins " + game.spec.to_string() + ")";
    }
};

struct CertificateOptions {
    GameLimits limits;
    /// Exact fixpoints are attempted only up to this many atoms.
    std::size_t exact_atom_cap = 64;
};

/**
 * Exact search: forall winning F(m, ω) gives non-membership, exists winning
 * G(m, ω) gives an m-square representation. The F game is tried first since
 * forall wins it whenever he wins G(m, ω). Returns nothing when neither
 * verdict is reached within the limits.
 */
inline std::optional<Certificate> non_membership_certificate(const AtomStructure& S, std::size_t m,
                                                             const CertificateOptions& opt = {}) {
    if (m < S.dim()) throw InvalidArgument("m must be at least the dimension");
    if (S.atom_count() > opt.exact_atom_cap) return std::nullopt;
    Certificate c;
    c.n = S.dim();
    c.m = m;
    GameResult f = solve_atomic_game(S, GameSpec{GameKind::F, m, std::nullopt, false}, opt.limits);
    if (f.winner == Winner::forall) {
        c.claim = Claim::not_neat_embeddable;
        c.game = std::move(f);
        c.method = "fixpoint";
        c.verified = verify_certificate(S, c.game).ok;
        return c;
    }
    GameResult g = solve_atomic_game(S, GameSpec{GameKind::G, m, std::nullopt, false}, opt.limits);
    if (g.winner == Winner::exists) {
        c.claim = Claim::square_representable;
        c.game = std::move(g);
        c.method = "fixpoint";
        c.verified = verify_certificate(S, c.game).ok;
        return c;
    }
    return std::nullopt;
}

inline std::optional<Certificate> non_membership_certificate(const FiniteBao& A, std::size_t m,
                                                             const CertificateOptions& opt = {}) {
    return non_membership_certificate(atom_structure_of(A), m, opt);
}

/// Rainbow structures go through the cone script; only forall wins yield a certificate.
inline std::optional<Certificate> non_membership_certificate(const RainbowStructure& R, std::size_t m, std::size_t depth,
                                                             const ScriptOptions& opt = {}) {
    ScriptedResult s = scripted_forall_rainbow(R, m, depth, opt);
    if (!s.forall_wins) return std::nullopt;
    Certificate c;
    c.claim = Claim::not_neat_embeddable;
    c.n = R.sig().n();
    c.m = m;
    c.game = std::move(s.game);
    c.method = "cone script";
    c.verified = verify_certificate(R.structure(), c.game).ok;
    return c;
}

}  // namespace cylindric

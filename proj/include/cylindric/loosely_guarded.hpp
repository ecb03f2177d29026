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

#include <cylindric/clique_guarded.hpp>

namespace cylindric {

enum class TermOp { element, diag, zero, one, complement, join, meet, cyl, subst };

/// Term over the signature of locally square set algebras. Element leaves are named.
struct Term {
    TermOp op = TermOp::zero;
    std::string name;
    std::vector<std::size_t> idx;  // (i, j) for diag, (i) for cyl, sigma for subst
    std::vector<Term> kids;
};

inline Term t_element(std::string name) { return {TermOp::element, std::move(name), {}, {}}; }
inline Term t_diag(std::size_t i, std::size_t j) { return {TermOp::diag, "", {i, j}, {}}; }
inline Term t_zero() { return {TermOp::zero, "", {}, {}}; }
inline Term t_one() { return {TermOp::one, "", {}, {}}; }
inline Term t_complement(Term t) { return {TermOp::complement, "", {}, {std::move(t)}}; }
inline Term t_join(Term a, Term b) { return {TermOp::join, "", {}, {std::move(a), std::move(b)}}; }
inline Term t_meet(Term a, Term b) { return {TermOp::meet, "", {}, {std::move(a), std::move(b)}}; }
inline Term t_cyl(std::size_t i, Term t) { return {TermOp::cyl, "", {i}, {std::move(t)}}; }
inline Term t_subst(std::vector<std::size_t> sigma, Term t) { return {TermOp::subst, "", std::move(sigma), {std::move(t)}}; }

enum class EqFormulaOp { equation, conj, disj, neg };

/// Quantifier-free formula whose atoms are equations between terms.
struct EqFormula {
    EqFormulaOp op = EqFormulaOp::conj;
    std::vector<Term> terms;
    std::vector<EqFormula> kids;
};

inline EqFormula equation(Term a, Term b) { return {EqFormulaOp::equation, {std::move(a), std::move(b)}, {}}; }

/**
 * Text forms.
 *
 *   term := "0" | "1" | name | "(" "d" i j ")" | "(" "-" term ")"
 *         | "(" ("+" | "*") term term ")" | "(" "c" i term ")"
 *         | "(" "s" "(" j* ")" term ")"
 *   eqf  := "(" "=" term term ")" | "(" ("and" | "or") eqf* ")" | "(" "not" eqf ")"
 *
 * In "(s (j0 .. j_{n-1}) t)" the map sends k to j_k.
 */
inline std::string to_string(const Term& t) {
    auto list = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
        return s;
    };
    switch (t.op) {
        case TermOp::element: return t.name;
        case TermOp::diag: return "(d " + list(t.idx) + ")";
        case TermOp::zero: return "0";
        case TermOp::one: return "1";
        case TermOp::complement: return "(- " + to_string(t.kids[0]) + ")";
        case TermOp::join: return "(+ " + to_string(t.kids[0]) + " " + to_string(t.kids[1]) + ")";
        case TermOp::meet: return "(* " + to_string(t.kids[0]) + " " + to_string(t.kids[1]) + ")";
        case TermOp::cyl: return "(c " + list(t.idx) + " " + to_string(t.kids[0]) + ")";
        case TermOp::subst: return "(s (" + list(t.idx) + ") " + to_string(t.kids[0]) + ")";
    }
    return "";
}

inline std::string to_string(const EqFormula& f) {
    switch (f.op) {
        case EqFormulaOp::equation: return "(= " + to_string(f.terms[0]) + " " + to_string(f.terms[1]) + ")";
        case EqFormulaOp::neg: return "(not " + to_string(f.kids[0]) + ")";
        default: break;
    }
    std::string s = f.op == EqFormulaOp::conj ? "(and" : "(or";
    for (auto& k : f.kids) s += " " + to_string(k);
    return s + ")";
}

namespace detail {
class EqParser {
  public:
    explicit EqParser(const std::string& text) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) toks_.push_back(cur), cur.clear();
        };
        for (char c : text) {
            if (c == '(' || c == ')') {
                flush();
                toks_.push_back(std::string(1, c));
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else {
                cur += c;
            }
        }
        flush();
    }

    template <class F>
    auto whole(F f) {
        auto out = f();
        if (pos_ != toks_.size()) fail("trailing input");
        return out;
    }

    Term term() {
        std::string h = next();
        if (h == "0") return t_zero();
        if (h == "1") return t_one();
        if (h != "(") {
            if (h == ")" || !valid_relation_name(h)) fail("bad element name '" + h + "'");
            return t_element(h);
        }
        std::string op = next();
        Term out;
        if (op == "d") {
            std::size_t i = index();
            out = t_diag(i, index());
        } else if (op == "-") {
            out = t_complement(term());
        } else if (op == "+" || op == "*") {
            Term a = term();
            Term b = term();
            out = op == "+" ? t_join(a, b) : t_meet(a, b);
        } else if (op == "c") {
            std::size_t i = index();
            out = t_cyl(i, term());
        } else if (op == "s") {
            expect("(");
            std::vector<std::size_t> sigma;
            while (peek() != ")") sigma.push_back(index());
            ++pos_;
            out = t_subst(sigma, term());
        } else {
            throw InvalidArgument("unsupported operator '" + op + "'");
        }
        expect(")");
        return out;
    }

    EqFormula formula() {
        expect("(");
        std::string op = next();
        EqFormula out;
        if (op == "=") {
            Term a = term();
            out = equation(a, term());
        } else if (op == "and" || op == "or") {
            out.op = op == "and" ? EqFormulaOp::conj : EqFormulaOp::disj;
            while (peek() != ")") out.kids.push_back(formula());
        } else if (op == "not") {
            out.op = EqFormulaOp::neg;
            out.kids.push_back(formula());
        } else {
            throw InvalidArgument("unsupported connective '" + op + "'");
        }
        expect(")");
        return out;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidArgument("term parse error at token " + std::to_string(pos_) + ": " + what);
    }
    const std::string& peek() const {
        if (pos_ >= toks_.size()) fail("unexpected end of input");
        return toks_[pos_];
    }
    std::string next() {
        std::string t = peek();
        ++pos_;
        return t;
    }
    void expect(const std::string& t) {
        if (next() != t) fail("expected '" + t + "'");
    }
    std::size_t index() {
        std::string t = next();
        if (t.empty() || t.size() > 6 || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
            fail("expected an index");
        return static_cast<std::size_t>(std::stoul(t));
    }

    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
};
}  // namespace detail

inline Term parse_term(const std::string& text) {
    detail::EqParser p(text);
    return p.whole([&] { return p.term(); });
}
inline EqFormula parse_eq_formula(const std::string& text) {
    detail::EqParser p(text);
    return p.whole([&] { return p.formula(); });
}

namespace detail {
inline void check_term(const Term& t, std::size_t n) {
    switch (t.op) {
        case TermOp::diag:
            if (t.idx.size() != 2 || t.idx[0] >= n || t.idx[1] >= n) throw InvalidArgument("diagonal index out of range");
            break;
        case TermOp::cyl:
            if (t.idx.size() != 1 || t.idx[0] >= n) throw InvalidArgument("cylindrifier index out of range");
            break;
        case TermOp::subst:
            if (t.idx.size() != n) throw InvalidArgument("substitution must be a map n -> n");
            for (auto j : t.idx)
                if (j >= n) throw InvalidArgument("substitution must be a map n -> n");
            break;
        case TermOp::element:
            if (!valid_relation_name(t.name) || t.name == "1" || t.name == "0")
                throw InvalidArgument("bad element name '" + t.name + "'");
            break;
        default: break;
    }
    for (auto& k : t.kids) check_term(k, n);
}

struct Translator {
    std::size_t n;
    std::size_t next_var;

    Formula term(const Term& t, const std::vector<std::size_t>& u) {
        switch (t.op) {
            case TermOp::element: return rel(t.name, u);
            case TermOp::diag: return rel(diagonal_symbol(t.idx[0], t.idx[1]), u);
            case TermOp::zero: return rel("0", u);
            case TermOp::one: return rel("1", u);
            case TermOp::complement: return conj({rel("1", u), neg(term(t.kids[0], u))});
            case TermOp::join: return disj({term(t.kids[0], u), term(t.kids[1], u)});
            case TermOp::meet:
                // Boolean meet through the displayed clauses: -(-t + -t')
                return term(t_complement(t_join(t_complement(t.kids[0]), t_complement(t.kids[1]))), u);
            case TermOp::cyl: {
                std::size_t w = next_var++;
                auto v = u;
                v[t.idx[0]] = w;
                return conj({rel("1", u), exists(w, conj({rel("1", v), term(t.kids[0], v)}))});
            }
            case TermOp::subst: {
                std::vector<std::size_t> v(n);
                for (std::size_t k = 0; k < n; ++k) v[k] = u[t.idx[k]];
                return conj({rel("1", u), term(t.kids[0], v)});
            }
        }
        throw InvalidArgument("unsupported operator");
    }

    Formula formula(const EqFormula& f) {
        switch (f.op) {
            case EqFormulaOp::equation: {
                std::vector<std::size_t> u(n);
                for (std::size_t k = 0; k < n; ++k) u[k] = k;
                return forall(u, implies(rel("1", u), iff(term(f.terms.at(0), u), term(f.terms.at(1), u))));
            }
            case EqFormulaOp::neg: return neg(formula(f.kids.at(0)));
            case EqFormulaOp::conj:
            case EqFormulaOp::disj: {
                std::vector<Formula> kids;
                for (auto& k : f.kids) kids.push_back(formula(k));
                return f.op == EqFormulaOp::conj ? conj(std::move(kids)) : disj(std::move(kids));
            }
        }
        throw InvalidArgument("unsupported connective");
    }
};

inline void check_eq_formula(const EqFormula& f, std::size_t n) {
    if (f.op == EqFormulaOp::equation) {
        if (f.terms.size() != 2) throw InvalidArgument("equation needs two sides");
        for (auto& t : f.terms) check_term(t, n);
    }
    if (f.op == EqFormulaOp::neg && f.kids.size() != 1) throw InvalidArgument("negation takes one argument");
    for (auto& k : f.kids) check_eq_formula(k, n);
}
}  // namespace detail

/**
 * tau^u(t) for a tuple u of n distinct variables. Fresh variables for the
 * cylindrifier clauses start at `first_fresh`, which must exceed every
 * variable in u. Symbols: "1", "0", dI_J, and the element names.
 */
inline Formula loosely_guarded_translate(const Term& t, std::size_t n, const std::vector<std::size_t>& u,
                                         std::size_t first_fresh) {
    detail::check_term(t, n);
    if (u.size() != n || std::set<std::size_t>(u.begin(), u.end()).size() != n)
        throw InvalidArgument("u must be n distinct variables");
    for (auto v : u)
        if (v >= first_fresh) throw InvalidArgument("fresh variables overlap u");
    detail::Translator tr{n, first_fresh};
    return tr.term(t, u);
}

/// tau(psi): each equation t = t' becomes forall u [1(u) -> (tau^u(t) <-> tau^u(t'))] with u = v0..v_{n-1}.
inline Formula loosely_guarded_translate(const EqFormula& f, std::size_t n) {
    detail::check_eq_formula(f, n);
    detail::Translator tr{n, n};
    return tr.formula(f);
}

/**
 * Structural check for the loosely guarded fragment. exists ys (a & psi) and
 * forall ys (a -> psi) need a conjunction a of atoms covering the free
 * variables of psi, with each y in ys meeting each other variable of a in
 * some conjunct. In an existential body every atomic conjunct counts as guard.
 */
inline std::optional<std::string> loosely_guarded_violation(const Formula& f) {
    auto atomic = [](const Formula& g) { return g.op() == FormulaOp::atom || g.op() == FormulaOp::eq; };
    if (atomic(f)) return std::nullopt;
    if (!f.is_quantifier()) {
        for (auto& k : f.kids())
            if (auto bad = loosely_guarded_violation(k)) return bad;
        return std::nullopt;
    }
    const Formula& body = f.kid(0);
    std::vector<Formula> guards, rest;
    auto split = [&](const Formula& g) {
        if (atomic(g)) {
            guards.push_back(g);
        } else if (g.op() == FormulaOp::conj) {
            for (auto& k : g.kids()) (atomic(k) ? guards : rest).push_back(k);
        }
    };
    if (f.op() == FormulaOp::exists) {
        if (body.op() != FormulaOp::conj) return "unguarded existential: " + to_string(f);
        split(body);
    } else {
        if (body.op() != FormulaOp::implies) return "unguarded universal: " + to_string(f);
        const Formula& g = body.kid(0);
        if (!atomic(g) && !(g.op() == FormulaOp::conj &&
                            std::all_of(g.kids().begin(), g.kids().end(), atomic)))
            return "universal guard is not a conjunction of atoms: " + to_string(f);
        split(g);
        rest.push_back(body.kid(1));
    }
    if (guards.empty()) return "quantifier without guard: " + to_string(f);
    std::set<std::size_t> gv;
    for (auto& g : guards) gv.insert(g.vars().begin(), g.vars().end());
    for (auto& r : rest)
        for (auto v : free_vars(r))
            if (!gv.count(v)) return "variable v" + std::to_string(v) + " not covered by the guard: " + to_string(f);
    for (auto y : f.vars()) {
        if (!gv.count(y)) return "bound variable v" + std::to_string(y) + " missing from the guard: " + to_string(f);
        for (auto z : gv) {
            if (z == y) continue;
            bool met = std::any_of(guards.begin(), guards.end(), [&](const Formula& g) {
                return std::count(g.vars().begin(), g.vars().end(), y) && std::count(g.vars().begin(), g.vars().end(), z);
            });
            if (!met) return "v" + std::to_string(y) + " and v" + std::to_string(z) + " share no guard atom: " + to_string(f);
        }
    }
    for (auto& r : rest)
        if (auto bad = loosely_guarded_violation(r)) return bad;
    return std::nullopt;
}

/// Value of t in ops_on(V); element names are looked up in env.
inline AtomSet term_value(const SetAlgebraSpace& V, const FiniteBao& A, const Term& t,
                          const std::map<std::string, AtomSet>& env) {
    detail::check_term(t, V.dim());
    std::function<AtomSet(const Term&)> go = [&](const Term& s) -> AtomSet {
        switch (s.op) {
            case TermOp::element: {
                auto it = env.find(s.name);
                if (it == env.end()) throw InvalidArgument("unbound element " + s.name);
                return it->second;
            }
            case TermOp::diag: return A.d(s.idx[0], s.idx[1]);
            case TermOp::zero: return A.zero();
            case TermOp::one: return A.one();
            case TermOp::complement: return A.complement(go(s.kids[0]));
            case TermOp::join: return A.join(go(s.kids[0]), go(s.kids[1]));
            case TermOp::meet: return A.meet(go(s.kids[0]), go(s.kids[1]));
            case TermOp::cyl: return A.c(s.idx[0], go(s.kids[0]));
            case TermOp::subst: return substitution_op(V, s.idx, go(s.kids[0]));
        }
        throw InvalidArgument("unsupported operator");
    };
    return go(t);
}

inline bool holds_in_algebra(const SetAlgebraSpace& V, const FiniteBao& A, const EqFormula& f,
                             const std::map<std::string, AtomSet>& env) {
    switch (f.op) {
        case EqFormulaOp::equation: return term_value(V, A, f.terms.at(0), env) == term_value(V, A, f.terms.at(1), env);
        case EqFormulaOp::neg: return !holds_in_algebra(V, A, f.kids.at(0), env);
        case EqFormulaOp::conj:
            return std::all_of(f.kids.begin(), f.kids.end(), [&](const EqFormula& k) { return holds_in_algebra(V, A, k, env); });
        case EqFormulaOp::disj:
            return std::any_of(f.kids.begin(), f.kids.end(), [&](const EqFormula& k) { return holds_in_algebra(V, A, k, env); });
    }
    return false;
}

/// Truth of a sentence; the assignment is irrelevant and set to all zeros.
inline bool holds_sentence(const FiniteModel& M, const Formula& f) {
    if (!free_vars(f).empty()) throw InvalidArgument("not a sentence");
    return eval(M, Sequence(std::max<std::size_t>(var_count(f), 1), 0), f);
}

}  // namespace cylindric

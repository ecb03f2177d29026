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

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace cylindric {

using Sequence = std::vector<std::size_t>;

enum class FormulaOp { atom, eq, conj, disj, neg, implies, iff, exists, forall };

class Formula;

namespace detail {
struct FormulaNode {
    FormulaOp op;
    std::string rel;
    std::vector<std::size_t> vars;
    std::vector<Formula> kids;
};
}  // namespace detail

/**
 * Immutable first-order formula over variables v0, v1, ... Quantifiers bind a
 * block of variables; a block of one is the usual case. An empty conjunction
 * is true and an empty disjunction is false.
 */
class Formula {
  public:
    FormulaOp op() const { return node_->op; }
    const std::string& rel() const { return node_->rel; }
    const std::vector<std::size_t>& vars() const { return node_->vars; }
    const std::vector<Formula>& kids() const { return node_->kids; }
    const Formula& kid(std::size_t k) const { return node_->kids.at(k); }

    bool is_quantifier() const { return op() == FormulaOp::exists || op() == FormulaOp::forall; }

    static Formula make(FormulaOp op, std::string rel, std::vector<std::size_t> vars, std::vector<Formula> kids) {
        Formula f;
        f.node_ = std::make_shared<const detail::FormulaNode>(
            detail::FormulaNode{op, std::move(rel), std::move(vars), std::move(kids)});
        return f;
    }

    friend bool operator==(const Formula& a, const Formula& b);

  private:
    std::shared_ptr<const detail::FormulaNode> node_;
};

inline bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    return a.op() == b.op() && a.rel() == b.rel() && a.vars() == b.vars() && a.kids() == b.kids();
}

namespace detail {
inline bool formula_keyword(const std::string& s) {
    static const std::set<std::string> kw{"=", "and", "or", "not", "implies", "iff", "exists", "forall"};
    return kw.count(s) > 0;
}

inline bool valid_relation_name(const std::string& s) {
    if (s.empty() || formula_keyword(s)) return false;
    if (s[0] == 'v' && s.size() > 1 &&
        std::all_of(s.begin() + 1, s.end(), [](unsigned char c) { return std::isdigit(c); }))
        return false;
    return std::none_of(s.begin(), s.end(),
                        [](unsigned char c) { return std::isspace(c) || c == '(' || c == ')' || c == ';'; });
}
}  // namespace detail

inline Formula rel(const std::string& name, std::vector<std::size_t> vars) {
    if (!detail::valid_relation_name(name)) throw InvalidArgument("bad relation name '" + name + "'");
    return Formula::make(FormulaOp::atom, name, std::move(vars), {});
}
inline Formula eq(std::size_t i, std::size_t j) { return Formula::make(FormulaOp::eq, "", {i, j}, {}); }
inline Formula conj(std::vector<Formula> fs) { return Formula::make(FormulaOp::conj, "", {}, std::move(fs)); }
inline Formula disj(std::vector<Formula> fs) { return Formula::make(FormulaOp::disj, "", {}, std::move(fs)); }
inline Formula neg(Formula f) { return Formula::make(FormulaOp::neg, "", {}, {std::move(f)}); }
inline Formula implies(Formula a, Formula b) { return Formula::make(FormulaOp::implies, "", {}, {std::move(a), std::move(b)}); }
inline Formula iff(Formula a, Formula b) { return Formula::make(FormulaOp::iff, "", {}, {std::move(a), std::move(b)}); }
inline Formula truth() { return conj({}); }
inline Formula falsity() { return disj({}); }

inline Formula exists(std::vector<std::size_t> vs, Formula body) {
    if (vs.empty()) throw InvalidArgument("quantifier needs at least one variable");
    return Formula::make(FormulaOp::exists, "", std::move(vs), {std::move(body)});
}
inline Formula exists(std::size_t v, Formula body) { return exists(std::vector<std::size_t>{v}, std::move(body)); }
inline Formula forall(std::vector<std::size_t> vs, Formula body) {
    if (vs.empty()) throw InvalidArgument("quantifier needs at least one variable");
    return Formula::make(FormulaOp::forall, "", std::move(vs), {std::move(body)});
}
inline Formula forall(std::size_t v, Formula body) { return forall(std::vector<std::size_t>{v}, std::move(body)); }

/**
 * S-expression text form.
 *
 *   formula := "(" name var* ")"            relation, name not a keyword
 *            | "(" "=" var var ")"
 *            | "(" ("and" | "or") formula* ")"
 *            | "(" "not" formula ")"
 *            | "(" ("implies" | "iff") formula formula ")"
 *            | "(" ("exists" | "forall") (var | "(" var+ ")") formula ")"
 *   var     := "v" digits
 *
 * ';' starts a comment running to the end of the line.
 */
inline std::string to_string(const Formula& f) {
    auto var = [](std::size_t v) { return "v" + std::to_string(v); };
    std::string out;
    switch (f.op()) {
        case FormulaOp::atom:
            out = "(" + f.rel();
            for (auto v : f.vars()) out += " " + var(v);
            return out + ")";
        case FormulaOp::eq: return "(= " + var(f.vars()[0]) + " " + var(f.vars()[1]) + ")";
        case FormulaOp::exists:
        case FormulaOp::forall: {
            out = f.op() == FormulaOp::exists ? "(exists " : "(forall ";
            if (f.vars().size() == 1) {
                out += var(f.vars()[0]);
            } else {
                out += "(";
                for (std::size_t k = 0; k < f.vars().size(); ++k) out += (k ? " " : "") + var(f.vars()[k]);
                out += ")";
            }
            return out + " " + to_string(f.kid(0)) + ")";
        }
        default: break;
    }
    static const std::map<FormulaOp, std::string> names{{FormulaOp::conj, "and"},     {FormulaOp::disj, "or"},
                                                        {FormulaOp::neg, "not"},      {FormulaOp::implies, "implies"},
                                                        {FormulaOp::iff, "iff"}};
    out = "(" + names.at(f.op());
    for (auto& k : f.kids()) out += " " + to_string(k);
    return out + ")";
}

namespace detail {
class FormulaParser {
  public:
    explicit FormulaParser(const std::string& text) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) toks_.push_back(cur), cur.clear();
        };
        for (std::size_t p = 0; p < text.size(); ++p) {
            char c = text[p];
            if (c == ';') {
                flush();
                while (p < text.size() && text[p] != '\n') ++p;
            } else if (c == '(' || c == ')') {
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

    Formula parse() {
        Formula f = formula();
        if (pos_ != toks_.size()) fail("trailing input");
        return f;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidArgument("formula parse error at token " + std::to_string(pos_) + ": " + what);
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
    static std::optional<std::size_t> as_var(const std::string& t) {
        if (t.size() < 2 || t[0] != 'v') return std::nullopt;
        if (!std::all_of(t.begin() + 1, t.end(), [](unsigned char c) { return std::isdigit(c); })) return std::nullopt;
        if (t.size() > 8) return std::nullopt;
        return static_cast<std::size_t>(std::stoul(t.substr(1)));
    }
    std::size_t var() {
        auto v = as_var(peek());
        if (!v) fail("expected a variable");
        ++pos_;
        return *v;
    }

    Formula formula() {
        expect("(");
        std::string head = next();
        Formula out;
        if (head == "=") {
            std::size_t i = var();
            std::size_t j = var();
            out = eq(i, j);
        } else if (head == "and" || head == "or") {
            std::vector<Formula> kids;
            while (peek() != ")") kids.push_back(formula());
            out = head == "and" ? conj(std::move(kids)) : disj(std::move(kids));
        } else if (head == "not") {
            out = neg(formula());
        } else if (head == "implies" || head == "iff") {
            Formula a = formula();
            Formula b = formula();
            out = head == "implies" ? implies(a, b) : iff(a, b);
        } else if (head == "exists" || head == "forall") {
            std::vector<std::size_t> vs;
            if (peek() == "(") {
                ++pos_;
                while (peek() != ")") vs.push_back(var());
                ++pos_;
                if (vs.empty()) fail("empty quantifier block");
            } else {
                vs.push_back(var());
            }
            Formula body = formula();
            out = head == "exists" ? exists(vs, body) : forall(vs, body);
        } else if (head == "(" || head == ")" || !valid_relation_name(head)) {
            fail("bad relation name '" + head + "'");
        } else {
            std::vector<std::size_t> vs;
            while (peek() != ")") vs.push_back(var());
            out = rel(head, vs);
        }
        expect(")");
        return out;
    }

    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
};
}  // namespace detail

inline Formula parse_formula(const std::string& text) { return detail::FormulaParser(text).parse(); }

/// One more than the largest variable index occurring anywhere, bound or free.
inline std::size_t var_count(const Formula& f) {
    std::size_t n = 0;
    for (auto v : f.vars()) n = std::max(n, v + 1);
    for (auto& k : f.kids()) n = std::max(n, var_count(k));
    return n;
}

/// Nesting depth of connectives and quantifiers; atomic formulas have depth 0.
inline std::size_t depth(const Formula& f) {
    std::size_t d = 0;
    for (auto& k : f.kids()) d = std::max(d, depth(k) + 1);
    return d;
}

inline std::size_t quantifier_depth(const Formula& f) {
    std::size_t d = 0;
    for (auto& k : f.kids()) d = std::max(d, quantifier_depth(k));
    return f.is_quantifier() ? d + 1 : d;
}

inline std::set<std::size_t> free_vars(const Formula& f) {
    if (f.op() == FormulaOp::atom || f.op() == FormulaOp::eq) return {f.vars().begin(), f.vars().end()};
    std::set<std::size_t> out;
    for (auto& k : f.kids()) {
        auto sub = free_vars(k);
        out.insert(sub.begin(), sub.end());
    }
    if (f.is_quantifier())
        for (auto v : f.vars()) out.erase(v);
    return out;
}

/// Relation symbols with their arities; a symbol used at two arities is an error.
inline std::map<std::string, std::size_t> signature_of(const Formula& f) {
    std::map<std::string, std::size_t> sig;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.op() == FormulaOp::atom) {
            auto [it, fresh] = sig.emplace(g.rel(), g.vars().size());
            if (!fresh && it->second != g.vars().size())
                throw InvalidArgument("relation " + g.rel() + " used with two arities");
        }
        for (auto& k : g.kids()) walk(k);
    };
    walk(f);
    return sig;
}

/**
 * Lint for restricted formulas: every relational atom lists v0, v1, ... in
 * order. Equalities are unconstrained. Returns the first offending atom.
 */
inline std::optional<std::string> restricted_form_violation(const Formula& f) {
    if (f.op() == FormulaOp::atom) {
        for (std::size_t k = 0; k < f.vars().size(); ++k)
            if (f.vars()[k] != k) return to_string(f);
        return std::nullopt;
    }
    for (auto& k : f.kids())
        if (auto bad = restricted_form_violation(k)) return bad;
    return std::nullopt;
}

/// Universe {0..size-1} with named relations of fixed arity.
class FiniteModel {
  public:
    FiniteModel() = default;
    explicit FiniteModel(std::size_t universe) : universe_(universe) {
        if (universe == 0) throw InvalidArgument("model universe must be nonempty");
    }

    std::size_t universe() const noexcept { return universe_; }

    void add_relation(const std::string& name, std::size_t arity, const std::set<Sequence>& tuples) {
        if (!detail::valid_relation_name(name)) throw InvalidArgument("bad relation name '" + name + "'");
        if (rels_.count(name)) throw InvalidArgument("relation " + name + " already interpreted");
        for (auto& t : tuples) {
            if (t.size() != arity) throw InvalidArgument("tuple of wrong arity in " + name);
            for (auto x : t)
                if (x >= universe_) throw InvalidArgument("tuple outside universe in " + name);
        }
        rels_[name] = {arity, tuples};
    }

    bool has(const std::string& name) const { return rels_.count(name) > 0; }
    std::size_t arity(const std::string& name) const { return entry(name).arity; }
    const std::set<Sequence>& tuples(const std::string& name) const { return entry(name).tuples; }
    bool holds(const std::string& name, const Sequence& t) const { return entry(name).tuples.count(t) > 0; }

    std::vector<std::string> relation_names() const {
        std::vector<std::string> out;
        for (auto& [k, v] : rels_) out.push_back(k);
        return out;
    }

    bool operator==(const FiniteModel& o) const {
        if (universe_ != o.universe_ || rels_.size() != o.rels_.size()) return false;
        for (auto& [k, v] : rels_) {
            auto it = o.rels_.find(k);
            if (it == o.rels_.end() || it->second.arity != v.arity || it->second.tuples != v.tuples) return false;
        }
        return true;
    }

  private:
    struct Entry {
        std::size_t arity = 0;
        std::set<Sequence> tuples;
    };
    const Entry& entry(const std::string& name) const {
        auto it = rels_.find(name);
        if (it == rels_.end()) throw InvalidArgument("relation " + name + " not interpreted");
        return it->second;
    }

    std::size_t universe_ = 1;
    std::map<std::string, Entry> rels_;
};

using AssignmentSet = std::set<Sequence>;

namespace detail {
inline void check_against(const FiniteModel& M, const Formula& f, const Sequence& s) {
    for (auto& [name, ar] : signature_of(f))
        if (M.arity(name) != ar)
            throw InvalidArgument("relation " + name + " has arity " + std::to_string(M.arity(name)) +
                                  " in the model but " + std::to_string(ar) + " in the formula");
    if (var_count(f) > s.size()) throw InvalidArgument("assignment shorter than the formula's variables");
    for (auto x : s)
        if (x >= M.universe()) throw InvalidArgument("assignment value outside universe");
}

/// `range(s, v, visit)` calls visit for each admissible value of s[v]; s is restored after.
template <class Range>
bool eval_with(const FiniteModel& M, Sequence& s, const Formula& f, const Range& range) {
    switch (f.op()) {
        case FormulaOp::atom: {
            Sequence t(f.vars().size());
            for (std::size_t k = 0; k < t.size(); ++k) t[k] = s[f.vars()[k]];
            return M.holds(f.rel(), t);
        }
        case FormulaOp::eq: return s[f.vars()[0]] == s[f.vars()[1]];
        case FormulaOp::conj:
            for (auto& k : f.kids())
                if (!eval_with(M, s, k, range)) return false;
            return true;
        case FormulaOp::disj:
            for (auto& k : f.kids())
                if (eval_with(M, s, k, range)) return true;
            return false;
        case FormulaOp::neg: return !eval_with(M, s, f.kid(0), range);
        case FormulaOp::implies: return !eval_with(M, s, f.kid(0), range) || eval_with(M, s, f.kid(1), range);
        case FormulaOp::iff: return eval_with(M, s, f.kid(0), range) == eval_with(M, s, f.kid(1), range);
        case FormulaOp::exists:
        case FormulaOp::forall: {
            bool want = f.op() == FormulaOp::exists;
            // a block binds its variables one at a time, left to right
            std::function<bool(std::size_t)> go = [&](std::size_t b) -> bool {
                if (b == f.vars().size()) return eval_with(M, s, f.kid(0), range);
                bool found = false;
                range(s, f.vars()[b], [&] {
                    if (!found && go(b + 1) == want) found = true;
                    return found;
                });
                return found ? want : !want;
            };
            return go(0);
        }
    }
    return false;
}
}  // namespace detail

/// Tarskian truth of f in M under s.
inline bool eval(const FiniteModel& M, const Sequence& s, const Formula& f) {
    detail::check_against(M, f, s);
    Sequence w = s;
    auto range = [&](Sequence& a, std::size_t v, const auto& visit) {
        std::size_t old = a[v];
        for (std::size_t x = 0; x < M.universe(); ++x) {
            a[v] = x;
            if (visit()) break;
        }
        a[v] = old;
    };
    return detail::eval_with(M, w, f, range);
}

/// Truth in the generalized model (M, V): quantifier v ranges over t in V with t =_v s.
inline bool eval_generalized(const FiniteModel& M, const AssignmentSet& V, const Sequence& s, const Formula& f) {
    detail::check_against(M, f, s);
    if (!V.count(s)) throw InvalidArgument("assignment is not admissible");
    for (auto& t : V)
        if (t.size() != s.size()) throw InvalidArgument("admissible assignments of mixed length");
    Sequence w = s;
    auto range = [&](Sequence& a, std::size_t v, const auto& visit) {
        std::size_t old = a[v];
        for (std::size_t x = 0; x < M.universe(); ++x) {
            a[v] = x;
            if (V.count(a) && visit()) break;
        }
        a[v] = old;
    };
    return detail::eval_with(M, w, f, range);
}

/**
 * Relativizes every quantifier to R(v0..v_{dim-1}): exists v becomes
 * exists v (R & .), forall v becomes forall v (R -> .). Blocks are split
 * into single quantifiers first. Atoms outside quantifiers are untouched.
 */
inline Formula guard_translate(const Formula& f, const std::string& R, std::size_t dim) {
    if (signature_of(f).count(R)) throw InvalidArgument("guard symbol " + R + " already occurs in the formula");
    if (var_count(f) > dim) throw InvalidArgument("formula uses variables beyond the guard's arity");
    std::vector<std::size_t> all(dim);
    for (std::size_t k = 0; k < dim; ++k) all[k] = k;
    Formula g = rel(R, all);
    std::function<Formula(const Formula&)> go = [&](const Formula& h) -> Formula {
        if (h.op() == FormulaOp::atom || h.op() == FormulaOp::eq) return h;
        if (h.is_quantifier()) {
            Formula body = go(h.kid(0));
            for (std::size_t b = h.vars().size(); b-- > 0;)
                body = h.op() == FormulaOp::exists ? exists(h.vars()[b], conj({g, body}))
                                                   : forall(h.vars()[b], implies(g, body));
            return body;
        }
        std::vector<Formula> kids;
        for (auto& k : h.kids()) kids.push_back(go(k));
        return Formula::make(h.op(), h.rel(), h.vars(), std::move(kids));
    };
    return go(f);
}

/// Guard(M, V): M expanded by R interpreted as V.
inline FiniteModel expand_with_guard(const FiniteModel& M, const AssignmentSet& V, const std::string& R) {
    if (V.empty()) throw InvalidArgument("no admissible assignments");
    if (M.has(R)) throw InvalidArgument("guard symbol " + R + " already interpreted");
    FiniteModel out = M;
    out.add_relation(R, V.begin()->size(), V);
    return out;
}

using RelationSignature = std::vector<std::pair<std::string, std::size_t>>;

/// Seeded random formula of depth at most `max_depth` over v0..v_{dim-1}.
inline Formula random_formula(std::mt19937_64& rng, const RelationSignature& sig, std::size_t dim, std::size_t max_depth) {
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto leaf = [&]() -> Formula {
        if (sig.empty() || pick(5) == 0) return eq(pick(dim), pick(dim));
        auto& [name, ar] = sig[pick(sig.size())];
        std::vector<std::size_t> vs(ar);
        for (auto& v : vs) v = pick(dim);
        return rel(name, vs);
    };
    if (max_depth == 0 || pick(4) == 0) return leaf();
    auto sub = [&] { return random_formula(rng, sig, dim, max_depth - 1); };
    switch (pick(7)) {
        case 0: return conj({sub(), sub()});
        case 1: return disj({sub(), sub()});
        case 2: return neg(sub());
        case 3: return implies(sub(), sub());
        case 4: return forall(pick(dim), sub());
        default: return exists(pick(dim), sub());
    }
}

/// Each possible tuple of each relation is present with probability about `density`.
inline FiniteModel random_model(std::mt19937_64& rng, std::size_t universe, const RelationSignature& sig, double density = 0.4) {
    FiniteModel M(universe);
    for (auto& [name, ar] : sig) {
        std::set<Sequence> ts;
        for (std::size_t c = 0; c < ipow(universe, ar); ++c) {
            if (static_cast<double>(rng() % 1000) >= density * 1000) continue;
            Sequence t(ar);
            std::size_t r = c;
            for (auto& x : t) x = r % universe, r /= universe;
            ts.insert(t);
        }
        M.add_relation(name, ar, ts);
    }
    return M;
}

}  // namespace cylindric

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

// Command-line front end. Exit codes: 0 success, 1 check failed, 2 invalid
// arguments, 3 resource limit or undecided within budget.

#include <cylindric/cylindric.hpp>
#include <cylindric/json_io.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

using namespace cylindric;

namespace {

struct Outcome {
    std::string verdict;
    int exit_code = 0;
    Json result = Json::object();
    std::string text;
};

struct Globals {
    bool json = false;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    double wall_clock = 0;  // seconds, 0 = none
};

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

/// Experiment documents wrap their payload; unwrap so either form can be fed back in.
Json payload(Json j) {
    if (j.is_object() && j.value("schema", "") == schema_tag("experiment")) return j.at("result");
    return j;
}

std::filesystem::path output_path(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative())
        if (const char* dir = std::getenv("CYLINDRIC_OUT_DIR")) p = std::filesystem::path(dir) / p;
    return p;
}

void write_file(const std::string& out, const std::string& text) {
    auto p = output_path(out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw InvalidArgument("cannot write " + p.string());
    f << text;
}

std::vector<std::size_t> parse_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            long v = std::stol(tok);
            if (v < 0) throw InvalidArgument("negative entry in '" + s + "'");
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad list entry '" + tok + "'");
        }
    }
    return out;
}

// structure sources shared by several subcommands

struct Source {
    std::string from = "set";
    std::size_t base = 2, dim = 3;
    std::string blocks;
    std::size_t greens = 4, reds = 3, n = 3;
    std::string graph = "complete:3";
    std::string file;
};

void add_source(CLI::App* sc, Source& s) {
    sc->add_option("--from", s.from, "set | rainbow | monk | mat | file")
        ->check(CLI::IsMember({"set", "rainbow", "monk", "mat", "file"}));
    sc->add_option("--base", s.base, "set algebra base size");
    sc->add_option("--dim", s.dim, "set algebra dimension");
    sc->add_option("--blocks", s.blocks, "unit as a union of squares, e.g. 0,1;2");
    sc->add_option("--greens", s.greens, "rainbow tint count");
    sc->add_option("--reds", s.reds, "rainbow red index count");
    sc->add_option("--n", s.n, "dimension for rainbow, monk and mat");
    sc->add_option("--graph", s.graph, "graph spec such as complete:3 or clique_union:2,3");
    sc->add_option("--structure", s.file, "atom structure JSON (implies --from file)");
}

Json source_config(const Source& s) {
    if (s.from == "set") return {{"from", "set"}, {"base", s.base}, {"dim", s.dim}, {"blocks", s.blocks}};
    if (s.from == "rainbow") return {{"from", "rainbow"}, {"greens", s.greens}, {"reds", s.reds}, {"n", s.n}};
    if (s.from == "file") return {{"from", "file"}, {"structure", s.file}};
    return {{"from", s.from}, {"graph", s.graph}, {"n", s.n}};
}

struct Loaded {
    AtomStructure S;
    std::optional<FiniteBao> A;
    std::optional<SetAlgebraSpace> V;
    std::optional<RainbowSig> rainbow;
};

SetAlgebraSpace set_space(const Source& s) {
    if (s.blocks.empty()) return full_space(s.base, s.dim);
    std::vector<std::vector<std::size_t>> blocks;
    std::stringstream ss(s.blocks);
    std::string part;
    while (std::getline(ss, part, ';')) blocks.push_back(parse_list(part));
    return union_of_squares(s.base, s.dim, blocks);
}

Json rainbow_params(const RainbowSig& sig) {
    return {{"n", sig.n()}, {"greens", sig.green_hi() - sig.green_lo() + 1}, {"reds", sig.red_hi() - sig.red_lo() + 1}};
}

Loaded load(Source s) {
    if (!s.file.empty()) s.from = "file";
    Loaded L;
    if (s.from == "set") {
        L.V = set_space(s);
        L.A = ops_on(*L.V);
        L.S = atom_structure_of(*L.A);
    } else if (s.from == "rainbow") {
        L.rainbow = RainbowSig::plain(s.greens, s.reds, s.n);
        L.S = rainbow_atom_structure(*L.rainbow);
    } else if (s.from == "monk") {
        L.S = monk_ca_atom_structure(make_graph(s.graph), s.n);
    } else if (s.from == "mat") {
        L.S = basic_matrices(alpha_of_graph(make_graph(s.graph), s.n), s.n);
    } else {
        if (s.file.empty()) throw InvalidArgument("--from file needs --structure");
        Json j = payload(read_json(s.file));
        L.S = atom_structure_from_json(j);
        if (j.contains("rainbow")) {
            auto& r = j["rainbow"];
            L.rainbow = RainbowSig::plain(r.at("greens"), r.at("reds"), r.at("n"));
            if (!(rainbow_atom_structure(*L.rainbow) == L.S))
                throw InvalidArgument("rainbow parameters do not match the stored structure");
        }
    }
    return L;
}

FiniteBao algebra_of(const Loaded& L) { return L.A ? *L.A : complex_algebra(L.S); }


// subcommands

Outcome cmd_graph(const std::string& spec, const std::string& format) {
    Graph g = make_graph(spec);
    Outcome o;
    o.verdict = "ok";
    std::size_t chi = chromatic_number(g), gi = girth(g);
    o.result = to_json(g);
    o.result["chromatic_number"] = chi;
    o.result["girth"] = natural_or_inf(gi);
    if (format == "dot") {
        o.result["dot"] = g.to_dot();
        o.text = g.to_dot();
    } else {
        o.text = "nodes " + std::to_string(g.node_count()) + ", edges " + std::to_string(g.edges().size()) +
                 ", chromatic number " + std::to_string(chi) + ", girth " + natural_or_inf(gi) + "\n";
    }
    return o;
}

Outcome cmd_algebra_check(const Source& src, bool exhaustive) {
    auto L = load(src);
    AxiomOptions opt;
    opt.exhaustive = exhaustive;
    Report r = check_ca_axioms(algebra_of(L), opt);
    Outcome o;
    o.verdict = r.passed() ? "pass" : "fail";
    o.exit_code = r.passed() ? 0 : 1;
    o.result = to_json(r);
    o.text = r.to_text();
    return o;
}

Outcome cmd_set_algebra(const Source& src) {
    SetAlgebraSpace V = set_space(src);
    FiniteBao A = ops_on(V);
    auto kinds = unit_closure_kind(V);
    Report axioms = check_ca_axioms(A);
    Check diag = check_diagonal_commutativity(A);
    Outcome o;
    o.verdict = "ok";
    Json k = Json::array();
    for (auto c : kinds) k.push_back(to_string(c));
    o.result = {{"unit_size", V.size()}, {"closure", k}, {"axioms", to_json(axioms)}, {"diagonal_commutativity", to_json(diag)}};
    o.text = "unit size " + std::to_string(V.size()) + ", closure:";
    for (auto c : kinds) o.text += " " + to_string(c);
    if (kinds.empty()) o.text += " none";
    o.text += "\n" + axioms.to_text() + "  C4-diagonal: " + (diag.passed ? "pass" : "FAIL") + "\n";
    return o;
}

Outcome structure_outcome(const AtomStructure& S, const std::string& what) {
    Outcome o;
    o.verdict = "built";
    o.result = to_json(S);
    o.text = what + ": dimension " + std::to_string(S.dim()) + ", " + std::to_string(S.atom_count()) + " atoms\n";
    return o;
}

Outcome cmd_rainbow_build(std::size_t greens, std::size_t reds, std::size_t n) {
    RainbowSig sig = RainbowSig::plain(greens, reds, n);
    Outcome o = structure_outcome(rainbow_atom_structure(sig), "rainbow atom structure");
    o.result["rainbow"] = rainbow_params(sig);
    return o;
}

Outcome cmd_mat(const std::string& graph, std::size_t n, bool check_iso) {
    Graph g = make_graph(graph);
    AtomStructure M = basic_matrices(alpha_of_graph(g, n), n);
    Outcome o = structure_outcome(M, "basic matrices");
    if (check_iso) {
        bool iso = iso_atom_structures(monk_ca_atom_structure(g, n), M);
        o.verdict = iso ? "isomorphic" : "not-isomorphic";
        o.exit_code = iso ? 0 : 1;
        o.text += std::string("isomorphic to the Monk atom structure: ") + (iso ? "yes" : "no") + "\n";
    }
    return o;
}

struct GameOpts {
    std::string kind = "G";
    std::size_t nodes = 3;
    std::string rounds = "omega";
    bool exact = false;
    std::string script = "none";
    std::size_t depth = 10;
    std::size_t state_cap = 2'000'000;
};

Outcome cmd_game_solve(const Source& src, const GameOpts& g) {
    auto L = load(src);
    Outcome o;
    if (g.script == "rainbow") {
        if (!L.rainbow) throw InvalidArgument("--script rainbow needs a rainbow structure");
        RainbowStructure R(*L.rainbow);
        auto c = non_membership_certificate(R, g.nodes, g.depth);
        if (!c) {
            o.verdict = "unknown";
            o.exit_code = 3;
            o.result = {{"note", "cone script inconclusive at depth " + std::to_string(g.depth)}};
            o.text = "unknown: cone script inconclusive\n";
            return o;
        }
        o.verdict = to_string(c->game.winner);
        o.exit_code = c->verified ? 0 : 1;
        o.result = to_json(*c);
        o.text = to_string(c->game.winner) + " wins " + c->game.spec.to_string() + " in " +
                 std::to_string(c->game.rounds_used) + " rounds; " + c->statement() + "; replay " +
                 (c->verified ? "verified" : "FAILED") + "\n";
        return o;
    }
    GameSpec spec;
    spec.kind = g.kind == "F" ? GameKind::F : GameKind::G;
    spec.m = g.nodes;
    if (g.rounds != "omega") spec.rounds = parse_list(g.rounds).at(0);
    spec.exact_history = g.exact;
    GameResult r = solve_atomic_game(L.S, spec, GameLimits{g.state_cap});
    o.verdict = to_string(r.winner);
    if (r.winner == Winner::unknown) {
        o.exit_code = 3;
        o.result = to_json(r);
        o.text = "unknown: " + r.note + "\n";
        return o;
    }
    auto v = verify_certificate(L.S, r);
    o.exit_code = v.ok ? 0 : 1;
    bool claim = !spec.rounds && ((spec.kind == GameKind::F && r.winner == Winner::forall) ||
                                  (spec.kind == GameKind::G && r.winner == Winner::exists));
    if (claim) {
        Certificate c;
        c.claim = r.winner == Winner::forall ? Claim::not_neat_embeddable : Claim::square_representable;
        c.n = L.S.dim();
        c.m = spec.m;
        c.game = r;
        c.verified = v.ok;
        c.method = "fixpoint";
        o.result = to_json(c);
        o.text = c.statement() + "\n";
    } else {
        o.result = to_json(r);
        o.result["verified"] = v.ok;
    }
    o.text = to_string(r.winner) + " wins " + spec.to_string() + " (" + std::to_string(r.states) + " states); replay " +
             (v.ok ? "verified" : "FAILED: " + v.detail) + "\n" + o.text;
    return o;
}

Outcome cmd_ef(const std::string& left, const std::string& right, std::size_t pairs, std::size_t rounds, bool back,
               std::size_t cap) {
    EfOptions opt;
    opt.back_and_forth = back;
    opt.state_cap = cap;
    auto r = ef_game(make_graph(left), make_graph(right), pairs, rounds, opt);
    Outcome o;
    o.verdict = r.exists_wins ? "exists" : "forall";
    o.result = {{"winner", o.verdict}, {"states", r.states}};
    o.text = o.verdict + "\n";
    return o;
}

Outcome cmd_lyndon(const Source& src, std::size_t k_max, std::size_t nodes, std::size_t cap) {
    auto L = load(src);
    auto rep = lyndon_check(L.S, k_max, nodes, GameLimits{cap});
    Outcome o;
    Json vs = Json::array();
    for (auto& v : rep.verdicts)
        vs.push_back({{"k", v.k}, {"m", v.m}, {"winner", to_string(v.winner)}, {"budget_limited", v.budget_limited}, {"states", v.states}});
    o.result = {{"verdicts", vs}, {"complete", rep.complete}, {"replay_ok", rep.replay_ok}, {"note", rep.note}};
    for (auto& v : rep.verdicts)
        o.text += "k=" + std::to_string(v.k) + " m=" + std::to_string(v.m) + " " + to_string(v.winner) +
                  (v.budget_limited ? " (budget limited)" : "") + "\n";
    if (rep.failed_at) {
        o.verdict = "fails";
        o.exit_code = 1;
        o.result["failed_at"] = *rep.failed_at;
        o.result["refutation"] = to_json(*rep.refutation);
        o.text += "exists loses at k=" + std::to_string(*rep.failed_at) + "; replay " + (rep.replay_ok ? "verified" : "FAILED") + "\n";
    } else if (rep.complete) {
        o.verdict = "passes";
        o.text += "exists wins every k <= " + std::to_string(k_max) + "\n";
    } else {
        o.verdict = "unknown";
        o.exit_code = 3;
        o.text += "undecided: " + rep.note + "\n";
    }
    return o;
}

Outcome cmd_rep_game(const Source& src, std::size_t nodes, std::size_t cap, std::size_t generators) {
    auto L = load(src);
    FiniteBao A = algebra_of(L);
    RepGameLimits lim;
    lim.node_budget = nodes;
    lim.state_cap = cap;
    auto play = rep_play(A, lim);
    Outcome o;
    o.result = {{"survived", play.exists_survived}, {"saturated", play.saturated}, {"rounds", play.trace.size()},
                {"nodes", play.final_network.node_count()}, {"states", play.states}, {"note", play.note}};
    o.text = std::string("exists ") + (play.exists_survived ? "survived" : "lost") + " after " +
             std::to_string(play.trace.size()) + " rounds on " + std::to_string(play.final_network.node_count()) +
             " nodes" + (play.saturated ? ", saturated" : "") + "\n";
    if (!play.exists_survived || !play.saturated) {
        o.verdict = play.exists_survived ? "unknown" : "no-embedding";
        o.exit_code = play.exists_survived ? 3 : 1;
        return o;
    }
    std::vector<AtomSet> gens;
    for (Atom a = 0; a < std::min<std::size_t>(generators, A.atom_count()); ++a) gens.push_back(A.atom(a));
    auto rep = extract_representation(A, play, gens);
    o.result["homomorphism"] = {{"ok", rep.check.ok}, {"elements", rep.check.elements}, {"failure", rep.check.failure}};
    o.verdict = rep.check.ok ? "embedding" : "no-embedding";
    o.exit_code = rep.check.ok ? 0 : 1;
    o.text += "h checked on " + std::to_string(rep.check.elements) + " elements: " + (rep.check.ok ? "embedding" : rep.check.failure) + "\n";
    return o;
}

AssignmentSet read_assignments(const std::string& path, std::size_t universe, std::size_t dim) {
    AssignmentSet V;
    if (path.empty()) {
        for (std::size_t c = 0; c < ipow(universe, dim); ++c) {
            Sequence t(dim);
            std::size_t r = c;
            for (auto& x : t) x = r % universe, r /= universe;
            V.insert(t);
        }
        return V;
    }
    Json j = read_json(path);
    return detail::json_guard([&] { return j.get<AssignmentSet>(); });
}

Outcome cmd_guard(const std::string& formula, std::size_t dim, const std::string& symbol, const std::string& model,
                  const std::string& admissible, const std::string& assignment) {
    Formula f = parse_formula(formula);
    Formula g = guard_translate(f, symbol, dim);
    Outcome o;
    o.verdict = "translated";
    o.result = {{"guarded", to_string(g)}};
    o.text = to_string(g) + "\n";
    if (model.empty()) return o;
    FiniteModel M = finite_model_from_json(payload(read_json(model)));
    AssignmentSet V = read_assignments(admissible, M.universe(), dim);
    Sequence s = parse_list(assignment);
    bool lhs = eval_generalized(M, V, s, f);
    bool rhs = eval(expand_with_guard(M, V, symbol), s, g);
    o.verdict = lhs == rhs ? "agree" : "disagree";
    o.exit_code = lhs == rhs ? 0 : 1;
    o.result["generalized"] = lhs;
    o.result["guarded"] = rhs;
    o.result["formula"] = to_string(g);
    o.text += std::string("generalized: ") + (lhs ? "true" : "false") + ", guarded: " + (rhs ? "true" : "false") + "\n";
    return o;
}

Outcome cmd_clique_eval(const Source& src, const std::string& model, const std::string& top, const std::string& assignment,
                        const std::string& formula, const std::string& check, std::size_t m, std::size_t depth) {
    Outcome o;
    if (!formula.empty()) {
        if (model.empty()) throw InvalidArgument("--formula needs --model");
        FiniteModel M = finite_model_from_json(payload(read_json(model)));
        bool v = clique_guarded_eval(M, top, parse_list(assignment), parse_formula(formula));
        o.verdict = v ? "true" : "false";
        o.result = {{"value", v}};
        o.text = o.verdict + "\n";
        return o;
    }
    if (src.from != "set") throw InvalidArgument("square and flat checks use the classical representation of --from set");
    SetAlgebraSpace V = set_space(src);
    FiniteBao A = ops_on(V);
    LabelledModel M = classical_representation(V);
    if (check == "square") {
        auto r = is_m_square_model(A, M, m);
        o.verdict = r.square ? "square" : "not-square";
        o.exit_code = r.square ? 0 : 1;
        o.result = {{"square", r.square}, {"points", r.points}};
        if (r.witness) o.result["witness"] = {{"s", r.witness->s}, {"atom", r.witness->atom}, {"i", r.witness->i}, {"l", r.witness->l}};
    } else {
        auto r = is_m_flat_model(A, M, m, depth);
        o.verdict = r.flat ? "flat" : "not-flat";
        o.exit_code = r.flat ? 0 : 1;
        o.result = {{"flat", r.flat}, {"square", r.square.square}, {"depth", r.depth}, {"bounded", r.bounded},
                    {"blocks", r.blocks}, {"note", r.note}};
        if (r.witness) o.result["witness"] = {{"s", r.witness->s}, {"i", r.witness->i}, {"j", r.witness->j}, {"detail", r.witness->detail}};
    }
    o.text = o.verdict + "\n";
    return o;
}

Outcome cmd_translate(const std::string& term, const std::string& equation, std::size_t dim) {
    if (term.empty() == equation.empty()) throw InvalidArgument("give exactly one of --term and --equation");
    Formula f;
    if (!term.empty()) {
        std::vector<std::size_t> u(dim);
        for (std::size_t k = 0; k < dim; ++k) u[k] = k;
        f = loosely_guarded_translate(parse_term(term), dim, u, dim);
    } else {
        f = loosely_guarded_translate(parse_eq_formula(equation), dim);
    }
    auto bad = loosely_guarded_violation(f);
    Outcome o;
    o.verdict = bad ? "not-guarded" : "loosely-guarded";
    o.exit_code = bad ? 1 : 0;
    o.result = {{"formula", to_string(f)}, {"loosely_guarded", !bad}};
    if (bad) o.result["violation"] = *bad;
    o.text = to_string(f) + "\n";
    return o;
}

/// Re-emits a stored object; DOT is available for graphs and networks.
std::string cmd_export(const std::string& input, const std::string& format, const std::string& structure) {
    Json j = payload(read_json(input));
    std::string schema = j.value("schema", "");
    if (format == "json") {
        if (schema == schema_tag("graph")) return dump_stable(to_json(graph_from_json(j)));
        if (schema == schema_tag("atom-structure")) {
            Json out = to_json(atom_structure_from_json(j));
            if (j.contains("rainbow")) out["rainbow"] = j["rainbow"];
            return dump_stable(out);
        }
        if (schema == schema_tag("ra-atom-structure")) return dump_stable(to_json(ra_atom_structure_from_json(j)));
        if (schema == schema_tag("network")) return dump_stable(to_json(network_from_json(j)));
        if (schema == schema_tag("game-result")) return dump_stable(to_json(game_result_from_json(j)));
        if (schema == schema_tag("certificate")) return dump_stable(to_json(certificate_from_json(j)));
        if (schema == schema_tag("model")) return dump_stable(to_json(finite_model_from_json(j)));
    } else if (format == "dot") {
        if (schema == schema_tag("graph")) return graph_from_json(j).to_dot();
        if (schema == schema_tag("network")) {
            if (structure.empty()) throw InvalidArgument("network to dot needs --structure for atom names");
            return to_dot(network_from_json(j), atom_structure_from_json(payload(read_json(structure))));
        }
    }
    throw InvalidArgument("cannot export " + (schema.empty() ? std::string("this input") : schema) + " as " + format);
}

int emit_error(const Globals& g, int code, const std::string& kind, const std::string& message) {
    if (g.json)
        std::cout << dump_stable({{"schema", schema_tag("error")}, {"exit_code", code}, {"kind", kind}, {"message", message}});
    else
        std::cerr << "error: " << message << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cylindric: finite cylindric algebras, atomic games and guarded logics"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "print the result document (and errors) as JSON");
    app.add_option("--out", g.out, "write the result document here (relative to $CYLINDRIC_OUT_DIR when set)");
    app.add_option("--seed", g.seed, "recorded in every output; all solvers are deterministic");
    app.add_option("--threads", g.threads, "worker threads requested; solvers currently run on one");
    app.add_option("--wall-clock", g.wall_clock, "seconds before giving up with verdict unknown (0 = no limit)");
    app.set_version_flag("--version", std::string("cylindric ") + kVersion);

    std::string command;
    Json config = Json::object();
    Json budgets = Json::object();
    std::function<Outcome()> run;
    std::function<std::string()> run_raw;  // export bypasses the experiment wrapper

    auto* graph = app.add_subcommand("graph", "build a graph and report its invariants");
    std::string graph_spec = "complete:3", graph_format = "json";
    graph->add_option("--spec", graph_spec, "complete:n, cycle:k, clique_union:c,s or band:m,n");
    graph->add_option("--format", graph_format)->check(CLI::IsMember({"json", "dot"}));
    graph->callback([&] {
        command = "graph";
        config = {{"spec", graph_spec}, {"format", graph_format}};
        run = [&] { return cmd_graph(graph_spec, graph_format); };
    });

    auto* algebra = app.add_subcommand("algebra", "algebra checks");
    algebra->require_subcommand(1);
    auto* check = algebra->add_subcommand("check", "check the cylindric algebra axioms C1-C7");
    Source check_src;
    bool exhaustive = false;
    add_source(check, check_src);
    check->add_flag("--exhaustive", exhaustive, "quantify over all elements instead of atoms");
    check->callback([&] {
        command = "algebra check";
        config = {{"source", source_config(check_src)}, {"exhaustive", exhaustive}};
        run = [&] { return cmd_algebra_check(check_src, exhaustive); };
    });

    auto* setalg = app.add_subcommand("set-algebra", "unit closure and axioms of a set algebra");
    Source set_src;
    setalg->add_option("--base", set_src.base);
    setalg->add_option("--dim", set_src.dim);
    setalg->add_option("--blocks", set_src.blocks, "unit as a union of squares, e.g. 0,1;2");
    setalg->callback([&] {
        command = "set-algebra";
        config = {{"source", source_config(set_src)}};
        run = [&] { return cmd_set_algebra(set_src); };
    });

    auto* rainbow = app.add_subcommand("rainbow", "rainbow constructions");
    rainbow->require_subcommand(1);
    auto* rbuild = rainbow->add_subcommand("build", "build a rainbow atom structure");
    std::size_t rg = 4, rr = 3, rn = 3;
    rbuild->add_option("--greens", rg);
    rbuild->add_option("--reds", rr);
    rbuild->add_option("--n", rn);
    rbuild->callback([&] {
        command = "rainbow build";
        config = {{"greens", rg}, {"reds", rr}, {"n", rn}};
        run = [&] { return cmd_rainbow_build(rg, rr, rn); };
    });

    auto* monk = app.add_subcommand("monk", "Monk-style constructions");
    monk->require_subcommand(1);
    auto* mbuild = monk->add_subcommand("build", "build the Monk atom structure of a graph");
    std::string mgraph = "complete:3";
    std::size_t mn = 3;
    mbuild->add_option("--graph", mgraph);
    mbuild->add_option("--n", mn);
    mbuild->callback([&] {
        command = "monk build";
        config = {{"graph", mgraph}, {"n", mn}};
        run = [&] { return structure_outcome(monk_ca_atom_structure(make_graph(mgraph), mn), "Monk atom structure"); };
    });

    auto* mat = app.add_subcommand("mat", "basic matrices over the relation atom structure of a graph");
    std::string matgraph = "complete:3";
    std::size_t matn = 3;
    bool matiso = false;
    mat->add_option("--graph", matgraph);
    mat->add_option("--n", matn);
    mat->add_flag("--check-iso", matiso, "compare with the Monk atom structure");
    mat->callback([&] {
        command = "mat";
        config = {{"graph", matgraph}, {"n", matn}, {"check_iso", matiso}};
        run = [&] { return cmd_mat(matgraph, matn, matiso); };
    });

    auto* game = app.add_subcommand("game", "atomic games");
    game->require_subcommand(1);
    auto* solve = game->add_subcommand("solve", "solve G(m, k) or F(m, k) on an atom structure");
    Source game_src;
    GameOpts gopt;
    add_source(solve, game_src);
    solve->add_option("--kind", gopt.kind)->check(CLI::IsMember({"G", "F"}));
    solve->add_option("--nodes", gopt.nodes, "m, the node budget");
    solve->add_option("--rounds", gopt.rounds, "round count or omega");
    solve->add_flag("--exact-history", gopt.exact);
    solve->add_option("--script", gopt.script, "none or rainbow")->check(CLI::IsMember({"none", "rainbow"}));
    solve->add_option("--depth", gopt.depth, "cone script depth");
    solve->add_option("--state-cap", gopt.state_cap);
    solve->callback([&] {
        command = "game solve";
        config = {{"source", source_config(game_src)}, {"kind", gopt.kind},   {"nodes", gopt.nodes},
                  {"rounds", gopt.rounds},              {"exact_history", gopt.exact}, {"script", gopt.script},
                  {"depth", gopt.depth}};
        budgets = {{"nodes", gopt.nodes}, {"rounds", gopt.rounds}, {"states", gopt.state_cap}};
        run = [&] { return cmd_game_solve(game_src, gopt); };
    });

    auto* ef = app.add_subcommand("ef", "pebble game between two graphs");
    std::string left = "complete:3", right = "complete:3";
    std::size_t pairs = 3, rounds = 3, ef_cap = 2'000'000;
    bool back = false;
    ef->add_option("--left", left);
    ef->add_option("--right", right);
    ef->add_option("--pairs", pairs);
    ef->add_option("--rounds", rounds);
    ef->add_flag("--back-and-forth", back);
    ef->add_option("--state-cap", ef_cap);
    ef->callback([&] {
        command = "ef";
        config = {{"left", left}, {"right", right}, {"pairs", pairs}, {"rounds", rounds}, {"back_and_forth", back}};
        budgets = {{"rounds", rounds}, {"states", ef_cap}};
        run = [&] { return cmd_ef(left, right, pairs, rounds, back, ef_cap); };
    });

    auto* lyndon = app.add_subcommand("lyndon", "bounded check of the Lyndon conditions");
    Source ly_src;
    std::size_t k_max = 6, ly_nodes = 8, ly_cap = 200'000;
    add_source(lyndon, ly_src);
    lyndon->add_option("--k-max", k_max);
    lyndon->add_option("--nodes", ly_nodes, "node budget");
    lyndon->add_option("--state-cap", ly_cap);
    lyndon->callback([&] {
        command = "lyndon";
        config = {{"source", source_config(ly_src)}, {"k_max", k_max}};
        budgets = {{"rounds", k_max}, {"nodes", ly_nodes}, {"states", ly_cap}};
        run = [&] { return cmd_lyndon(ly_src, k_max, ly_nodes, ly_cap); };
    });

    auto* rep = app.add_subcommand("rep-game", "play the representation game and check the extracted map");
    Source rep_src;
    std::size_t rep_nodes = 8, rep_cap = 200'000, rep_gens = 4;
    add_source(rep, rep_src);
    rep->add_option("--nodes", rep_nodes, "node budget");
    rep->add_option("--state-cap", rep_cap);
    rep->add_option("--generators", rep_gens, "first atoms used to generate the checked subalgebra");
    rep->callback([&] {
        command = "rep-game";
        config = {{"source", source_config(rep_src)}, {"generators", rep_gens}};
        budgets = {{"nodes", rep_nodes}, {"states", rep_cap}};
        run = [&] { return cmd_rep_game(rep_src, rep_nodes, rep_cap, rep_gens); };
    });

    auto* guard = app.add_subcommand("guard", "relativize quantifiers to a guard atom");
    std::string gformula, gsymbol = "G", gmodel, gadm, gassign;
    std::size_t gdim = 2;
    guard->add_option("--formula", gformula)->required();
    guard->add_option("--dim", gdim);
    guard->add_option("--symbol", gsymbol);
    guard->add_option("--model", gmodel, "model JSON; evaluates both sides");
    guard->add_option("--admissible", gadm, "JSON list of admissible assignments (default: all)");
    guard->add_option("--assignment", gassign, "comma separated");
    guard->callback([&] {
        command = "guard";
        config = {{"formula", gformula}, {"dim", gdim}, {"symbol", gsymbol}, {"model", gmodel}, {"admissible", gadm}, {"assignment", gassign}};
        run = [&] { return cmd_guard(gformula, gdim, gsymbol, gmodel, gadm, gassign); };
    });

    auto* clique = app.add_subcommand("clique-eval", "clique guarded evaluation, m-square and m-flat checks");
    Source cl_src;
    std::string cmodel, ctop = "1", cassign, cformula, ccheck = "square";
    std::size_t cm = 4, cdepth = 2;
    add_source(clique, cl_src);
    clique->add_option("--model", cmodel);
    clique->add_option("--top", ctop, "unit relation symbol");
    clique->add_option("--assignment", cassign);
    clique->add_option("--formula", cformula);
    clique->add_option("--check", ccheck)->check(CLI::IsMember({"square", "flat"}));
    clique->add_option("--m", cm);
    clique->add_option("--depth", cdepth, "quantifier depth bound for flatness");
    clique->callback([&] {
        command = "clique-eval";
        config = {{"source", source_config(cl_src)}, {"model", cmodel}, {"top", ctop}, {"assignment", cassign},
                  {"formula", cformula}, {"check", ccheck}, {"m", cm}, {"depth", cdepth}};
        run = [&] { return cmd_clique_eval(cl_src, cmodel, ctop, cassign, cformula, ccheck, cm, cdepth); };
    });

    auto* translate = app.add_subcommand("translate", "loosely guarded translation of a term or equation formula");
    std::string tterm, teq;
    std::size_t tdim = 2;
    translate->add_option("--term", tterm);
    translate->add_option("--equation", teq);
    translate->add_option("--dim", tdim);
    translate->callback([&] {
        command = "translate";
        config = {{"term", tterm}, {"equation", teq}, {"dim", tdim}};
        run = [&] { return cmd_translate(tterm, teq, tdim); };
    });

    auto* exp = app.add_subcommand("export", "re-emit a stored object as json or dot");
    std::string ein, eformat = "json", estructure;
    exp->add_option("--input", ein)->required();
    exp->add_option("--format", eformat)->check(CLI::IsMember({"json", "dot"}));
    exp->add_option("--structure", estructure, "atom structure for network labels");
    exp->callback([&] { run_raw = [&] { return cmd_export(ein, eformat, estructure); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error(g, 2, "invalid-argument", e.what());
    } catch (const InvalidArgument& e) {
        return emit_error(g, 2, "invalid-argument", e.what());
    }

    auto guarded = [&](auto body) -> int {
        try {
            return body();
        } catch (const InvalidArgument& e) {
            return emit_error(g, 2, "invalid-argument", e.what());
        } catch (const ResourceLimit& e) {
            return emit_error(g, 3, "resource-limit", e.what());
        } catch (const std::exception& e) {
            return emit_error(g, 1, "failure", e.what());
        }
    };

    if (run_raw)
        return guarded([&] {
            std::string text = run_raw();
            if (!g.out.empty())
                write_file(g.out, text);
            else
                std::cout << text;
            return 0;
        });

    budgets["wall_clock_seconds"] = g.wall_clock;
    Json document{{"schema", schema_tag("experiment")},
                  {"tool", {{"name", "cylindric"}, {"version", kVersion}}},
                  {"command", command},
                  {"config", config},
                  {"config_hash", hex(stable_hash(command + config.dump()))},
                  {"seed", g.seed},
                  {"budgets", budgets},
                  {"threads", {{"requested", g.threads}, {"used", 1}}}};

    auto finish = [&](const Outcome& o) {
        document["verdict"] = o.verdict;
        document["result"] = o.result;
        std::string text = dump_stable(document);
        if (!g.out.empty()) write_file(g.out, text);
        if (g.json)
            std::cout << text;
        else
            std::cout << o.text;
        return o.exit_code;
    };

    return guarded([&]() -> int {
        if (g.wall_clock <= 0) return finish(run());
        // the solver keeps running in its thread; on timeout we report and leave without joining
        auto task = std::make_shared<std::packaged_task<Outcome()>>(run);
        auto fut = task->get_future();
        std::thread([task] { (*task)(); }).detach();
        if (fut.wait_for(std::chrono::duration<double>(g.wall_clock)) == std::future_status::ready) return finish(fut.get());
        Outcome o;
        o.verdict = "unknown";
        o.exit_code = 3;
        o.result = {{"note", "wall-clock budget exhausted"}};
        o.text = "unknown: wall-clock budget exhausted\n";
        int code = finish(o);
        std::cout.flush();
        std::_Exit(code);
    });
}

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

#include <cylindric/certificate.hpp>
#include <cylindric/formula.hpp>
#include <cylindric/graph.hpp>
#include <cylindric/monk.hpp>
#include <cylindric/report.hpp>

#include <json.hpp>

#include <unordered_map>

namespace cylindric {

using Json = nlohmann::json;

/// Every document carries "schema": "cylindric.<kind>/<version>".
inline std::string schema_tag(const std::string& kind) { return "cylindric." + kind + "/1"; }

namespace detail {
inline void expect_schema(const Json& j, const std::string& kind) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != schema_tag(kind))
        throw InvalidArgument("expected a document with schema " + schema_tag(kind));
}

template <class F>
auto json_guard(F f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed document: ") + e.what());
    }
}

inline Json omega_or(std::size_t v) { return v == SIZE_MAX ? Json("omega") : Json(v); }
inline std::size_t omega_from(const Json& j) { return j.is_string() && j == "omega" ? SIZE_MAX : j.get<std::size_t>(); }
}  // namespace detail

// graphs

inline Json to_json(const Graph& g) {
    return {{"schema", schema_tag("graph")}, {"nodes", g.node_count()}, {"edges", g.edges()}};
}

inline Graph graph_from_json(const Json& j) {
    detail::expect_schema(j, "graph");
    return detail::json_guard([&] {
        return Graph(j.at("nodes").get<std::size_t>(), j.at("edges").get<std::vector<std::pair<std::size_t, std::size_t>>>());
    });
}

// atom structures

inline Json to_json(const AtomStructure& S) {
    Json T = Json::array();
    for (std::size_t i = 0; i < S.dim(); ++i) T.push_back(S.pairs(i));
    Json D = Json::array();
    for (auto& [key, atoms] : S.diagonal_map()) D.push_back({{"i", key.first}, {"j", key.second}, {"atoms", atoms}});
    Json out{{"schema", schema_tag("atom-structure")}, {"dim", S.dim()}, {"atoms", S.atom_count()}, {"T", T}, {"D", D}};
    if (!S.names().empty()) out["names"] = S.names();
    return out;
}

inline AtomStructure atom_structure_from_json(const Json& j) {
    detail::expect_schema(j, "atom-structure");
    return detail::json_guard([&] {
        std::size_t dim = j.at("dim"), k = j.at("atoms");
        std::vector<AtomStructure::Pairs> T;
        for (auto& rel : j.at("T")) T.push_back(rel.get<AtomStructure::Pairs>());
        std::map<std::pair<std::size_t, std::size_t>, std::vector<Atom>> D;
        for (auto& d : j.at("D")) D[{d.at("i").get<std::size_t>(), d.at("j").get<std::size_t>()}] = d.at("atoms").get<std::vector<Atom>>();
        AtomStructure S(dim, k, T, D);
        if (j.contains("names")) S.set_names(j["names"].get<std::vector<std::string>>());
        return S;
    });
}

inline Json to_json(const RaAtomStructure& R) {
    return {{"schema", schema_tag("ra-atom-structure")},
            {"names", R.names()},
            {"identity", R.identity_table()},
            {"converse", R.converse_table()},
            {"forbidden", R.forbidden_list()}};
}

inline RaAtomStructure ra_atom_structure_from_json(const Json& j) {
    detail::expect_schema(j, "ra-atom-structure");
    return detail::json_guard([&] {
        return RaAtomStructure(j.at("names").get<std::vector<std::string>>(), j.at("identity").get<std::vector<bool>>(),
                               j.at("converse").get<std::vector<Atom>>(), j.at("forbidden").get<std::vector<Triple>>());
    });
}

// networks and games

namespace detail {
inline Json network_body(const Network& N) { return {{"dim", N.dim()}, {"nodes", N.node_count()}, {"labels", N.labels()}}; }
inline Network network_from_body(const Json& j) {
    return Network(j.at("dim").get<std::size_t>(), j.at("nodes").get<std::size_t>(), j.at("labels").get<std::vector<Atom>>());
}
inline Json position_body(const Position& P) {
    Json out = Json::array();
    for (auto& N : P) out.push_back(network_body(N));
    return out;
}
inline Position position_from_body(const Json& j) {
    Position P;
    for (auto& n : j) P.push_back(network_from_body(n));
    return P;
}
}  // namespace detail

inline Json to_json(const Network& N) {
    Json out = detail::network_body(N);
    out["schema"] = schema_tag("network");
    return out;
}

inline Network network_from_json(const Json& j) {
    detail::expect_schema(j, "network");
    return detail::json_guard([&] { return detail::network_from_body(j); });
}

/**
 * forall trees are written as a node table in depth-first order; replies
 * refer to continuations by index, so shared subtrees are written once.
 */
inline Json to_json(const GameResult& r) {
    Json out{{"schema", schema_tag("game-result")},
             {"winner", to_string(r.winner)},
             {"spec",
              {{"kind", to_string(r.spec.kind)},
               {"m", r.spec.m},
               {"rounds", r.spec.rounds ? Json(*r.spec.rounds) : Json("omega")},
               {"exact_history", r.spec.exact_history}}},
             {"states", r.states},
             {"rounds_used", r.rounds_used},
             {"note", r.note}};
    if (r.forall) {
        std::unordered_map<const ForallNode*, std::size_t> ids;
        Json table = Json::array();
        std::function<Json(const std::vector<Reply>&)> replies;
        std::function<std::size_t(const ForallNodePtr&)> visit = [&](const ForallNodePtr& p) -> std::size_t {
            if (auto it = ids.find(p.get()); it != ids.end()) return it->second;
            std::size_t id = table.size();
            ids[p.get()] = id;
            table.push_back(nullptr);
            Json mv{{"from", p->move.from},
                    {"deleted", p->move.deleted ? Json(*p->move.deleted) : Json(nullptr)},
                    {"x", p->move.x},
                    {"i", p->move.i},
                    {"a", p->move.a}};
            Json node{{"position", detail::position_body(p->position)}, {"move", mv}};
            node["replies"] = replies(p->replies);
            table[id] = node;
            return id;
        };
        replies = [&](const std::vector<Reply>& rs) {
            Json arr = Json::array();
            for (auto& rep : rs)
                arr.push_back({{"network", detail::network_body(rep.network)},
                               {"next", rep.next ? Json(visit(rep.next)) : Json(nullptr)}});
            return arr;
        };
        Json top = replies(r.forall->replies);
        out["forall"] = {{"opening", r.forall->opening}, {"replies", top}, {"nodes", table}};
    }
    if (r.exists) {
        Json table = Json::array();
        for (auto& [P, left] : r.exists->table) table.push_back({{"position", detail::position_body(P)}, {"rounds", detail::omega_or(left)}});
        Json ops = Json::array();
        for (auto& [a, N] : r.exists->openings) ops.push_back({{"atom", a}, {"network", detail::network_body(N)}});
        out["exists"] = {{"table", table}, {"openings", ops}};
    }
    return out;
}

inline GameResult game_result_from_json(const Json& j) {
    detail::expect_schema(j, "game-result");
    return detail::json_guard([&] {
        GameResult r;
        std::string w = j.at("winner");
        r.winner = w == "exists" ? Winner::exists : w == "forall" ? Winner::forall : Winner::unknown;
        auto& sp = j.at("spec");
        std::string kind = sp.at("kind");
        if (kind != "G" && kind != "F") throw InvalidArgument("unknown game kind " + kind);
        r.spec.kind = kind == "G" ? GameKind::G : GameKind::F;
        r.spec.m = sp.at("m");
        if (!sp.at("rounds").is_string()) r.spec.rounds = sp.at("rounds").get<std::size_t>();
        r.spec.exact_history = sp.at("exact_history");
        r.states = j.at("states");
        r.rounds_used = j.at("rounds_used");
        r.note = j.at("note");
        if (j.contains("forall")) {
            auto& f = j["forall"];
            auto& table = f.at("nodes");
            std::vector<ForallNodePtr> built(table.size());
            std::vector<char> busy(table.size(), 0);
            std::function<std::vector<Reply>(const Json&)> replies;
            std::function<ForallNodePtr(std::size_t)> node = [&](std::size_t id) -> ForallNodePtr {
                if (id >= table.size()) throw InvalidArgument("forall node index out of range");
                if (built[id]) return built[id];
                if (busy[id]) throw InvalidArgument("forall tree has a cycle");
                busy[id] = 1;
                auto& t = table[id];
                auto n = std::make_shared<ForallNode>();
                n->position = detail::position_from_body(t.at("position"));
                auto& mv = t.at("move");
                n->move.from = mv.at("from");
                if (!mv.at("deleted").is_null()) n->move.deleted = mv.at("deleted").get<std::size_t>();
                n->move.x = mv.at("x").get<Tuple>();
                n->move.i = mv.at("i");
                n->move.a = mv.at("a");
                n->replies = replies(t.at("replies"));
                built[id] = n;
                return built[id];
            };
            replies = [&](const Json& arr) {
                std::vector<Reply> out;
                for (auto& rep : arr)
                    out.push_back({detail::network_from_body(rep.at("network")),
                                   rep.at("next").is_null() ? nullptr : node(rep.at("next").get<std::size_t>())});
                return out;
            };
            ForallCertificate fc;
            fc.opening = f.at("opening");
            fc.replies = replies(f.at("replies"));
            r.forall = std::move(fc);
        }
        if (j.contains("exists")) {
            ExistsCertificate ec;
            for (auto& row : j["exists"].at("table"))
                ec.table[detail::position_from_body(row.at("position"))] = detail::omega_from(row.at("rounds"));
            for (auto& row : j["exists"].at("openings"))
                ec.openings[row.at("atom").get<Atom>()] = detail::network_from_body(row.at("network"));
            r.exists = std::move(ec);
        }
        return r;
    });
}

inline Json to_json(const Certificate& c) {
    Json game = to_json(c.game);
    game.erase("schema");
    return {{"schema", schema_tag("certificate")},
            {"claim", to_string(c.claim)},
            {"statement", c.statement()},
            {"n", c.n},
            {"m", c.m},
            {"verified", c.verified},
            {"method", c.method},
            {"game", game}};
}

inline Certificate certificate_from_json(const Json& j) {
    detail::expect_schema(j, "certificate");
    return detail::json_guard([&] {
        Certificate c;
        std::string claim = j.at("claim");
        if (claim == to_string(Claim::not_neat_embeddable))
            c.claim = Claim::not_neat_embeddable;
        else if (claim == to_string(Claim::square_representable))
            c.claim = Claim::square_representable;
        else
            throw InvalidArgument("unknown claim " + claim);
        c.n = j.at("n");
        c.m = j.at("m");
        c.verified = j.at("verified");
        c.method = j.at("method");
        Json game = j.at("game");
        game["schema"] = schema_tag("game-result");
        c.game = game_result_from_json(game);
        return c;
    });
}

// models, formulas, reports

inline Json to_json(const FiniteModel& M) {
    Json rels = Json::object();
    for (auto& name : M.relation_names()) rels[name] = {{"arity", M.arity(name)}, {"tuples", M.tuples(name)}};
    return {{"schema", schema_tag("model")}, {"universe", M.universe()}, {"relations", rels}};
}

inline FiniteModel finite_model_from_json(const Json& j) {
    detail::expect_schema(j, "model");
    return detail::json_guard([&] {
        FiniteModel M(j.at("universe").get<std::size_t>());
        for (auto& [name, rel] : j.at("relations").items())
            M.add_relation(name, rel.at("arity").get<std::size_t>(), rel.at("tuples").get<std::set<Sequence>>());
        return M;
    });
}

inline Json to_json(const Check& c) {
    Json out{{"name", c.name}, {"passed", c.passed}};
    if (!c.reduction.empty()) out["reduction"] = c.reduction;
    if (!c.witness.empty()) out["witness"] = c.witness;
    if (!c.detail.empty()) out["detail"] = c.detail;
    return out;
}

inline Json to_json(const Report& r) {
    Json checks = Json::array();
    for (auto& c : r.checks) checks.push_back(to_json(c));
    return {{"schema", schema_tag("report")}, {"subject", r.subject}, {"passed", r.passed()}, {"checks", checks}};
}

/// Two-space indentation and sorted keys, so equal values give equal bytes.
inline std::string dump_stable(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cylindric

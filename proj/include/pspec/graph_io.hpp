#pragma once

#include <string>
#include <unordered_map>

#include "json.hpp"

#include "pspec/graph.hpp"

namespace pspec {

struct ParseOptions {
    /// Reject graphs whose cycle indices do not generate Z^d.
    bool require_full_lattice = true;
};

/// Reads the JSON graph format:
///   {"dimension": d,
///    "vertices": [{"id": "a", "potential": 0.0}, ...],
///    "edges": [{"from": "a", "to": "b", "index": [..d ints..]}, ...]}
/// Each edge entry is unoriented; the inverse is implied.
inline FundamentalGraph parse_graph(const std::string& text, ParseOptions opts = {})
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed graph document: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw InputError("graph document must be a JSON object");
        const int d = doc.at("dimension").get<int>();
        std::vector<Vertex> verts;
        std::unordered_map<std::string, std::size_t> ordinal;
        for (const auto& v : doc.at("vertices")) {
            Vertex x;
            x.label = v.at("id").get<std::string>();
            x.potential = v.value("potential", 0.0);
            if (!ordinal.emplace(x.label, verts.size()).second)
                throw InputError("duplicate vertex label '" + x.label + "'");
            verts.push_back(std::move(x));
        }
        std::vector<EdgeSpec> edges;
        for (const auto& e : doc.at("edges")) {
            const auto from = e.at("from").get<std::string>();
            const auto to = e.at("to").get<std::string>();
            auto fi = ordinal.find(from), ti = ordinal.find(to);
            if (fi == ordinal.end()) throw InputError("edge endpoint '" + from + "' unknown");
            if (ti == ordinal.end()) throw InputError("edge endpoint '" + to + "' unknown");
            edges.push_back({fi->second, ti->second, e.at("index").get<IndexVec>()});
        }
        FundamentalGraph g(d, std::move(verts), std::move(edges));
        if (opts.require_full_lattice && !index_lattice_check(g))
            throw InputError("cycle indices do not generate Z^d; not a rank-d periodic quotient");
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed graph document: ") + e.what());
    }
}

inline nlohmann::ordered_json graph_to_json(const FundamentalGraph& g)
{
    nlohmann::ordered_json doc;
    doc["dimension"] = g.dim();
    auto& verts = doc["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : g.vertices()) verts.push_back({{"id", v.label}, {"potential", v.potential}});
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edge_specs())
        edges.push_back({{"from", g.vertices()[e.from].label}, {"to", g.vertices()[e.to].label}, {"index", e.index}});
    return doc;
}

} // namespace pspec

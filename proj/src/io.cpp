#include "disco/io.hpp"

#include <cmath>
#include <ostream>

#include "disco/error.hpp"
#include "disco/format.hpp"

namespace disco {

json real_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return nullptr;
    return x;
}

double real_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw Error("MalformedInput", "expected a number, got " + j.dump());
}

json to_json(const Chain& chain) { return chain.points; }

Chain chain_from_json(const json& j) {
    if (!j.is_array()) throw Error("MalformedInput", "a chain is a JSON array of point indices");
    Chain out;
    out.points.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<PointId>::max())
            throw Error("MalformedInput", "chain entry " + v.dump() + " is not a point index");
        out.points.push_back(v.get<PointId>());
    }
    return out;
}

json to_json(const Homotopy& h) {
    json moves = json::array();
    for (const auto& m : h.moves) {
        if (m.kind == BasicMove::Kind::Insert)
            moves.push_back({{"op", "ins"}, {"pos", m.position}, {"point", m.point}});
        else
            moves.push_back({{"op", "del"}, {"pos", m.position}});
    }
    return {{"start", to_json(h.start)}, {"scale", real_to_json(h.scale)}, {"moves", std::move(moves)}};
}

Homotopy homotopy_from_json(const json& j) {
    if (!j.is_object() || !j.contains("start") || !j.contains("scale") || !j.contains("moves"))
        throw Error("MalformedInput", "a homotopy needs start, scale and moves");
    Homotopy h;
    h.start = chain_from_json(j.at("start"));
    h.scale = real_from_json(j.at("scale"));
    for (const auto& m : j.at("moves")) {
        const auto op = m.at("op").get<std::string>();
        const auto pos = m.at("pos").get<std::size_t>();
        if (op == "ins")
            h.moves.push_back(BasicMove::insert(pos, m.at("point").get<PointId>()));
        else if (op == "del")
            h.moves.push_back(BasicMove::remove(pos));
        else
            throw Error("MalformedInput", "unknown move op '" + op + "'");
    }
    return h;
}

json to_json(const H1Class& c) { return {{"free", c.free}, {"torsion", c.torsion}}; }

json to_json(const H1Summary& s) {
    return {{"betti1", s.betti1},
            {"torsion", s.torsion},
            {"cycle_rank", s.cycle_rank},
            {"boundary_rank", s.boundary_rank}};
}

json to_json(const NullVerdict& v) {
    json j{{"verdict", to_string(v.verdict)},
           {"stage", v.stage},
           {"states_explored", v.states_explored},
           {"frontier", v.frontier},
           {"note", v.note}};
    j["certificate"] = v.certificate ? to_json(*v.certificate) : json(nullptr);
    j["h1"] = v.h1 ? to_json(*v.h1) : json(nullptr);
    j["free_word"] = v.free_word ? json(*v.free_word) : json(nullptr);
    return j;
}

json to_json(const FreeHomotopyResult& r) {
    json j{{"verdict", to_string(r.verdict)},
           {"reversed", r.reversed},
           {"shift", r.shift},
           {"conjugator", to_json(r.conjugator)},
           {"note", r.note}};
    j["null_certificate"] = r.null_certificate ? to_json(*r.null_certificate) : json(nullptr);
    j["class1"] = r.class1 ? to_json(*r.class1) : json(nullptr);
    j["class2"] = r.class2 ? to_json(*r.class2) : json(nullptr);
    j["word1"] = r.word1 ? json(*r.word1) : json(nullptr);
    j["word2"] = r.word2 ? json(*r.word2) : json(nullptr);
    return j;
}

json to_json(const Chassis& c) {
    json edges = json::array();
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        const auto& ed = c.edges[e];
        edges.push_back({{"a", ed.a}, {"b", ed.b}, {"length", ed.length}, {"tree", c.in_tree[e] != 0}});
    }
    json tree = json::array();
    for (std::size_t e = 0; e < c.edges.size(); ++e)
        if (c.in_tree[e]) tree.push_back(e);
    return {{"eps", c.eps},
            {"mode", c.mode.kind == VertexMode::Kind::All ? "all" : "net"},
            {"net_delta", c.mode.delta},
            {"vertices", c.vertices},
            {"basepoint", c.basepoint},
            {"edges", std::move(edges)},
            {"triangles", c.triangles},
            {"tree_edges", std::move(tree)},
            {"simplicial_diameter", c.simplicial_diameter}};
}

json to_json(const Presentation& p) {
    json gens = json::array();
    for (std::size_t g = 0; g < p.generators.size(); ++g) {
        const auto& gen = p.generators[g];
        gens.push_back({{"id", g}, {"edge", gen.edge}, {"length", gen.length}, {"loop", to_json(gen.loop)}});
    }
    json rels = json::array();
    for (const auto& r : p.relations) rels.push_back({r.ab, r.bc, r.ac});
    return {{"basepoint", p.basepoint}, {"generators", std::move(gens)}, {"relations", std::move(rels)}};
}

json to_json(const SimplifiedPresentation& p) {
    json log = json::array();
    for (const auto& e : p.log) log.push_back({{"generator", e.generator}, {"replacement", e.replacement}});
    return {{"original_generators", p.original_generators},
            {"alive", p.alive},
            {"relators", p.relators},
            {"eliminations", std::move(log)},
            {"trivial", p.trivial()},
            {"free", p.free()}};
}

json to_json(const CoverGraph& c, double fiber_radius) {
    json adj = json::array();
    for (std::size_t n = 0; n < c.size(); ++n) {
        json row = json::array();
        for (const auto& [vertex, node] : c.adjacency[n]) row.push_back(node);
        adj.push_back(std::move(row));
    }
    json fiber = json::array();
    for (auto node : c.fiber(c.base_vertex, fiber_radius))
        fiber.push_back({{"node", node}, {"distance", c.distance[node]}});
    return {{"eps", c.eps},
            {"radius", c.radius},
            {"margin", c.margin},
            {"base_vertex", c.base_vertex},
            {"base_node", c.base_node},
            {"nodes", c.size()},
            {"truncated", c.truncated},
            {"upper_bound", c.upper_bound},
            {"projection", c.projection},
            {"distance", c.distance},
            {"parent", c.parent},
            {"adjacency", std::move(adj)},
            {"fiber_radius", fiber_radius},
            {"base_fiber", std::move(fiber)}};
}

json to_json(const ShortClasses& s) {
    json reps = json::array();
    for (const auto& r : s.representatives) reps.push_back(to_json(r));
    return {{"count", s.count}, {"norms", s.norms}, {"representatives", std::move(reps)}, {"upper_bound", s.upper_bound}};
}

json to_json(const GammaEstimate& g) {
    return {{"value", g.value},
            {"argmax", g.argmax},
            {"basepoints_scanned", g.basepoints_scanned},
            {"exact", g.exact},
            {"upper_bound", g.upper_bound}};
}

json to_json(const PersistenceInterval& p) {
    return {{"birth", real_to_json(p.birth)}, {"death", real_to_json(p.death)}, {"edge", {p.u, p.v}}};
}

json to_json(const Triad& t) {
    json j{{"points", t.points},
           {"scale", t.scale},
           {"tolerance", t.tolerance},
           {"mean_distance", t.mean_distance},
           {"essential", to_string(t.essential)},
           {"refined_loop", to_json(t.refined_loop)},
           {"absorbed", t.absorbed}};
    j["h1"] = t.h1 ? to_json(*t.h1) : json(nullptr);
    return j;
}

json to_json(const CriticalValue& c) {
    json classes = json::array();
    for (const auto& t : c.classes) classes.push_back(to_json(t));
    json evidence = json::array();
    for (const auto& p : c.evidence) evidence.push_back(to_json(p));
    return {{"epsilon", c.epsilon},
            {"tolerance", c.tolerance},
            {"multiplicity", c.multiplicity},
            {"merged_scales", c.merged_scales},
            {"unknown_triads", c.unknown_triads},
            {"classes", std::move(classes)},
            {"evidence", std::move(evidence)}};
}

json to_json(const SpectrumReport& r) {
    json cvs = json::array();
    for (const auto& c : r.critical_values) cvs.push_back(to_json(c));
    json pers = json::array();
    for (const auto& p : r.persistence) pers.push_back(to_json(p));
    json j{{"space", r.space_meta},
           {"eps_min", r.eps_min},
           {"scanned_from", r.scanned_from},
           {"scanned_to", r.scanned_to},
           {"resolution", r.resolution},
           {"tolerance", r.tolerance},
           {"candidates", r.candidates},
           {"critical_values", std::move(cvs)},
           {"persistence", std::move(pers)},
           {"notes", r.notes},
           {"partial", r.partial},
           // Conversion to the covering spectrum scale (factor 3/2), not computed here.
           {"covering_spectrum_factor", 1.5}};
    j["systole_estimate"] = r.systole_estimate ? json(*r.systole_estimate) : json(nullptr);
    return j;
}

json to_json(const EmbeddingReport& e) {
    return {{"circle", to_json(e.circle)},
            {"circle_length", e.circle_length},
            {"discrepancy", e.discrepancy},
            {"worst_pair", {e.worst_i, e.worst_j}},
            {"threshold", e.threshold},
            {"embedded", e.embedded}};
}

json to_json(const BoundReport& r) {
    json inputs = json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = real_to_json(v);
    return {{"name", r.name},
            {"inputs", std::move(inputs)},
            {"bound", r.bound_text()},
            {"empirical", r.empirical},
            {"empirical_is_lower_bound", r.empirical_is_lower_bound},
            {"satisfied", r.satisfied},
            {"margin", r.margin_text()},
            {"note", r.note}};
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r) {
    out << "scale,multiplicity\n";
    for (auto it = r.critical_values.rbegin(); it != r.critical_values.rend(); ++it)
        out << format_double(it->epsilon) << ',' << it->multiplicity << '\n';
}

void write_persistence_csv(std::ostream& out, const SpectrumReport& r) {
    out << "birth,death\n";
    for (const auto& p : r.persistence)
        out << format_double(p.birth) << ',' << (std::isinf(p.death) ? std::string("inf") : format_double(p.death))
            << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace disco

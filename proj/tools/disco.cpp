// Command-line front end. Every report embeds the run configuration, and
// identical configuration plus input yields byte-identical output.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "disco/format.hpp"
#include "disco/io.hpp"

namespace {

using disco::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitPartial = 2;

struct InputOptions {
    std::string csv;
    std::string edge_list;
    double spacing = 0.0;
    std::string space;  // generator spec, e.g. circle:circumference=1,n=24
};

struct BudgetOptions {
    std::size_t bfs_states = disco::DeciderBudget{}.bfs_states;
    std::size_t bfs_max_points = 0;
    std::size_t cover_nodes = disco::DeciderBudget{}.cover_nodes;
    std::size_t max_certificate_moves = disco::DeciderBudget{}.max_certificate_moves;
    std::size_t max_relator_length = disco::SimplifyBudget{}.max_relator_length;
    std::size_t matrix_triangles = std::size_t{1} << 25;

    disco::DeciderBudget decider() const {
        disco::DeciderBudget b;
        b.bfs_states = bfs_states;
        b.bfs_max_points = bfs_max_points;
        b.cover_nodes = cover_nodes;
        b.max_certificate_moves = max_certificate_moves;
        b.simplify.max_relator_length = max_relator_length;
        return b;
    }
    json to_json() const {
        return {{"bfs_states", bfs_states},
                {"bfs_max_points", bfs_max_points},
                {"cover_nodes", cover_nodes},
                {"max_certificate_moves", max_certificate_moves},
                {"max_relator_length", max_relator_length},
                {"matrix_triangles", matrix_triangles}};
    }
};

struct Common {
    InputOptions input;
    BudgetOptions budget;
    std::string output;
    std::string format = "json";
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

std::map<std::string, std::string> parse_params(const std::string& text) {
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw disco::Error("MalformedInput", "expected key=value in '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

double num(const std::map<std::string, std::string>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw disco::Error("MalformedInput", "missing generator parameter '" + key + "'");
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size()) throw disco::Error("MalformedInput", "bad value for '" + key + "'");
    return v;
}

std::size_t count(const std::map<std::string, std::string>& p, const std::string& key) {
    const double v = num(p, key);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw disco::Error("MalformedInput", "'" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

disco::FiniteMetricSpace generate_from_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const auto p = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1));
    if (kind == "circle") return disco::sample_circle(num(p, "circumference"), count(p, "n"));
    if (kind == "torus") return disco::sample_flat_torus(num(p, "a"), num(p, "b"), count(p, "nx"), count(p, "ny"));
    if (kind == "multiedge")
        return disco::sample_multiedge(count(p, "edges"), num(p, "length"), num(p, "spacing"));
    if (kind == "simplex")
        return disco::sample_simplex_skeleton(count(p, "vertices"), num(p, "length"), num(p, "spacing"));
    if (kind == "path") return disco::sample_path(num(p, "length"), num(p, "spacing"));
    throw disco::Error("MalformedInput", "unknown generator '" + kind + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw disco::Error("MalformedInput", "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

disco::FiniteMetricSpace with_meta(const disco::FiniteMetricSpace& s, json meta) {
    const std::size_t n = s.size();
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = s(i, j);
    return disco::FiniteMetricSpace(n, std::move(dist), s.labels(), std::move(meta));
}

disco::FiniteMetricSpace load_space(const InputOptions& in) {
    const int sources = !in.csv.empty() + !in.edge_list.empty() + !in.space.empty();
    if (sources != 1) throw disco::Error("MalformedInput", "give exactly one of --input, --edge-list, --space");
    if (!in.space.empty()) return generate_from_spec(in.space);
    if (!in.edge_list.empty()) {
        const std::string bytes = read_file(in.edge_list);
        std::istringstream ss(bytes);
        const auto list = disco::read_edge_list(ss);
        if (!(in.spacing > 0)) throw disco::Error("MalformedInput", "--spacing is required with --edge-list");
        auto space = disco::from_weighted_graph(list.vertex_count, list.edges, in.spacing);
        json meta = space.meta();
        meta["path"] = in.edge_list;
        meta["digest"] = disco::fnv1a_hex(bytes);
        return with_meta(space, std::move(meta));
    }
    auto space = disco::read_distance_csv_file(in.csv);
    const std::string sidecar = in.csv + ".meta.json";
    if (std::filesystem::exists(sidecar)) {
        json meta = space.meta();
        try {
            meta["generated"] = json::parse(read_file(sidecar));
        } catch (const json::exception& e) {
            throw disco::Error("MalformedInput", sidecar + ": " + e.what());
        }
        return with_meta(space, std::move(meta));
    }
    return space;
}

json input_to_json(const InputOptions& in) {
    if (!in.space.empty()) return {{"generator", in.space}};
    if (!in.edge_list.empty()) return {{"edge_list", in.edge_list}, {"spacing", in.spacing}};
    return {{"csv", in.csv}};
}

/// The embedded configuration. Thread count is left out: output does not depend on it.
json run_config(const std::string& command, const Common& c, json params) {
    return {{"command", command},
            {"input", input_to_json(c.input)},
            {"params", std::move(params)},
            {"budgets", c.budget.to_json()},
            {"seed", c.seed},
            {"output", c.output},
            {"format", c.format}};
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty() || c.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw disco::Error("MalformedInput", "cannot write " + c.output);
    out << text;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw disco::Error("MalformedInput", "cannot write " + path);
    out << text;
}

void add_input_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--input", c.input.csv, "Distance-matrix CSV");
    cmd->add_option("--edge-list", c.input.edge_list, "Weighted edge list (i j w per line)");
    cmd->add_option("--spacing", c.input.spacing, "Subdivision spacing for --edge-list");
    cmd->add_option("--space", c.input.space,
                    "Built-in sample, e.g. circle:circumference=1,n=24 or torus:a=0.25,b=0.25,nx=12,ny=12");
}

void add_budget_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--bfs-states", c.budget.bfs_states, "States visited by the breadth-first search")
        ->capture_default_str();
    cmd->add_option("--bfs-max-points", c.budget.bfs_max_points, "Largest chain in the search (0 = normal form)")
        ->capture_default_str();
    cmd->add_option("--cover-nodes", c.budget.cover_nodes, "Node budget of covering complexes")->capture_default_str();
    cmd->add_option("--max-certificate-moves", c.budget.max_certificate_moves, "Largest emitted certificate")
        ->capture_default_str();
    cmd->add_option("--max-relator-length", c.budget.max_relator_length, "Tietze relator length cap")
        ->capture_default_str();
    cmd->add_option("--matrix-triangles", c.budget.matrix_triangles, "Triangle cap of the persistence matrix")
        ->capture_default_str();
}

void add_output_options(CLI::App* cmd, Common& c, bool csv_format) {
    cmd->add_option("-o,--output", c.output, "Output file (default stdout)");
    cmd->add_option("--seed", c.seed, "Recorded in the run configuration")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (DISCO_THREADS overrides)")->capture_default_str();
    if (csv_format)
        cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}))
            ->capture_default_str();
}

using disco::Chain;

Chain parse_loop(const std::string& file, const std::string& inline_text) {
    if (file.empty() == inline_text.empty())
        throw disco::Error("MalformedInput", "give exactly one of --loop and --loop-points");
    if (!file.empty()) {
        json j;
        try {
            j = json::parse(read_file(file));
        } catch (const json::exception& e) {
            throw disco::Error("MalformedInput", file + ": " + e.what());
        }
        return disco::chain_from_json(j.is_object() && j.contains("loop") ? j.at("loop") : j);
    }
    Chain c;
    std::stringstream ss(inline_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || item[0] == '-')
            throw disco::Error("MalformedInput", "bad point index '" + item + "'");
        c.points.push_back(static_cast<disco::PointId>(v));
    }
    return c;
}

void check_loop_indices(const Chain& loop, const disco::FiniteMetricSpace& space) {
    for (auto p : loop.points)
        if (p >= space.size())
            throw disco::Error("MalformedInput", "point " + std::to_string(p) + " is outside the space");
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete homotopy critical spectra of finite metric spaces"};
    app.require_subcommand(1);
    Common c;

    // generate ---------------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "Write a sample as a distance CSV plus a meta JSON sidecar");
    gen->require_subcommand(1);
    std::string gen_out;
    double circumference = 1.0, a = 1.0 / 3.0, b = 1.0 / 3.0, length = 1.0, spacing = 0.125;
    std::size_t n = 24, nx = 12, ny = 12, edges = 3, vertices = 4;
    std::string graph_file;
    auto add_out = [&](CLI::App* s) { s->add_option("-o,--output", gen_out, "CSV path (sidecar is <path>.meta.json)"); };
    auto* g_circle = gen->add_subcommand("circle", "Evenly spaced circle");
    g_circle->add_option("--circumference", circumference)->capture_default_str();
    g_circle->add_option("--n", n)->capture_default_str();
    auto* g_torus = gen->add_subcommand("torus", "Grid on the flat torus with sides 3a and 3b");
    g_torus->add_option("--a", a)->capture_default_str();
    g_torus->add_option("--b", b)->capture_default_str();
    g_torus->add_option("--nx", nx)->capture_default_str();
    g_torus->add_option("--ny", ny)->capture_default_str();
    auto* g_multi = gen->add_subcommand("multiedge", "Two vertices joined by parallel edges");
    g_multi->add_option("--edges", edges)->capture_default_str();
    g_multi->add_option("--length", length)->capture_default_str();
    g_multi->add_option("--spacing", spacing)->capture_default_str();
    auto* g_simplex = gen->add_subcommand("simplex", "1-skeleton of a regular simplex");
    g_simplex->add_option("--vertices", vertices)->capture_default_str();
    g_simplex->add_option("--length", length)->capture_default_str();
    g_simplex->add_option("--spacing", spacing)->capture_default_str();
    auto* g_path = gen->add_subcommand("path", "Subdivided segment");
    g_path->add_option("--length", length)->capture_default_str();
    g_path->add_option("--spacing", spacing)->capture_default_str();
    auto* g_graph = gen->add_subcommand("graph", "Subdivided weighted graph from an edge list");
    g_graph->add_option("--edge-list", graph_file)->required();
    g_graph->add_option("--spacing", spacing)->capture_default_str();
    for (auto* s : {g_circle, g_torus, g_multi, g_simplex, g_path, g_graph}) add_out(s);

    // spectrum ---------------------------------------------------------------
    auto* spec = app.add_subcommand("spectrum", "Homotopy critical values with multiplicities");
    double eps_min = 0.0, tolerance = 0.0, eps_max = 0.0;
    std::string policy = "error", csv_prefix;
    bool no_prune = false, keep_scanning = false;
    add_input_options(spec, c);
    add_budget_options(spec, c);
    add_output_options(spec, c, false);
    spec->add_option("--eps-min", eps_min, "Smallest scale scanned")->required();
    spec->add_option("--eps-max", eps_max, "Largest scale scanned (0 = all)")->capture_default_str();
    spec->add_option("--tolerance", tolerance, "Triad tolerance (0 = resolution h)")->capture_default_str();
    spec->add_option("--resolution-policy", policy, "When eps-min < 3h: error or clamp")
        ->check(CLI::IsMember({"error", "clamp"}))
        ->capture_default_str();
    spec->add_option("--csv", csv_prefix, "Also write <prefix>.spectrum.csv and <prefix>.persistence.csv");
    spec->add_flag("--no-prune", no_prune, "Decide every triad");
    spec->add_flag("--keep-scanning", keep_scanning, "Do not stop once the group is trivial");

    // decide -----------------------------------------------------------------
    auto* dec = app.add_subcommand("decide", "Is a loop eps-null-homotopic?");
    double eps = 0.0;
    std::string loop_file, loop_points;
    bool no_search = false;
    add_input_options(dec, c);
    add_budget_options(dec, c);
    add_output_options(dec, c, false);
    dec->add_option("--eps", eps, "Scale")->required();
    dec->add_option("--loop", loop_file, "JSON array of point indices");
    dec->add_option("--loop-points", loop_points, "Comma-separated point indices");
    dec->add_flag("--no-search", no_search, "Skip the breadth-first stage");

    // generators -------------------------------------------------------------
    auto* gens = app.add_subcommand("generators", "Presentation of the eps-group and its simplification");
    bool full = false;
    add_input_options(gens, c);
    add_budget_options(gens, c);
    add_output_options(gens, c, false);
    gens->add_option("--eps", eps, "Scale")->required();
    gens->add_flag("--chassis", full, "Include the full chassis");

    // cover ------------------------------------------------------------------
    auto* cov = app.add_subcommand("cover", "Covering complex, short classes and Gamma");
    double radius = 0.0, L = 0.0;
    std::size_t base = 0, max_basepoints = 0;
    bool gamma = false, graph = false;
    add_input_options(cov, c);
    add_budget_options(cov, c);
    add_output_options(cov, c, false);
    cov->add_option("--eps", eps, "Scale")->required();
    cov->add_option("--radius", radius, "Cover radius (0 = L)")->capture_default_str();
    cov->add_option("--length", L, "Count classes with norm below this")->required();
    cov->add_option("--base", base, "Base point")->capture_default_str();
    cov->add_flag("--gamma", gamma, "Maximum over basepoints");
    cov->add_option("--max-basepoints", max_basepoints, "Basepoints scanned by --gamma (0 = all)")
        ->capture_default_str();
    cov->add_flag("--graph", graph, "Include the adjacency list and projection");

    // bounds -----------------------------------------------------------------
    auto* bnd = app.add_subcommand("bounds", "Evaluate the counting bounds against empirical counts");
    double bounds_eps = 0.0;
    std::vector<double> lengths{1.0, 1.5, 2.0};
    add_input_options(bnd, c);
    add_budget_options(bnd, c);
    add_output_options(bnd, c, true);
    bnd->add_option("--eps-min", eps_min, "Smallest scale of the spectrum scan")->required();
    bnd->add_option("--resolution-policy", policy)->check(CLI::IsMember({"error", "clamp"}))->capture_default_str();
    bnd->add_option("--eps", bounds_eps, "Scale of the counting bounds (0 = half the smallest critical value)")
        ->capture_default_str();
    bnd->add_option("--lengths", lengths, "Loop lengths for the counting bound")->capture_default_str();
    bnd->add_option("--max-basepoints", max_basepoints, "Basepoints scanned for Gamma (0 = all)")
        ->capture_default_str();

    // triads -----------------------------------------------------------------
    auto* tri = app.add_subcommand("triads", "Essential triads at a scale and their classes");
    add_input_options(tri, c);
    add_budget_options(tri, c);
    add_output_options(tri, c, false);
    tri->add_option("--eps", eps, "Scale")->required();
    tri->add_option("--tolerance", tolerance, "Triad tolerance (0 = resolution h)")->capture_default_str();
    tri->add_flag("--no-prune", no_prune, "Decide every triad");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    }

    if (const char* env = std::getenv("DISCO_THREADS")) {
        try {
            c.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            std::cerr << "error: DISCO_THREADS must be a non-negative integer\n";
            return kExitInvalid;
        }
    }

    try {
        if (gen->parsed()) {
            disco::FiniteMetricSpace space = [&] {
                if (g_circle->parsed()) return disco::sample_circle(circumference, n);
                if (g_torus->parsed()) return disco::sample_flat_torus(a, b, nx, ny);
                if (g_multi->parsed()) return disco::sample_multiedge(edges, length, spacing);
                if (g_simplex->parsed()) return disco::sample_simplex_skeleton(vertices, length, spacing);
                if (g_path->parsed()) return disco::sample_path(length, spacing);
                const std::string bytes = read_file(graph_file);
                std::istringstream ss(bytes);
                const auto list = disco::read_edge_list(ss);
                return disco::from_weighted_graph(list.vertex_count, list.edges, spacing);
            }();
            std::ostringstream csv;
            disco::write_distance_csv(csv, space);
            json meta = space.meta();
            meta["points"] = space.size();
            meta["resolution"] = space.resolution();
            meta["diameter"] = space.diameter();
            if (gen_out.empty() || gen_out == "-") {
                std::cout << csv.str();
            } else {
                write_text(gen_out, csv.str());
                write_text(gen_out + ".meta.json", disco::dump(meta));
            }
            return kExitOk;
        }

        const auto space = load_space(c.input);
        const auto budget = c.budget.decider();

        if (spec->parsed()) {
            disco::SpectrumOptions o;
            o.tolerance = tolerance;
            o.budget = budget;
            o.triads.threads = c.threads;
            o.triads.prune = !no_prune;
            o.resolution = policy == "clamp" ? disco::ResolutionPolicy::Clamp : disco::ResolutionPolicy::Error;
            o.stop_when_trivial = !keep_scanning;
            o.eps_max = eps_max;
            o.max_triangles = c.budget.matrix_triangles;
            const auto report = disco::compute_spectrum(space, eps_min, o);
            json out = disco::to_json(report);
            out["config"] = run_config("spectrum", c,
                                       {{"eps_min", eps_min},
                                        {"eps_max", eps_max},
                                        {"tolerance", tolerance},
                                        {"resolution_policy", policy},
                                        {"prune", !no_prune},
                                        {"stop_when_trivial", !keep_scanning}});
            emit(c, disco::dump(out));
            if (!csv_prefix.empty()) {
                std::ostringstream s1, s2;
                disco::write_spectrum_csv(s1, report);
                disco::write_persistence_csv(s2, report);
                write_text(csv_prefix + ".spectrum.csv", s1.str());
                write_text(csv_prefix + ".persistence.csv", s2.str());
            }
            return report.partial ? kExitPartial : kExitOk;
        }

        if (dec->parsed()) {
            const Chain loop = parse_loop(loop_file, loop_points);
            check_loop_indices(loop, space);
            const disco::NullDecider decider(space, eps, budget);
            const auto v = decider.decide(loop, !no_search);
            json out = disco::to_json(v);
            out["loop"] = disco::to_json(loop);
            out["length"] = disco::length(loop, space);
            out["config"] = run_config("decide", c,
                                       {{"eps", eps}, {"loop", disco::to_json(loop)}, {"search", !no_search}});
            emit(c, disco::dump(out));
            return v.verdict == disco::Verdict::Unknown ? kExitPartial : kExitOk;
        }

        if (gens->parsed()) {
            const disco::NullDecider decider(space, eps, budget);
            json out;
            out["vertices"] = decider.chassis().vertex_count();
            out["edges"] = decider.chassis().edges.size();
            out["triangles"] = decider.chassis().triangles.size();
            out["homology"] = disco::to_json(decider.homology().summary());
            out["presentation"] = disco::to_json(decider.presentation());
            const auto* s = decider.simplified();
            out["simplified"] = s ? disco::to_json(*s) : json(nullptr);
            if (full) out["chassis"] = disco::to_json(decider.chassis());
            out["config"] = run_config("generators", c, {{"eps", eps}, {"chassis", full}});
            emit(c, disco::dump(out));
            return s ? kExitOk : kExitPartial;
        }

        if (cov->parsed()) {
            disco::CoverOptions co;
            co.node_budget = c.budget.cover_nodes;
            if (base >= space.size()) throw disco::Error("MalformedInput", "--base is outside the space");
            const double r = radius > 0 ? radius : L;
            json out;
            bool partial = false;
            if (gamma) {
                const auto g = disco::estimate_gamma(space, L, eps, max_basepoints, co);
                out["gamma"] = disco::to_json(g);
                partial = g.upper_bound;
            }
            const auto ch = disco::build_chassis(space, eps);
            co.base_vertex = ch.vertex_of_point[base];
            const auto cover = disco::build_cover(ch, r, co);
            const auto sc = disco::count_short_classes(cover, ch, L);
            out["short_classes"] = disco::to_json(sc);
            json cj = disco::to_json(cover, r);
            if (!graph) {
                for (const char* k : {"adjacency", "projection", "parent", "distance"}) cj.erase(k);
            }
            out["cover"] = std::move(cj);
            out["config"] = run_config("cover", c,
                                       {{"eps", eps},
                                        {"radius", r},
                                        {"length", L},
                                        {"base", base},
                                        {"gamma", gamma},
                                        {"max_basepoints", max_basepoints},
                                        {"graph", graph}});
            emit(c, disco::dump(out));
            return partial || sc.upper_bound || cover.truncated ? kExitPartial : kExitOk;
        }

        if (bnd->parsed()) {
            disco::SpectrumOptions o;
            o.budget = budget;
            o.triads.threads = c.threads;
            o.resolution = policy == "clamp" ? disco::ResolutionPolicy::Clamp : disco::ResolutionPolicy::Error;
            o.max_triangles = c.budget.matrix_triangles;
            const auto report = disco::compute_spectrum(space, eps_min, o);
            disco::BoundsConfig bc;
            bc.eps = bounds_eps;
            bc.lengths = lengths;
            bc.max_basepoints = max_basepoints;
            bc.cover.node_budget = c.budget.cover_nodes;
            const auto table = disco::evaluate_bounds(space, report, bc);
            if (c.format == "table") {
                std::ostringstream os;
                os << pad("bound", 24) << pad("value", 28) << pad("empirical", 12) << pad("satisfied", 11)
                   << "margin\n";
                for (const auto& r : table)
                    os << pad(r.name, 24) << pad(r.bound_text(), 28) << pad(disco::format_double(r.empirical), 12)
                       << pad(r.satisfied ? "yes" : "no", 11) << r.margin_text() << "\n";
                emit(c, os.str());
            } else {
                json rows = json::array();
                for (const auto& r : table) rows.push_back(disco::to_json(r));
                json critical = json::array();
                for (const auto& cv : report.critical_values)
                    critical.push_back({{"epsilon", cv.epsilon}, {"multiplicity", cv.multiplicity}});
                json out{{"bounds", std::move(rows)}, {"critical_values", std::move(critical)}};
                out["config"] = run_config("bounds", c,
                                           {{"eps_min", eps_min},
                                            {"resolution_policy", policy},
                                            {"eps", bounds_eps},
                                            {"lengths", lengths},
                                            {"max_basepoints", max_basepoints}});
                emit(c, disco::dump(out));
            }
            return report.partial ? kExitPartial : kExitOk;
        }

        if (tri->parsed()) {
            const disco::NullDecider decider(space, eps, budget);
            disco::TriadSearchOptions to;
            to.threads = c.threads;
            to.prune = !no_prune;
            const double tol = tolerance > 0 ? tolerance : space.resolution();
            const auto triads = disco::find_essential_triads(decider, tol, to);
            std::vector<disco::Triad> essential;
            std::size_t unknown = 0;
            for (const auto& t : triads) {
                if (t.essential == disco::Essential::Yes) essential.push_back(t);
                unknown += t.essential == disco::Essential::Unknown;
            }
            const auto part = disco::triad_equivalence_classes(essential, decider);
            json list = json::array();
            for (const auto& t : triads) list.push_back(disco::to_json(t));
            json out{{"triads", std::move(list)},
                     {"essential", essential.size()},
                     {"unknown", unknown},
                     {"classes", part.classes},
                     {"unresolved", part.unresolved}};
            out["config"] = run_config("triads", c, {{"eps", eps}, {"tolerance", tol}, {"prune", !no_prune}});
            emit(c, disco::dump(out));
            return unknown > 0 || !part.unresolved.empty() ? kExitPartial : kExitOk;
        }
    } catch (const disco::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "disco/chain.hpp"
#include "disco/metric_space.hpp"

namespace disco {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

struct VertexMode {
    enum class Kind { All, GreedyNet };
    Kind kind = Kind::All;
    double delta = 0.0;  // net radius for GreedyNet

    static VertexMode all() { return {}; }
    static VertexMode net(double delta) { return {Kind::GreedyNet, delta}; }
};

/// Rips-style 2-complex at scale eps on a vertex subset: an edge joins two
/// vertices at distance < eps, a triangle fills every 3-clique. Edges are
/// oriented from the lower to the higher vertex index. Vertex 0 is the
/// basepoint.
struct Chassis {
    struct Edge {
        VertexId a;
        VertexId b;
        double length;
    };

    const FiniteMetricSpace* space = nullptr;
    double eps = 0.0;
    VertexMode mode;
    std::vector<PointId> vertices;           // vertex -> point
    std::vector<VertexId> vertex_of_point;   // point -> vertex or kNoVertex
    std::vector<Edge> edges;
    std::vector<std::array<VertexId, 3>> triangles;  // a < b < c
    /// Per vertex: (neighbour, edge), sorted by neighbour.
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adjacency;
    VertexId basepoint = 0;

    // Spanning tree (filled by build_spanning_tree).
    std::vector<char> in_tree;       // per edge
    std::vector<VertexId> parent;    // per vertex, basepoint maps to itself
    std::vector<EdgeId> parent_edge; // per vertex
    std::vector<std::uint32_t> depth;// hop depth in the tree
    /// Simplicial distance (edge lengths summed) between vertices, row-major.
    std::vector<double> simplicial_dist;
    double simplicial_diameter = 0.0;

    static constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

    std::size_t vertex_count() const noexcept { return vertices.size(); }
    double d_s(VertexId u, VertexId v) const { return simplicial_dist[u * vertices.size() + v]; }
    EdgeId find_edge(VertexId u, VertexId v) const;
    bool adjacent(VertexId u, VertexId v) const { return u == v || find_edge(u, v) != kNoEdge; }
    /// Tree path from u to v (inclusive), as vertices.
    std::vector<VertexId> tree_path(VertexId u, VertexId v) const;
    /// Vertex chain converted to point ids.
    Chain to_points(const std::vector<VertexId>& path) const;
    /// Point chain converted to vertices; throws NotSimplicial when a point is not a vertex.
    std::vector<VertexId> to_vertices(const Chain& chain) const;
};

/// Builds vertices, edges, triangles, the spanning tree and the simplicial
/// metric. Throws DisconnectedAtScale when the 1-skeleton is disconnected.
Chassis build_chassis(const FiniteMetricSpace& space, double eps, VertexMode mode = VertexMode::all());

/// Attaches farthest-remaining vertices by shortest simplicial paths,
/// splicing into the tree at the first contact. Fills the tree fields.
void build_spanning_tree(Chassis& chassis);

/// Generator g = tree_path(base, a) * e_ab * tree_path(b, base) for a
/// non-tree edge (a, b), a < b.
struct Generator {
    EdgeId edge;
    Chain loop;
    double length;
};

/// Triangle a<b<c yields g_ab * g_bc = g_ac; tree edges contribute the
/// identity, stored as -1.
struct Relation {
    std::int32_t ab;
    std::int32_t bc;
    std::int32_t ac;
};

struct Presentation {
    std::vector<Generator> generators;
    std::vector<Relation> relations;
    std::vector<std::int32_t> generator_of_edge;  // -1 for tree edges
    PointId basepoint = 0;
};

Presentation extract_presentation(const Chassis& chassis);

/// Signed generator letters: +k / -k stand for generator k-1 and its inverse.
using Word = std::vector<std::int32_t>;

struct Elimination {
    std::int32_t generator;
    Word replacement;  // in terms of generators alive at elimination time
};

/// Finitely presented group after Tietze eliminations. `alive` lists the
/// surviving original generator ids; relators use original ids.
struct SimplifiedPresentation {
    std::vector<std::int32_t> alive;
    std::vector<Word> relators;
    std::vector<Elimination> log;
    std::size_t original_generators = 0;

    bool trivial() const { return alive.empty(); }
    bool free() const { return relators.empty(); }
    /// Rewrites a word into surviving generators and freely reduces it.
    /// Throws BudgetExhausted when the rewrite exceeds `max_length`.
    Word rewrite(const Word& word, std::size_t max_length = 1u << 22) const;
};

struct SimplifyBudget {
    std::size_t max_relator_length = 64;
    std::size_t max_total_length = 1u << 24;
};

/// Tietze reductions: drop relators that freely reduce to nothing and
/// eliminate any generator occurring exactly once in a relator. Not minimal.
SimplifiedPresentation simplify_presentation(const Presentation& p, SimplifyBudget budget = {});

/// Cyclically and freely reduces in place.
void free_reduce(Word& w);
void cyclic_reduce(Word& w);

/// Word of a simplicial loop in the generators (tree edges dropped).
Word loop_word(const Chassis& chassis, const Presentation& p, const std::vector<VertexId>& loop);

// Integer homology -------------------------------------------------------------

struct H1Summary {
    std::size_t betti1 = 0;
    std::vector<std::int64_t> torsion;  // invariant factors > 1
    std::size_t cycle_rank = 0;         // edges - vertices + 1
    std::size_t boundary_rank = 0;      // rank of the triangle boundary map
};

/// Coordinates of a 1-cycle in H1 = Z^betti1 + (+) Z/t_i.
struct H1Class {
    std::vector<std::int64_t> free;
    std::vector<std::int64_t> torsion;  // reduced into [0, t_i)

    bool zero() const;
    H1Class negated(const std::vector<std::int64_t>& torsion_orders) const;
    friend bool operator==(const H1Class&, const H1Class&) = default;
};

/// Sparse integer elimination over the triangle relations followed by a
/// Smith normal form of the residual block. Coefficients beyond 63 bits are
/// handled with arbitrary precision.
class H1Map {
public:
    static H1Map compute(const Chassis& chassis, std::size_t max_entries = 1u << 26);

    const H1Summary& summary() const noexcept { return summary_; }
    /// Class of an oriented edge u->v; zero for tree edges.
    H1Class edge_class(VertexId u, VertexId v) const;
    /// Class of a closed simplicial edge path.
    H1Class loop_class(const std::vector<VertexId>& loop) const;

private:
    const Chassis* chassis_ = nullptr;
    H1Summary summary_;
    /// Per edge: sparse row over reduced coordinates (index, coefficient);
    /// coordinates < betti1 are free, the rest torsion slots.
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> edge_coords_;
};

inline H1Summary compute_h1(const Chassis& chassis) { return H1Map::compute(chassis).summary(); }

// Projection -------------------------------------------------------------------

struct Projection {
    std::vector<VertexId> vertices;
    Chain chain;  // same chain as point ids
    Homotopy certificate;
    double length_increase = 0.0;
};

/// Snaps every point to a nearest vertex. Throws SnapTooCoarse when the
/// pointwise deviation is not below half the excess.
Projection project_to_chassis(const Chain& chain, const Chassis& chassis);

}  // namespace disco

#ifndef KLA_GRAPH_HPP
#define KLA_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <list>
#include <string>
#include <vector>

#include "kla/presentation.hpp"
#include "kla/series.hpp"

namespace kla {

/// RAAG Lie algebra of a graph: one degree-1 generator per vertex, one
/// bracket relation per edge.
template <scalar K>
Presentation<K> raag_presentation(const GraphSpec& g, FieldSpec fs = FieldSpec::rationals()) {
    GeneratorSet gens;
    for (auto& v : g.vertices) gens.add(v, 1);
    Presentation<K> p(g.name.empty() ? "raag" : "raag_" + g.name, fs, gens);
    for (auto& [a, b] : g.edges) {
        LieElem<K> ea{1, {}}, eb{1, {}};
        sv_set(ea.coords, p.free->basis_index(1, Word(1, char(a))), Field<K>::one(fs));
        sv_set(eb.coords, p.free->basis_index(1, Word(1, char(b))), Field<K>::one(fs));
        p.relations.push_back(bracket(*p.free, fs, ea, eb));
    }
    return p;
}

/// Exact clique census: counts per size, clique number, clique polynomial.
struct CliqueData {
    std::vector<long> counts; // counts[i] = number of i-cliques, counts[0] = 1
    int clique_number = 0;

    PolySeries polynomial() const {
        PolySeries p;
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (counts[i]) p = p + PolySeries::monomial(static_cast<int>(i), Rat(counts[i]));
        return p;
    }
};

namespace graph_detail {

inline std::vector<std::uint32_t> adjacency_masks(const GraphSpec& g) {
    if (g.n() > 20) throw UsageError("graph too large for exact clique enumeration (n > 20)");
    std::vector<std::uint32_t> adj(g.n(), 0);
    for (auto& [a, b] : g.edges) {
        adj[a] |= 1u << b;
        adj[b] |= 1u << a;
    }
    return adj;
}

/// Bron-Kerbosch with pivoting; calls out every maximal clique mask.
template <class F>
void bron_kerbosch(const std::vector<std::uint32_t>& adj, std::uint32_t r, std::uint32_t p,
                   std::uint32_t x, F&& report) {
    if (p == 0 && x == 0) {
        report(r);
        return;
    }
    std::uint32_t px = p | x;
    int pivot = -1, best = -1;
    for (std::uint32_t m = px; m;) {
        int u = __builtin_ctz(m);
        m &= m - 1;
        int deg = __builtin_popcount(p & adj[u]);
        if (deg > best) { best = deg; pivot = u; }
    }
    std::uint32_t candidates = p & ~adj[pivot];
    for (std::uint32_t m = candidates; m;) {
        int v = __builtin_ctz(m);
        m &= m - 1;
        std::uint32_t bit = 1u << v;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], report);
        p &= ~bit;
        x |= bit;
    }
}

} // namespace graph_detail

/// All maximal cliques (as sorted vertex lists), Bron-Kerbosch with pivot.
inline std::vector<std::vector<int>> maximal_cliques(const GraphSpec& g) {
    auto adj = graph_detail::adjacency_masks(g);
    std::vector<std::vector<int>> out;
    std::uint32_t all = g.n() == 32 ? ~0u : ((1u << g.n()) - 1);
    graph_detail::bron_kerbosch(adj, 0, all, 0, [&](std::uint32_t mask) {
        std::vector<int> c;
        for (int i = 0; i < g.n(); ++i)
            if (mask & (1u << i)) c.push_back(i);
        out.push_back(std::move(c));
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Count all cliques by ordered extension; the clique number cross-checks
/// the Bron-Kerbosch maximal cliques.
inline CliqueData clique_polynomial(const GraphSpec& g) {
    auto adj = graph_detail::adjacency_masks(g);
    CliqueData cd;
    cd.counts.assign(g.n() + 1, 0);
    cd.counts[0] = 1;
    // extend cliques only by higher-numbered vertices: each clique once
    std::vector<std::pair<std::uint32_t, int>> stack; // (member mask, size)
    for (int v = 0; v < g.n(); ++v) stack.push_back({1u << v, 1});
    while (!stack.empty()) {
        auto [mask, size] = stack.back();
        stack.pop_back();
        ++cd.counts[size];
        int top = 31 - __builtin_clz(mask);
        for (int w = top + 1; w < g.n(); ++w)
            if ((adj[w] & mask) == mask) stack.push_back({mask | (1u << w), size + 1});
    }
    for (int i = g.n(); i >= 0; --i)
        if (cd.counts[i]) { cd.clique_number = i; break; }
    int bk_max = 0;
    for (auto& c : maximal_cliques(g)) bk_max = std::max(bk_max, static_cast<int>(c.size()));
    if (g.n() > 0 && bk_max != cd.clique_number)
        throw UsageError("clique enumeration mismatch (internal)");
    return cd;
}

/// chi(L_Gamma) = clique polynomial at -1.
inline long euler_characteristic_raag(const GraphSpec& g) {
    Rat v = clique_polynomial(g).polynomial().eval(Rat(-1));
    return static_cast<long>(v.get_num().get_si());
}

namespace graph_detail {

inline bool degrees_are(std::vector<int> d, std::vector<int> want) {
    std::sort(d.begin(), d.end());
    return d == want;
}

} // namespace graph_detail

/// Droms recognition by the forbidden induced subgraphs: no induced square
/// (C4) and no induced line of length 3 (P4).  Returns the witness subset
/// when the graph fails.
struct DromsResult {
    bool droms = true;
    std::string witness_kind;
    std::vector<int> witness;
};

inline DromsResult is_droms(const GraphSpec& g) {
    int n = g.n();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    std::vector<int> vs{a, b, c, d};
                    GraphSpec ind = g.induced(vs);
                    std::vector<int> deg(4, 0);
                    for (auto& [x, y] : ind.edges) { ++deg[x]; ++deg[y]; }
                    int e = ind.e();
                    if (e == 4 && graph_detail::degrees_are(deg, {2, 2, 2, 2}))
                        return {false, "square", vs};
                    if (e == 3 && graph_detail::degrees_are(deg, {1, 1, 2, 2})) {
                        // connected with these degrees: a path on 4 vertices
                        return {false, "line", vs};
                    }
                }
    return {};
}

/// Chordality by lexicographic BFS + perfect elimination order verification.
inline bool is_chordal(const GraphSpec& g) {
    int n = g.n();
    if (n == 0) return true;
    auto adj = graph_detail::adjacency_masks(g);
    // LexBFS: repeatedly take a vertex from the front class
    std::list<std::vector<int>> classes;
    {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        classes.push_back(all);
    }
    std::vector<int> order;
    while (!classes.empty()) {
        auto& front = classes.front();
        int v = front.front();
        front.erase(front.begin());
        if (front.empty()) classes.pop_front();
        order.push_back(v);
        // split every class into (neighbors of v, rest)
        for (auto it = classes.begin(); it != classes.end();) {
            std::vector<int> in, out;
            for (int w : *it)
                (adj[v] & (1u << w) ? in : out).push_back(w);
            if (!in.empty() && !out.empty()) {
                *it = out;
                classes.insert(it, in);
                ++it;
            } else
                ++it;
        }
    }
    // reverse LexBFS order is a candidate perfect elimination order
    std::reverse(order.begin(), order.end());
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        // later neighbors of v must contain all later neighbors of the
        // earliest later neighbor
        std::uint32_t later = 0;
        for (int w = 0; w < n; ++w)
            if ((adj[v] & (1u << w)) && pos[w] > i) later |= 1u << w;
        if (!later) continue;
        int u = -1, best = n + 1;
        for (int w = 0; w < n; ++w)
            if ((later & (1u << w)) && pos[w] < best) { best = pos[w]; u = w; }
        std::uint32_t rest = later & ~(1u << u);
        if ((rest & ~adj[u]) != 0) return false;
    }
    return true;
}

/// Cone / disjoint-union decomposition tree; Droms graphs bottom out at
/// single vertices.
struct DecompositionNode {
    enum Kind { Vertex, Cone, DisjointUnion, NonDecomposable } kind = Vertex;
    std::string tip;                          // for cones
    std::vector<int> vertices;                // ambient vertex indices
    std::vector<DecompositionNode> children;

    int leaf_count() const {
        if (children.empty()) return 1;
        int s = 0;
        for (auto& c : children) s += c.leaf_count();
        return s;
    }
};

namespace graph_detail {

inline DecompositionNode decompose_rec(const GraphSpec& g, const std::vector<int>& verts) {
    DecompositionNode node;
    node.vertices = verts;
    if (verts.size() == 1) {
        node.kind = DecompositionNode::Vertex;
        node.tip = g.vertices[verts[0]];
        return node;
    }
    // connected components
    int m = static_cast<int>(verts.size());
    std::vector<int> comp(m, -1);
    int ncomp = 0;
    for (int s = 0; s < m; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < m; ++w)
                if (comp[w] < 0 && g.adjacent(verts[v], verts[w])) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    if (ncomp > 1) {
        node.kind = DecompositionNode::DisjointUnion;
        for (int c = 0; c < ncomp; ++c) {
            std::vector<int> part;
            for (int v = 0; v < m; ++v)
                if (comp[v] == c) part.push_back(verts[v]);
            node.children.push_back(decompose_rec(g, part));
        }
        return node;
    }
    // universal vertex?
    for (int v = 0; v < m; ++v) {
        bool universal = true;
        for (int w = 0; w < m && universal; ++w)
            if (w != v && !g.adjacent(verts[v], verts[w])) universal = false;
        if (universal) {
            node.kind = DecompositionNode::Cone;
            node.tip = g.vertices[verts[v]];
            std::vector<int> rest;
            for (int w = 0; w < m; ++w)
                if (w != v) rest.push_back(verts[w]);
            node.children.push_back(decompose_rec(g, rest));
            return node;
        }
    }
    node.kind = DecompositionNode::NonDecomposable;
    return node;
}

} // namespace graph_detail

inline DecompositionNode decompose(const GraphSpec& g) {
    std::vector<int> all(g.n());
    for (int i = 0; i < g.n(); ++i) all[i] = i;
    return graph_detail::decompose_rec(g, all);
}

inline bool fully_decomposable(const DecompositionNode& n) {
    if (n.kind == DecompositionNode::NonDecomposable) return false;
    for (auto& c : n.children)
        if (!fully_decomposable(c)) return false;
    return true;
}

/// Edge count of the Turan graph T(n,r): the maximum number of edges of an
/// n-vertex graph with no (r+1)-clique.
inline long turan_bound(long n, long r) {
    if (r < 1) throw UsageError("turan bound needs r >= 1");
    long s = n % r;
    Rat e = rat(r - 1, r) * rat(n * n - s * s, 2) + rat(s * (s - 1), 2);
    if (e.get_den() != 1) throw DomainError("turan bound must be an integer");
    return static_cast<long>(e.get_num().get_si());
}

/// Lower bound v^2/(v^2 - 2e) for the clique number of a graph with v
/// vertices and e edges.
inline Rat clique_lower_bound(long v, long e) {
    if (v * v == 2 * e) throw DomainError("clique bound undefined: v^2 = 2e");
    return rat(v * v, v * v - 2 * e);
}

} // namespace kla

#endif

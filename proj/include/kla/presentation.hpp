#ifndef KLA_PRESENTATION_HPP
#define KLA_PRESENTATION_HPP

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kla/lyndon.hpp"

namespace kla {

/// Finite presentation of a graded Lie algebra: weighted generators plus
/// homogeneous relations of degree >= 2, all over one field.
template <scalar K>
struct Presentation {
    std::string name;
    FieldSpec field;
    GeneratorSet gens;
    std::vector<LieElem<K>> relations;
    std::shared_ptr<FreeLie> free;

    Presentation() : free(std::make_shared<FreeLie>(GeneratorSet{})) {}

    Presentation(std::string nm, FieldSpec fs, GeneratorSet g, std::vector<LieElem<K>> rels = {})
        : name(std::move(nm)), field(fs), gens(std::move(g)), relations(std::move(rels)),
          free(std::make_shared<FreeLie>(gens)) {
        validate();
    }

    void validate() const {
        for (const auto& r : relations) {
            if (r.is_zero()) throw UsageError("relation is identically zero");
            if (r.degree < 2) throw UsageError("relations must have degree >= 2");
        }
    }

    int max_generator_degree() const {
        int m = 0;
        for (int d : gens.degrees) m = std::max(m, d);
        return m;
    }

    int max_relation_degree() const {
        int m = 0;
        for (const auto& r : relations) m = std::max(m, r.degree);
        return m;
    }

    bool is_standard_shape() const { return max_generator_degree() <= 1 || gens.size() == 0; }

    bool is_quadratic_shape() const {
        return is_standard_shape() && max_relation_degree() <= 2;
    }
};

/// Finite simple graph with named vertices in declaration order.
struct GraphSpec {
    std::string name;
    std::vector<std::string> vertices;
    std::set<std::pair<int, int>> edges; // normalized i < j

    int n() const { return static_cast<int>(vertices.size()); }
    int e() const { return static_cast<int>(edges.size()); }

    int find(const std::string& v) const {
        for (int i = 0; i < n(); ++i)
            if (vertices[i] == v) return i;
        return -1;
    }

    void add_vertex(const std::string& v) {
        if (find(v) >= 0) throw UsageError("duplicate vertex '" + v + "'");
        vertices.push_back(v);
    }

    void add_edge(int a, int b) {
        if (a == b) throw UsageError("loop edge at '" + vertices[a] + "'");
        if (a > b) std::swap(a, b);
        if (!edges.emplace(a, b).second)
            throw UsageError("duplicate edge " + vertices[a] + "-" + vertices[b]);
    }

    bool adjacent(int a, int b) const {
        if (a > b) std::swap(a, b);
        return edges.count({a, b}) != 0;
    }

    /// Induced subgraph on the given vertex indices (kept in this order).
    GraphSpec induced(const std::vector<int>& verts) const {
        GraphSpec g;
        g.name = name + "_induced";
        for (int v : verts) g.vertices.push_back(vertices[v]);
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = i + 1; j < verts.size(); ++j)
                if (adjacent(verts[i], verts[j]))
                    g.edges.emplace(static_cast<int>(i), static_cast<int>(j));
        return g;
    }
};

} // namespace kla

#endif

#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "identispace/integer_matrix.hpp"
#include "identispace/smith.hpp"

namespace identispace {

/// Finitely generated abelian group Z^rank + Z/t1 + Z/t2 + ..., t_i | t_{i+1}.
struct AbelianGroup {
    std::size_t rank{0};
    std::vector<BigInt> torsion;

    bool is_trivial() const { return rank == 0 && torsion.empty(); }
    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

inline std::string format_group(const AbelianGroup& g)
{
    std::vector<std::string> parts;
    if (g.rank == 1) parts.emplace_back("Z");
    else if (g.rank > 1) parts.push_back("Z^" + std::to_string(g.rank));
    for (const BigInt& t : g.torsion) parts.push_back("Z/" + t.str());
    if (parts.empty()) return "0";
    std::string out = parts.front();
    for (std::size_t k = 1; k < parts.size(); ++k) out += " + " + parts[k];
    return out;
}

/// Integer chain complex C_dim -> ... -> C_0. boundary(k) maps C_k to C_{k-1}.
class ChainComplex {
public:
    ChainComplex() = default;

    /// cell_counts[k] = rank of C_k; boundaries[k-1] = matrix of d_k.
    ChainComplex(std::vector<std::size_t> cell_counts, std::vector<IntMatrix> boundaries,
                 std::vector<std::vector<std::string>> labels = {})
        : counts_(std::move(cell_counts)), boundaries_(std::move(boundaries)), labels_(std::move(labels))
    {
        if (counts_.empty()) throw std::invalid_argument("chain complex needs at least C_0");
        if (boundaries_.size() + 1 != counts_.size())
            throw std::invalid_argument("need one boundary matrix per positive degree");
        for (std::size_t k = 1; k < counts_.size(); ++k) {
            const IntMatrix& d = boundaries_[k - 1];
            if (d.rows() != counts_[k - 1] || d.cols() != counts_[k])
                throw std::invalid_argument("boundary matrix d_" + std::to_string(k) + " has wrong shape");
        }
    }

    int dimension() const { return static_cast<int>(counts_.size()) - 1; }
    std::size_t cell_count(int k) const { return counts_.at(static_cast<std::size_t>(k)); }
    const std::vector<std::vector<std::string>>& labels() const { return labels_; }

    /// d_k for 1 <= k <= dimension. d_0 and d_{dim+1} are zero maps and are
    /// returned with the appropriate shapes.
    IntMatrix boundary(int k) const
    {
        if (k <= 0) return IntMatrix(0, counts_.front());
        if (k > dimension()) return IntMatrix(counts_.back(), 0);
        return boundaries_[static_cast<std::size_t>(k - 1)];
    }

    /// d_{k-1} * d_k == 0 for every k.
    bool boundaries_compose_to_zero() const
    {
        for (int k = 2; k <= dimension(); ++k)
            if (!(boundary(k - 1) * boundary(k)).is_zero()) return false;
        return true;
    }

private:
    std::vector<std::size_t> counts_;
    std::vector<IntMatrix> boundaries_;
    std::vector<std::vector<std::string>> labels_;
};

/// Ordered simplex given by vertex labels.
using Simplex = std::vector<std::size_t>;

namespace detail {

inline int permutation_sign(std::vector<std::size_t> v)
{
    int sign = 1;
    for (std::size_t i = 0; i < v.size(); ++i)
        while (v[i] != i) {
            std::swap(v[i], v[v[i]]);
            sign = -sign;
        }
    return sign;
}

inline std::string simplex_text(const Simplex& s)
{
    std::string out = "[";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
    return out + "]";
}

}  // namespace detail

/// Boundary d[s_0..s_k] = sum_j (-1)^j [s_0..^s_j..s_k] as a matrix with one
/// column per entry of `cells` and one row per entry of `faces`. A face is
/// matched by its exact vertex sequence, or else by its vertex set with the
/// sign of the reordering. Repeated faces accumulate.
inline IntMatrix boundary_matrix(std::span<const Simplex> cells, std::span<const Simplex> faces)
{
    std::map<Simplex, std::size_t> exact;
    std::map<Simplex, std::pair<std::size_t, bool>> by_set;  // sorted -> (row, ambiguous)
    for (std::size_t r = 0; r < faces.size(); ++r) {
        if (!exact.emplace(faces[r], r).second)
            throw std::invalid_argument("face " + detail::simplex_text(faces[r]) + " listed twice");
        Simplex sorted = faces[r];
        std::sort(sorted.begin(), sorted.end());
        auto [it, fresh] = by_set.emplace(sorted, std::pair{r, false});
        if (!fresh) it->second.second = true;
    }

    IntMatrix d(faces.size(), cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Simplex& cell = cells[c];
        if (cell.size() < 2) throw std::invalid_argument("boundary_matrix needs cells of dimension >= 1");
        for (std::size_t j = 0; j < cell.size(); ++j) {
            Simplex face;
            face.reserve(cell.size() - 1);
            for (std::size_t v = 0; v < cell.size(); ++v)
                if (v != j) face.push_back(cell[v]);
            const int sign = (j % 2 == 0) ? 1 : -1;

            if (auto it = exact.find(face); it != exact.end()) {
                d(it->second, c) += sign;
                continue;
            }
            Simplex sorted = face;
            std::sort(sorted.begin(), sorted.end());
            const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
            auto it = by_set.find(sorted);
            if (!distinct || it == by_set.end() || it->second.second)
                throw std::invalid_argument("face " + detail::simplex_text(face) + " of cell " +
                                            detail::simplex_text(cell) + " is missing from the face list");
            // Sign of the permutation taking the listed face to `face`.
            const Simplex& listed = faces[it->second.first];
            std::vector<std::size_t> perm(face.size());
            for (std::size_t p = 0; p < face.size(); ++p)
                perm[p] = static_cast<std::size_t>(std::find(listed.begin(), listed.end(), face[p]) - listed.begin());
            d(it->second.first, c) += sign * detail::permutation_sign(perm);
        }
    }
    return d;
}

/// Chain complex of an ordered simplicial complex: simplices[k] lists the
/// k-simplices.
inline ChainComplex complex_from_simplices(const std::vector<std::vector<Simplex>>& simplices)
{
    std::vector<std::size_t> counts;
    std::vector<IntMatrix> boundaries;
    std::vector<std::vector<std::string>> labels;
    for (std::size_t k = 0; k < simplices.size(); ++k) {
        counts.push_back(simplices[k].size());
        std::vector<std::string> names;
        for (const Simplex& s : simplices[k]) names.push_back(detail::simplex_text(s));
        labels.push_back(std::move(names));
        if (k > 0) boundaries.push_back(boundary_matrix(simplices[k], simplices[k - 1]));
    }
    return ChainComplex(std::move(counts), std::move(boundaries), std::move(labels));
}

/// Delta-complex given by face maps: faces[k-1][s] lists the k+1 faces of
/// k-cell s (face j is opposite vertex j) as indices into the (k-1)-cells.
/// Identified cells may repeat; their coefficients accumulate.
struct DeltaComplex {
    std::size_t vertex_count{0};
    std::vector<std::vector<std::vector<std::size_t>>> faces;
    std::vector<std::vector<std::string>> labels;

    std::size_t cell_count(std::size_t k) const { return k == 0 ? vertex_count : faces.at(k - 1).size(); }
};

inline IntMatrix boundary_matrix(const DeltaComplex& dc, std::size_t k)
{
    if (k == 0 || k > dc.faces.size()) throw std::out_of_range("no boundary map in this degree");
    const auto& cells = dc.faces[k - 1];
    IntMatrix d(dc.cell_count(k - 1), cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].size() != k + 1)
            throw std::invalid_argument("a " + std::to_string(k) + "-cell needs " + std::to_string(k + 1) + " faces");
        for (std::size_t j = 0; j < cells[c].size(); ++j) {
            if (cells[c][j] >= d.rows()) throw std::invalid_argument("face index out of range");
            d(cells[c][j], c) += (j % 2 == 0) ? 1 : -1;
        }
    }
    return d;
}

inline ChainComplex to_chain_complex(const DeltaComplex& dc)
{
    std::vector<std::size_t> counts{dc.vertex_count};
    std::vector<IntMatrix> boundaries;
    for (std::size_t k = 1; k <= dc.faces.size(); ++k) {
        counts.push_back(dc.cell_count(k));
        boundaries.push_back(boundary_matrix(dc, k));
    }
    return ChainComplex(std::move(counts), std::move(boundaries), dc.labels);
}

enum class SpaceName { Circle, Sphere, Torus, KleinBottle, ProjectivePlane };

inline std::string_view to_string(SpaceName s)
{
    switch (s) {
    case SpaceName::Circle: return "circle";
    case SpaceName::Sphere: return "sphere";
    case SpaceName::Torus: return "torus";
    case SpaceName::KleinBottle: return "klein";
    case SpaceName::ProjectivePlane: return "rp2";
    }
    return "?";
}

inline SpaceName parse_space_name(std::string_view name)
{
    if (name == "circle") return SpaceName::Circle;
    if (name == "sphere") return SpaceName::Sphere;
    if (name == "torus") return SpaceName::Torus;
    if (name == "klein") return SpaceName::KleinBottle;
    if (name == "rp2") return SpaceName::ProjectivePlane;
    throw std::invalid_argument("unknown space '" + std::string(name) +
                                "' (expected circle, sphere, torus, klein or rp2)");
}

/// Built-in cell structures. The three identification spaces are the unit
/// square cut along its diagonal into two triangles, corners p0 (0,0),
/// p1 (1,0), p2 (0,1), p3 (1,1); edge a is horizontal, b vertical, c the
/// diagonal. Vertex order inside each triangle follows the edge directions.
inline DeltaComplex builtin_delta_complex(SpaceName name)
{
    DeltaComplex dc;
    switch (name) {
    case SpaceName::Circle:
        dc.vertex_count = 1;
        dc.faces = {{{0, 0}}};
        dc.labels = {{"v"}, {"a"}};
        break;
    case SpaceName::Torus:
        // L = [p0,p1,p3], U = [p0,p2,p3]; d L = d U = a + b - c.
        dc.vertex_count = 1;
        dc.faces = {{{0, 0}, {0, 0}, {0, 0}}, {{1, 2, 0}, {0, 2, 1}}};
        dc.labels = {{"v"}, {"a", "b", "c"}, {"L", "U"}};
        break;
    case SpaceName::KleinBottle:
        // Top edge glued to the bottom reversed: U = [p0,p3,p2], d U = a - b + c.
        dc.vertex_count = 1;
        dc.faces = {{{0, 0}, {0, 0}, {0, 0}}, {{1, 2, 0}, {0, 1, 2}}};
        dc.labels = {{"v"}, {"a", "b", "c"}, {"L", "U"}};
        break;
    case SpaceName::ProjectivePlane:
        // Both pairs reversed: p0 ~ p3 = v, p1 ~ p2 = w; a, b run v -> w and
        // the diagonal c is a loop at v. L = [p0,p3,p1], U = [p0,p3,p2].
        dc.vertex_count = 2;
        dc.faces = {{{1, 0}, {1, 0}, {0, 0}}, {{1, 0, 2}, {0, 1, 2}}};
        dc.labels = {{"v", "w"}, {"a", "b", "c"}, {"L", "U"}};
        break;
    case SpaceName::Sphere: {
        // Octahedron on +-x (0,1), +-y (2,3), +-z (4,5).
        std::vector<Simplex> verts{{0}, {1}, {2}, {3}, {4}, {5}};
        std::vector<Simplex> edges, tris;
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t b = a + 1; b < 6; ++b)
                if (a / 2 != b / 2) edges.push_back({a, b});
        for (std::size_t x : {0u, 1u})
            for (std::size_t y : {2u, 3u})
                for (std::size_t z : {4u, 5u}) tris.push_back({x, y, z});
        dc.vertex_count = 6;
        auto index_of = [](const std::vector<Simplex>& list, const Simplex& s) {
            return static_cast<std::size_t>(std::find(list.begin(), list.end(), s) - list.begin());
        };
        std::vector<std::vector<std::size_t>> edge_faces, tri_faces;
        for (const Simplex& e : edges) edge_faces.push_back({e[1], e[0]});
        for (const Simplex& t : tris)
            tri_faces.push_back({index_of(edges, {t[1], t[2]}), index_of(edges, {t[0], t[2]}),
                                 index_of(edges, {t[0], t[1]})});
        dc.faces = {edge_faces, tri_faces};
        std::vector<std::string> vl, el, tl;
        for (const Simplex& s : verts) vl.push_back(detail::simplex_text(s));
        for (const Simplex& s : edges) el.push_back(detail::simplex_text(s));
        for (const Simplex& s : tris) tl.push_back(detail::simplex_text(s));
        dc.labels = {vl, el, tl};
        break;
    }
    }
    return dc;
}

inline ChainComplex builtin_complex(SpaceName name)
{
    return to_chain_complex(builtin_delta_complex(name));
}

/// ker(outgoing) / img(incoming) for maps A -> B -> C with outgoing * incoming = 0.
inline AbelianGroup quotient_group(const IntMatrix& incoming, const IntMatrix& outgoing)
{
    const std::size_t n = outgoing.cols();
    if (incoming.rows() != n) throw std::invalid_argument("maps do not compose");
    const auto snf_out = smith_normal_form(outgoing);
    const auto snf_in = smith_normal_form(incoming);
    AbelianGroup g;
    g.rank = n - snf_out.rank() - snf_in.rank();
    for (const BigInt& d : snf_in.diagonal())
        if (d > 1) g.torsion.push_back(d);
    return g;
}

/// H_k = ker d_k / img d_{k+1}.
inline AbelianGroup homology(const ChainComplex& c, int k)
{
    if (k < 0 || k > c.dimension())
        throw std::out_of_range("homology degree " + std::to_string(k) + " outside [0, " +
                                std::to_string(c.dimension()) + "]");
    return quotient_group(c.boundary(k + 1), c.boundary(k));
}

struct ExactnessVerdict {
    std::size_t position{0};        // index of the group between maps[position-1] and maps[position]
    bool composes_to_zero{false};   // img within ker
    bool ranks_match{false};        // rank(incoming) == nullity(outgoing) over Q
    AbelianGroup quotient;          // ker / img, meaningful when composes_to_zero
    bool exact{false};
};

/// Checks exactness at each interior group of G_0 -> G_1 -> ... -> G_n, where
/// maps[i] is the matrix of G_i -> G_{i+1}.
inline std::vector<ExactnessVerdict> verify_exact(std::span<const IntMatrix> maps)
{
    for (std::size_t i = 1; i < maps.size(); ++i)
        if (maps[i].cols() != maps[i - 1].rows())
            throw std::invalid_argument("map " + std::to_string(i) + " has " + std::to_string(maps[i].cols()) +
                                        " columns but map " + std::to_string(i - 1) + " has " +
                                        std::to_string(maps[i - 1].rows()) + " rows");
    std::vector<ExactnessVerdict> out;
    for (std::size_t p = 1; p < maps.size(); ++p) {
        const IntMatrix& in = maps[p - 1];
        const IntMatrix& next = maps[p];
        ExactnessVerdict v;
        v.position = p;
        v.composes_to_zero = (next * in).is_zero();
        const std::size_t rank_in = smith_normal_form(in).rank();
        const std::size_t rank_out = smith_normal_form(next).rank();
        v.ranks_match = rank_in == next.cols() - rank_out;
        if (v.composes_to_zero) {
            v.quotient = quotient_group(in, next);
            v.exact = v.ranks_match && v.quotient.is_trivial();
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace identispace

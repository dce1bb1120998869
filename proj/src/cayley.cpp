#include "freepd/cayley.hpp"

#include <algorithm>

#include "freepd/error.hpp"

namespace freepd {

std::size_t distance(const Word& s, const Word& t) {
    return mul(s.inverse(), t).size();
}

Word tree_median(const Word& x, const Word& y, const Word& z) {
    // Translate x to e; the median of e, y', z' is their common beginning.
    const Word xi = x.inverse();
    return mul(x, common_beginning(mul(xi, y), mul(xi, z)));
}

bool EdgePredicate::operator()(const Word& s, const Word& t) const {
    if (s == t) {
        return false;
    }
    return cutoff_.covers(mul(s.inverse(), t));
}

Adjacency induced_graph(std::span<const Word> vertices, const EdgePredicate& pred) {
    const std::size_t n = vertices.size();
    Adjacency adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            adj[i][j] = adj[j][i] = pred(vertices[i], vertices[j]);
        }
    }
    return adj;
}

bool is_chordal(const Adjacency& graph) {
    const std::size_t n = graph.size();
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> nbrs;
    for (std::size_t removed = 0; removed < n; ++removed) {
        bool found = false;
        for (std::size_t v = 0; v < n && !found; ++v) {
            if (!alive[v]) {
                continue;
            }
            nbrs.clear();
            for (std::size_t u = 0; u < n; ++u) {
                if (alive[u] && graph[v][u]) {
                    nbrs.push_back(u);
                }
            }
            bool simplicial = true;
            for (std::size_t a = 0; a < nbrs.size() && simplicial; ++a) {
                for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                    if (!graph[nbrs[a]][nbrs[b]]) {
                        simplicial = false;
                        break;
                    }
                }
            }
            if (simplicial) {
                alive[v] = false;
                found = true;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

bool is_chordal(std::span<const Word> vertices, const EdgePredicate& pred) {
    return is_chordal(induced_graph(vertices, pred));
}

std::vector<Word> clique_C(const ClassCursor& nu) {
    if (nu.is_unit()) {
        throw InputError("clique_C is undefined for the unit class");
    }
    const GroupContext& ctx = nu.context();
    const ClassCursor prev = *class_predecessor(nu);
    const Word& s = nu.rep();
    const Word s_inv = s.inverse();

    std::vector<Word> out{Word{}, s};
    for (const Word& t : ball(ctx, nu.length())) {
        // e and s fail the second and first test respectively
        if (prev.covers(t) && prev.covers(mul(s_inv, t))) {
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end(), [&ctx](const Word& a, const Word& b) { return lex_less(a, b, ctx); });
    return out;
}

std::vector<Word> sigma_set(const Word& s, const Word& t, std::size_t n, const GroupContext& ctx) {
    if (distance(s, t) != n + 1) {
        throw InputError("sigma_set requires d(s, t) = n + 1");
    }
    std::vector<Word> out;
    for (const Word& r : ball(ctx, n)) {
        Word candidate = mul(s, r);
        if (distance(candidate, t) <= n) {
            out.push_back(std::move(candidate));
        }
    }
    std::sort(out.begin(), out.end(), [&ctx](const Word& a, const Word& b) { return lex_less(a, b, ctx); });
    return out;
}

} // namespace freepd

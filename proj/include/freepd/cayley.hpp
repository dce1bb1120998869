#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "freepd/words.hpp"

namespace freepd {

/// Tree distance d(s, t) = |s^{-1} t| in the Cayley graph.
std::size_t distance(const Word& s, const Word& t);

/// The vertex shared by the three geodesics between x, y and z.
Word tree_median(const Word& x, const Word& y, const Word& z);

/// Edge relation of the graph Gamma_nu: {s, t} is an edge iff s != t and the
/// class of s^{-1} t is at or before `cutoff`. Translation invariant.
class EdgePredicate {
public:
    explicit EdgePredicate(ClassCursor cutoff) : cutoff_(std::move(cutoff)) {}

    /// The distance-n graph (edges between words at distance 1..n).
    static EdgePredicate within_distance(const GroupContext& ctx, std::size_t n) {
        return EdgePredicate(ClassCursor::last_of_length(ctx, n));
    }

    bool operator()(const Word& s, const Word& t) const;
    const ClassCursor& cutoff() const noexcept { return cutoff_; }

private:
    ClassCursor cutoff_;
};

/// Adjacency matrix of a finite simple graph.
using Adjacency = std::vector<std::vector<bool>>;

Adjacency induced_graph(std::span<const Word> vertices, const EdgePredicate& pred);

/// Chordality by repeated simplicial-vertex elimination.
bool is_chordal(const Adjacency& graph);
bool is_chordal(std::span<const Word> vertices, const EdgePredicate& pred);

/// The completion window C_nu: e, s_nu and every common neighbour of e and s_nu
/// in Gamma_{nu^-}, sorted lexicographically. Throws InputError for nu = {e}.
std::vector<Word> clique_C(const ClassCursor& nu);

/// {r : d(r, s) <= n and d(r, t) <= n}, sorted lexicographically. Requires
/// d(s, t) = n + 1 (InputError otherwise).
std::vector<Word> sigma_set(const Word& s, const Word& t, std::size_t n, const GroupContext& ctx);

} // namespace freepd

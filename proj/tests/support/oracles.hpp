#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "freepd/cayley.hpp"
#include "freepd/ncpoly.hpp"
#include "support/random.hpp"

namespace freepd::testing {

// Maximum cardinality search followed by the perfect elimination check.
inline bool oracle_chordal_mcs(const Adjacency& g) {
    const std::size_t n = g.size();
    std::vector<int> weight(n, 0);
    std::vector<bool> visited(n, false);
    std::vector<std::size_t> order;
    std::vector<std::size_t> position(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!visited[v] && (best == n || weight[v] > weight[best])) {
                best = v;
            }
        }
        visited[best] = true;
        position[best] = order.size();
        order.push_back(best);
        for (std::size_t u = 0; u < n; ++u) {
            if (!visited[u] && g[best][u]) {
                ++weight[u];
            }
        }
    }
    for (std::size_t v : order) {
        std::vector<std::size_t> earlier;
        for (std::size_t u = 0; u < n; ++u) {
            if (g[v][u] && position[u] < position[v]) {
                earlier.push_back(u);
            }
        }
        if (earlier.empty()) {
            continue;
        }
        const std::size_t last = *std::max_element(earlier.begin(), earlier.end(),
                                                   [&position](std::size_t a, std::size_t b) { return position[a] < position[b]; });
        for (std::size_t u : earlier) {
            if (u != last && !g[u][last]) {
                return false;
            }
        }
    }
    return true;
}

// A(k,E) A(E,E)^+ A(E,l) with Eigen's complete orthogonal decomposition.
inline Matrix oracle_central(const Matrix& a, std::size_t p, Eigen::Index k, std::size_t row, std::size_t col) {
    std::vector<Eigen::Index> e;
    for (std::size_t i = 0; i < p; ++i) {
        if (i != row && i != col) {
            e.push_back(static_cast<Eigen::Index>(i));
        }
    }
    if (e.empty()) {
        return Matrix::Zero(k, k);
    }
    const auto ne = static_cast<Eigen::Index>(e.size());
    Matrix aee(ne * k, ne * k), are(k, ne * k), aec(ne * k, k);
    for (Eigen::Index i = 0; i < ne; ++i) {
        are.block(0, i * k, k, k) = a.block(static_cast<Eigen::Index>(row) * k, e[static_cast<std::size_t>(i)] * k, k, k);
        aec.block(i * k, 0, k, k) = a.block(e[static_cast<std::size_t>(i)] * k, static_cast<Eigen::Index>(col) * k, k, k);
        for (Eigen::Index j = 0; j < ne; ++j) {
            aee.block(i * k, j * k, k, k) = a.block(e[static_cast<std::size_t>(i)] * k, e[static_cast<std::size_t>(j)] * k, k, k);
        }
    }
    return are * oracle_pinv(aee) * aec;
}

// Largest coefficient error of p - sum_{s,t} B_s* B_t X(s^-1 t), recomputed
// straight from the factor blocks.
inline double oracle_residual(const NcPolynomial& p, const SosCertificate& cert) {
    std::map<Word, Matrix> acc;
    for (std::size_t i = 0; i < cert.index.size(); ++i) {
        for (std::size_t j = 0; j < cert.index.size(); ++j) {
            const Word x = mul(cert.index[i].inverse(), cert.index[j]);
            const Matrix term = cert.block(i).adjoint() * cert.block(j);
            auto [it, fresh] = acc.emplace(x, term);
            if (!fresh) {
                it->second += term;
            }
        }
    }
    double worst = 0.0;
    for (const auto& [x, a] : acc) {
        worst = std::max(worst, max_abs(a - p.coefficient(x)));
    }
    for (const auto& [x, a] : p.terms()) {
        if (!acc.count(x)) {
            worst = std::max(worst, max_abs(a));
        }
    }
    return worst;
}

} // namespace freepd::testing

#pragma once

#include <cstddef>
#include <vector>

#include "freepd/pdfun.hpp"

namespace freepd {

/// Values Phi(a_1), ..., Phi(a_m) of a quasi-multiplicative function; each must
/// have operator norm at most 1.
class GeneratorAssignment {
public:
    GeneratorAssignment(GroupContext ctx, std::size_t k, std::vector<Matrix> values);

    /// Phi(a_i) = r I for every generator.
    static GeneratorAssignment scalar(const GroupContext& ctx, std::size_t k, double r);

    const GroupContext& context() const noexcept { return ctx_; }
    std::size_t k() const noexcept { return k_; }
    const Matrix& at(int generator) const { return values_.at(static_cast<std::size_t>(generator - 1)); }

private:
    GroupContext ctx_;
    std::size_t k_;
    std::vector<Matrix> values_;
};

/// Product of Phi(a_i) (a_i^{-1} contributes Phi(a_i)*) over the letters of s.
Matrix quasi_mult(const GeneratorAssignment& g, const Word& s);

/// quasi_mult sampled on S_n.
PdFunction quasi_mult_function(const GeneratorAssignment& g, std::size_t n);

/// s -> exp(-t |s|) I_k on S_n. Requires t > 0.
PdFunction haagerup(const GroupContext& ctx, std::size_t k, double t, std::size_t n);

} // namespace freepd

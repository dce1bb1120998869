#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "freepd/completion.hpp"
#include "freepd/pdfun.hpp"

namespace freepd {

/// Chooses the contraction for step nu. The returned matrix must be
/// defect_row.rows() x defect_col.rows(); a norm in (1, 1 + 1e-9] is scaled
/// back to 1, anything larger is a MathError.
using ParamOracle = std::function<Matrix(const ClassCursor& nu, const DefectData& defects)>;

/// gamma = 0 at every step (central extension).
ParamOracle zero_oracle();

struct ParamEntry {
    ClassCursor nu;
    ContractionParam gamma;
};

/// Looks up gamma by class; a missing class is an InputError.
ParamOracle table_oracle(std::vector<ParamEntry> params);

/// Seeded random contractions: a complex Gaussian matrix rescaled to operator
/// norm u with u uniform in [0, radius). radius must lie in (0, 1].
ParamOracle random_oracle(std::uint64_t seed, double radius = 1.0);

/// The completion problem of step nu: A(phi; C_nu) with the (e, s_nu) entry
/// missing. phi must be defined on every other difference of C_nu.
struct StepProblem {
    std::vector<Word> clique;
    PartialBlockMatrix matrix;
};

StepProblem step_problem(const PdFunction& phi, const ClassCursor& nu);

struct ExtensionStep {
    ClassCursor nu;
    std::vector<Word> clique;
    Matrix central_entry;
    Matrix gamma;
    Matrix value; ///< phi(s_nu)
};

struct ExtensionTrace {
    std::vector<ExtensionStep> steps;
};

/// phi lives on the order ideal ending just before nu; the result also covers nu.
PdFunction extend_one(const PdFunction& phi, const ClassCursor& nu, const ContractionParam& gamma,
                      const Tolerance& tol = {});

struct Extension {
    PdFunction function;
    ExtensionTrace trace;
};

/// Extends phi class by class up to the last class of S_N.
Extension extend_to_ball(const PdFunction& phi, std::size_t n_target, const ParamOracle& oracle,
                         const Tolerance& tol = {});

/// Re-runs the recorded steps on phi, reusing the recorded gammas.
PdFunction replay(const PdFunction& phi, const ExtensionTrace& trace, const Tolerance& tol = {});

/// The contractions of every class nu with n < |nu| <= radius(Phi).
std::vector<ParamEntry> extract_params(const PdFunction& phi, std::size_t n, const Tolerance& tol = {});

struct OrthogonalityReport {
    bool holds = true;
    double worst_violation = 0.0;
    Word worst_word; ///< the t with the largest violation
};

/// For each class representative t of length n + 1, with Sigma = sigma_set(e, t, n):
/// the residuals of omega_e and omega_t after projection onto span{omega_r : r in Sigma}
/// must be orthogonal (norm of the inner product <= ortho_tol).
OrthogonalityReport check_max_orthogonal(const PdFunction& phi, std::size_t n, const Tolerance& tol = {},
                                         double ortho_tol = 1e-8);

} // namespace freepd

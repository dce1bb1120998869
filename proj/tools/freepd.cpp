#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freepd/error.hpp"
#include "freepd/extend.hpp"
#include "freepd/io.hpp"
#include "freepd/ncpoly.hpp"
#include "freepd/pdfun.hpp"
#include "freepd/quasimult.hpp"

using namespace freepd;
using io::Json;

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string trace_path;
    std::string params_path;
    std::vector<int> order;
    int m = 2;
    std::size_t k = 1;
    std::size_t to = 0;
    std::size_t n = 0;
    bool has_n = false;
    bool central = false;
    std::optional<std::uint64_t> random_seed;
    double radius = 1.0;
    double psd_eps = 1e-10;
    double ortho_tol = 1e-8;
    double sos_tol = 1e-8;
    double t = 1.0;
    std::size_t max_iter = 20000;
    std::size_t trials = 200;
    std::size_t d_max = 4;
    std::uint64_t seed = 1;
};

// Exit 1 with a JSON diagnostic.
struct MathFailure {
    Json diagnostic;
};

void emit(const Options& o, const Json& j) {
    if (o.output.empty()) {
        std::cout << io::dump(j);
    } else {
        io::write_file(o.output, j);
    }
}

Tolerance tolerance(const Options& o) {
    Tolerance tol;
    tol.psd_eps = o.psd_eps;
    tol.validate();
    return tol;
}

PdFunction load_function(const Options& o) {
    PdFunction phi = io::pdfun_from_json(io::read_file(o.input));
    if (!o.order.empty()) {
        phi = phi.with_order(GroupContext(phi.context().generators(), o.order));
    }
    return phi;
}

Json words_json(const std::vector<Word>& ws) {
    Json out = Json::array();
    for (const Word& w : ws) {
        out.push_back(io::word_to_json(w));
    }
    return out;
}

int cmd_verify(const Options& o) {
    const PdFunction phi = load_function(o);
    const PdVerdict v = verify_pd(phi, tolerance(o), o.has_n ? std::optional<std::size_t>(o.n) : std::nullopt);
    Json j{{"positive", v.positive}, {"min_eigenvalue", v.min_eigenvalue}, {"witness", words_json(v.witness)}};
    if (!v.positive) {
        throw MathFailure{Json{{"error", "not positive definite"}, {"witness", words_json(v.witness)}, {"min_eigenvalue", v.min_eigenvalue}}};
    }
    emit(o, j);
    return 0;
}

int cmd_extend(const Options& o) {
    const PdFunction phi = load_function(o);
    const int choices = (o.central ? 1 : 0) + (o.params_path.empty() ? 0 : 1) + (o.random_seed ? 1 : 0);
    if (choices > 1) {
        throw InputError("choose one of --central, --params, --random");
    }
    ParamOracle oracle = zero_oracle();
    if (!o.params_path.empty()) {
        oracle = table_oracle(io::params_from_json(io::read_file(o.params_path), phi.context()));
    } else if (o.random_seed) {
        oracle = random_oracle(*o.random_seed, o.radius);
    }
    const Extension ext = extend_to_ball(phi, o.to, oracle, tolerance(o));
    if (!o.trace_path.empty()) {
        io::write_file(o.trace_path, io::trace_to_json(ext.trace, phi.context(), phi.k()));
    }
    emit(o, io::to_json(ext.function));
    return 0;
}

int cmd_params(const Options& o) {
    const PdFunction phi = load_function(o);
    if (!o.has_n) {
        throw InputError("params needs --n (radius of the base ball)");
    }
    emit(o, io::params_to_json(extract_params(phi, o.n, tolerance(o)), phi.context()));
    return 0;
}

int cmd_check_ortho(const Options& o) {
    const PdFunction phi = load_function(o);
    if (!o.has_n) {
        throw InputError("check-ortho needs --n");
    }
    const OrthogonalityReport r = check_max_orthogonal(phi, o.n, tolerance(o), o.ortho_tol);
    Json j{{"holds", r.holds}, {"worst_violation", r.worst_violation}, {"worst_word", io::word_to_json(r.worst_word)}};
    if (!r.holds) {
        throw MathFailure{Json{{"error", "not maximal orthogonal"}, {"worst_violation", r.worst_violation}, {"worst_word", io::word_to_json(r.worst_word)}}};
    }
    emit(o, j);
    return 0;
}

int cmd_haagerup(const Options& o) {
    const GroupContext ctx = o.order.empty() ? GroupContext(o.m) : GroupContext(o.m, o.order);
    if (!o.has_n) {
        throw InputError("haagerup needs --n");
    }
    emit(o, io::to_json(haagerup(ctx, o.k, o.t, o.n)));
    return 0;
}

int cmd_radialize(const Options& o) {
    emit(o, io::to_json(radialize(load_function(o))));
    return 0;
}

int cmd_factor(const Options& o) {
    const NcPolynomial p = io::ncpoly_from_json(io::read_file(o.input));
    SosOptions opts;
    opts.tol = o.sos_tol;
    opts.max_iter = o.max_iter;
    const SosResult r = factor_sos(p, opts);
    if (const auto* rep = std::get_if<InfeasibleReport>(&r)) {
        throw MathFailure{Json{{"error", "no sum-of-squares certificate found"},
                               {"gap", rep->gap},
                               {"residual", rep->residual},
                               {"iterations", rep->iterations},
                               {"index_degree", rep->index_degree}}};
    }
    emit(o, io::cert_to_json(std::get<SosCertificate>(r)));
    return 0;
}

int cmd_sample(const Options& o) {
    const NcPolynomial p = io::ncpoly_from_json(io::read_file(o.input));
    const SampleReport r = sample_positivity(p, o.trials, o.d_max, o.seed);
    emit(o, Json{{"min_eigenvalue", r.min_eigenvalue}, {"trial", r.trial}, {"dimension", r.dimension}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive definite functions on free groups: extension, verification, factorization"};
    app.require_subcommand(1);
    Options o;

    auto add_io = [&o](CLI::App* sub, bool input) {
        if (input) {
            sub->add_option("-i,--input", o.input, "input JSON file")->required();
        }
        sub->add_option("-o,--output", o.output, "output JSON file (default: stdout)");
    };
    auto add_tol = [&o](CLI::App* sub) { sub->add_option("--tol", o.psd_eps, "relative PSD eigenvalue floor"); };
    auto add_order = [&o](CLI::App* sub) { sub->add_option("--order", o.order, "letter order, e.g. 2 -2 1 -1"); };
    auto add_n = [&o](CLI::App* sub, const char* help) {
        sub->add_option_function<std::size_t>("--n", [&o](std::size_t v) { o.n = v; o.has_n = true; }, help);
    };

    CLI::App* verify = app.add_subcommand("verify", "check positive definiteness on a ball");
    add_io(verify, true);
    add_tol(verify);
    add_order(verify);
    add_n(verify, "ball radius to check (default: domain radius)");

    CLI::App* extend = app.add_subcommand("extend", "extend a function to a larger ball");
    add_io(extend, true);
    add_tol(extend);
    add_order(extend);
    extend->add_option("--to", o.to, "target ball radius")->required();
    extend->add_flag("--central", o.central, "central extension (all parameters zero; default)");
    extend->add_option("--params", o.params_path, "params.v1 file with one contraction per class");
    extend->add_option("--random", o.random_seed, "seed for random contractions");
    extend->add_option("--radius", o.radius, "norm bound of random contractions, in (0, 1]");
    extend->add_option("--trace", o.trace_path, "write the trace.v1 audit file here");

    CLI::App* params = app.add_subcommand("params", "extract the contractions of an extension");
    add_io(params, true);
    add_tol(params);
    add_order(params);
    add_n(params, "radius of the base ball");

    CLI::App* ortho = app.add_subcommand("check-ortho", "check maximal n+1 orthogonality");
    add_io(ortho, true);
    add_tol(ortho);
    add_order(ortho);
    add_n(ortho, "level n");
    ortho->add_option("--ortho-tol", o.ortho_tol, "allowed inner product of residuals");

    CLI::App* haag = app.add_subcommand("haagerup", "write s -> exp(-t|s|) I on a ball");
    add_io(haag, false);
    add_order(haag);
    haag->add_option("--m", o.m, "number of generators");
    haag->add_option("--k", o.k, "block size");
    haag->add_option("--t", o.t, "decay rate, t > 0");
    add_n(haag, "ball radius");

    CLI::App* radial = app.add_subcommand("radialize", "average over spheres");
    add_io(radial, true);
    add_order(radial);

    CLI::App* factor = app.add_subcommand("factor", "sum-of-squares factorization of a polynomial");
    add_io(factor, true);
    factor->add_option("--tol", o.sos_tol, "largest allowed coefficient error");
    factor->add_option("--max-iter", o.max_iter, "alternating projection iterations");

    CLI::App* sample = app.add_subcommand("sample", "minimum eigenvalue over random unitary substitutions");
    add_io(sample, true);
    sample->add_option("--trials", o.trials, "number of random tuples");
    sample->add_option("--d-max", o.d_max, "largest unitary size");
    sample->add_option("--seed", o.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) return cmd_verify(o);
        if (*extend) return cmd_extend(o);
        if (*params) return cmd_params(o);
        if (*ortho) return cmd_check_ortho(o);
        if (*haag) return cmd_haagerup(o);
        if (*radial) return cmd_radialize(o);
        if (*factor) return cmd_factor(o);
        if (*sample) return cmd_sample(o);
    } catch (const MathFailure& f) {
        std::cerr << f.diagnostic.dump() << "\n";
        return 1;
    } catch (const NotPositiveError& e) {
        std::cerr << Json{{"error", e.what()}, {"witness", e.witness()}, {"min_eigenvalue", e.min_eigenvalue()}}.dump() << "\n";
        return 1;
    } catch (const MathError& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << Json{{"error", e.what()}, {"kind", "malformed input"}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }
    return 2;
}

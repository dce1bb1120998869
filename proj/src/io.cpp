#include "freepd/io.hpp"

#include <fstream>
#include <sstream>

#include "freepd/error.hpp"

namespace freepd::io {

namespace {

using Index = Eigen::Index;

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

void expect_schema(const Json& j, const char* schema) {
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != schema) {
        throw InputError(std::string("expected a ") + schema + " document");
    }
}

Matrix shaped_matrix(const Json& j, const Json& shape) {
    const auto rows = shape.at(0).get<Index>();
    const auto cols = shape.at(1).get<Index>();
    if (rows < 0 || cols < 0) {
        throw InputError("negative matrix shape");
    }
    if (rows == 0 || cols == 0) {
        if (!j.is_array() || !(j.empty() || rows == 0)) {
            throw InputError("matrix data does not match its shape");
        }
        return Matrix(rows, cols);
    }
    Matrix m = matrix_from_json(j);
    if (m.rows() != rows || m.cols() != cols) {
        throw InputError("matrix data does not match its shape");
    }
    return m;
}

} // namespace

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    return guarded("matrix", [&] {
        if (!j.is_array()) {
            throw InputError("matrix must be an array of rows");
        }
        const auto rows = static_cast<Index>(j.size());
        const Index cols = rows == 0 ? 0 : static_cast<Index>(j.at(0).size());
        Matrix m(rows, cols);
        for (Index r = 0; r < rows; ++r) {
            const Json& row = j.at(static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
                throw InputError("matrix rows have different lengths");
            }
            for (Index c = 0; c < cols; ++c) {
                const Json& z = row.at(static_cast<std::size_t>(c));
                if (z.is_number()) {
                    m(r, c) = Complex(z.get<double>(), 0.0);
                } else if (z.is_array() && z.size() == 2 && z.at(0).is_number() && z.at(1).is_number()) {
                    m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
                } else {
                    throw InputError("matrix entry must be a number or [re, im]");
                }
            }
        }
        return m;
    });
}

Json word_to_json(const Word& w) {
    return Json(w.letters());
}

Word word_from_json(const Json& j) {
    return guarded("word", [&] {
        if (!j.is_array()) {
            throw InputError("word must be an array of signed generator indices");
        }
        std::vector<int> letters;
        for (const Json& x : j) {
            if (!x.is_number_integer()) {
                throw InputError("word letters must be integers");
            }
            letters.push_back(x.get<int>());
        }
        return Word(letters);
    });
}

Json context_to_json(const GroupContext& ctx) {
    return Json{{"m", ctx.generators()}, {"order", ctx.letter_order()}};
}

GroupContext context_from_json(const Json& j) {
    return guarded("group context", [&] {
        const int m = j.at("m").get<int>();
        if (m < 1) {
            throw InputError("m must be at least 1");
        }
        if (j.contains("order")) {
            return GroupContext(m, j.at("order").get<std::vector<int>>());
        }
        return GroupContext(m);
    });
}

Json to_json(const PdFunction& phi) {
    Json j{{"schema", "pdfun.v1"}};
    j.update(context_to_json(phi.context()));
    j["k"] = phi.k();
    if (phi.domain().is_ball()) {
        j["domain"] = Json{{"kind", "ball"}, {"radius", phi.domain().radius()}};
    } else {
        j["domain"] = Json{{"kind", "order_ideal"}, {"cutoff", word_to_json(phi.domain().cutoff().rep())}};
    }
    Json entries = Json::array();
    for (const auto& [w, v] : phi.entries()) {
        entries.push_back(Json{{"word", word_to_json(w)}, {"value", matrix_to_json(v)}});
    }
    j["entries"] = std::move(entries);
    return j;
}

PdFunction pdfun_from_json(const Json& j) {
    return guarded("pdfun.v1", [&] {
        expect_schema(j, "pdfun.v1");
        const GroupContext ctx = context_from_json(j);
        const auto k = j.at("k").get<std::size_t>();
        const Json& dom = j.at("domain");
        const std::string kind = dom.at("kind").get<std::string>();
        std::optional<Domain> domain;
        if (kind == "ball") {
            domain = Domain::ball(ctx, dom.at("radius").get<std::size_t>());
        } else if (kind == "order_ideal") {
            domain = Domain::order_ideal(ClassCursor(ctx, word_from_json(dom.at("cutoff"))));
        } else {
            throw InputError("unknown domain kind '" + kind + "'");
        }
        std::vector<std::pair<Word, Matrix>> values;
        for (const Json& e : j.at("entries")) {
            values.emplace_back(word_from_json(e.at("word")), matrix_from_json(e.at("value")));
        }
        return PdFunction(ctx, k, *domain, values);
    });
}

Json to_json(const NcPolynomial& p) {
    Json j{{"schema", "ncpoly.v1"}};
    j.update(context_to_json(p.context()));
    j["c"] = p.c();
    std::vector<std::pair<Word, Matrix>> terms(p.terms().begin(), p.terms().end());
    std::sort(terms.begin(), terms.end(), [&p](const auto& a, const auto& b) { return lex_less(a.first, b.first, p.context()); });
    Json out = Json::array();
    for (const auto& [w, a] : terms) {
        out.push_back(Json{{"word", word_to_json(w)}, {"value", matrix_to_json(a)}});
    }
    j["terms"] = std::move(out);
    return j;
}

NcPolynomial ncpoly_from_json(const Json& j) {
    return guarded("ncpoly.v1", [&] {
        if (j.contains("schema")) {
            expect_schema(j, "ncpoly.v1");
        }
        const GroupContext ctx = context_from_json(j);
        const auto c = j.at("c").get<std::size_t>();
        std::map<Word, Matrix> terms;
        for (const Json& t : j.at("terms")) {
            const Word w = word_from_json(t.at("word"));
            Matrix a = matrix_from_json(t.at("value"));
            auto [it, inserted] = terms.emplace(w, a);
            if (!inserted) {
                if (it->second.rows() != a.rows() || it->second.cols() != a.cols()) {
                    throw InputError("repeated term " + w.str() + " with different shapes");
                }
                it->second += a;
            }
        }
        return NcPolynomial(ctx, c, std::move(terms));
    });
}

Json trace_to_json(const ExtensionTrace& trace, const GroupContext& ctx, std::size_t k) {
    Json j{{"schema", "trace.v1"}};
    j.update(context_to_json(ctx));
    j["k"] = k;
    Json steps = Json::array();
    for (const ExtensionStep& s : trace.steps) {
        Json clique = Json::array();
        for (const Word& w : s.clique) {
            clique.push_back(word_to_json(w));
        }
        steps.push_back(Json{{"class", word_to_json(s.nu.rep())},
                             {"clique", std::move(clique)},
                             {"central", matrix_to_json(s.central_entry)},
                             {"gamma_shape", {s.gamma.rows(), s.gamma.cols()}},
                             {"gamma", matrix_to_json(s.gamma)},
                             {"value", matrix_to_json(s.value)}});
    }
    j["steps"] = std::move(steps);
    return j;
}

ExtensionTrace trace_from_json(const Json& j) {
    return guarded("trace.v1", [&] {
        expect_schema(j, "trace.v1");
        const GroupContext ctx = context_from_json(j);
        ExtensionTrace t;
        for (const Json& s : j.at("steps")) {
            std::vector<Word> clique;
            for (const Json& w : s.at("clique")) {
                clique.push_back(word_from_json(w));
            }
            t.steps.push_back(ExtensionStep{ClassCursor(ctx, word_from_json(s.at("class"))), std::move(clique),
                                            matrix_from_json(s.at("central")), shaped_matrix(s.at("gamma"), s.at("gamma_shape")),
                                            matrix_from_json(s.at("value"))});
        }
        return t;
    });
}

Json params_to_json(const std::vector<ParamEntry>& params, const GroupContext& ctx) {
    Json j{{"schema", "params.v1"}};
    j.update(context_to_json(ctx));
    Json list = Json::array();
    for (const ParamEntry& p : params) {
        list.push_back(Json{{"class", word_to_json(p.nu.rep())},
                            {"shape", {p.gamma.rows(), p.gamma.cols()}},
                            {"gamma", matrix_to_json(p.gamma.matrix())}});
    }
    j["params"] = std::move(list);
    return j;
}

std::vector<ParamEntry> params_from_json(const Json& j, const GroupContext& ctx) {
    return guarded("params.v1", [&] {
        expect_schema(j, "params.v1");
        if (!(context_from_json(j) == ctx)) {
            throw InputError("parameters were written for a different group context");
        }
        std::vector<ParamEntry> out;
        for (const Json& p : j.at("params")) {
            out.push_back({ClassCursor(ctx, word_from_json(p.at("class"))), ContractionParam(shaped_matrix(p.at("gamma"), p.at("shape")))});
        }
        return out;
    });
}

Json cert_to_json(const SosCertificate& cert) {
    Json j{{"schema", "cert.v1"}};
    j.update(context_to_json(cert.ctx));
    j["c"] = cert.c;
    j["rank"] = cert.factor.rows();
    j["residual"] = cert.residual;
    j["iterations"] = cert.iterations;
    j["polished"] = cert.polished;
    Json index = Json::array();
    Json factors = Json::array();
    for (std::size_t i = 0; i < cert.index.size(); ++i) {
        index.push_back(word_to_json(cert.index[i]));
        factors.push_back(Json{{"word", word_to_json(cert.index[i])}, {"block", matrix_to_json(cert.block(i))}});
    }
    j["index"] = std::move(index);
    j["gram"] = matrix_to_json(cert.gram);
    j["factors"] = std::move(factors);
    return j;
}

SosCertificate cert_from_json(const Json& j) {
    return guarded("cert.v1", [&] {
        expect_schema(j, "cert.v1");
        SosCertificate cert{context_from_json(j), j.at("c").get<std::size_t>(), {}, {}, {}, j.at("residual").get<double>(),
                            j.at("iterations").get<std::size_t>(), j.at("polished").get<bool>()};
        const auto rank = j.at("rank").get<Index>();
        const auto cc = static_cast<Index>(cert.c);
        const Json& factors = j.at("factors");
        cert.factor = Matrix(rank, static_cast<Index>(factors.size()) * cc);
        Index col = 0;
        for (const Json& f : factors) {
            cert.index.push_back(word_from_json(f.at("word")));
            cert.factor.middleCols(col, cc) = shaped_matrix(f.at("block"), Json::array({rank, cc}));
            col += cc;
        }
        cert.gram = matrix_from_json(j.at("gram"));
        if (cert.gram.rows() != cert.factor.cols() || cert.gram.cols() != cert.factor.cols()) {
            throw InputError("gram matrix does not match the factor blocks");
        }
        return cert;
    });
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string dump(const Json& j) {
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << dump(j);
}

} // namespace freepd::io

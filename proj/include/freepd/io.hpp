#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "freepd/extend.hpp"
#include "freepd/ncpoly.hpp"
#include "freepd/pdfun.hpp"

namespace freepd::io {

using Json = nlohmann::ordered_json;

// Matrices are arrays of rows; each entry is [re, im].
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json word_to_json(const Word& w);
Word word_from_json(const Json& j);

Json context_to_json(const GroupContext& ctx);
/// Reads "m" and the optional "order".
GroupContext context_from_json(const Json& j);

/// pdfun.v1
Json to_json(const PdFunction& phi);
PdFunction pdfun_from_json(const Json& j);

/// ncpoly.v1
Json to_json(const NcPolynomial& p);
NcPolynomial ncpoly_from_json(const Json& j);

/// trace.v1
Json trace_to_json(const ExtensionTrace& trace, const GroupContext& ctx, std::size_t k);
ExtensionTrace trace_from_json(const Json& j);

/// params.v1
Json params_to_json(const std::vector<ParamEntry>& params, const GroupContext& ctx);
std::vector<ParamEntry> params_from_json(const Json& j, const GroupContext& ctx);

/// cert.v1
Json cert_to_json(const SosCertificate& cert);
SosCertificate cert_from_json(const Json& j);

/// All readers throw InputError on malformed input.
Json read_file(const std::string& path);
/// Two-space indentation and a trailing newline.
void write_file(const std::string& path, const Json& j);
std::string dump(const Json& j);

} // namespace freepd::io

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <qpc/states.hpp>

namespace qpc::io {

// Insertion-ordered JSON so serialized documents have a stable field order.
using Json = nlohmann::ordered_json;

enum class DocKind { Density, Bipartite, Ensemble, Channel, Pure };

const char* doc_kind_name(DocKind kind);
DocKind doc_kind_from(const std::string& name);

// One parsed (or about-to-be-serialized) state document. Which payload
// fields are meaningful depends on `kind`:
//   density    dims=[d]       matrix
//   bipartite  dims=[n_a,n_b] matrix, optional basis_a
//   ensemble   dims=[d,n]     matrices (n of them), priors
//   channel    dims=[d,k]     matrices (k Kraus operators)
//   pure       dims=[d]       vector
struct StateDocument {
  std::string schema_version = "1";
  DocKind kind = DocKind::Density;
  std::vector<int> dims;
  Mat matrix;
  std::optional<Mat> basis_a;
  std::vector<Mat> matrices;
  std::vector<double> priors;
  Vec vector;
};

// Parsing. Failures throw SyntaxError (malformed JSON) or SchemaError
// (wrong structure); messages carry a JSON-pointer-style path to the
// offending element. Structural invariants of the payload itself
// (trace, PSD-ness, prior sums, ...) are checked by the typed
// converters below, which defer to the states-module constructors.
StateDocument parse_document(const std::string& bytes);
StateDocument document_from_json(const Json& j);

Json document_to_json(const StateDocument& doc);
std::string serialize_document(const StateDocument& doc);

// Typed views. Each validates via the corresponding states constructor,
// so e.g. a trace-0.9 density document fails with TraceNotOneError here.
DensityMatrix as_density(const StateDocument& doc);
BipartiteState as_bipartite(const StateDocument& doc);
Ensemble as_ensemble(const StateDocument& doc);
KrausChannel as_channel(const StateDocument& doc);
Vec as_pure(const StateDocument& doc);

StateDocument document_from_density(const DensityMatrix& rho);
StateDocument document_from_bipartite(const BipartiteState& rho);
StateDocument document_from_ensemble(const Ensemble& ensemble);
StateDocument document_from_channel(const KrausChannel& channel);
StateDocument document_from_pure(const Vec& psi);

// Shared encoding helpers. Complex scalars become [re, im]; matrices
// become row-major nested arrays of those pairs. Doubles survive a
// dump/parse cycle bit-exactly (shortest-round-trip decimal).
Json complex_to_json(const cplx& z);
Json matrix_to_json(const Mat& m);
Json vector_to_json(const Vec& v);
Mat matrix_from_json(const Json& j, const std::string& path);
Vec vector_from_json(const Json& j, const std::string& path);

// FNV-1a over raw bytes; `digest_hex` renders "fnv1a:<16 hex digits>".
std::uint64_t fnv1a(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

}  // namespace qpc::io

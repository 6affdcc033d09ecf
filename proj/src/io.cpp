#include <qpc/io.hpp>

#include <array>
#include <utility>

#include <qpc/errors.hpp>

namespace qpc::io {

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

const Json& require_field(const Json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end())
    schema_fail(path + "/" + key, std::string("missing field '") + key + "'");
  return *it;
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

cplx complex_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    schema_fail(path, "expected a [re, im] pair");
  return {number_at(j[0], path + "/0"), number_at(j[1], path + "/1")};
}

int count_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 1 || v > 1'000'000) schema_fail(path, "count out of range");
  return static_cast<int>(v);
}

std::vector<Mat> matrices_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of matrices");
  std::vector<Mat> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(matrix_from_json(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

Json matrices_to_json(const std::vector<Mat>& ms) {
  Json out = Json::array();
  for (const Mat& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

}  // namespace

const char* doc_kind_name(DocKind kind) {
  switch (kind) {
    case DocKind::Density: return "density";
    case DocKind::Bipartite: return "bipartite";
    case DocKind::Ensemble: return "ensemble";
    case DocKind::Channel: return "channel";
    case DocKind::Pure: return "pure";
  }
  throw ValidationError("unknown document kind");
}

DocKind doc_kind_from(const std::string& name) {
  static constexpr std::array<std::pair<const char*, DocKind>, 5> table{{
      {"density", DocKind::Density},
      {"bipartite", DocKind::Bipartite},
      {"ensemble", DocKind::Ensemble},
      {"channel", DocKind::Channel},
      {"pure", DocKind::Pure},
  }};
  for (const auto& [key, kind] : table) {
    if (name == key) return kind;
  }
  throw SchemaError("/kind: unknown kind '" + name + "'");
}

Json complex_to_json(const cplx& z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Mat matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_fail(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  const Json& first = j[0];
  if (!first.is_array() || first.empty())
    schema_fail(path + "/0", "expected a non-empty row");
  const std::size_t cols = first.size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "/" + std::to_string(r);
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      schema_fail(row_path, "ragged row (expected " + std::to_string(cols) + " entries)");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_at(row[c], row_path + "/" + std::to_string(c));
    }
  }
  return m;
}

Vec vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_fail(path, "expected a non-empty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_at(j[i], path + "/" + std::to_string(i));
  }
  return v;
}

StateDocument parse_document(const std::string& bytes) {
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what());
  }
  return document_from_json(j);
}

StateDocument document_from_json(const Json& j) {
  if (!j.is_object()) schema_fail("", "document must be a JSON object");

  StateDocument doc;
  const Json& version = require_field(j, "schema_version", "");
  if (!version.is_string()) schema_fail("/schema_version", "expected a string");
  doc.schema_version = version.get<std::string>();
  if (doc.schema_version != "1")
    schema_fail("/schema_version", "unsupported version '" + doc.schema_version + "'");

  const Json& kind = require_field(j, "kind", "");
  if (!kind.is_string()) schema_fail("/kind", "expected a string");
  doc.kind = doc_kind_from(kind.get<std::string>());

  const Json& dims = require_field(j, "dims", "");
  if (!dims.is_array() || dims.empty()) schema_fail("/dims", "expected a non-empty array");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    doc.dims.push_back(count_at(dims[i], "/dims/" + std::to_string(i)));
  }

  const std::size_t expected_dims =
      (doc.kind == DocKind::Density || doc.kind == DocKind::Pure) ? 1 : 2;
  if (doc.dims.size() != expected_dims)
    schema_fail("/dims", "expected " + std::to_string(expected_dims) + " entries for kind '" +
                             doc_kind_name(doc.kind) + "'");

  const Json& data = require_field(j, "data", "");
  switch (doc.kind) {
    case DocKind::Density: {
      doc.matrix = matrix_from_json(data, "/data");
      if (doc.matrix.rows() != doc.dims[0] || doc.matrix.cols() != doc.dims[0])
        schema_fail("/data", "matrix shape does not match dims");
      break;
    }
    case DocKind::Bipartite: {
      doc.matrix = matrix_from_json(data, "/data");
      const Eigen::Index d = static_cast<Eigen::Index>(doc.dims[0]) * doc.dims[1];
      if (doc.matrix.rows() != d || doc.matrix.cols() != d)
        schema_fail("/data", "matrix shape does not match dims product");
      if (auto it = j.find("basis_a"); it != j.end() && !it->is_null()) {
        Mat b = matrix_from_json(*it, "/basis_a");
        if (b.rows() != doc.dims[0] || b.cols() != doc.dims[0])
          schema_fail("/basis_a", "basis shape does not match dims[0]");
        doc.basis_a = std::move(b);
      }
      break;
    }
    case DocKind::Ensemble: {
      doc.matrices = matrices_from_json(data, "/data");
      if (doc.matrices.size() != static_cast<std::size_t>(doc.dims[1]))
        schema_fail("/data", "member count does not match dims[1]");
      for (std::size_t i = 0; i < doc.matrices.size(); ++i) {
        if (doc.matrices[i].rows() != doc.dims[0] || doc.matrices[i].cols() != doc.dims[0])
          schema_fail("/data/" + std::to_string(i), "matrix shape does not match dims[0]");
      }
      const Json& priors = require_field(j, "priors", "");
      if (!priors.is_array() || priors.size() != doc.matrices.size())
        schema_fail("/priors", "expected one prior per member");
      for (std::size_t i = 0; i < priors.size(); ++i) {
        doc.priors.push_back(number_at(priors[i], "/priors/" + std::to_string(i)));
      }
      break;
    }
    case DocKind::Channel: {
      doc.matrices = matrices_from_json(data, "/data");
      if (doc.matrices.size() != static_cast<std::size_t>(doc.dims[1]))
        schema_fail("/data", "operator count does not match dims[1]");
      for (std::size_t i = 0; i < doc.matrices.size(); ++i) {
        if (doc.matrices[i].rows() != doc.dims[0] || doc.matrices[i].cols() != doc.dims[0])
          schema_fail("/data/" + std::to_string(i), "operator shape does not match dims[0]");
      }
      break;
    }
    case DocKind::Pure: {
      doc.vector = vector_from_json(data, "/data");
      if (doc.vector.size() != doc.dims[0])
        schema_fail("/data", "vector length does not match dims[0]");
      break;
    }
  }
  return doc;
}

Json document_to_json(const StateDocument& doc) {
  Json j = Json::object();
  j["schema_version"] = doc.schema_version;
  j["kind"] = doc_kind_name(doc.kind);
  j["dims"] = doc.dims;
  switch (doc.kind) {
    case DocKind::Density:
      j["data"] = matrix_to_json(doc.matrix);
      break;
    case DocKind::Bipartite:
      j["data"] = matrix_to_json(doc.matrix);
      if (doc.basis_a) j["basis_a"] = matrix_to_json(*doc.basis_a);
      break;
    case DocKind::Ensemble:
      j["data"] = matrices_to_json(doc.matrices);
      j["priors"] = doc.priors;
      break;
    case DocKind::Channel:
      j["data"] = matrices_to_json(doc.matrices);
      break;
    case DocKind::Pure:
      j["data"] = vector_to_json(doc.vector);
      break;
  }
  return j;
}

std::string serialize_document(const StateDocument& doc) {
  return document_to_json(doc).dump();
}

DensityMatrix as_density(const StateDocument& doc) {
  if (doc.kind != DocKind::Density)
    throw SchemaError("/kind: expected 'density', got '" +
                      std::string(doc_kind_name(doc.kind)) + "'");
  return DensityMatrix(doc.matrix);
}

BipartiteState as_bipartite(const StateDocument& doc) {
  if (doc.kind != DocKind::Bipartite)
    throw SchemaError("/kind: expected 'bipartite', got '" +
                      std::string(doc_kind_name(doc.kind)) + "'");
  DensityMatrix rho(doc.matrix);
  if (doc.basis_a) return BipartiteState(doc.dims[0], doc.dims[1], rho, *doc.basis_a);
  return BipartiteState(doc.dims[0], doc.dims[1], rho);
}

Ensemble as_ensemble(const StateDocument& doc) {
  if (doc.kind != DocKind::Ensemble)
    throw SchemaError("/kind: expected 'ensemble', got '" +
                      std::string(doc_kind_name(doc.kind)) + "'");
  std::vector<Ensemble::Member> members;
  members.reserve(doc.matrices.size());
  for (std::size_t i = 0; i < doc.matrices.size(); ++i) {
    members.push_back({doc.priors[i], DensityMatrix(doc.matrices[i])});
  }
  return Ensemble(std::move(members));
}

KrausChannel as_channel(const StateDocument& doc) {
  if (doc.kind != DocKind::Channel)
    throw SchemaError("/kind: expected 'channel', got '" +
                      std::string(doc_kind_name(doc.kind)) + "'");
  return KrausChannel(doc.matrices);
}

Vec as_pure(const StateDocument& doc) {
  if (doc.kind != DocKind::Pure)
    throw SchemaError("/kind: expected 'pure', got '" +
                      std::string(doc_kind_name(doc.kind)) + "'");
  if (std::abs(doc.vector.norm() - 1.0) > 1e-10)
    throw NotNormalizedError("pure-state vector norm " + std::to_string(doc.vector.norm()));
  return doc.vector;
}

StateDocument document_from_density(const DensityMatrix& rho) {
  StateDocument doc;
  doc.kind = DocKind::Density;
  doc.dims = {rho.dim()};
  doc.matrix = rho.mat();
  return doc;
}

StateDocument document_from_bipartite(const BipartiteState& rho) {
  StateDocument doc;
  doc.kind = DocKind::Bipartite;
  doc.dims = {rho.n_a, rho.n_b};
  doc.matrix = rho.state.mat();
  if (!rho.basis_a.isIdentity(0.0)) doc.basis_a = rho.basis_a;
  return doc;
}

StateDocument document_from_ensemble(const Ensemble& ensemble) {
  StateDocument doc;
  doc.kind = DocKind::Ensemble;
  doc.dims = {ensemble.dim(), static_cast<int>(ensemble.members.size())};
  for (const auto& member : ensemble.members) {
    doc.matrices.push_back(member.state.mat());
    doc.priors.push_back(member.prior);
  }
  return doc;
}

StateDocument document_from_channel(const KrausChannel& channel) {
  StateDocument doc;
  doc.kind = DocKind::Channel;
  doc.dims = {channel.dim_in(), static_cast<int>(channel.operators.size())};
  doc.matrices = channel.operators;
  return doc;
}

StateDocument document_from_pure(const Vec& psi) {
  StateDocument doc;
  doc.kind = DocKind::Pure;
  doc.dims = {static_cast<int>(psi.size())};
  doc.vector = psi;
  return doc;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  static constexpr char hex[] = "0123456789abcdef";
  std::uint64_t h = fnv1a(bytes);
  std::string out = "fnv1a:";
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(hex[(h >> shift) & 0xF]);
  return out;
}

}  // namespace qpc::io

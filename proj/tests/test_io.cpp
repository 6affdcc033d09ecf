#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <qpc/errors.hpp>
#include <qpc/io.hpp>
#include <qpc/states.hpp>

#include "oracles.hpp"

using namespace qpc;

namespace {

std::string density_doc(double d00, double d11, double re01 = 0.0, double im01 = 0.0) {
  io::Json j;
  j["schema_version"] = "1";
  j["kind"] = "density";
  j["dims"] = io::Json::array({2});
  j["data"] = io::Json::array(
      {io::Json::array({io::Json::array({d00, 0.0}), io::Json::array({re01, im01})}),
       io::Json::array({io::Json::array({re01, -im01}), io::Json::array({d11, 0.0})})});
  return j.dump();
}

}  // namespace

TEST_CASE("a well-formed density document parses and validates") {
  const io::StateDocument doc = io::parse_document(density_doc(0.5, 0.5, 0.25));
  CHECK(doc.kind == io::DocKind::Density);
  const DensityMatrix rho = io::as_density(doc);
  CHECK(rho.dim() == 2);
  CHECK_NEAR(rho.mat()(0, 1).real(), 0.25, 1e-15);
}

TEST_CASE("structural validity is separate from physical validity") {
  // trace 0.9: the schema is fine, the typed view rejects it.
  const io::StateDocument doc = io::parse_document(density_doc(0.5, 0.4));
  CHECK_THROWS_AS(io::as_density(doc), TraceNotOneError);
}

TEST_CASE("ensemble priors are validated by the typed view") {
  io::Json j;
  j["schema_version"] = "1";
  j["kind"] = "ensemble";
  j["dims"] = io::Json::array({1, 2});
  const io::Json one = io::Json::array({io::Json::array({io::Json::array({1.0, 0.0})})});
  j["data"] = io::Json::array({one, one});
  j["priors"] = io::Json::array({0.5, 0.3});  // sums to 0.8
  const io::StateDocument doc = io::document_from_json(j);
  CHECK_THROWS_AS(io::as_ensemble(doc), PriorsSumError);
}

TEST_CASE("malformed JSON raises a syntax error") {
  CHECK_THROWS_AS(io::parse_document("{\"kind\": "), SyntaxError);
  CHECK_THROWS_AS(io::parse_document(""), SyntaxError);
}

TEST_CASE("schema errors point at the offending element") {
  io::Json j = io::Json::parse(density_doc(0.5, 0.5));

  io::Json no_dims = j;
  no_dims.erase("dims");
  try {
    io::document_from_json(no_dims);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("/dims") != std::string::npos);
  }

  io::Json ragged = j;
  ragged["data"][1] = io::Json::array({io::Json::array({0.5, 0.0})});
  try {
    io::document_from_json(ragged);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("/data/1") != std::string::npos);
  }

  io::Json bad_version = j;
  bad_version["schema_version"] = "2";
  CHECK_THROWS_AS(io::document_from_json(bad_version), SchemaError);

  io::Json bad_kind = j;
  bad_kind["kind"] = "mystery";
  CHECK_THROWS_AS(io::document_from_json(bad_kind), SchemaError);
}

TEST_CASE("typed views reject documents of the wrong kind") {
  const io::StateDocument doc = io::parse_document(density_doc(0.5, 0.5));
  CHECK_THROWS_AS(io::as_ensemble(doc), SchemaError);
  CHECK_THROWS_AS(io::as_channel(doc), SchemaError);
  CHECK_THROWS_AS(io::as_pure(doc), SchemaError);
}

TEST_CASE("tricky doubles survive the round trip bit-exactly") {
  const double values[] = {1.0 / 3.0, 0.1, -0.0, 1e-300, 1e300,
                           3.14159265358979323846, 0.7071067811865476};
  for (double v : values) {
    const io::Json packed = io::complex_to_json(cplx(v, -v));
    const io::Json reparsed = io::Json::parse(packed.dump());
    const double re = reparsed[0].get<double>();
    const double im = reparsed[1].get<double>();
    CHECK(std::signbit(re) == std::signbit(v));
    CHECK(re == v);
    CHECK(im == -v);
  }
}

TEST_CASE("documents round-trip through serialize and parse byte-exactly") {
  const DensityMatrix rho = random_density(3, 3, 71);
  const io::StateDocument doc = io::document_from_density(rho);
  const std::string once = io::serialize_document(doc);
  const std::string twice = io::serialize_document(io::parse_document(once));
  CHECK(once == twice);
}

TEST_CASE("document_from_* and as_* are mutual inverses") {
  const DensityMatrix rho = random_density(3, 2, 73);
  CHECK((io::as_density(io::document_from_density(rho)).mat() - rho.mat())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const BipartiteState bip(2, 2, random_density(4, 4, 74), random_unitary(2, 75));
  const BipartiteState back = io::as_bipartite(io::document_from_bipartite(bip));
  CHECK(back.n_a == 2);
  CHECK((back.state.mat() - bip.state.mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.basis_a - bip.basis_a).cwiseAbs().maxCoeff() == 0.0);

  std::vector<Ensemble::Member> m;
  m.push_back({0.6, random_density(2, 2, 76)});
  m.push_back({0.4, random_density(2, 1, 77)});
  const Ensemble e(m);
  const Ensemble eb = io::as_ensemble(io::document_from_ensemble(e));
  CHECK(eb.size() == 2);
  CHECK(eb.members[0].prior == 0.6);
  CHECK((eb.members[1].state.mat() - e.members[1].state.mat()).cwiseAbs().maxCoeff() ==
        0.0);

  const KrausChannel ch = random_channel(2, 3, 78);
  const KrausChannel chb = io::as_channel(io::document_from_channel(ch));
  REQUIRE(chb.operators.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK((chb.operators[i] - ch.operators[i]).cwiseAbs().maxCoeff() == 0.0);

  const Vec psi = random_pure(4, 79);
  CHECK((io::as_pure(io::document_from_pure(psi)) - psi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an identity local basis is omitted from bipartite documents") {
  const BipartiteState plain(2, 2, random_density(4, 4, 80));
  const io::Json j = io::document_to_json(io::document_from_bipartite(plain));
  CHECK_FALSE(j.contains("basis_a"));

  const BipartiteState rotated(2, 2, random_density(4, 4, 81), random_unitary(2, 82));
  const io::Json jr = io::document_to_json(io::document_from_bipartite(rotated));
  CHECK(jr.contains("basis_a"));
}

TEST_CASE("the canonical field order is stable") {
  const io::Json j = io::document_to_json(
      io::document_from_density(random_density(2, 2, 83)));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() == 4);
  CHECK(keys[0] == "schema_version");
  CHECK(keys[1] == "kind");
  CHECK(keys[2] == "dims");
  CHECK(keys[3] == "data");
}

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(io::fnv1a("") == 14695981039346656037ULL);
  CHECK(io::fnv1a("hello") == 0xa430d84680aabd0bULL);
}

TEST_CASE("digest_hex has the documented shape") {
  const std::string d = io::digest_hex("hello");
  CHECK(d == "fnv1a:a430d84680aabd0b");
  CHECK(io::digest_hex("").size() == 6 + 16);
}

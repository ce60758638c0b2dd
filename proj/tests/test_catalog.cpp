#include <string>

#include "akm/catalog.hpp"
#include "akm/generator.hpp"
#include "akm/geometry.hpp"
#include "akm/verify.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace akm;

namespace {

ErrorKind get_error(const char* id) {
  try {
    catalog_get(id);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for " << id);
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("entry lookup errors") {
  CHECK(get_error("torus(2)") == ErrorKind::UnknownEntry);
  CHECK(get_error("sphere") == ErrorKind::UnknownEntry);
  CHECK(get_error("sphere(x)") == ErrorKind::UnknownEntry);
  CHECK(get_error("sphere(2") == ErrorKind::UnknownEntry);
  CHECK(get_error("heisenberg(2)") == ErrorKind::UnknownEntry);
  CHECK(get_error("sphere(5)") == ErrorKind::ParamOutOfRange);
  CHECK(get_error("sphere(0)") == ErrorKind::ParamOutOfRange);
  CHECK(get_error("complex_sphere(9)") == ErrorKind::ParamOutOfRange);
  CHECK(get_error("flat(3,2)") == ErrorKind::ParamOutOfRange);
  CHECK(get_error("flat(0,0)") == ErrorKind::ParamOutOfRange);
  CHECK(get_error("flat(-1,2)") == ErrorKind::ParamOutOfRange);
}

TEST_CASE("expected values") {
  for (int m = 1; m <= 4; ++m) {
    auto s = catalog_get("sphere(" + std::to_string(m) + ")");
    CHECK(s.expected_gamma == m - 1.0);
    CHECK(s.expected_signature == Signature{m, 0});
    auto h = catalog_get("hyperbolic(" + std::to_string(m) + ")");
    CHECK(h.expected_gamma == -(m - 1.0));
  }
  CHECK(catalog_get("flat(1,2)").expected_signature == Signature{1, 2});
  CHECK(catalog_get("flat(3)").expected_signature == Signature{3, 0});
  CHECK(catalog_get("complex_sphere(3)").expected_gamma == 2.0);
  CHECK(catalog_get("complex_torus(2)").kind == ManifestKind::Frame);
  CHECK_FALSE(catalog_get("heisenberg").expected_gamma.has_value());
  CHECK(catalog_get("mutant_nonholo").expected_signature == Signature{1, 1});
}

TEST_CASE("sphere(2) at the origin is the identity") {
  std::vector<double> o = {0.0, 0.0};
  auto g = evaluate_metric(catalog_get("sphere(2)"), std::span<const double>(o));
  CHECK(g.g(0, 0) == 1.0);
  CHECK(g.g(1, 1) == 1.0);
  CHECK(g.g(0, 1) == 0.0);
}

TEST_CASE("complex sphere components") {
  Manifest c = catalog_get("complex_sphere(2)");
  CHECK(c.name == "complex_sphere(2)");
  CHECK(c.component(0, 0) == parse("1 + z1^2/(1 - (z1*z1 + z2*z2))", c.coords));
  CHECK(c.component(0, 1) == parse("z2*z1/(1 - (z1*z1 + z2*z2))", c.coords));
  Manifest c1 = catalog_get("complex_sphere(1)");
  CHECK(c1.component(0, 0) == parse("1 + z1^2/(1 - z1*z1)", c1.coords));
}

TEST_CASE("hyperbolic(3) is Einstein with -2") {
  Manifest h = catalog_get("hyperbolic(3)");
  RunOptions o;
  auto r = run_verify(h, o);
  CHECK(r.pass);
  REQUIRE(r.find("einstein"));
  CHECK(std::abs(*r.find("einstein")->gamma_hat + 2.0) < 1e-8);
}

TEST_CASE("every non-mutant entry passes its checks") {
  for (const char* id :
       {"flat(1)", "flat(2)", "flat(1,1)", "flat(2,2)", "flat(0,4)", "sphere(1)", "sphere(2)",
        "sphere(3)", "sphere(4)", "hyperbolic(1)", "hyperbolic(2)", "hyperbolic(3)",
        "hyperbolic(4)", "complex_sphere(1)", "complex_sphere(2)", "complex_sphere(3)",
        "complex_sphere(4)", "complex_torus(1)", "complex_torus(4)", "heisenberg",
        "realify(complex_sphere(2))", "realify(complex_sphere(3))", "twin(complex_sphere(2))",
        "realify(heisenberg)", "realify(complex_torus(2))"}) {
    auto r = run_verify(catalog_get(id), RunOptions{});
    CHECK_MESSAGE(r.pass, id << "\n" << report_text(r));
  }
}

TEST_CASE("mutant fails holomorphy and the Christoffel block check") {
  auto r = run_verify(catalog_get("mutant_nonholo"), RunOptions{});
  CHECK_FALSE(r.pass);
  REQUIRE(r.find("holomorphy"));
  CHECK(r.find("holomorphy")->max_residual > 1e-3);
  CHECK(r.find("christoffel_forbidden")->max_residual > 1e-3);
  CHECK(r.find("parallel_j")->max_residual > 1e-3);
  CHECK(r.find("anti_hermitian")->pass);
}

TEST_CASE("list and show") {
  auto list = nlohmann::json::parse(catalog_list_json());
  CHECK(list.size() == catalog_entries().size());
  CHECK(list[0]["id"] == "flat(p,q)");
  Manifest m = load_manifest(catalog_show_json("sphere(3)"));
  CHECK(m == catalog_get("sphere(3)"));
  CHECK(load_manifest(catalog_show_json("heisenberg")) == catalog_get("heisenberg"));
}

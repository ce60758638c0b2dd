#include <string>

#include "akm/catalog.hpp"
#include "akm/manifest.hpp"
#include "doctest.h"

using namespace akm;

namespace {

ErrorKind load_error(const std::string& text) {
  try {
    load_manifest(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("manifest loaded: " << text);
  return ErrorKind::Io;
}

const char* all_ids[] = {"flat(1)",          "flat(2,2)",         "flat(0,3)",
                         "sphere(1)",        "sphere(4)",         "hyperbolic(3)",
                         "complex_sphere(2)", "complex_sphere(4)", "complex_torus(3)",
                         "heisenberg",       "mutant_nonholo",    "realify(complex_sphere(2))",
                         "twin(complex_sphere(2))", "realify(heisenberg)"};

}  // namespace

TEST_CASE("catalog manifests round-trip byte-identically") {
  for (const char* id : all_ids) {
    Manifest m = catalog_get(id);
    std::string once = save_manifest(m);
    Manifest back = load_manifest(once);
    CHECK_MESSAGE(back == m, id);
    CHECK_MESSAGE(save_manifest(back) == once, id);
    CHECK(content_hash(back) == content_hash(m));
  }
}

TEST_CASE("sphere(2) reloads equal") {
  Manifest m = catalog_get("sphere(2)");
  CHECK(load_manifest(save_manifest(m)) == m);
  CHECK(content_hash(m).size() == 16);
  CHECK(content_hash(m) != content_hash(catalog_get("sphere(3)")));
}

TEST_CASE("holomorphic manifests reject re/im") {
  CHECK(load_error(R"j({"name":"h","kind":"holomorphic","dim":1,"coords":["z1"],
    "components":[["1 + re(z1)"]],"sample_box":[[-1,1],[-1,1]]})j") ==
        ErrorKind::HolomorphyViolation);
}

TEST_CASE("lower triangle and full square components") {
  Manifest lower = load_manifest(R"j({"name":"t","kind":"real","dim":2,"coords":["x1","x2"],
    "components":[["1"],["x1","2"]],"sample_box":[[-1,1],[-1,1]]})j");
  CHECK(lower.component(0, 1) == lower.component(1, 0));
  Manifest full = load_manifest(R"j({"name":"t","kind":"real","dim":2,"coords":["x1","x2"],
    "components":[["1","x1"],["x1","2"]],"sample_box":[[-1,1],[-1,1]]})j");
  CHECK(full == lower);
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":2,"coords":["x1","x2"],
    "components":[["1","x2"],["x1","2"]],"sample_box":[[-1,1],[-1,1]]})j") == ErrorKind::Schema);
}

TEST_CASE("schema errors") {
  // dimension mismatch between dim and components
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":3,"coords":["x1","x2","x3"],
    "components":[["1"],["0","1"]],"sample_box":[[-1,1],[-1,1],[-1,1]]})j") ==
        ErrorKind::DimensionMismatch);
  // unknown key
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":1,"coords":["x1"],"components":[["1"]],
    "sample_box":[[-1,1]],"colour":"red"})j") == ErrorKind::Schema);
  // empty interval
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":1,"coords":["x1"],"components":[["1"]],
    "sample_box":[[1,0]]})j") == ErrorKind::Schema);
  // bad kind
  CHECK(load_error(R"j({"name":"t","kind":"lorentzian","dim":1,"coords":["x1"],
    "components":[["1"]],"sample_box":[[-1,1]]})j") == ErrorKind::Schema);
  // bad lineage transform
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":1,"coords":["x1"],"components":[["1"]],
    "sample_box":[[-1,1]],"lineage":{"parent":"p","transform":"squash"}})j") == ErrorKind::Schema);
  // syntax error inside a component
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":1,"coords":["x1"],"components":[["1 +"]],
    "sample_box":[[-1,1]]})j") == ErrorKind::Syntax);
  // complex constant in a real metric
  CHECK(load_error(R"j({"name":"t","kind":"real","dim":1,"coords":["x1"],"components":[["1 + i"]],
    "sample_box":[[-1,1]]})j") == ErrorKind::Schema);
  // not JSON
  CHECK(load_error("{") == ErrorKind::Schema);
  // complex kinds need 2*dim box intervals
  CHECK(load_error(R"j({"name":"h","kind":"holomorphic","dim":1,"coords":["z1"],
    "components":[["1"]],"sample_box":[[-1,1]]})j") == ErrorKind::DimensionMismatch);
}

TEST_CASE("frame manifests") {
  Manifest m = load_manifest(R"j({"name":"f","kind":"frame","dim":2,"coords":["z1","z2"],
    "frame":[["1","0"],["z1","1"]],"sample_box":[[-1,1],[-1,1],[-0.5,0.5],[-0.5,0.5]]})j");
  CHECK(m.kind == ManifestKind::Frame);
  CHECK(m.frame.size() == 2);
  CHECK(load_manifest(save_manifest(m)) == m);
  CHECK(load_error(R"j({"name":"f","kind":"frame","dim":1,"coords":["z1"],
    "frame":[["im(z1)"]],"sample_box":[[-1,1],[-1,1]]})j") == ErrorKind::HolomorphyViolation);
}

TEST_CASE("file io") {
  Manifest m = catalog_get("sphere(2)");
  save_manifest_file(m, "manifest_io.json");
  CHECK(load_manifest_file("manifest_io.json") == m);
  try {
    load_manifest_file("does/not/exist.json");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

#include <random>
#include <vector>

#include "akm/antikahler.hpp"
#include "akm/catalog.hpp"
#include "akm/generator.hpp"
#include "akm/verify.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace akm;
using doctest::Approx;

namespace {

Manifest holo(std::vector<std::vector<std::string>> rows) {
  Manifest m;
  m.name = "h";
  m.kind = ManifestKind::Holomorphic;
  m.dim = rows.size();
  m.coords = numbered("z", m.dim);
  for (const auto& r : rows) {
    std::vector<Expr> row;
    for (const auto& s : r) row.push_back(parse(s, m.coords));
    m.components.push_back(row);
  }
  m.sample_box.assign(2 * m.dim, {-0.5, 0.5});
  validate(m);
  return m;
}

MetricAtPoint<double> at(const Manifest& m, std::vector<double> p) {
  return evaluate_metric(m, std::span<const double>(p));
}

EinsteinFit real_fit(const Manifest& m, const std::vector<double>& p) {
  auto c = curvature(evaluate_metric(m, std::span<const double>(p)));
  return einstein_fit(c.ricci, c.metric.g);
}

EinsteinFit complex_fit(const Manifest& m, const std::vector<double>& p) {
  auto z = to_complex_point(p);
  auto c = curvature(evaluate_metric(m, std::span<const cplx>(z)));
  return einstein_fit(c.ricci, c.metric.g);
}

}  // namespace

TEST_CASE("complexify") {
  Manifest flat = complexify(catalog_get("flat(2)"));
  CHECK(flat.kind == ManifestKind::Holomorphic);
  CHECK(flat.coords == std::vector<std::string>{"z1", "z2"});
  CHECK(flat.component(0, 0) == Expr::constant(1.0));
  CHECK(flat.component(0, 1) == Expr::constant(0.0));
  REQUIRE(flat.lineage.has_value());
  CHECK(flat.lineage->transform == "complexify");

  Manifest s = complexify(catalog_get("sphere(2)"));
  auto z = s.coords;
  CHECK(s.component(0, 0) == parse("1 + z1^2/(1 - (z1*z1 + z2*z2))", z));
  CHECK(s.component(1, 0) == parse("z2*z1/(1 - (z1*z1 + z2*z2))", z));
  CHECK(s.component(1, 1) == parse("1 + z2^2/(1 - (z1*z1 + z2*z2))", z));
  CHECK(s.expected_gamma == 1.0);
  CHECK_FALSE(s.expected_signature.has_value());
  // real parts keep the box, imaginary parts get half its width
  CHECK(s.sample_box[0] == Interval{-0.4, 0.4});
  CHECK(s.sample_box[2] == Interval{-0.2, 0.2});

  try {
    complexify(realify(s));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonAnalyticComponent);
  }
  CHECK_THROWS_AS(complexify(s), Error);
}

TEST_CASE("realify examples") {
  Manifest one = realify(holo({{"1"}}));
  auto g = at(one, {0.3, -0.2});
  CHECK(g.g(0, 0) == 2.0);
  CHECK(g.g(1, 1) == -2.0);
  CHECK(g.g(0, 1) == 0.0);
  CHECK(one.coords == std::vector<std::string>{"x1", "y1"});
  CHECK(one.expected_signature == Signature{1, 1});

  Manifest lin = realify(holo({{"z1"}}));
  auto h = at(lin, {0.3, -0.2});
  CHECK(h.g(0, 0) == Approx(0.6));
  CHECK(h.g(1, 1) == Approx(-0.6));
  CHECK(h.g(0, 1) == Approx(0.4));

  Manifest s = realify(catalog_get("complex_sphere(2)"));
  auto o = at(s, {0, 0, 0, 0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(o.g(i, j) == (i != j ? 0.0 : (i < 2 ? 2.0 : -2.0)));
  CHECK(signature(o.g) == Signature{2, 2});
  CHECK(s.expected_gamma == 1.0);
}

TEST_CASE("realify equals 2 Re[g(v, w)] on random tangent vectors") {
  Manifest h = catalog_get("complex_sphere(2)");
  Manifest r = realify(h);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& p : sample_points(r, 8, 4)) {
    auto g = at(r, p).g;
    auto z = to_complex_point(p);
    auto gh = evaluate_metric(h, std::span<const cplx>(z)).g;
    std::vector<double> v(4), w(4);
    for (auto& x : v) x = u(rng);
    for (auto& x : w) x = u(rng);
    double real = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k) real += g(i, k) * v[i] * w[k];
    cplx dz_v[2] = {{v[0], v[2]}, {v[1], v[3]}}, dz_w[2] = {{w[0], w[2]}, {w[1], w[3]}};
    cplx c = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) c += gh(a, b) * dz_v[a] * dz_w[b];
    CHECK(real == Approx(2.0 * c.real()).epsilon(1e-12));
  }
}

TEST_CASE("twin examples") {
  Manifest t = twin(holo({{"1"}}));
  auto g = at(t, {0.1, 0.2});
  CHECK(g.g(0, 0) == 0.0);
  CHECK(g.g(1, 1) == 0.0);
  CHECK(g.g(0, 1) == -2.0);
  CHECK_FALSE(t.expected_gamma.has_value());
  REQUIRE(t.lineage.has_value());
  CHECK(t.lineage->transform == "twin");

  Manifest ft = twin(catalog_get("complex_torus(2)"));
  auto c = curvature(at(ft, {0.1, 0.2, 0.3, 0.4}));
  CHECK(max_abs(c.riemann) == 0.0);

  Manifest st = twin(catalog_get("complex_sphere(2)"));
  CHECK_FALSE(st.expected_gamma.has_value());
}

TEST_CASE("realify of holomorphic catalog entries round-trips through complex components") {
  for (const char* id : {"complex_sphere(1)", "complex_sphere(2)", "complex_sphere(3)",
                         "complex_torus(2)", "heisenberg"}) {
    Manifest h = catalog_get(id);
    Manifest r = realify(h);
    for (const auto& p : sample_points(r, 16, 7)) {
      auto g = at(r, p).g;
      auto blocks = complex_components(g);
      auto z = to_complex_point(p);
      auto gh = evaluate_metric(h, std::span<const cplx>(z)).g;
      double gap = 0.0;
      for (std::size_t a = 0; a < h.dim; ++a)
        for (std::size_t b = 0; b < h.dim; ++b) gap = std::max(gap, std::abs(blocks.ghat(a, b) - gh(a, b)));
      CHECK_MESSAGE(gap < 1e-12, id);
      CHECK(anti_hermitian_residual(g, ComplexStructure::canonical(h.dim).evaluate(p).j) < 1e-12);
    }
  }
}

TEST_CASE("real and complex Einstein fits agree") {
  Manifest h = catalog_get("complex_sphere(2)");
  Manifest r = realify(h);
  for (const auto& p : sample_points(r, 16, 1)) {
    auto fr = real_fit(r, p);
    auto fc = complex_fit(h, p);
    CHECK(std::abs(fr.gamma_hat - fc.gamma_hat) < 1e-8);
    CHECK(fr.gamma_hat == Approx(1.0).epsilon(1e-10));
  }
  Manifest hh = catalog_get("heisenberg");
  Manifest hr = realify(hh);
  for (const auto& p : sample_points(hr, 16, 1)) {
    CHECK(real_fit(hr, p).residual > 1e-3);
    CHECK(complex_fit(hh, p).residual > 1e-3);
  }
}

TEST_CASE("frames") {
  Manifest id = frame_manifest("id", 2,
                               {{Expr::constant(1.0), Expr::constant(0.0)},
                                {Expr::constant(0.0), Expr::constant(1.0)}},
                               {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
  Manifest mat = materialize_frame(id);
  CHECK(mat.component(0, 0) == Expr::constant(1.0));
  CHECK(mat.component(1, 0) == Expr::constant(0.0));

  Manifest h = materialize_frame(catalog_get("heisenberg"));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 10; ++t) {
    oracle::CVec z = {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    CHECK(std::abs(oracle::eval(h.component(1, 2), z) + z[0]) < 1e-14);
    CHECK(std::abs(oracle::eval(h.component(2, 2), z) - (1.0 + z[0] * z[0])) < 1e-14);
    CHECK(std::abs(oracle::eval(h.component(0, 0), z) - 1.0) < 1e-14);
    CHECK(std::abs(oracle::eval(h.component(0, 2), z)) < 1e-14);
  }

  auto bad = [] {
    frame_manifest("bad", 1, {{parse("re(z1)", numbered("z", 1))}}, {{-1, 1}, {-1, 1}});
  };
  try {
    bad();
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HolomorphyViolation);
  }
}

TEST_CASE("tower over sphere(2)") {
  auto levels = tower(catalog_get("sphere(2)"), 2);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].manifest == catalog_get("sphere(2)"));
  CHECK_FALSE(levels[0].holomorphic.has_value());
  CHECK(levels[1].manifest.dim == 4);
  CHECK(levels[2].manifest.dim == 8);
  REQUIRE(levels[2].holomorphic.has_value());
  CHECK(levels[2].holomorphic->dim == 4);
  CHECK(levels[2].manifest.lineage->transform == "tower-level-2");
  const Signature want[] = {{2, 0}, {2, 2}, {4, 4}};
  for (std::size_t j = 1; j <= 2; ++j) {
    const Manifest& m = levels[j].manifest;
    CHECK(m.expected_gamma == 1.0);
    CHECK(m.expected_signature == want[j]);
    for (const auto& p : sample_points(m, 8, 3)) {
      auto fit = real_fit(m, p);
      CHECK(fit.gamma_hat == Approx(1.0).epsilon(1e-6));
      CHECK(fit.residual < 1e-6);
      CHECK(signature(at(m, p).g) == want[j]);
    }
  }
}

TEST_CASE("tower over flat(2) stays flat") {
  auto levels = tower(catalog_get("flat(2)"), 3);
  REQUIRE(levels.size() == 4);
  CHECK(levels[3].manifest.dim == 16);
  for (std::size_t j = 1; j <= 3; ++j) {
    const Manifest& m = levels[j].manifest;
    auto p = sample_points(m, 1, 0).front();
    CHECK(max_abs(curvature(at(m, p)).riemann) == 0.0);
  }
}

TEST_CASE("tower limits") {
  auto kind = [](const char* id, std::size_t k) {
    try {
      tower(catalog_get(id), k);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind("sphere(4)", 3) == ErrorKind::DimensionLimit);
  CHECK(kind("sphere(2)", 0) == ErrorKind::DimensionLimit);
  CHECK(kind("sphere(2)", 64) == ErrorKind::DimensionLimit);
  CHECK_NOTHROW(tower(catalog_get("sphere(4)"), 2));
}

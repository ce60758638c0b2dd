// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "akm/antikahler.hpp"
#include "akm/catalog.hpp"
#include "akm/generator.hpp"
#include "akm/geometry.hpp"
#include "akm/jets.hpp"
#include "akm/verify.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace akm;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

MetricAtPoint<double> real_at(const Manifest& m, const std::vector<double>& p) {
  return evaluate_metric(m, std::span<const double>(p));
}

MetricAtPoint<cplx> complex_at(const Manifest& m, const std::vector<double>& p) {
  auto z = oracle::manifest_point(m, p);
  return evaluate_metric(m, std::span<const cplx>(z));
}

std::vector<std::string> every_catalog_id() {
  std::vector<std::string> ids;
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q)
      if (p + q >= 1) ids.push_back("flat(" + std::to_string(p) + "," + std::to_string(q) + ")");
  for (const char* family : {"sphere", "hyperbolic", "complex_sphere", "complex_torus"})
    for (int m = 1; m <= 4; ++m) ids.push_back(std::string(family) + "(" + std::to_string(m) + ")");
  ids.push_back("heisenberg");
  ids.push_back("mutant_nonholo");
  return ids;
}

std::vector<std::string> holomorphic_ids() {
  std::vector<std::string> ids;
  for (const char* family : {"complex_sphere", "complex_torus"})
    for (int m = 1; m <= 4; ++m) ids.push_back(std::string(family) + "(" + std::to_string(m) + ")");
  ids.push_back("heisenberg");
  return ids;
}

// 1
void sphere_oracle(Outcome& o) {
  for (int m = 2; m <= 4; ++m) {
    const std::string id = "sphere(" + std::to_string(m) + ")";
    Manifest s = catalog_get(id);
    RunOptions opts;
    opts.gamma_override = m - 1.0;
    auto r = run_verify(s, opts);
    const auto* e = r.find("einstein");
    o.require(e && e->points == 64, id + " einstein ran at 64 points");
    if (!e) continue;
    double rel = std::abs(*e->gamma_hat - (m - 1.0)) / (m - 1.0);
    o.require(rel < 1e-8, id + " gamma_hat rel err " + fmt(rel));
    o.require(e->max_residual < 1e-8, id + " einstein residual " + fmt(e->max_residual));

    // constant sectional curvature 1: R_abcd = g_ac g_bd - g_ad g_bc
    double engine_gap = 0.0, fd_gap = 0.0;
    auto points = sample_points(s, 64, 0);
    for (std::size_t k = 0; k < points.size(); ++k) {
      auto c = curvature(real_at(s, points[k]));
      auto low = lower_riemann(c.riemann, c.metric.g);
      const auto& g = c.metric.g;
      const std::size_t n = g.n();
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t cc = 0; cc < n; ++cc)
            for (std::size_t d = 0; d < n; ++d) {
              double want = g(a, cc) * g(b, d) - g(a, d) * g(b, cc);
              engine_gap = std::max(engine_gap, std::abs(low(a, b, cc, d) - want) / std::max(1.0, std::abs(want)));
            }
      if (k < 4) {
        auto x = oracle::manifest_point(s, points[k]);
        auto fd = oracle::curvature(s, x);
        auto gx = oracle::metric(s, x);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t cc = 0; cc < n; ++cc)
              for (std::size_t d = 0; d < n; ++d) {
                cplx lowered = 0.0;
                for (std::size_t e2 = 0; e2 < n; ++e2) lowered += gx(a, e2) * fd.riemann[e2][b][cc][d];
                cplx want = gx(a, cc) * gx(b, d) - gx(a, d) * gx(b, cc);
                fd_gap = std::max(fd_gap, oracle::rel_err(lowered, want));
              }
      }
    }
    o.require(engine_gap < 1e-8, id + " engine vs constant-curvature " + fmt(engine_gap));
    o.require(fd_gap < 1e-6, id + " FD oracle vs constant-curvature " + fmt(fd_gap));
    o.detail << id << " gamma_hat=" << *e->gamma_hat << " res=" << fmt(e->max_residual) << " ";
  }
}

// 2
void complex_sphere(Outcome& o) {
  Manifest r = realify(catalog_get("complex_sphere(2)"));
  int wrong = 0;
  auto points = sample_points(r, 64, 0);
  for (const auto& p : points)
    if (!(signature(real_at(r, p).g) == Signature{2, 2})) ++wrong;
  o.require(wrong == 0, std::to_string(wrong) + " points without signature (2,2)");
  RunOptions opts;
  opts.gamma_override = 1.0;
  auto rep = run_verify(r, opts);
  const auto* e = rep.find("einstein");
  o.require(e && e->pass && e->points == 64, "einstein check");
  if (e) {
    o.require(e->max_residual < 1e-8, "einstein residual " + fmt(e->max_residual));
    o.require(std::abs(*e->gamma_hat - 1.0) < 1e-8, "gamma_hat " + fmt(*e->gamma_hat));
    o.detail << "signature (2,2) at 64/64, gamma_hat=" << *e->gamma_hat << " res=" << fmt(e->max_residual);
  }
}

// 3
void tower_cli(Outcome& o) {
  const std::string dir = "acceptance_tower";
  std::filesystem::remove_all(dir);
  std::string cmd = std::string("\"") + AKM_CLI + "\" tower 'catalog:sphere(2)' --levels 2 -o " + dir;
  int status = std::system(cmd.c_str());
  o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "akm tower exit status");
  const std::size_t dims[] = {4, 8};
  const Signature sigs[] = {{2, 2}, {4, 4}};
  for (int level = 1; level <= 2; ++level) {
    Manifest m = load_manifest_file(dir + "/level" + std::to_string(level) + ".json");
    o.require(m.dim == dims[level - 1], "level " + std::to_string(level) + " dim " + std::to_string(m.dim));
    int wrong = 0;
    double worst_gamma = 0.0, worst_res = 0.0;
    for (const auto& p : sample_points(m, 64, 0)) {
      auto c = curvature(real_at(m, p));
      if (!(signature(c.metric.g) == sigs[level - 1])) ++wrong;
      auto fit = einstein_fit(c.ricci, c.metric.g);
      worst_gamma = std::max(worst_gamma, std::abs(fit.gamma_hat - 1.0));
      worst_res = std::max(worst_res, fit.residual);
    }
    o.require(wrong == 0, "level " + std::to_string(level) + " signature mismatches " + std::to_string(wrong));
    o.require(worst_gamma < 1e-6, "level " + std::to_string(level) + " gamma_hat off by " + fmt(worst_gamma));
    o.require(worst_res < 1e-6, "level " + std::to_string(level) + " einstein residual " + fmt(worst_res));
    o.detail << "dim " << m.dim << " |gamma_hat-1|<=" << fmt(worst_gamma) << " ";
  }
}

// 4
void three_way(Outcome& o) {
  double worst = 0.0;
  int manifests = 0;
  auto check = [&](const Manifest& r) {
    ++manifests;
    auto j = ComplexStructure::canonical(r.dim / 2);
    for (const auto& p : sample_points(r, 64, 0)) {
      auto m = real_at(r, p);
      auto c = curvature(m);
      double pj = parallel_j_residual(c, j.evaluate(p));
      double forb = complex_christoffel_blocks(m).forbidden;
      double hol = holomorphy_residual(m);
      double w = std::max({pj, forb, hol});
      if (w >= 1e-9) o.require(false, r.name + " residual " + fmt(w));
      worst = std::max(worst, w);
    }
  };
  for (const auto& id : holomorphic_ids()) {
    check(catalog_get("realify(" + id + ")"));
    check(catalog_get("twin(" + id + ")"));
  }
  for (const auto& level : tower(catalog_get("sphere(2)"), 2))
    if (level.level > 0) check(level.manifest);

  Manifest mutant = catalog_get("mutant_nonholo");
  auto j = ComplexStructure::canonical(1);
  double pj = 0.0, forb = 0.0, hol = 0.0;
  for (const auto& p : sample_points(mutant, 64, 0)) {
    auto m = real_at(mutant, p);
    pj = std::max(pj, parallel_j_residual(curvature(m), j.evaluate(p)));
    forb = std::max(forb, complex_christoffel_blocks(m).forbidden);
    hol = std::max(hol, holomorphy_residual(m));
  }
  o.require(pj > 1e-3 && forb > 1e-3 && hol > 1e-3, "mutant residuals not all above 1e-3");
  o.detail << manifests << " anti-Kaehler charts max=" << fmt(worst) << "; mutant parallel_J=" << fmt(pj)
           << " forbidden=" << fmt(forb) << " holomorphy=" << fmt(hol);
}

// 5
void curvature_identities(Outcome& o) {
  for (const char* id : {"realify(complex_sphere(2))", "realify(heisenberg)"}) {
    Manifest r = catalog_get(id);
    auto j = ComplexStructure::canonical(r.dim / 2).evaluate(std::vector<double>(r.dim, 0.0)).j;
    double worst = 0.0;
    auto points = sample_points(r, 64, 0);
    for (std::size_t k = 0; k < points.size(); ++k) {
      auto res = curvature_identity_residuals(curvature(real_at(r, points[k])), j, 16, k);
      worst = std::max(worst, res.max());
    }
    o.require(worst < 1e-8, std::string(id) + " identity residual " + fmt(worst));
    o.detail << id << " max=" << fmt(worst) << " ";
  }
  Manifest s2 = catalog_get("sphere(2)");
  auto j = ComplexStructure::canonical(1).evaluate(std::vector<double>{0.0, 0.0}).j;
  double least = 1e300;
  auto points = sample_points(s2, 64, 0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto res = curvature_identity_residuals(curvature(real_at(s2, points[k])), j, 16, k);
    least = std::min(least, res.j_invariant);
  }
  o.require(least >= 1e-2, "S2 j_invariant violation only " + fmt(least));
  o.detail << "S2 j_invariant min=" << fmt(least);
}

// 6
void ricci_blocks(Outcome& o) {
  for (const char* id : {"complex_sphere(2)", "heisenberg"}) {
    Manifest h = catalog_get(id);
    Manifest r = realify(h);
    double diff = 0.0, mixed = 0.0;
    for (const auto& p : sample_points(r, 64, 0)) {
      auto m = ricci_block_match(r, h, p);
      diff = std::max(diff, m.difference);
      mixed = std::max(mixed, m.mixed);
    }
    o.require(diff < 1e-8, std::string(id) + " block difference " + fmt(diff));
    o.require(mixed < 1e-8, std::string(id) + " mixed block " + fmt(mixed));
    o.detail << id << " diff=" << fmt(diff) << " mixed=" << fmt(mixed) << " ";
  }
}

// 7
void twin_metric(Outcome& o) {
  Manifest h = catalog_get("complex_sphere(2)");
  Manifest g = realify(h);
  Manifest t = twin(h);
  double gap = 0.0;
  for (const auto& p : sample_points(g, 64, 0)) {
    auto cg = christoffel(real_at(g, p));
    auto ct = christoffel(real_at(t, p));
    for (std::size_t k = 0; k < cg.gamma.size(); ++k)
      gap = std::max(gap, std::abs(cg.gamma.data()[k] - ct.gamma.data()[k]));
  }
  o.require(gap < 1e-9, "Christoffel gap " + fmt(gap));

  Manifest ih = holomorphic_twin(h);
  const double gamma = 1.0;
  double res = 0.0;
  for (const auto& p : sample_points(ih, 64, 0)) {
    auto c = curvature(complex_at(ih, p));
    for (std::size_t a = 0; a < ih.dim; ++a)
      for (std::size_t b = 0; b < ih.dim; ++b)
        res = std::max(res, std::abs(c.ricci(a, b) + cplx(0, gamma) * c.metric.g(a, b)));
  }
  o.require(res < 1e-8, "Ric(h) + i gamma h residual " + fmt(res));
  o.detail << "Christoffel gap=" << fmt(gap) << " Ric(h)+i*gamma*h=" << fmt(res);
}

// 8
void heisenberg(Outcome& o) {
  for (const char* id : {"heisenberg", "realify(heisenberg)", "twin(heisenberg)"}) {
    auto rep = run_verify(catalog_get(id), RunOptions{});
    o.require(rep.pass, std::string(id) + " suite");
    o.detail << id << (rep.pass ? " pass " : " fail ");
  }
  Manifest h = catalog_get("heisenberg");
  std::ifstream in(AKM_FIXTURES "/heisenberg_z0.json");
  auto fix = nlohmann::json::parse(in);
  const double tol = fix["fd_accuracy"].get<double>() * 10;
  std::vector<cplx> z0(3, 0.0);
  auto c = curvature(evaluate_metric(h, std::span<const cplx>(z0)));
  Tensor<double, 4> want(3, 0.0);
  for (const auto& e : fix["riemann_nonzero"]) want(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()) = e[4].get<double>();
  double gap = 0.0;
  for (std::size_t k = 0; k < want.size(); ++k) gap = std::max(gap, std::abs(c.riemann.data()[k] - want.data()[k]));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      gap = std::max(gap, std::abs(c.ricci(a, b) - fix["ricci"][a][b].get<double>()));
  o.require(gap < tol, "engine vs fixture " + fmt(gap));

  // the fixture must still agree with a fresh finite-difference run
  auto fd = oracle::curvature(h, oracle::CVec(3, 0.0));
  double fd_gap = 0.0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      fd_gap = std::max(fd_gap, std::abs(fd.ricci(a, b) - fix["ricci"][a][b].get<double>()));
  o.require(fd_gap < tol, "fixture vs FD oracle " + fmt(fd_gap));
  o.detail << "z=0 engine vs fixture " << fmt(gap);
}

// 9
void ad_soundness(Outcome& o) {
  double worst_grad = 0.0, worst_hess = 0.0;
  auto compare = [&](const Expr& e, const oracle::CVec& x, bool complex_point, const std::string& what) {
    cplx value;
    std::vector<cplx> grad(x.size());
    std::vector<std::vector<cplx>> hess(x.size(), std::vector<cplx>(x.size()));
    if (complex_point) {
      auto j = eval_jet2(e, std::span<const cplx>(x));
      value = j.value();
      for (std::size_t i = 0; i < x.size(); ++i) {
        grad[i] = j.grad(i);
        for (std::size_t k = 0; k < x.size(); ++k) hess[i][k] = j.hess(i, k);
      }
    } else {
      std::vector<double> xr(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) xr[i] = x[i].real();
      auto j = eval_jet2(e, std::span<const double>(xr));
      value = j.value();
      for (std::size_t i = 0; i < x.size(); ++i) {
        grad[i] = j.grad(i);
        for (std::size_t k = 0; k < x.size(); ++k) hess[i][k] = j.hess(i, k);
      }
    }
    (void)value;
    auto fg = oracle::gradient(e, x);
    auto fh = oracle::hessian(e, x);
    double g = 0.0, h = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      g = std::max(g, oracle::rel_err(grad[i], fg[i]));
      for (std::size_t k = 0; k < x.size(); ++k) h = std::max(h, oracle::rel_err(hess[i][k], fh[i][k]));
    }
    if (g >= 1e-6 || h >= 1e-6) o.require(false, what + " grad " + fmt(g) + " hess " + fmt(h));
    worst_grad = std::max(worst_grad, g);
    worst_hess = std::max(worst_hess, h);
  };

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 4;
    Expr e = oracle::random_expr(rng, n, 3);
    oracle::CVec x(n);
    for (auto& v : x) v = u(rng);
    compare(e, x, false, "random expr " + std::to_string(t));
  }

  std::size_t components = 0;
  std::vector<std::string> ids = every_catalog_id();
  for (const auto& id : holomorphic_ids()) {
    ids.push_back("realify(" + id + ")");
    ids.push_back("twin(" + id + ")");
  }
  for (const auto& id : ids) {
    Manifest m = catalog_get(id);
    std::vector<Expr> exprs;
    if (m.kind == ManifestKind::Frame) {
      for (const auto& row : m.frame) exprs.insert(exprs.end(), row.begin(), row.end());
      for (const auto& row : materialize_frame(m).components) exprs.insert(exprs.end(), row.begin(), row.end());
    } else {
      for (const auto& row : m.components) exprs.insert(exprs.end(), row.begin(), row.end());
    }
    for (const auto& p : sample_points(m, 4, 9)) {
      auto x = oracle::manifest_point(m, p);
      for (const auto& e : exprs) {
        compare(e, x, m.is_complex(), id);
        ++components;
      }
    }
  }
  o.detail << "100 random + " << components << " component evaluations, grad<=" << fmt(worst_grad)
           << " hess<=" << fmt(worst_hess);
}

// 10
void symmetries(Outcome& o) {
  std::vector<std::string> ids = every_catalog_id();
  for (const auto& id : holomorphic_ids()) {
    ids.push_back("realify(" + id + ")");
    ids.push_back("twin(" + id + ")");
  }
  double worst = 0.0, worst_flat = 0.0;
  for (const auto& id : ids) {
    Manifest m = catalog_get(id);
    const bool flat = id.rfind("flat", 0) == 0 || id.find("complex_torus") != std::string::npos;
    for (const auto& p : sample_points(m, 64, 0)) {
      double s = 0.0, curv = 0.0;
      if (m.is_complex()) {
        auto c = curvature(complex_at(m, p));
        s = symmetry_residuals(c).max();
        curv = std::max(max_abs(c.riemann), max_abs(c.ricci));
      } else {
        auto c = curvature(real_at(m, p));
        s = symmetry_residuals(c).max();
        curv = std::max(max_abs(c.riemann), max_abs(c.ricci));
      }
      if (s >= 1e-10) o.require(false, id + " symmetry " + fmt(s));
      worst = std::max(worst, s);
      if (flat) {
        if (curv >= 1e-12) o.require(false, id + " flat curvature " + fmt(curv));
        worst_flat = std::max(worst_flat, curv);
      }
    }
  }
  o.detail << ids.size() << " entries, symmetry max=" << fmt(worst) << ", flat curvature max=" << fmt(worst_flat);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"1 sphere oracle", sphere_oracle},
      {"2 complex sphere", complex_sphere},
      {"3 tower", tower_cli},
      {"4 three-way equivalence", three_way},
      {"5 curvature identities", curvature_identities},
      {"6 Ricci block match", ricci_blocks},
      {"7 twin metric", twin_metric},
      {"8 heisenberg", heisenberg},
      {"9 AD soundness", ad_soundness},
      {"10 tensor symmetries", symmetries},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

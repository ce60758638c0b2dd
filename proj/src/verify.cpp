#include "akm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "akm/antikahler.hpp"
#include "akm/generator.hpp"
#include "akm/geometry.hpp"
#include "json.hpp"

namespace akm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t seed, std::uint64_t k, std::uint64_t c) {
  std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ k) ^ c);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Computes on first use; a failure is remembered and rethrown on every use.
template <class T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> f) : f_(std::move(f)) {}
  const T& get() {
    if (err_) std::rethrow_exception(err_);
    if (!value_) {
      try {
        value_ = f_();
      } catch (...) {
        err_ = std::current_exception();
        throw;
      }
    }
    return *value_;
  }

 private:
  std::function<T()> f_;
  std::optional<T> value_;
  std::exception_ptr err_;
};

struct Accumulator {
  CheckResult result;
  double gamma_sum = 0.0;
  bool track_gamma = false;

  Accumulator(std::string id, double tol) {
    result.id = std::move(id);
    result.tol = tol;
  }

  template <class F>
  void run(F&& f) {
    try {
      double r = f();
      if (std::isnan(r)) r = INFINITY;
      result.max_residual = std::max(result.max_residual, r);
      ++result.points;
    } catch (const Error& e) {
      if (!is_numerical(e.kind())) throw;
      ++result.skipped;
    }
  }

  CheckResult finish() {
    const std::size_t total = result.points + result.skipped;
    result.over_skip_budget =
        total == 0 || static_cast<double>(result.skipped) > skip_budget * static_cast<double>(total);
    if (track_gamma && result.points > 0)
      result.gamma_hat = gamma_sum / static_cast<double>(result.points);
    result.pass = !result.over_skip_budget && result.max_residual <= result.tol;
    return result;
  }
};

double einstein_residual(const EinsteinFit& fit, double gamma) {
  return std::max(fit.residual, std::abs(fit.gamma_hat - gamma) / std::max(1.0, std::abs(gamma)));
}

std::optional<double> target_gamma(const Manifest& man, const RunOptions& opts) {
  return opts.gamma_override ? opts.gamma_override : man.expected_gamma;
}

std::vector<CheckResult> verify_real(const Manifest& man, const RunOptions& opts,
                                     const std::vector<std::vector<double>>& points) {
  const auto gamma = target_gamma(man, opts);
  const bool anti_kahler = has_anti_kahler_lineage(man) && man.dim % 2 == 0;
  const Matrix<double> j =
      anti_kahler ? ComplexStructure::canonical(man.dim / 2).evaluate(points.front()).j
                  : Matrix<double>();

  std::vector<Accumulator> acc;
  auto add = [&](const char* id, double tol) -> Accumulator& {
    acc.emplace_back(id, tol);
    return acc.back();
  };
  add("signature", 0.0);
  if (gamma) add("einstein", opts.tol).track_gamma = true;
  add("curvature_symmetries", opts.tol);
  if (anti_kahler) {
    for (const char* id : {"anti_hermitian", "holomorphy", "parallel_j", "christoffel_forbidden",
                           "christoffel_conj_pattern", "curvature_identities", "nijenhuis"})
      add(id, opts.tol);
  }
  auto get = [&](std::string_view id) -> Accumulator& {
    return *std::find_if(acc.begin(), acc.end(),
                         [&](const Accumulator& a) { return a.result.id == id; });
  };

  std::optional<Signature> expected_sig = man.expected_signature;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    Lazy<MetricAtPoint<double>> metric([&] { return evaluate_metric(man, p); });
    Lazy<CurvatureAtPoint<double>> curv([&] { return curvature(metric.get()); });
    Lazy<ComplexChristoffel> cc([&] { return complex_christoffel_blocks(metric.get()); });

    get("signature").run([&] {
      Signature s = signature(metric.get().g);
      auto& rec = get("signature").result;
      if (!rec.signature) rec.signature = s;
      if (!expected_sig) expected_sig = s;
      return s == *expected_sig ? 0.0 : 1.0;
    });
    if (gamma) {
      auto& a = get("einstein");
      a.run([&] {
        const auto& c = curv.get();
        EinsteinFit fit = einstein_fit(c.ricci, c.metric.g);
        a.gamma_sum += fit.gamma_hat;
        return einstein_residual(fit, *gamma);
      });
    }
    get("curvature_symmetries").run([&] { return symmetry_residuals(curv.get()).max(); });
    if (!anti_kahler) continue;

    get("anti_hermitian").run([&] { return anti_hermitian_residual(metric.get().g, j); });
    get("holomorphy").run([&] { return holomorphy_residual(metric.get()); });
    get("parallel_j").run([&] {
      return parallel_j_residual(curv.get(), JAtPoint{j, Tensor<double, 3>(man.dim)});
    });
    get("christoffel_forbidden").run([&] { return cc.get().forbidden; });
    get("christoffel_conj_pattern").run([&] { return cc.get().conj_pattern; });
    get("curvature_identities").run([&] {
      return curvature_identity_residuals(curv.get(), j, opts.trials, splitmix64(opts.seed ^ k))
          .max();
    });
    get("nijenhuis").run(
        [&] { return nijenhuis_residual(JAtPoint{j, Tensor<double, 3>(man.dim)}); });
  }

  std::vector<CheckResult> out;
  for (auto& a : acc) out.push_back(a.finish());
  return out;
}

std::vector<CheckResult> verify_complex(const Manifest& man, const RunOptions& opts,
                                        const std::vector<std::vector<double>>& points) {
  const auto gamma = target_gamma(man, opts);
  const Manifest real = realify(man);
  const Manifest itwin = holomorphic_twin(man);
  const std::size_t m = man.dim;

  std::vector<Accumulator> acc;
  auto add = [&](const char* id, double tol) -> Accumulator& {
    acc.emplace_back(id, tol);
    return acc.back();
  };
  if (gamma) {
    add("complex_einstein", opts.tol).track_gamma = true;
    add("twin_einstein", opts.tol);
  }
  for (const char* id : {"complex_curvature_symmetries", "christoffel_vs_realify",
                         "ricci_block_match", "ricci_mixed_block"})
    add(id, opts.tol);
  auto get = [&](std::string_view id) -> Accumulator& {
    return *std::find_if(acc.begin(), acc.end(),
                         [&](const Accumulator& a) { return a.result.id == id; });
  };

  for (const auto& p : points) {
    const auto z = to_complex_point(p);
    Lazy<CurvatureAtPoint<cplx>> curv(
        [&] { return curvature(evaluate_metric(man, std::span<const cplx>(z))); });
    Lazy<CurvatureAtPoint<double>> real_curv([&] { return curvature(evaluate_metric(real, p)); });
    Lazy<RicciBlockMatch> block(
        [&] { return ricci_block_match(real_curv.get().ricci, curv.get().ricci); });

    if (gamma) {
      auto& a = get("complex_einstein");
      a.run([&] {
        const auto& c = curv.get();
        EinsteinFit fit = einstein_fit(c.ricci, c.metric.g);
        a.gamma_sum += fit.gamma_hat;
        return einstein_residual(fit, *gamma);
      });
      get("twin_einstein").run([&] {
        auto h = curvature(evaluate_metric(itwin, std::span<const cplx>(z)));
        double worst = 0.0;
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b)
            worst = std::max(worst, std::abs(h.ricci(a, b) + cplx{0.0, *gamma} * h.metric.g(a, b)));
        return worst / (1.0 + max_abs(h.metric.g));
      });
    }
    get("complex_curvature_symmetries").run([&] { return symmetry_residuals(curv.get()).max(); });
    get("christoffel_vs_realify").run([&] {
      auto from_real = complex_christoffel_blocks(real_curv.get().metric).holomorphic_block();
      const auto& direct = curv.get().gamma;
      double worst = 0.0;
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b)
            worst = std::max(worst, std::abs(from_real(c, a, b) - direct(c, a, b)));
      return worst;
    });
    get("ricci_block_match").run([&] { return block.get().difference; });
    get("ricci_mixed_block").run([&] { return block.get().mixed; });
  }

  std::vector<CheckResult> out;
  for (auto& a : acc) out.push_back(a.finish());
  return out;
}

}  // namespace

const CheckResult* Report::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<std::vector<double>> sample_points(const Manifest& man, std::size_t count,
                                               std::uint64_t seed) {
  std::vector<std::vector<double>> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k].resize(man.sample_box.size());
    for (std::size_t c = 0; c < man.sample_box.size(); ++c) {
      const Interval& iv = man.sample_box[c];
      out[k][c] = iv.lo + (iv.hi - iv.lo) * unit_interval(seed, k, c);
    }
  }
  return out;
}

bool has_anti_kahler_lineage(const Manifest& man) {
  if (!man.lineage) return false;
  const std::string& t = man.lineage->transform;
  return t == "realify" || t == "twin" || t.starts_with("tower-level-");
}

Report run_verify(const Manifest& man, const RunOptions& opts) {
  validate(man);
  if (opts.points < 1) throw Error(ErrorKind::Schema, "points must be at least 1");
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::Schema, "tol must be positive");

  Report r;
  r.manifest_name = man.name;
  r.manifest_hash = content_hash(man);
  r.options = opts;
  auto points = sample_points(man, opts.points, opts.seed);
  r.checks = man.is_complex() ? verify_complex(man, opts, points) : verify_real(man, opts, points);
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.pass; });
  return r;
}

std::string report_json(const Report& r) {
  using json = nlohmann::ordered_json;
  json options = {{"points", r.options.points},
                  {"seed", r.options.seed},
                  {"tol", r.options.tol},
                  {"gamma_override", nullptr},
                  {"format", r.options.format == ReportFormat::Json ? "json" : "text"},
                  {"trials", r.options.trials}};
  if (r.options.gamma_override) options["gamma_override"] = *r.options.gamma_override;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json rec = {{"id", c.id},
                {"max_residual", c.max_residual},
                {"tol", c.tol},
                {"pass", c.pass},
                {"points", c.points},
                {"skipped", c.skipped}};
    if (c.gamma_hat) rec["gamma_hat"] = *c.gamma_hat;
    if (c.signature) rec["signature"] = {c.signature->positive, c.signature->negative};
    checks.push_back(std::move(rec));
  }
  json out = {{"manifest", {{"name", r.manifest_name}, {"hash", r.manifest_hash}}},
              {"options", options},
              {"checks", checks},
              {"pass", r.pass}};
  return out.dump(2) + "\n";
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  os.precision(6);
  os << r.manifest_name << " [" << r.manifest_hash << "]\n";
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.id << "  max_residual=" << c.max_residual
       << " tol=" << c.tol << " points=" << c.points << " skipped=" << c.skipped;
    if (c.gamma_hat) os << " gamma_hat=" << *c.gamma_hat;
    if (c.signature) os << " signature=(" << c.signature->positive << "," << c.signature->negative << ")";
    os << "\n";
  }
  os << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

int exit_code(const Report& r) {
  for (const auto& c : r.checks)
    if (c.over_skip_budget) return 3;
  return r.pass ? 0 : 1;
}

}  // namespace akm

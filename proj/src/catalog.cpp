#include "akm/catalog.hpp"

#include <charconv>

#include "akm/generator.hpp"
#include "json.hpp"

namespace akm {

namespace {

constexpr int max_m = 4;

std::string join_squares(const std::vector<std::string>& x) {
  std::string s;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (a) s += " + ";
    s += x[a] + "*" + x[a];
  }
  return s;
}

/// delta_ab + sign * x_a x_b / (1 - sign * |x|^2)
Manifest quadric_chart(std::string name, int m, int sign) {
  Manifest man;
  man.name = std::move(name);
  man.kind = ManifestKind::Real;
  man.dim = static_cast<std::size_t>(m);
  man.coords = numbered("x", man.dim);
  const auto& x = man.coords;
  std::string norm = m == 1 ? join_squares(x) : "(" + join_squares(x) + ")";
  std::string denom = sign > 0 ? "(1 - " + norm + ")" : "(1 + " + norm + ")";
  std::string op = sign > 0 ? " + " : " - ";
  for (std::size_t a = 0; a < man.dim; ++a) {
    std::vector<Expr> row;
    for (std::size_t b = 0; b <= a; ++b) {
      std::string text = a == b ? "1" + op + x[a] + "^2/" + denom
                                : (sign > 0 ? "" : "-") + x[a] + "*" + x[b] + "/" + denom;
      row.push_back(parse(text, x));
    }
    man.components.push_back(std::move(row));
  }
  man.sample_box.assign(man.dim, Interval{-0.4, 0.4});
  man.expected_gamma = sign * (m - 1.0);
  man.expected_signature = Signature{m, 0};
  return man;
}

Manifest flat(int p, int q) {
  Manifest man;
  man.name = "flat(" + std::to_string(p) + "," + std::to_string(q) + ")";
  man.kind = ManifestKind::Real;
  man.dim = static_cast<std::size_t>(p + q);
  man.coords = numbered("x", man.dim);
  for (std::size_t a = 0; a < man.dim; ++a) {
    std::vector<Expr> row(a + 1, Expr::constant(0.0));
    row[a] = Expr::constant(static_cast<int>(a) < p ? 1.0 : -1.0);
    man.components.push_back(std::move(row));
  }
  man.sample_box.assign(man.dim, Interval{-1.0, 1.0});
  man.expected_gamma = 0.0;
  man.expected_signature = Signature{p, q};
  return man;
}

std::vector<Interval> complex_box(std::size_t m, double re, double im) {
  std::vector<Interval> box(m, Interval{-re, re});
  box.insert(box.end(), m, Interval{-im, im});
  return box;
}

Manifest complex_torus(int m) {
  const auto n = static_cast<std::size_t>(m);
  std::vector<std::vector<Expr>> e(n, std::vector<Expr>(n, Expr::constant(0.0)));
  for (std::size_t a = 0; a < n; ++a) e[a][a] = Expr::constant(1.0);
  Manifest man = frame_manifest("complex_torus(" + std::to_string(m) + ")", n, std::move(e),
                                complex_box(n, 1.0, 0.5));
  man.expected_gamma = 0.0;
  return man;
}

Manifest heisenberg() {
  // e1 = d1, e2 = d2, e3 = z1 d2 + d3
  auto coords = numbered("z", 3);
  std::vector<std::vector<Expr>> e = {
      {parse("1", coords), parse("0", coords), parse("0", coords)},
      {parse("0", coords), parse("1", coords), parse("0", coords)},
      {parse("0", coords), parse("z1", coords), parse("1", coords)},
  };
  return frame_manifest("heisenberg", 3, std::move(e), complex_box(3, 0.5, 0.25));
}

Manifest mutant_nonholo() {
  Manifest base = complex_torus(1);
  Manifest h = materialize_frame(base);
  h.components[0][0] = parse("1 + 0.1*re(z1)", h.coords);
  Manifest out = realify_unchecked(h, "mutant_nonholo", Lineage{base.name, "realify"});
  validate(out);
  return out;
}

int to_int(std::string_view s, std::string_view id) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::UnknownEntry, "bad parameter '" + std::string(s) + "' in " +
                                             std::string(id));
  return v;
}

std::vector<int> int_args(std::string_view args, std::string_view id) {
  std::vector<int> out;
  if (args.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = args.find(',', start);
    out.push_back(to_int(args.substr(start, comma - start), id));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void require_count(const std::vector<int>& args, std::size_t lo, std::size_t hi,
                   std::string_view id) {
  if (args.size() < lo || args.size() > hi)
    throw Error(ErrorKind::UnknownEntry, "wrong number of parameters in " + std::string(id));
}

void require_range(int v, int lo, int hi, std::string_view what) {
  if (v < lo || v > hi)
    throw Error(ErrorKind::ParamOutOfRange, std::string(what) + " = " + std::to_string(v) +
                                                " outside [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"flat(p,q)", "p, q >= 0, 1 <= p+q <= 4", "real",
       "diag(+1 x p, -1 x q); flat(n) is flat(n,0)"},
      {"sphere(m)", "1 <= m <= 4", "real",
       "round sphere chart g = delta + x x^T/(1-|x|^2), gamma = m-1"},
      {"hyperbolic(m)", "1 <= m <= 4", "real",
       "hyperbolic chart g = delta - x x^T/(1+|x|^2), gamma = -(m-1)"},
      {"complex_sphere(m)", "1 <= m <= 4", "holomorphic",
       "analytic continuation of sphere(m), gamma = m-1"},
      {"complex_torus(m)", "1 <= m <= 4", "frame", "identity frame, flat"},
      {"heisenberg", "", "frame", "frame e1 = d1, e2 = d2, e3 = z1 d2 + d3; not Einstein"},
      {"mutant_nonholo", "", "real",
       "realification of 1 + 0.1 re(z1); anti-Hermitian but not holomorphic"},
  };
  return entries;
}

Manifest catalog_get(std::string_view id) {
  std::string_view name = id;
  std::string_view args;
  if (auto open = id.find('('); open != std::string_view::npos) {
    if (id.back() != ')') throw Error(ErrorKind::UnknownEntry, "malformed id " + std::string(id));
    name = id.substr(0, open);
    args = id.substr(open + 1, id.size() - open - 2);
  }

  if (name == "realify") return realify(catalog_get(args));
  if (name == "twin") return twin(catalog_get(args));
  if (name == "complexify") return complexify(catalog_get(args));

  auto params = int_args(args, id);
  if (name == "flat") {
    require_count(params, 1, 2, id);
    int p = params[0], q = params.size() > 1 ? params[1] : 0;
    require_range(p, 0, max_m, "p");
    require_range(q, 0, max_m, "q");
    require_range(p + q, 1, max_m, "p+q");
    return flat(p, q);
  }
  if (name == "sphere" || name == "hyperbolic" || name == "complex_sphere" ||
      name == "complex_torus") {
    require_count(params, 1, 1, id);
    int m = params[0];
    require_range(m, 1, max_m, "m");
    std::string ms = "(" + std::to_string(m) + ")";
    if (name == "sphere") return quadric_chart("sphere" + ms, m, +1);
    if (name == "hyperbolic") return quadric_chart("hyperbolic" + ms, m, -1);
    if (name == "complex_torus") return complex_torus(m);
    Manifest s = quadric_chart("sphere" + ms, m, +1);
    Manifest c = complexify(s);
    c.name = "complex_sphere" + ms;
    return c;
  }
  if (name == "heisenberg" || name == "mutant_nonholo") {
    require_count(params, 0, 0, id);
    return name == "heisenberg" ? heisenberg() : mutant_nonholo();
  }
  throw Error(ErrorKind::UnknownEntry, "no catalog entry '" + std::string(id) + "'");
}

std::string catalog_list_json() {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& e : catalog_entries())
    out.push_back({{"id", e.id}, {"params", e.params}, {"kind", e.kind}, {"notes", e.notes}});
  return out.dump(2) + "\n";
}

std::string catalog_show_json(std::string_view id) { return save_manifest(catalog_get(id)); }

}  // namespace akm

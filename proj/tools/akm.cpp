// akm: command-line front end for the anti-Kaehler metric engine.

#include <charconv>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "akm/catalog.hpp"
#include "akm/generator.hpp"
#include "akm/geometry.hpp"
#include "akm/verify.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int exit_input_error = 2;
constexpr int exit_numerical = 3;

akm::Manifest load_target(const std::string& target) {
  constexpr std::string_view prefix = "catalog:";
  if (target.starts_with(prefix)) return akm::catalog_get(target.substr(prefix.size()));
  return akm::load_manifest_file(target);
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw akm::Error(akm::ErrorKind::Schema, "bad coordinate '" + item + "' in --point");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

json scalar(double v) { return v; }
json scalar(akm::cplx v) { return json::array({v.real(), v.imag()}); }

template <class S>
json matrix_json(const akm::Matrix<S>& m) {
  json out = json::array();
  for (std::size_t a = 0; a < m.n(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < m.n(); ++b) row.push_back(scalar(m(a, b)));
    out.push_back(std::move(row));
  }
  return out;
}

template <class S>
json tensor3_json(const akm::Tensor<S, 3>& t) {
  json out = json::array();
  for (std::size_t a = 0; a < t.n(); ++a) {
    json m = json::array();
    for (std::size_t b = 0; b < t.n(); ++b) {
      json row = json::array();
      for (std::size_t c = 0; c < t.n(); ++c) row.push_back(scalar(t(a, b, c)));
      m.push_back(std::move(row));
    }
    out.push_back(std::move(m));
  }
  return out;
}

template <class S>
json tensor4_json(const akm::Tensor<S, 4>& t) {
  json out = json::array();
  for (std::size_t a = 0; a < t.n(); ++a) {
    json block = json::array();
    for (std::size_t b = 0; b < t.n(); ++b) {
      json m = json::array();
      for (std::size_t c = 0; c < t.n(); ++c) {
        json row = json::array();
        for (std::size_t d = 0; d < t.n(); ++d) row.push_back(scalar(t(a, b, c, d)));
        m.push_back(std::move(row));
      }
      block.push_back(std::move(m));
    }
    out.push_back(std::move(block));
  }
  return out;
}

template <class S>
json curvature_json(const akm::Manifest& man, const akm::CurvatureAtPoint<S>& c) {
  json point = json::array();
  for (const auto& v : c.metric.point) point.push_back(scalar(v));
  return json{{"manifest", man.name},
              {"point", point},
              {"g", matrix_json(c.metric.g)},
              {"christoffel", tensor3_json(c.gamma)},
              {"riemann", tensor4_json(c.riemann)},
              {"ricci", matrix_json(c.ricci)},
              {"scalar", scalar(c.scalar)}};
}

void write_or_print(const akm::Manifest& m, const std::string& out) {
  if (out.empty())
    std::cout << akm::save_manifest(m);
  else
    akm::save_manifest_file(m, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-Kaehler metric verification and Einstein tower generation"};
  app.require_subcommand(1);

  std::string target;
  std::string out;

  auto* verify = app.add_subcommand("verify", "Run the check suite on a manifest");
  akm::RunOptions opts;
  std::string format = "json";
  double gamma = 0.0;
  verify->add_option("target", target, "Manifest file or catalog:<id>")->required();
  verify->add_option("--points", opts.points, "Sample points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", opts.seed, "Sampling seed");
  verify->add_option("--tol", opts.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  auto* gamma_opt = verify->add_option("--gamma", gamma, "Einstein constant to test against");
  verify->add_option("--trials", opts.trials, "Vector pairs per point for curvature identities");
  verify->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* curv = app.add_subcommand("curvature", "Print g, Christoffel, Riemann, Ricci at a point");
  std::string point_text;
  curv->add_option("target", target, "Manifest file or catalog:<id>")->required();
  curv->add_option("--point", point_text,
                   "Comma-separated coordinates; complex manifests take x1..xm,y1..ym")
      ->required();

  auto add_transform = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("target", target, "Manifest file or catalog:<id>")->required();
    sub->add_option("-o,--output", out, "Output file (stdout if omitted)");
    return sub;
  };
  auto* complexify_cmd = add_transform("complexify", "Analytic continuation of a real manifest");
  auto* realify_cmd = add_transform("realify", "Real anti-Kaehler metric 2 Re[g]");
  auto* twin_cmd = add_transform("twin", "Twin metric -2 Im[g]");

  auto* tower_cmd = app.add_subcommand("tower", "Einstein tower levels 1..k");
  std::size_t levels = 1;
  tower_cmd->add_option("target", target, "Manifest file or catalog:<id>")->required();
  tower_cmd->add_option("--levels", levels, "Number of levels")->required();
  tower_cmd->add_option("-o,--output", out, "Output directory")->required();

  auto* catalog = app.add_subcommand("catalog", "Built-in manifests");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "List entries");
  auto* show = catalog->add_subcommand("show", "Print one entry as manifest JSON");
  std::string entry;
  show->add_option("id", entry, "Entry id, e.g. sphere(2)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_input_error;
  }

  try {
    if (*verify) {
      if (*gamma_opt) opts.gamma_override = gamma;
      opts.format = format == "text" ? akm::ReportFormat::Text : akm::ReportFormat::Json;
      akm::Report r = akm::run_verify(load_target(target), opts);
      std::cout << (opts.format == akm::ReportFormat::Text ? akm::report_text(r)
                                                           : akm::report_json(r));
      return akm::exit_code(r);
    }
    if (*curv) {
      akm::Manifest man = load_target(target);
      akm::validate(man);
      auto p = parse_point(point_text);
      if (p.size() != man.real_dim())
        throw akm::Error(akm::ErrorKind::DimensionMismatch,
                         "--point needs " + std::to_string(man.real_dim()) + " coordinates");
      json j;
      if (man.is_complex()) {
        std::vector<akm::cplx> z(man.dim);
        for (std::size_t a = 0; a < man.dim; ++a) z[a] = {p[a], p[man.dim + a]};
        j = curvature_json(man, akm::curvature(akm::evaluate_metric(man, std::span<const akm::cplx>(z))));
      } else {
        j = curvature_json(man, akm::curvature(akm::evaluate_metric(man, std::span<const double>(p))));
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*complexify_cmd) {
      write_or_print(akm::complexify(load_target(target)), out);
      return 0;
    }
    if (*realify_cmd) {
      write_or_print(akm::realify(load_target(target)), out);
      return 0;
    }
    if (*twin_cmd) {
      write_or_print(akm::twin(load_target(target)), out);
      return 0;
    }
    if (*tower_cmd) {
      auto levels_out = akm::tower(load_target(target), levels);
      std::filesystem::create_directories(out);
      for (const auto& lv : levels_out) {
        if (lv.level == 0) continue;
        auto path = std::filesystem::path(out) / ("level" + std::to_string(lv.level) + ".json");
        akm::save_manifest_file(lv.manifest, path.string());
        std::cout << path.string() << " dim=" << lv.manifest.dim << "\n";
      }
      return 0;
    }
    if (*catalog) {
      if (*show)
        std::cout << akm::catalog_show_json(entry);
      else
        std::cout << akm::catalog_list_json();
      return 0;
    }
  } catch (const akm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return akm::is_numerical(e.kind()) ? exit_numerical : exit_input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}

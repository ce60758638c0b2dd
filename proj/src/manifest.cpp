#include "akm/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

#include "akm/error.hpp"

namespace akm {

using json = nlohmann::ordered_json;

const char* to_string(ManifestKind kind) {
  switch (kind) {
    case ManifestKind::Real: return "real";
    case ManifestKind::Holomorphic: return "holomorphic";
    case ManifestKind::Frame: return "frame";
  }
  return "?";
}

std::vector<std::string> numbered(std::string_view prefix, std::size_t n, std::size_t start) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(std::string(prefix) + std::to_string(start + k));
  return out;
}

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::Schema, msg); }
[[noreturn]] void mismatch(const std::string& msg) { throw Error(ErrorKind::DimensionMismatch, msg); }

bool complex_outside_re_im(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return e.value().imag() != 0.0;
    case Op::Var:
    case Op::Re:
    case Op::Im: return false;
    case Op::Neg:
    case Op::PowInt:
    case Op::Func: return complex_outside_re_im(e.lhs());
    default: return complex_outside_re_im(e.lhs()) || complex_outside_re_im(e.rhs());
  }
}

bool valid_transform(const std::string& t) {
  static const std::regex tower("tower-level-[1-9][0-9]*");
  return t == "complexify" || t == "realify" || t == "twin" || std::regex_match(t, tower);
}

void check_expr(const Manifest& m, const Expr& e, const std::string& where) {
  if (var_bound(e) > m.coords.size()) mismatch(where + " refers to a missing coordinate");
  if (m.is_complex() && has_re_im(e))
    throw Error(ErrorKind::HolomorphyViolation,
                where + " uses re()/im() in a " + to_string(m.kind) + " manifest");
  if (!m.is_complex() && complex_outside_re_im(e))
    schema(where + " has a complex constant outside re()/im() in a real manifest");
}

}  // namespace

void validate(const Manifest& m) {
  if (m.name.empty()) schema("manifest name is empty");
  if (m.dim == 0) schema("dim must be positive");
  if (m.coords.size() != m.dim)
    mismatch("expected " + std::to_string(m.dim) + " coordinate names, got " +
             std::to_string(m.coords.size()));
  // reuse the parser's name rules
  (void)parse("0", m.coords);

  if (m.kind == ManifestKind::Frame) {
    if (!m.components.empty()) schema("frame manifests carry no components");
    if (m.frame.size() != m.dim) mismatch("frame must have dim rows");
    for (std::size_t a = 0; a < m.dim; ++a) {
      if (m.frame[a].size() != m.dim) mismatch("frame must be square");
      for (std::size_t mu = 0; mu < m.dim; ++mu)
        check_expr(m, m.frame[a][mu],
                   "frame[" + std::to_string(a) + "][" + std::to_string(mu) + "]");
    }
  } else {
    if (!m.frame.empty()) schema("only frame manifests carry a frame");
    if (m.components.size() != m.dim) mismatch("components must have dim rows");
    for (std::size_t i = 0; i < m.dim; ++i) {
      if (m.components[i].size() != i + 1)
        mismatch("components row " + std::to_string(i) + " must hold " + std::to_string(i + 1) +
                 " lower-triangle entries");
      for (std::size_t j = 0; j <= i; ++j)
        check_expr(m, m.components[i][j],
                   "components[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }

  if (m.sample_box.size() != m.real_dim())
    mismatch("sample_box needs " + std::to_string(m.real_dim()) + " intervals, got " +
             std::to_string(m.sample_box.size()));
  for (const auto& iv : m.sample_box)
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
      schema("sample_box intervals must be finite with lo <= hi");

  if (m.expected_gamma && !std::isfinite(*m.expected_gamma)) schema("expected_gamma must be finite");
  if (m.expected_signature) {
    const auto& s = *m.expected_signature;
    if (s.positive < 0 || s.negative < 0 ||
        static_cast<std::size_t>(s.positive + s.negative) != m.real_dim())
      schema("expected_signature must count the real dimension");
  }
  if (m.lineage) {
    if (m.lineage->parent.empty()) schema("lineage parent is empty");
    if (!valid_transform(m.lineage->transform))
      schema("unknown lineage transform '" + m.lineage->transform + "'");
  }
}

namespace {

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing key '") + key + "'");
  return *it;
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) schema(std::string(what) + " must be a string");
  return j.get<std::string>();
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<std::vector<Expr>> parse_rows(const json& j, const char* what,
                                          const std::vector<std::string>& coords) {
  if (!j.is_array()) schema(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<Expr>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) schema(std::string(what) + " must be an array of arrays");
    std::vector<Expr> r;
    for (const auto& cell : row) r.push_back(parse(as_string(cell, what), coords));
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Accepts the lower triangle or a full square matrix whose entries are
/// structurally symmetric; returns the lower triangle.
std::vector<std::vector<Expr>> to_lower(std::vector<std::vector<Expr>> rows, std::size_t dim) {
  if (rows.size() != dim) mismatch("components must have dim rows");
  bool square = dim > 1 && rows[0].size() == dim;
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t want = square ? dim : i + 1;
    if (rows[i].size() != want)
      mismatch("components row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
               " entries, expected " + std::to_string(want));
  }
  if (!square) return rows;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!(rows[i][j] == rows[j][i]))
        schema("components entries (" + std::to_string(i) + "," + std::to_string(j) +
               ") and its transpose differ");
  for (std::size_t i = 0; i < dim; ++i) rows[i].resize(i + 1);
  return rows;
}

}  // namespace

Manifest load_manifest(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("manifest must be a JSON object");
  static const std::vector<std::string> known{
      "name",       "kind",           "dim",           "coords",
      "components", "frame",          "sample_box",    "expected_gamma",
      "expected_signature", "lineage"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      schema("unknown key '" + key + "'");

  Manifest m;
  m.name = as_string(require(j, "name"), "name");
  std::string kind = as_string(require(j, "kind"), "kind");
  if (kind == "real")
    m.kind = ManifestKind::Real;
  else if (kind == "holomorphic")
    m.kind = ManifestKind::Holomorphic;
  else if (kind == "frame")
    m.kind = ManifestKind::Frame;
  else
    schema("kind must be real, holomorphic or frame");

  const json& dim = require(j, "dim");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) schema("dim must be a positive integer");
  m.dim = dim.get<std::size_t>();

  const json& coords = require(j, "coords");
  if (!coords.is_array()) schema("coords must be an array");
  for (const auto& c : coords) m.coords.push_back(as_string(c, "coords entry"));
  if (m.coords.size() != m.dim)
    mismatch("expected " + std::to_string(m.dim) + " coordinate names, got " +
             std::to_string(m.coords.size()));

  auto has = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };

  if (m.kind == ManifestKind::Frame) {
    if (has("components")) schema("frame manifests carry no components");
    m.frame = parse_rows(require(j, "frame"), "frame", m.coords);
  } else {
    if (has("frame")) schema("only frame manifests carry a frame");
    m.components = to_lower(parse_rows(require(j, "components"), "components", m.coords), m.dim);
  }

  const json& box = require(j, "sample_box");
  if (!box.is_array()) schema("sample_box must be an array");
  for (const auto& iv : box) {
    if (!iv.is_array() || iv.size() != 2) schema("sample_box entries must be [lo, hi]");
    m.sample_box.push_back({as_number(iv[0], "sample_box bound"), as_number(iv[1], "sample_box bound")});
  }

  if (has("expected_gamma")) m.expected_gamma = as_number(j.at("expected_gamma"), "expected_gamma");
  if (has("expected_signature")) {
    const json& s = j.at("expected_signature");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      schema("expected_signature must be [p, q]");
    m.expected_signature = Signature{s[0].get<int>(), s[1].get<int>()};
  }
  if (has("lineage")) {
    const json& l = j.at("lineage");
    if (!l.is_object()) schema("lineage must be an object");
    m.lineage = Lineage{as_string(require(l, "parent"), "lineage parent"),
                        as_string(require(l, "transform"), "lineage transform")};
  }

  validate(m);
  return m;
}

std::string save_manifest(const Manifest& m) {
  json j;
  j["name"] = m.name;
  j["kind"] = to_string(m.kind);
  j["dim"] = m.dim;
  j["coords"] = m.coords;
  auto rows = [&](const std::vector<std::vector<Expr>>& src) {
    json out = json::array();
    for (const auto& row : src) {
      json r = json::array();
      for (const auto& e : row) r.push_back(format(e, m.coords));
      out.push_back(std::move(r));
    }
    return out;
  };
  if (m.kind == ManifestKind::Frame)
    j["frame"] = rows(m.frame);
  else
    j["components"] = rows(m.components);
  json box = json::array();
  for (const auto& iv : m.sample_box) box.push_back({iv.lo, iv.hi});
  j["sample_box"] = std::move(box);
  if (m.expected_gamma) j["expected_gamma"] = *m.expected_gamma;
  if (m.expected_signature)
    j["expected_signature"] = {m.expected_signature->positive, m.expected_signature->negative};
  if (m.lineage) j["lineage"] = {{"parent", m.lineage->parent}, {"transform", m.lineage->transform}};
  return j.dump(2) + "\n";
}

Manifest load_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_manifest(ss.str());
}

void save_manifest_file(const Manifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << save_manifest(m);
}

std::string content_hash(const Manifest& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : save_manifest(m)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace akm

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "akm/error.hpp"
#include "akm/manifest.hpp"

namespace akm {

struct CatalogEntry {
  std::string id;      // e.g. "sphere(m)"
  std::string params;  // e.g. "1 <= m <= 4"
  std::string kind;
  std::string notes;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Builds a catalog manifest from an id such as "sphere(3)", "flat(2,2)" or
/// "heisenberg". The transforms complexify(..), realify(..) and twin(..) may
/// wrap any id. Throws UnknownEntry or ParamOutOfRange.
Manifest catalog_get(std::string_view id);

/// JSON array describing the entries.
std::string catalog_list_json();
/// Manifest JSON of one entry.
std::string catalog_show_json(std::string_view id);

}  // namespace akm

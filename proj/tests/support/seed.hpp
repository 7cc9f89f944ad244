#pragma once

#include <string>

#include "ssaf/catalog.hpp"
#include "ssaf/linker.hpp"
#include "ssaf/model.hpp"

namespace ssaf::testing {

inline std::string data_path(const std::string& rel) { return std::string(SSAF_DATA_DIR) + "/" + rel; }

inline Catalog seed_catalog() { return load_catalog_file(data_path("seed/catalog.json")); }
inline LinkDocument seed_links() { return load_link_table_file(data_path("seed/links.json")); }
inline Model seed_model() { return Model::compile(seed_catalog(), seed_links()); }

}  // namespace ssaf::testing

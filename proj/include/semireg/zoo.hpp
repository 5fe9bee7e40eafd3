#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "semireg/semigroup.hpp"

namespace semireg {

/// Free-form builder parameters, e.g. {"phi": "0.5"} or {"symbol": "neg_square"}.
using ZooParams = std::map<std::string, std::string>;

struct ZooEntry {
  std::string name;
  std::string expected;  // holomorphic_in_limit | not_holomorphic_in_limit | group | cosine_source
  std::string notes;
  std::function<GeneratorSpec(int, const ZooParams&)> builder;
};

const std::vector<ZooEntry>& zoo_catalog();

/// Throws UnknownEntry for names outside the catalog and BadParams for
/// invalid dimensions or parameters.
GeneratorSpec build(const std::string& name, int dim, const ZooParams& params = {});

const ZooEntry& zoo_entry(const std::string& name);

}  // namespace semireg

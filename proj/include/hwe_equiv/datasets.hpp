#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwe_equiv/genotype.hpp"

namespace hwe_equiv {

// Text format: line i (1-based, after skipping blank and '#' lines) holds the
// i whitespace-separated counts of row i of the lower triangle.
GenotypeCounts parse_dataset(std::string_view text);

// One row per line, single spaces, trailing newline.
std::string serialize_dataset(const GenotypeCounts& counts);

struct BuiltinDataset {
    int id;
    std::string_view name;
    std::string_view provenance;
    std::string_view text;
};

const std::vector<BuiltinDataset>& builtin_datasets();

std::optional<GenotypeCounts> builtin_dataset(int id);

// Resolves "builtin:<id>" or reads the file at `source`.
GenotypeCounts load_dataset(const std::string& source);

} // namespace hwe_equiv

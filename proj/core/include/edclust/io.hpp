#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "edclust/embedding.hpp"

namespace edclust {

// Shortest decimal rendering of x that reparses to the identical double
// (17 significant digits).
std::string format_g17(double x);

// Key/value lines embedded in CSV outputs as leading '#' comments; readers
// skip them, so a written file re-ingests losslessly.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// CSV layout: optional '# key: value' comment lines, then a header row of
// component names, then one row per time point.  Ragged rows, non-numeric
// cells, and duplicate names are errors.
TimeSeriesPanel read_panel_csv(const std::filesystem::path& path);
std::string panel_to_csv(const TimeSeriesPanel& panel, const Metadata& metadata);

std::string dissimilarity_to_csv(const DissimilarityMatrix& d,
                                 const std::vector<std::string>& names,
                                 const Metadata& metadata);

// Writes to a temporary file in the target directory, then renames over the
// final path, so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace edclust

#pragma once

#include <filesystem>

#include "smes/records.hpp"

namespace smes {

/// Emits a self-contained SVG line chart of mean final test error vs
/// balance coefficient, with a +-std band, circle markers on each grid
/// point, and tick labels carrying the alpha values. The plotted table is
/// written alongside as CSV (same columns as the sweep summary). Throws
/// std::invalid_argument when the summary has no plottable rows.
void write_alpha_error_chart(const SweepSummary& summary, const std::filesystem::path& svg_path,
                             const std::filesystem::path& csv_path);

}  // namespace smes

#pragma once

#include <string>

namespace itts {

// Static SVG charts from the stage CSVs: per-category mean +/- std drift
// against lookahead, and per-condition MUSHRA score bars.
void plot_drift_summary(const std::string& summary_csv, const std::string& out_svg);
void plot_mushra_summary(const std::string& summary_csv, const std::string& out_svg);

}  // namespace itts

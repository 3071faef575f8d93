#pragma once

#include <string>
#include <utility>
#include <vector>

#include "genlab/experiments.hpp"

namespace genlab {

// Diverging heatmap of mean_diff (blue negative, white zero, red positive),
// one rect per sweep cell. Pure static markup, no external tooling.
std::string svg_heatmap(const SweepResult& result);

// Overlaid KDE polylines with a shared axis; curves carry (label, color).
std::string svg_kde_overlay(
    const std::vector<std::pair<std::string, const KdeCurve*>>& curves,
    const std::vector<std::string>& colors);

}  // namespace genlab

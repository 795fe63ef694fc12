#pragma once

#include <string>
#include <vector>

#include "fracdiff/io.hpp"

namespace fracdiff {

const std::vector<std::string>& figure_ids();

// Data behind one of the figure ids; throws InvalidInput for an unknown id.
std::vector<FigureSeries> make_figure(const std::string& id);

// Inclusive evenly spaced grid, values rounded to 12 decimals so labels stay clean.
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace fracdiff

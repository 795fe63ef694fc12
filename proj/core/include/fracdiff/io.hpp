#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracdiff/volatility.hpp"

namespace fracdiff {

// Shortest decimal that round-trips to the same double.
std::string format_shortest(double v);
// Fixed decimal with the given number of significant digits.
std::string format_significant(double v, int digits);

// Header must be exactly `kind,strike,price`. Spot, rate and τ are not part
// of the file and come from the caller.
QuoteChain read_quotes_csv(std::istream& in, double spot, double rate, double tau);
QuoteChain read_quotes_file(const std::string& path, double spot, double rate, double tau);
void write_quotes_csv(std::ostream& out, const QuoteChain& chain);

struct FigureSeries {
    std::string figure_id;
    std::string name;  // file stem
    std::vector<std::string> headers;
    std::vector<std::vector<double>> columns;
};

void write_csv(std::ostream& out, const FigureSeries& series);

std::string gamma_label(double gamma);  // e.g. "g0.9"

// columns strike,price,bs_vol,fbs_vol_g<γ>...; non-invertible entries print NA
void write_smile_csv(std::ostream& out, const std::vector<SmilePoint>& smile, const std::vector<double>& gammas);

}  // namespace fracdiff

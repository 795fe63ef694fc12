#include "fracdiff/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "fracdiff/error.hpp"

namespace fracdiff {

std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_significant(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return fmt::format("{:.{}f}", v, std::max(digits - 1, 0));
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
    const int decimals = std::max(digits - 1 - exponent, 0);
    return fmt::format("{:.{}f}", v, decimals);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

double parse_number(std::string_view field, std::size_t line) {
    field = trim(field);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty())
        throw Error(ErrorCode::Parse, fmt::format("line {}: '{}' is not a decimal number", line, field));
    return v;
}

}  // namespace

QuoteChain read_quotes_csv(std::istream& in, double spot, double rate, double tau) {
    QuoteChain chain{spot, rate, tau, {}};
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "quote file is empty");
    if (trim(line) != "kind,strike,price")
        throw Error(ErrorCode::Parse, fmt::format("bad header '{}', expected 'kind,strike,price'", trim(line)));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto c1 = row.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
        if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos)
            throw Error(ErrorCode::Parse, fmt::format("line {}: expected 3 fields", lineno));
        Quote q;
        try {
            q.kind = parse_option_kind(std::string(trim(row.substr(0, c1))));
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, fmt::format("line {}: {}", lineno, e.what()));
        }
        q.strike = parse_number(row.substr(c1 + 1, c2 - c1 - 1), lineno);
        q.price = parse_number(row.substr(c2 + 1), lineno);
        if (!(q.strike > 0.0) || !(q.price >= 0.0) || !std::isfinite(q.price))
            throw Error(ErrorCode::Parse, fmt::format("line {}: strike must be > 0 and price >= 0", lineno));
        chain.quotes.push_back(q);
    }
    return chain;
}

QuoteChain read_quotes_file(const std::string& path, double spot, double rate, double tau) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Io, fmt::format("cannot open quote file '{}'", path));
    return read_quotes_csv(f, spot, rate, tau);
}

void write_quotes_csv(std::ostream& out, const QuoteChain& chain) {
    out << "kind,strike,price\n";
    for (const auto& q : chain.quotes)
        out << to_string(q.kind) << ',' << format_shortest(q.strike) << ',' << format_shortest(q.price) << '\n';
}

void write_csv(std::ostream& out, const FigureSeries& s) {
    for (std::size_t j = 0; j < s.headers.size(); ++j) out << (j ? "," : "") << s.headers[j];
    out << '\n';
    const std::size_t rows = s.columns.empty() ? 0 : s.columns.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < s.columns.size(); ++j) out << (j ? "," : "") << format_shortest(s.columns[j][i]);
        out << '\n';
    }
}

std::string gamma_label(double gamma) { return "g" + format_shortest(gamma); }

void write_smile_csv(std::ostream& out, const std::vector<SmilePoint>& smile, const std::vector<double>& gammas) {
    out << "strike,price,bs_vol";
    for (double g : gammas) out << ",fbs_vol_" << gamma_label(g);
    out << '\n';
    auto cell = [](const VolEstimate& v) { return v.ok() ? format_shortest(v.sigma) : std::string("NA"); };
    for (const auto& p : smile) {
        out << format_shortest(p.strike) << ',' << format_shortest(p.market_price) << ',' << cell(p.sigma_bs);
        for (const auto& [g, v] : p.sigma_fbs) out << ',' << cell(v);
        out << '\n';
    }
}

}  // namespace fracdiff

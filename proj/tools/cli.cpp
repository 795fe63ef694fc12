#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fracdiff/calibration.hpp"
#include "fracdiff/error.hpp"
#include "fracdiff/figures.hpp"
#include "fracdiff/fixture.hpp"
#include "fracdiff/io.hpp"
#include "fracdiff/pricing.hpp"
#include "fracdiff/volatility.hpp"

namespace fracdiff::cli {

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct ModelFlags {
    std::string model = "dfrac";
    double alpha = 2.0;
    double gamma = 1.0;
    double sigma = 0.2;

    ModelParams params() const {
        switch (parse_model_kind(model)) {
            case ModelKind::BlackScholes: return ModelParams::black_scholes(sigma);
            case ModelKind::FMLS: return ModelParams::fmls(alpha, sigma);
            case ModelKind::DoubleFractional: return ModelParams::double_fractional(alpha, gamma, sigma);
        }
        return {};
    }
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("--model", f.model, "bs | fmls | dfrac")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "stability, 1 < alpha <= 2")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "time fractionality, 1 - 1/alpha < gamma <= alpha")->capture_default_str();
    cmd->add_option("--sigma", f.sigma, "volatility")->capture_default_str();
}

struct ChainFlags {
    std::string quotes;
    double spot = fixture::kSpot;
    double rate = fixture::kFittedRate;
    double tau = fixture::kFittedTau;

    QuoteChain load() const {
        if (quotes.empty()) {
            QuoteChain c = fixture::chain();
            c.spot = spot;
            c.rate = rate;
            c.tau = tau;
            return c;
        }
        return read_quotes_file(quotes, spot, rate, tau);
    }
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f) {
    cmd->add_option("--quotes", f.quotes, "quote CSV (kind,strike,price); embedded S&P 500 fixture if omitted");
    cmd->add_option("--spot", f.spot, "spot price")->capture_default_str();
    cmd->add_option("--rate", f.rate, "continuously compounded rate")->capture_default_str();
    cmd->add_option("--tau", f.tau, "time to maturity in years")->capture_default_str();
}

std::vector<double> parse_gammas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, fmt::format("bad gamma list entry '{}'", item));
        }
    }
    if (out.empty()) throw Error(ErrorCode::InvalidInput, "empty gamma list");
    return out;
}

// a bad flag value is a usage error even though the CSV reader reports the same text as a parse error
OptionKind kind_flag(const std::string& text) {
    try {
        return parse_option_kind(text);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidInput, e.what());
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Option pricing under space-time fractional diffusion", "fracdiff"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fracdiff 0.1.0");

    // price
    ModelFlags price_model;
    double spot = 100, strike = 100, rate = 0, tau = 1;
    std::string kind = "call";
    bool price_json = false;
    auto* price_cmd = app.add_subcommand("price", "price a European option");
    add_model_flags(price_cmd, price_model);
    price_cmd->add_option("--spot", spot)->capture_default_str();
    price_cmd->add_option("--strike", strike)->capture_default_str();
    price_cmd->add_option("--rate", rate)->capture_default_str();
    price_cmd->add_option("--tau", tau)->capture_default_str();
    price_cmd->add_option("--kind", kind, "call | put")->capture_default_str();
    price_cmd->add_flag("--json", price_json, "full-precision JSON output");

    // mu
    ModelFlags mu_model;
    std::string method = "series";
    bool mu_json = false;
    auto* mu_cmd = app.add_subcommand("mu", "risk-neutral parameter mu_gamma");
    mu_cmd->add_option("--alpha", mu_model.alpha)->capture_default_str();
    mu_cmd->add_option("--gamma", mu_model.gamma)->capture_default_str();
    mu_cmd->add_option("--sigma", mu_model.sigma)->capture_default_str();
    mu_cmd->add_option("--method", method, "series | mb | approx")->capture_default_str();
    mu_cmd->add_flag("--json", mu_json);

    // smile
    ChainFlags smile_chain;
    std::string gamma_list = "0.8,0.9,1.1";
    auto* smile_cmd = app.add_subcommand("smile", "Black-Scholes and fractional implied volatilities per strike");
    add_chain_flags(smile_cmd, smile_chain);
    smile_cmd->add_option("--gammas", gamma_list, "comma-separated gamma values")->capture_default_str();

    // calibrate
    ChainFlags cal_chain;
    std::string cal_model = "dfrac";
    bool cal_json = false;
    auto* cal_cmd = app.add_subcommand("calibrate", "fit model parameters to a quote chain");
    add_chain_flags(cal_cmd, cal_chain);
    cal_cmd->add_option("--model", cal_model, "bs | fmls | dfrac")->capture_default_str();
    cal_cmd->add_flag("--json", cal_json);

    // figures
    std::string figure_id = "all";
    std::string out_dir = ".";
    auto* fig_cmd = app.add_subcommand("figures", "write figure data as CSV files");
    fig_cmd->add_option("--id", figure_id, "fig1 | fig3 | fig4 | fig5 | fig6 | all")->capture_default_str();
    fig_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

    // fixture
    auto* fixture_cmd = app.add_subcommand("fixture", "print the embedded S&P 500 quote chain as CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (*price_cmd) {
            const ModelParams p = price_model.params();
            const PricingInputs in(spot, strike, rate, tau, kind_flag(kind));
            const PriceResult r = price_detailed(p, in);
            if (price_json) {
                out << json{{"model", to_string(p.kind)}, {"alpha", p.alpha},      {"gamma", p.gamma},
                            {"sigma", p.sigma},           {"kind", to_string(in.kind())}, {"price", r.price},
                            {"mu", r.mu},                 {"method", to_string(r.method)}}
                           .dump()
                    << '\n';
            } else {
                out << format_significant(r.price, 8) << '\n';
            }
        } else if (*mu_cmd) {
            const ModelParams p = ModelParams::double_fractional(mu_model.alpha, mu_model.gamma, mu_model.sigma);
            double mu;
            if (method == "series") {
                mu = mu_gamma_series(p).mu;
            } else if (method == "mb") {
                mu = mu_gamma_mb(p);
            } else if (method == "approx") {
                mu = mu_gamma_approx(p);
            } else {
                throw Error(ErrorCode::InvalidInput, fmt::format("unknown method '{}' (series | mb | approx)", method));
            }
            if (mu_json)
                out << json{{"alpha", p.alpha}, {"gamma", p.gamma}, {"sigma", p.sigma}, {"method", method}, {"mu", mu}}
                           .dump()
                    << '\n';
            else
                out << format_significant(mu, 7) << '\n';
        } else if (*smile_cmd) {
            const std::vector<double> gammas = parse_gammas(gamma_list);
            const QuoteChain chain = smile_chain.load();
            write_smile_csv(out, build_smile(chain, gammas), gammas);
        } else if (*cal_cmd) {
            const QuoteChain chain = cal_chain.load();
            const CalibrationResult r = calibrate(chain, parse_model_kind(cal_model));
            if (cal_json) {
                out << json{{"model", to_string(r.params.kind)},
                            {"alpha", r.params.alpha},
                            {"gamma", r.params.gamma},
                            {"sigma", r.params.sigma},
                            {"aggregated_error", r.aggregated_error},
                            {"evaluations", r.evaluations},
                            {"converged", r.converged},
                            {"per_quote_errors", r.per_quote_errors}}
                           .dump()
                    << '\n';
            } else {
                out << "model: " << to_string(r.params.kind) << '\n'
                    << "alpha: " << format_significant(r.params.alpha, 7) << '\n'
                    << "gamma: " << format_significant(r.params.gamma, 7) << '\n'
                    << "sigma: " << format_significant(r.params.sigma, 7) << '\n'
                    << "AE: " << format_significant(r.aggregated_error, 7) << '\n'
                    << "evaluations: " << r.evaluations << '\n'
                    << "converged: " << (r.converged ? "true" : "false") << '\n';
            }
        } else if (*fig_cmd) {
            std::vector<std::string> ids;
            if (figure_id == "all") {
                ids = figure_ids();
            } else {
                ids = {figure_id};
            }
            std::vector<FigureSeries> all;
            for (const auto& id : ids)
                for (auto& s : make_figure(id)) all.push_back(std::move(s));
            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            for (const auto& s : all) {
                const auto path = std::filesystem::path(out_dir) / (s.name + ".csv");
                std::ofstream f(path);
                if (!f) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
                write_csv(f, s);
                if (!f) throw Error(ErrorCode::Io, fmt::format("write failed for '{}'", path.string()));
                out << path.string() << '\n';
            }
        } else if (*fixture_cmd) {
            write_quotes_csv(out, fixture::chain());
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_io() ? kExitIo : kExitValidation;
    }
    return kExitOk;
}

}  // namespace fracdiff::cli

#include "santalo/cli.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "santalo/extremal.hpp"
#include "santalo/gammafn.hpp"
#include "santalo/profile_io.hpp"
#include "santalo/verify.hpp"

namespace santalo::cli {

namespace {

using io::format_number;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

Range parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--range: expected LO:HI, got '" + text + "'");
    Range r;
    try {
        std::size_t used = 0;
        r.lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
        const auto rest = text.substr(colon + 1);
        r.hi = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
        throw UsageError("--range: expected two numbers LO:HI, got '" + text + "'");
    }
    if (!(r.lo > 0.0 && r.hi > r.lo && std::isfinite(r.hi)))
        throw UsageError("--range: need 0 < LO < HI < inf, got '" + text + "'");
    return r;
}

std::vector<double> log_grid(const Range& r, int points) {
    std::vector<double> out;
    out.reserve(points);
    const double span = std::log(r.hi / r.lo);
    for (int i = 0; i < points; ++i) out.push_back(r.lo * std::exp(span * i / std::max(1, points - 1)));
    return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + path + "'");
    file << text;
}

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open input file '" + path + "'");
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------

struct TableRow {
    int n = 0;
    std::optional<extremal::LambdaEstimate> est;
    std::string error;
};

const char* const kTableColumns[] = {"n",   "log_lambda", "lambda_hat_minus_1", "r_n",
                                     "a_n", "n_a_n",      "residual_n1",        "residual_n2"};

std::vector<std::string> row_values(const TableRow& row) {
    const auto& e = *row.est;
    return {std::to_string(row.n),          format_number(e.log_lambda),
            format_number(e.lambda_hat_minus_1), format_number(row.n * e.lambda_hat_minus_1),
            format_number(e.a_n),           format_number(row.n * e.a_n),
            format_number(e.residual_n1),   format_number(e.residual_n2)};
}

int cmd_lambda_table(int n_min, int n_max, const std::string& format, bool keep_going, const std::string& path,
                     std::ostream& out, std::ostream& err) {
    if (n_min < 1 || n_max < n_min) throw UsageError("need 1 <= --n-min <= --n-max");
    std::vector<TableRow> rows;
    bool failed = false;
    for (int n = n_min; n <= n_max; ++n) {
        TableRow row;
        row.n = n;
        try {
            row.est = extremal::solve_lambda(n);
        } catch (const std::exception& e) {
            failed = true;
            row.error = e.what();
            err << "n = " << n << ": " << e.what() << "\n";
            if (!keep_going) return kUsage;
        }
        rows.push_back(std::move(row));
    }

    std::ostringstream s;
    if (format == "csv") {
        s << "# lambda-table n_min=" << n_min << " n_max=" << n_max << "\n";
        for (std::size_t i = 0; i < std::size(kTableColumns); ++i) s << (i ? "," : "") << kTableColumns[i];
        s << "\n";
        for (const auto& row : rows) {
            if (!row.est) {
                s << row.n << ",error\n";
                continue;
            }
            const auto v = row_values(row);
            for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
            s << "\n";
        }
    } else {
        s << "{\"n_min\": " << n_min << ", \"n_max\": " << n_max << ", \"rows\": [";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            s << (r ? ",\n  " : "\n  ") << "{";
            if (!rows[r].est) {
                s << "\"n\": " << rows[r].n << ", \"error\": " << nlohmann::json(rows[r].error).dump() << "}";
                continue;
            }
            const auto v = row_values(rows[r]);
            for (std::size_t i = 0; i < v.size(); ++i)
                s << (i ? ", " : "") << "\"" << kTableColumns[i] << "\": " << v[i];
            s << "}";
        }
        s << "\n]}\n";
    }
    emit(s.str(), path, out);
    return failed ? kUsage : kOk;
}

int cmd_maximizer(int n, std::optional<double> alpha, const std::string& format, const std::string& path,
                  std::ostream& out) {
    if (n < 1) throw UsageError("--n must be >= 1");
    const auto e = extremal::solve_lambda(n);
    std::vector<std::pair<std::string, std::string>> fields{
        {"n", std::to_string(n)},
        {"log_lambda", format_number(e.log_lambda)},
        {"log_factorial", format_number(gammafn::log_factorial(n))},
        {"lambda_hat_minus_1", format_number(e.lambda_hat_minus_1)},
        {"a_n", format_number(e.a_n)},
        {"n_a_n", format_number(n * e.a_n)},
        {"bracket_lo", format_number(e.bracket.first)},
        {"bracket_hi", format_number(e.bracket.second)},
        {"residual_n1", format_number(e.residual_n1)},
        {"residual_n2", format_number(e.residual_n2)},
        {"z1", format_number(e.roots.z1)},
        {"z2", format_number(e.roots.z2)},
        {"z3", format_number(e.roots.z3)},
        {"single_peak", e.single_peak ? "true" : "false"},
    };
    if (alpha) {
        fields.emplace_back("alpha", format_number(*alpha));
        try {
            const auto [lo, hi] = extremal::a_bracket(n, *alpha);
            fields.emplace_back("alpha_bracket_lo", format_number(lo));
            fields.emplace_back("alpha_bracket_hi", format_number(hi));
            fields.emplace_back("a_n_in_alpha_bracket", e.a_n >= lo && e.a_n <= hi ? "true" : "false");
        } catch (const extremal::BracketInvalid&) {
            fields.emplace_back("alpha_bracket", "invalid");
        }
    }
    std::ostringstream s;
    if (format == "csv") {
        s << "# maximizer n=" << n << "\nkey,value\n";
        for (const auto& [k, v] : fields) s << k << "," << v << "\n";
    } else {
        s << "{";
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto& [k, v] = fields[i];
            s << (i ? ", " : "") << "\"" << k << "\": " << (k == "alpha_bracket" ? "\"" + v + "\"" : v);
        }
        s << "}\n";
    }
    emit(s.str(), path, out);
    return kOk;
}

struct LambdaChoice {
    std::string label;
    double log_lambda = 0.0;
};

LambdaChoice resolve_lambda(const std::string& mode, int n) {
    if (mode == "factorial" || mode == "n!") return {"factorial", gammafn::log_factorial(n)};
    if (mode == "solved" || mode == "lambda_n") return {"solved", extremal::solve_lambda(n).log_lambda};
    try {
        std::size_t used = 0;
        const double v = std::stod(mode, &used);
        if (used != mode.size() || !std::isfinite(v)) throw std::invalid_argument("bad");
        return {"explicit", v};
    } catch (const std::logic_error&) {
        throw UsageError("--lambda: expected factorial, solved, or a log value; got '" + mode + "'");
    }
}

int cmd_scan_m(int n, const std::string& mode, const Range& range, int points, const std::string& path,
               std::ostream& out) {
    if (n < 1) throw UsageError("--n must be >= 1");
    if (points < 2) throw UsageError("--points must be >= 2");
    const auto lambda = resolve_lambda(mode, n);
    std::ostringstream s;
    s << "# scan-m n=" << n << " lambda=" << lambda.label << " log_lambda=" << format_number(lambda.log_lambda)
      << "\n";
    try {
        const auto r = extremal::roots_of_m(n, lambda.log_lambda);
        s << "# roots z1=" << format_number(r.z1) << " z2=" << format_number(r.z2) << " z3=" << format_number(r.z3)
          << "\n";
    } catch (const extremal::OneRootCase& e) {
        s << "# roots OneRootCase: " << e.what() << "\n";
    }
    s << "z,sign,log_abs_m\n";
    for (double z : log_grid(range, points)) {
        s << format_number(z) << "," << extremal::m_sign(z, n, lambda.log_lambda) << ","
          << format_number(extremal::log_abs_m(z, n, lambda.log_lambda)) << "\n";
    }
    emit(s.str(), path, out);
    return kOk;
}

int cmd_scan_g(int n, std::optional<Range> range, int points, const std::string& path, std::ostream& out) {
    if (n < 1) throw UsageError("--n must be >= 1");
    if (points < 2) throw UsageError("--points must be >= 2");
    const double log_fact = gammafn::log_factorial(n);
    Range r;
    if (range) {
        r = *range;
    } else {
        const auto roots = extremal::roots_of_m(n, log_fact);
        r = {roots.z1, roots.z2};
    }
    std::vector<double> as;
    std::vector<double> gs;
    for (int i = 0; i < points; ++i) {
        const double a = r.lo + (r.hi - r.lo) * i / (points - 1);
        as.push_back(a);
        gs.push_back(extremal::big_g(a, n));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < gs.size(); ++i)
        if (gs[i] > gs[best]) best = i;
    std::ostringstream s;
    s << "# scan-g n=" << n << " range=" << format_number(r.lo) << ":" << format_number(r.hi) << "\n";
    s << "# argmax a=" << format_number(as[best]) << " log_G=" << format_number(gs[best]) << "\n";
    s << "a,log_G,G_over_factorial_minus_1\n";
    for (std::size_t i = 0; i < as.size(); ++i)
        s << format_number(as[i]) << "," << format_number(gs[i]) << "," << format_number(std::expm1(gs[i] - log_fact))
          << "\n";
    emit(s.str(), path, out);
    return kOk;
}

int cmd_transform(const std::string& op, const std::string& in, const std::string& path, std::ostream& out) {
    const auto p = io::parse_profile(read_input(in));
    if (op == "J") {
        emit(io::format_profile(j_transform(p)), path, out);
    } else if (op == "L") {
        emit(io::format_profile(legendre(p)), path, out);
    } else {
        std::array<ConvexProfile, 1> one{p};
        const auto grid = evaluation_grid(one);
        std::ostringstream s;
        s << "# transform A points=" << grid.size() << " grid=geometric 1e-3..1e3 plus breakpoints\n";
        s << "s,value\n";
        for (double x : grid) s << format_number(x) << "," << format_number(polarity(p, x)) << "\n";
        emit(s.str(), path, out);
    }
    return kOk;
}

int cmd_check(const std::string& suite, std::optional<std::uint64_t> seed, std::optional<int> cases,
              const std::string& path, std::ostream& out) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = verify::suite_names();
    } else {
        verify::default_seed(suite);  // throws UnknownSuite
        names.push_back(suite);
    }
    if (cases && *cases < 1) throw UsageError("--cases must be >= 1");
    std::vector<verify::SuiteReport> reports;
    for (const auto& name : names) {
        verify::ProfileSampler sampler;
        sampler.seed = seed.value_or(verify::default_seed(name));
        reports.push_back(verify::run_suite(name, sampler, cases.value_or(verify::default_cases(name))));
    }
    emit(verify::to_json(reports) + "\n", path, out);
    for (const auto& r : reports)
        if (!r.passed()) return kCheckFailed;
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Santalo-type ratio of the J transform: extremal values, scans and checks", "santalo"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";
    const auto format_check = CLI::IsMember({"csv", "json"});

    auto* table = app.add_subcommand("lambda-table", "lambda_n, a_n and certificates for a range of n");
    int n_min = 1;
    int n_max = 100;
    bool keep_going = false;
    table->add_option("--n-min", n_min, "first n")->capture_default_str();
    table->add_option("--n-max", n_max, "last n")->capture_default_str()->check(CLI::Range(1, 1000));
    table->add_option("--format", format, "csv or json")->check(format_check)->capture_default_str();
    table->add_option("--out", out_path, "output path (default stdout)");
    table->add_flag("--keep-going", keep_going, "report failed rows and continue");

    auto* maxim = app.add_subcommand("maximizer", "solver output for one n");
    int n = 10;
    std::optional<double> alpha;
    maxim->add_option("--n", n, "dimension")->capture_default_str();
    maxim->add_option("--alpha", alpha, "also validate the bracket 1/(n +- n^alpha)");
    maxim->add_option("--format", format, "csv or json")->check(format_check)->capture_default_str();
    maxim->add_option("--out", out_path, "output path (default stdout)");

    auto* scan_m = app.add_subcommand("scan-m", "sign and magnitude of m_lambda on a log grid");
    std::string lambda_mode = "factorial";
    std::string range_text;
    int points = 1000;
    scan_m->add_option("--n", n, "dimension")->capture_default_str();
    scan_m->add_option("--lambda", lambda_mode, "factorial, solved, or log(lambda)")->capture_default_str();
    scan_m->add_option("--range", range_text, "z range LO:HI (default 1e-3:1e3)");
    scan_m->add_option("--points", points, "grid size")->capture_default_str();
    scan_m->add_option("--out", out_path, "output path (default stdout)");

    auto* scan_g = app.add_subcommand("scan-g", "log G(a) on a linear grid");
    scan_g->add_option("--n", n, "dimension")->capture_default_str();
    scan_g->add_option("--range", range_text, "a range LO:HI (default: [z1, z2] of m_{n!})");
    scan_g->add_option("--points", points, "grid size")->capture_default_str();
    scan_g->add_option("--out", out_path, "output path (default stdout)");

    auto* transform = app.add_subcommand("transform", "apply J, L or A to a profile document");
    std::string op;
    std::string in_path;
    transform->add_option("--op", op, "J, L or A")->required()->check(CLI::IsMember({"J", "L", "A"}));
    transform->add_option("--in", in_path, "profile JSON path, or - for stdin")->required();
    transform->add_option("--out", out_path, "output path (default stdout)");

    auto* check = app.add_subcommand("check", "run property suites");
    std::string suite = "all";
    std::optional<std::uint64_t> seed;
    std::optional<int> cases;
    check->add_option("--suite", suite, "suite name or all")->capture_default_str();
    check->add_option("--seed", seed, "override the per-suite default seed");
    check->add_option("--cases", cases, "override the per-suite default case count");
    check->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*table) return cmd_lambda_table(n_min, n_max, format, keep_going, out_path, out, err);
        if (*maxim) return cmd_maximizer(n, alpha, format, out_path, out);
        if (*scan_m) {
            const Range r = range_text.empty() ? Range{1e-3, 1e3} : parse_range(range_text);
            return cmd_scan_m(n, lambda_mode, r, points, out_path, out);
        }
        if (*scan_g) {
            std::optional<Range> r;
            if (!range_text.empty()) r = parse_range(range_text);
            return cmd_scan_g(n, r, points, out_path, out);
        }
        if (*transform) return cmd_transform(op, in_path, out_path, out);
        if (*check) return cmd_check(suite, seed, cases, out_path, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const io::ParseError& e) {
        err << "error: " << in_path << ": " << e.what() << "\n";
        return kUsage;
    } catch (const verify::UnknownSuite& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace santalo::cli

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "santalo/cli.hpp"
#include "santalo/extremal.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "santalo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = santalo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    return cells;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const auto path = fs::temp_directory_path() / ("santalo_cli_" + name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("lambda-table csv and json carry the same numbers") {
    const auto csv = run({"lambda-table", "--n-min", "1", "--n-max", "12"});
    const auto json = run({"lambda-table", "--n-min", "1", "--n-max", "12", "--format", "json"});
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    const auto lines = data_lines(csv.out);
    const auto header = split(lines[0]);
    const auto doc = nlohmann::json::parse(json.out);
    REQUIRE(doc["rows"].size() == 12);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        const auto& row = doc["rows"][i - 1];
        for (std::size_t c = 0; c < header.size(); ++c) CHECK(std::stod(cells[c]) == row[header[c]].get<double>());
    }
    CHECK(run({"lambda-table", "--n-max", "1001"}).code == 2);
}

TEST_CASE("output is deterministic") {
    CHECK(run({"lambda-table", "--n-max", "5"}).out == run({"lambda-table", "--n-max", "5"}).out);
    CHECK(run({"check", "--suite", "involution", "--cases", "20"}).out ==
          run({"check", "--suite", "involution", "--cases", "20"}).out);
}

TEST_CASE("scan-m shows three sign changes at the factorial") {
    const auto r = run({"scan-m", "--n", "10", "--points", "2000"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# roots z1=") != std::string::npos);
    const auto lines = data_lines(r.out);
    CHECK(lines[0] == "z,sign,log_abs_m");
    int flips = 0;
    int prev = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const int s = std::stoi(split(lines[i])[1]);
        if (prev != 0 && s != 0 && s != prev) ++flips;
        if (s != 0) prev = s;
    }
    CHECK(flips == 3);
    const auto big = run({"scan-m", "--n", "3", "--lambda", "10"});
    CHECK(big.code == 0);
    CHECK(big.out.find("OneRootCase") != std::string::npos);
}

TEST_CASE("scan-g peaks at the solver's maximizer") {
    const int points = 2001;
    const auto r = run({"scan-g", "--n", "5", "--points", std::to_string(points)});
    REQUIRE(r.code == 0);
    const auto est = santalo::extremal::solve_lambda(5);
    const auto lines = data_lines(r.out);
    double best_a = 0.0;
    double best = -1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        const double g = std::stod(cells[1]);
        CHECK(g <= est.log_lambda + 1e-9);
        if (g > best) {
            best = g;
            best_a = std::stod(cells[0]);
        }
    }
    const double step = (est.bracket.second - est.bracket.first) / (points - 1);
    CHECK(std::abs(best_a - est.a_n) <= step);
    CHECK(std::stod(split(lines[1])[1]) < best);
    CHECK(std::stod(split(lines.back())[1]) < best);
}

TEST_CASE("transform") {
    const auto tent = write_temp("tent.json", R"({"breakpoints": [[0, 0], [1, 2]], "tail_slope": "inf"})");
    const auto j = run({"transform", "--op", "J", "--in", tent.string()});
    REQUIRE(j.code == 0);
    CHECK(j.out == "{\"breakpoints\": [[0, 0], [0.5, 0.5]], \"tail_slope\": \"inf\"}\n");
    const auto once = write_temp("once.json", j.out);
    const auto twice = run({"transform", "--op", "J", "--in", once.string()});
    CHECK(twice.out == "{\"breakpoints\": [[0, 0], [1, 2]], \"tail_slope\": \"inf\"}\n");

    const auto ind = write_temp("ind.json", R"({"breakpoints": [[0, 0], [1, 0]], "tail_slope": "inf"})");
    CHECK(run({"transform", "--op", "L", "--in", ind.string()}).out ==
          "{\"breakpoints\": [[0, 0]], \"tail_slope\": 1}\n");
    const auto a = run({"transform", "--op", "A", "--in", ind.string()});
    CHECK(a.code == 0);
    CHECK(a.out.find("inf") != std::string::npos);

    const auto bad = write_temp("bad.json", "{\"breakpoints\": [[0, 0],\n [1, 2] \"tail_slope\": 1}");
    const auto err = run({"transform", "--op", "J", "--in", bad.string()});
    CHECK(err.code == 2);
    CHECK(err.err.find("line 2") != std::string::npos);
    CHECK(run({"transform", "--op", "Q", "--in", ind.string()}).code == 2);
}

TEST_CASE("check") {
    const auto ok = run({"check", "--suite", "t-improvement", "--cases", "30"});
    CHECK(ok.code == 0);
    const auto doc = nlohmann::json::parse(ok.out);
    CHECK(doc["suites"][0]["worst"].contains("min_margin"));
    const auto bad = run({"check", "--suite", "bogus"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("involution") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"no-such-command"}).code == 2);
}

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

std::string cli_path() {
    const char* p = std::getenv("EPBOUND_CLI");
    REQUIRE_MESSAGE(p != nullptr, "EPBOUND_CLI not set");
    return p;
}

std::string data_path() {
    const char* p = std::getenv("EPBOUND_DATA");
    REQUIRE_MESSAGE(p != nullptr, "EPBOUND_DATA not set");
    return p;
}

std::string run(const std::string& args, int& code, bool merge_stderr = true) {
    const std::string cmd = cli_path() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
    const int rc = pclose(pipe);
    code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return out;
}

double value_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size()));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

} // namespace

TEST_CASE("cli bound") {
    int code = 0;
    const std::string out =
        run("bound --side upper --form c-simple --mean-z 0 --v-n 1 --x 1", code);
    CHECK(code == 0);
    CHECK(out.find("bound 0.818730753078") != std::string::npos);
    CHECK(out.find("v 1") != std::string::npos);

    const std::string at_zero = run("bound --side lower --form b --v-n 1 --x 0", code);
    CHECK(code == 0);
    CHECK(value_after(at_zero, "bound ") == 1.0);

    run("bound --side upper --form c-simple --v-n 1 --x -1", code);
    CHECK(code == 2);
    run("bound --side upper --form z --v-n 1 --x 1", code);
    CHECK(code == 2);
    run("bound --side upper --form b --x 1", code); // v = 0
    CHECK(code == 2);

    SUBCASE("json and csv formats, --out file") {
        const std::string js =
            run("bound --format json --side upper --form c-tight --v-n 2 --x 1", code);
        CHECK(code == 0);
        CHECK(js.find("\"bound\":") != std::string::npos);
        CHECK(js.find("\"v\":2.0") != std::string::npos);

        std::remove("/tmp/epbound_out.csv");
        run("bound --format csv --out /tmp/epbound_out.csv --side upper --form b --v-n 1 --x 2",
            code);
        CHECK(code == 0);
        std::ifstream f("/tmp/epbound_out.csv");
        std::string header;
        std::getline(f, header);
        CHECK(header == "side,form,mean_z,v_n,v,x,bound");
    }
}

TEST_CASE("cli invert round-trips") {
    int code = 0;
    const std::string out =
        run("invert --side upper --form c-simple --v-n 1 --delta 0.81873075307798185", code);
    CHECK(code == 0);
    CHECK(std::fabs(value_after(out, "\nx ") - 1.0) <= 1e-9);

    const std::string lower =
        run("invert --side lower --form c-simple --v-n 1 --delta 0.77880078307140487", code);
    CHECK(code == 0);
    CHECK(std::fabs(value_after(lower, "\nx ") - 1.0) <= 1e-9);

    run("invert --side upper --form b --v-n 1 --delta 1.5", code);
    CHECK(code == 2);
}

TEST_CASE("cli compare table") {
    int code = 0;
    const std::string out = run("compare --mean-z 0 --v-n 1 --x-grid 0:3:7", code);
    CHECK(code == 0);
    const auto rows = parse_csv(out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0][0] == "x");
    CHECK(rows[0][11] == "rademacher_median_centered");
    // x = 0 row: every bound is 1.
    for (std::size_t c = 1; c < rows[1].size(); ++c) CHECK(rows[1][c] == "1");
    // tight <= simple columns, and columns nonincreasing in x.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][2]) <= std::stod(rows[i][3]) + 1e-12);
        CHECK(std::stod(rows[i][6]) <= std::stod(rows[i][7]) + 1e-12);
        if (i > 1) {
            for (std::size_t c = 1; c < rows[i].size(); ++c) {
                CHECK(std::stod(rows[i][c]) <= std::stod(rows[i - 1][c]) + 1e-12);
            }
        }
    }
    run("compare --v-n 1 --x-grid \"\"", code);
    CHECK(code == 2);
}

TEST_CASE("cli simulate exact mode") {
    int code = 0;
    const std::string out =
        run("simulate --scenario " + data_path() + "/two_function_signs.json", code);
    CHECK(code == 0);
    CHECK(out.find("\"check\": \"tail_bounds\"") != std::string::npos);
    CHECK(out.find("\"check\": \"log_laplace_bounds\"") != std::string::npos);
    CHECK(out.find("\"check\": \"variance_bound\"") != std::string::npos);
    CHECK(out.find("\"pass\": false") == std::string::npos);

    SUBCASE("zero scenario passes trivially") {
        run("simulate --scenario " + data_path() + "/zero_functions.json", code);
        CHECK(code == 0);
    }
    SUBCASE("csv summary") {
        const std::string csv = run("simulate --format csv --scenario " + data_path() +
                                        "/general_two_coord.json",
                                    code);
        CHECK(code == 0);
        CHECK(csv.rfind("check_name,domain,worst_margin,pass", 0) == 0);
    }
}

TEST_CASE("cli simulate fault injection") {
    int code = 0;
    run("simulate --perturb 0.95 --scenario " + data_path() + "/single_sign.json", code);
    CHECK(code == 1);
    run("simulate --perturb 1.05 --scenario " + data_path() + "/single_sign.json", code);
    CHECK(code == 0);
}

TEST_CASE("cli simulate diagnostics") {
    int code = 0;
    const std::string bad_key = write_temp(
        "epbound_bad_key.json", R"({"kind": "rademacher", "zeta": [[1]], "bogus": 3})");
    const std::string out1 = run("simulate --scenario " + bad_key, code);
    CHECK(code == 2);
    CHECK(out1.find("unknown key 'bogus'") != std::string::npos);

    const std::string bad_syntax = write_temp("epbound_bad_syntax.json", "{ nope");
    const std::string out2 = run("simulate --scenario " + bad_syntax, code);
    CHECK(code == 2);

    const std::string bad_centering = write_temp("epbound_bad_centering.json", R"({
        "kind": "general",
        "coordinates": [{"atoms": [{"value": -1.0, "prob": 0.5}, {"value": 1.0, "prob": 0.5}]}],
        "functions": [[[-0.4, 0.6]]]
    })");
    const std::string out3 = run("simulate --scenario " + bad_centering, code);
    CHECK(code == 2);
    CHECK(out3.find("fails validation") != std::string::npos);

    run("simulate --scenario /nonexistent.json", code);
    CHECK(code == 2);
}

TEST_CASE("cli simulate Monte Carlo is byte-identical across workers") {
    int code1 = 0;
    int code8 = 0;
    const std::string base = "simulate --mode mc --trials 20000 --seed 9 --scenario " +
                             data_path() + "/two_function_signs.json";
    const std::string w1 = run(base + " --workers 1", code1, false);
    const std::string w8 = run(base + " --workers 8", code8, false);
    CHECK(code1 == 0);
    CHECK(code8 == 0);
    CHECK(w1 == w8);
    CHECK(w1.find("\"advisory\": true") != std::string::npos);

    // Repeating the identical invocation also gives identical bytes.
    const std::string again = run(base + " --workers 1", code1, false);
    CHECK(again == w1);
}

TEST_CASE("cli lemmas") {
    int code = 0;
    const std::string out = run("lemmas --grid-points 100", code);
    CHECK(code == 0);
    CHECK(out.find("phi_root=0.46") != std::string::npos);
    CHECK(out.find("crossing_root=0.76") != std::string::npos);
    CHECK(out.find("\"pass\": false") == std::string::npos);
    CHECK(out.find("series_coefficients") != std::string::npos);
    CHECK(out.find("legendre_conjugate") != std::string::npos);
    CHECK(out.find("entropy_inequality") != std::string::npos);

    run("lemmas --grid-points 50", code);
    CHECK(code == 2);

    SUBCASE("pass verdicts are grid-stable") {
        auto verdicts = [&](const std::string& args) {
            int rc = 0;
            const std::string csv = run(args, rc, false);
            CHECK(rc == 0);
            std::vector<std::string> cols;
            std::stringstream ss(csv);
            std::string line;
            while (std::getline(ss, line)) {
                const auto comma = line.rfind(',');
                if (comma != std::string::npos) cols.push_back(line.substr(comma + 1));
            }
            return cols;
        };
        CHECK(verdicts("lemmas --grid-points 100 --format csv") ==
              verdicts("lemmas --grid-points 512 --format csv"));
    }
}

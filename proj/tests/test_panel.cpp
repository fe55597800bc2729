#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "tempoca/error.hpp"
#include "tempoca/panel.hpp"

using namespace tempoca;

namespace {

Panel random_panel(std::size_t rows, std::size_t cols, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < cols; ++c) names.push_back("x" + std::to_string(c));
    std::vector<double> data(rows * cols);
    for (double& v : data) v = dist(gen) * 1e3;
    return Panel(std::move(names), std::move(data), rows);
}

} // namespace

TEST_CASE("panel shape and access", "[panel]") {
    Panel p({"a", "b"}, {1, 2, 3, 10, 20, 30}, 3);
    CHECK(p.n_rows() == 3);
    CHECK(p.n_cols() == 2);
    CHECK(p.at(1, 1) == 20);
    CHECK(p.col(1)[2] == 30);
    CHECK_THROWS_AS(Panel({"a"}, {1, 2, 3, 4}, 3), Error);
    CHECK_THROWS_AS(Panel({}, {}, 0), Error);
}

TEST_CASE("panel rejects non-finite input", "[panel]") {
    try {
        Panel p({"a"}, {1.0, std::nan(""), 3.0}, 3);
        FAIL("expected MissingValue");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingValue);
    }
    CHECK_THROWS_AS(Panel({"a"}, {1.0, std::numeric_limits<double>::infinity()}, 2), Error);
}

TEST_CASE("csv write then read restores every bit", "[panel]") {
    Panel p = random_panel(57, 4, 11);
    std::stringstream ss;
    p.write_csv(ss);
    Panel q = Panel::read_csv(ss);
    REQUIRE(q.n_rows() == p.n_rows());
    REQUIRE(q.names() == p.names());
    for (std::size_t c = 0; c < p.n_cols(); ++c)
        for (std::size_t r = 0; r < p.n_rows(); ++r)
            REQUIRE(q.at(r, c) == p.at(r, c));
}

TEST_CASE("csv parse errors carry the offending line", "[panel]") {
    auto expect_kind = [](const std::string& text, ErrorKind kind) {
        std::stringstream ss(text);
        try {
            Panel::read_csv(ss);
            FAIL("expected parse failure for: " << text);
        } catch (const Error& e) {
            CHECK(e.kind() == kind);
        }
    };
    expect_kind("", ErrorKind::ParseError);
    expect_kind("a,b\n", ErrorKind::ParseError);              // no data rows
    expect_kind("a,b\n1.0\n", ErrorKind::ParseError);         // ragged row
    expect_kind("a,b\n1.0,oops\n", ErrorKind::ParseError);    // not a number
    expect_kind("a,b\n1.0,nan\n", ErrorKind::MissingValue);   // parses, then rejected
}

TEST_CASE("csv handles crlf and blank trailing lines", "[panel]") {
    std::stringstream ss("a,b\r\n1,2\r\n3,4\r\n\r\n");
    Panel p = Panel::read_csv(ss);
    CHECK(p.n_rows() == 2);
    CHECK(p.at(1, 0) == 3.0);
}

TEST_CASE("standardize centers and scales", "[panel]") {
    Panel p = random_panel(500, 3, 7);
    p.standardize();
    for (std::size_t c = 0; c < 3; ++c) {
        double mean = 0.0, ss = 0.0;
        for (std::size_t r = 0; r < 500; ++r) mean += p.at(r, c);
        mean /= 500;
        for (std::size_t r = 0; r < 500; ++r) ss += (p.at(r, c) - mean) * (p.at(r, c) - mean);
        CHECK(std::fabs(mean) < 1e-12);
        CHECK(ss / 499 == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("standardize rejects constant columns", "[panel]") {
    Panel p({"a", "b"}, {1, 1, 1, 5, 6, 7}, 3);
    try {
        p.standardize();
        FAIL("expected ConstantSeries");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConstantSeries);
    }
}

TEST_CASE("panel file round trip", "[panel]") {
    Panel p = random_panel(20, 2, 3);
    const std::string path = "tempoca_test_panel.csv";
    p.save_csv(path);
    Panel q = Panel::load_csv(path);
    CHECK(q.n_rows() == p.n_rows());
    CHECK(q.at(19, 1) == p.at(19, 1));
    std::remove(path.c_str());
    CHECK_THROWS_AS(Panel::load_csv("definitely/not/here.csv"), Error);
}

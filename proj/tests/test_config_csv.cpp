// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <doctest.h>

#include "polsim/config.hpp"
#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/parallel.hpp"

using namespace polsim;

TEST_CASE("config parsing")
{
    const std::string text = "# comment\nloss_db = 46.5\n  name = ngari  # trailing\nlist_deg = 1, 2,3\n"
                             "range_deg = -2:1:2\nflag = true\ncount = 7\n";
    const auto cfg = config::Config::parse(text, "t.conf");
    CHECK(cfg.double_or("loss_db", 0) == 46.5);
    CHECK(cfg.string_or("name", "") == "ngari");
    CHECK(cfg.list_or("list_deg", {}) == std::vector<double>{1, 2, 3});
    CHECK(cfg.list_or("range_deg", {}) == std::vector<double>{-2, -1, 0, 1, 2});
    CHECK(cfg.bool_or("flag", false));
    CHECK(cfg.int_or("count", 0) == 7);
    CHECK(cfg.double_or("missing_db", 1.5) == 1.5);
    CHECK_THROWS_AS(cfg.int_or("loss_db", 0), ParseError);
    CHECK_THROWS_AS(cfg.bool_or("name", false), ParseError);

    auto line_of = [](const std::string& t, const std::set<std::string>& allowed) -> std::size_t {
        try {
            config::Config::parse(t, "x", allowed);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("a = 1\nb 2\n", {}) == 2);
    CHECK(line_of("a = 1\na = 2\n", {}) == 2);
    CHECK(line_of("a = 1\n\nbogus = 2\n", {"a"}) == 3);
    CHECK(line_of("a =\n", {}) == 1);
    CHECK(line_of("= 3\n", {}) == 1);
}

TEST_CASE("strict number parsing")
{
    CHECK(text::parse_double({"1.25", 1}, "s", 1) == 1.25);
    CHECK(text::parse_double({"-3e2", 1}, "s", 1) == -300);
    CHECK_THROWS_AS(text::parse_double({"1.2x", 1}, "s", 1), ParseError);
    CHECK_THROWS_AS(text::parse_double({"", 1}, "s", 1), ParseError);
    CHECK(text::parse_int({"42", 1}, "s", 1) == 42);
    CHECK_THROWS_AS(text::parse_int({"4.2", 1}, "s", 1), ParseError);
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 2.312, -1e-300, 6.02214076e23, 0.0}) {
        CHECK(text::parse_double({text::format_double(v), 1}, "s", 1) == v);
    }
    CHECK(text::format_fixed(-0.0001, 3) == "0.000");
    CHECK(text::format_fixed(2.5, 2) == "2.50");
}

TEST_CASE("CSV parsing")
{
    const auto t = text::parse_csv("a,b\n1,2\n\n3,4\n", "c");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.row_lines[1] == 4);
    CHECK(t.column("b") == 1);
    CHECK(t.column("z") == std::string::npos);
    CHECK_THROWS_AS(text::parse_csv("a,b\n1,2,3\n", "c"), ParseError);
}

TEST_CASE("parallel_for covers every index and rethrows")
{
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), 8, [&](std::size_t i) { hit[i] += 1; });
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 4,
                                 [](std::size_t i) {
                                     if (i == 7) {
                                         throw NumericError("boom");
                                     }
                                 }),
                    NumericError);
}

#include "commands.hpp"
#include "config.hpp"
#include "sbp/error.hpp"
#include "sbp/table.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace sbpctl;

namespace {

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("tables render missing values as dashes")
{
    sbp::Table t{{{"m", -1}, {"rate", 2}}, {}};
    t.add_row({{34.0}, {std::numeric_limits<double>::quiet_NaN()}});
    t.add_row({{68.0}, {4.333}});
    const std::string csv = sbp::emit_table(t, sbp::TableFormat::csv);
    CHECK(csv.find("---") != std::string::npos);
    const auto text = lines(sbp::emit_table(t, sbp::TableFormat::aligned));
    REQUIRE(text.size() >= 3);
    CHECK(text[1].find("---") != std::string::npos);
    CHECK(text[2].find("4.33") != std::string::npos);
    // every line of the aligned form has the same width
    for (const auto& l : text)
        CHECK(l.size() == text.front().size());
}

TEST_CASE("csv round trip keeps every digit")
{
    sbp::Table t{{{"name", 0}, {"x", 17}}, {}};
    const double vals[] = {0.1, 1.0 / 3.0, -2.5e-300, 12345678.901234567};
    for (double v : vals)
        t.add_row({sbp::Cell{0.0, "op"}, {v}});
    const sbp::Table back = sbp::parse_csv_table(sbp::emit_table(t, sbp::TableFormat::csv));
    REQUIRE(back.rows.size() == 4);
    CHECK(back.columns[1].name == "x");
    for (size_t i = 0; i < 4; ++i) {
        CHECK(back.rows[i][0].text == "op");
        CHECK(back.rows[i][1].value == vals[i]);
    }
}

TEST_CASE("empty tables are refused")
{
    sbp::Table t{{{"m", -1}}, {}};
    CHECK_THROWS_AS(sbp::emit_table(t, sbp::TableFormat::csv), sbp::ParameterError);
}

TEST_CASE("config text parsing")
{
    const ConfigFile f = parse_config_text("seed = 3 # comment\n\n[vortex2d]\nm = 34, 68\n", "test");
    CHECK(f.at("").at("seed") == "3");
    CHECK(f.at("vortex2d").at("m") == "34, 68");
    CHECK_THROWS_AS(parse_config_text("m = 1\nm = 2\n", "dup"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("no equals sign\n", "bad"), ConfigError);
}

TEST_CASE("resolution order and validation")
{
    const CommandSpec& spec = command_spec("vortex2d");
    std::vector<std::string> sections;
    for (const auto& c : command_specs())
        sections.push_back(c.name);
    const Settings d = resolve(spec, {}, {}, sections);
    CHECK(d.ints("m") == std::vector<int>{34, 68});
    CHECK(d.real("tol") == 1e-12);
    CHECK(d.real("chevron_scale") == 5.0);

    ConfigFile f = parse_config_text("tol = 1e-8\n[vortex2d]\nm = 17\n", "test");
    const Settings a = resolve(spec, f, {}, sections);
    CHECK(a.ints("m") == std::vector<int>{17});
    CHECK(a.real("tol") == 1e-8);
    const Settings b = resolve(spec, f, {{"m", "40,80"}}, sections);
    CHECK(b.ints("m") == std::vector<int>{40, 80});

    CHECK_THROWS_AS(resolve(spec, parse_config_text("[vortex2d]\nbogus = 1\n", "t"), {}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, parse_config_text("[nosuch]\nm = 1\n", "t"), {}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, {}, {{"tol", "-1"}}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, {}, {{"m", "3"}}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, {}, {{"m", "34,x"}}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, {}, {{"splitting", "roe"}}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, {}, {{"operator", "derive:12"}}, sections), ConfigError);
    CHECK_THROWS_AS(resolve(spec, {}, {{"operator", "file:/no/such/file"}}, sections), ConfigError);
}

TEST_CASE("canonical settings text is stable")
{
    const CommandSpec& spec = command_spec("khi2d");
    std::vector<std::string> sections;
    for (const auto& c : command_specs())
        sections.push_back(c.name);
    const Settings a = resolve(spec, {}, {{"K", "1,4"}}, sections);
    const Settings b = resolve(spec, {}, {{"K", "1, 4"}}, sections);
    CHECK(a.to_text() == resolve(spec, parse_config_text(a.to_text(), "round"), {}, sections).to_text());
    CHECK(a.ints("K") == b.ints("K"));
}

TEST_CASE("list splitting")
{
    CHECK(split_list("a, b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_list("").empty());
}

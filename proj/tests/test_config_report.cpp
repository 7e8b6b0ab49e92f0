#include <doctest.h>

#include <rbmlab/config.hpp>
#include <rbmlab/report.hpp>

#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

using rbmlab::Config;
using rbmlab::ConfigError;

TEST_SUITE("config-report") {

TEST_CASE("config parses sections, comments, and typed values") {
    auto c = Config::parse_string(
        "# leading comment\n"
        "[dos-scan]\n"
        "W_list = 2, 4, 8\n"
        "E_list = 0.5, 1.0\n"
        "samples = 2000   ; trailing comment\n"
        "trace = auto\n"
        "strict = true\n"
        "\n"
        "[region-report]\n"
        "nu = 0.5\n");
    CHECK(c.has_section("dos-scan"));
    CHECK(c.has_section("region-report"));
    CHECK(!c.has_section("duality"));
    CHECK(c.section_names() == std::vector<std::string>{"dos-scan", "region-report"});
    CHECK(c.get_long("dos-scan", "samples", 0) == 2000);
    CHECK(c.get_string("dos-scan", "trace") == "auto");
    CHECK(c.get_bool("dos-scan", "strict", false));
    CHECK(c.get_double("region-report", "nu", 0.0) == doctest::Approx(0.5));
    CHECK(c.get_long_list("dos-scan", "W_list", {}) == std::vector<long>{2, 4, 8});
    auto es = c.get_double_list("dos-scan", "E_list", {});
    REQUIRE(es.size() == 2);
    CHECK(es[0] == doctest::Approx(0.5));
    CHECK(es[1] == doctest::Approx(1.0));
    // fallbacks apply only when the key is absent
    CHECK(c.get_long("dos-scan", "missing", 7) == 7);
    CHECK(c.get_string("dos-scan", "missing", "x") == "x");
    CHECK_THROWS_AS(c.get_string("dos-scan", "missing"), ConfigError);
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(Config::parse_string("key = 1\n"), ConfigError);  // outside section
    CHECK_THROWS_AS(Config::parse_string("[a]\nk = 1\nk = 2\n"), ConfigError);  // dup key
    CHECK_THROWS_AS(Config::parse_string("[a]\n[a]\n"), ConfigError);           // dup section
    CHECK_THROWS_AS(Config::parse_string("[a]\nnonsense line\n"), ConfigError);
    auto c = Config::parse_string("[a]\nx = notanumber\nn = -3\n");
    CHECK_THROWS_AS(c.get_long("a", "x", 0), ConfigError);
    CHECK_THROWS_AS(c.get_double("a", "x", 0.0), ConfigError);
    CHECK_THROWS_AS(c.get_u64("a", "n", 0), ConfigError);  // u64 rejects sign
    CHECK(c.get_long("a", "n", 0) == -3);
    CHECK_THROWS_AS(c.get_long_list("a", "x", {}), ConfigError);
    // empty list values are rejected rather than parsed as zero entries
    auto e = Config::parse_string("[a]\nxs =\n");
    CHECK_THROWS_AS(e.get_long_list("a", "xs", {}), ConfigError);
}

TEST_CASE("bool spellings") {
    auto c = Config::parse_string(
        "[b]\nt1 = true\nt2 = 1\nt3 = on\nt4 = yes\nf1 = false\nf2 = 0\nf3 = off\nf4 = no\nbad "
        "= maybe\n");
    for (auto k : {"t1", "t2", "t3", "t4"}) CHECK(c.get_bool("b", k, false));
    for (auto k : {"f1", "f2", "f3", "f4"}) CHECK(!c.get_bool("b", k, true));
    CHECK_THROWS_AS(c.get_bool("b", "bad", false), ConfigError);
}

TEST_CASE("unknown keys and sections are flagged") {
    auto c = Config::parse_string("[dos-scan]\nsamples = 10\ntypo_key = 1\n");
    CHECK_THROWS_AS(c.require_known_keys("dos-scan", {"samples"}), ConfigError);
    CHECK_NOTHROW(c.require_known_keys("dos-scan", {"samples", "typo_key"}));
    CHECK_THROWS_AS(c.require_known_sections({"duality"}), ConfigError);
    CHECK_NOTHROW(c.require_known_sections({"dos-scan", "duality"}));
}

TEST_CASE("parse_file round trip and text capture") {
    const std::string path = "test_config_report_tmp.ini";
    {
        std::ofstream out(path);
        out << "[s]\nk = 3\n";
    }
    auto c = Config::parse_file(path);
    CHECK(c.get_long("s", "k", 0) == 3);
    CHECK(c.text() == "[s]\nk = 3\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(Config::parse_file("definitely_missing_file.ini"), ConfigError);
}

TEST_CASE("format_double is shortest-exact") {
    CHECK(rbmlab::format_double(0.5) == "0.5");
    CHECK(rbmlab::format_double(-3.0) == "-3");
    CHECK(rbmlab::format_double(1.0 / 3.0) == "0.33333333333333331");
    // round trip: printed value parses back to the same bits
    for (double v : {0.1, 2.0 / 7.0, 1e-17, 123456.789, -0.0078125}) {
        CHECK(std::stod(rbmlab::format_double(v)) == v);
    }
}

TEST_CASE("sha1 and git blob content hash") {
    CHECK(rbmlab::sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(rbmlab::sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    // git blob convention: sha1("blob <n>\0" + content)
    CHECK(rbmlab::content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(rbmlab::content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("csv table emits stable bytes") {
    rbmlab::CsvTable t({"a", "b"});
    t.add_row({"1", rbmlab::format_double(0.5)});
    t.add_row({"2", rbmlab::format_double(1.0 / 3.0)});
    CHECK(t.n_rows() == 2);
    CHECK(t.str() == "a,b\n1,0.5\n2,0.33333333333333331\n");
    CHECK_THROWS(t.add_row({"only-one-cell"}));
}

TEST_CASE("verification record semantics") {
    // MC: sigma = |lhs - rhs| / se, pass at <= 3
    auto mc = rbmlab::mc_record("x", {}, {1.0, 0.0}, {1.2, 0.0}, 0.1);
    CHECK(mc.sigma_distance == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mc.pass);
    auto mc_fail = rbmlab::mc_record("x", {}, {1.0, 0.0}, {1.5, 0.0}, 0.1);
    CHECK(!mc_fail.pass);
    // zero se with a nonzero gap must not pass on a 0/0
    auto mc_degenerate = rbmlab::mc_record("x", {}, {1.0, 0.0}, {2.0, 0.0}, 0.0);
    CHECK(!mc_degenerate.pass);
    auto mc_exact_hit = rbmlab::mc_record("x", {}, {1.0, 0.0}, {1.0, 0.0}, 0.0);
    CHECK(mc_exact_hit.pass);

    // exact: sigma = |lhs - rhs| / tol, pass at <= 1
    auto ex = rbmlab::exact_record("y", {}, {1.0, 0.0}, {1.0 + 5e-11, 0.0}, 1e-10);
    CHECK(ex.pass);
    CHECK(ex.combined_se == 0.0);
    auto ex_fail = rbmlab::exact_record("y", {}, {1.0, 0.0}, {1.0 + 2e-10, 0.0}, 1e-10);
    CHECK(!ex_fail.pass);
}

TEST_CASE("json serialization carries the full record") {
    auto r = rbmlab::mc_record("norm", rbmlab::ordered_json{{"L", 2}}, {1.0, -0.5}, {1.1, -0.5},
                               0.05);
    auto j = rbmlab::to_json(r);
    CHECK(j["check_id"] == "norm");
    CHECK(j["params"]["L"] == 2);
    CHECK(j.contains("lhs"));
    CHECK(j.contains("rhs"));
    CHECK(j.contains("sigma_distance"));
    CHECK(j.contains("pass"));

    rbmlab::SelfTestRecord s{"nilpotency", 4, 100, 2.5e-16, true};
    auto js = rbmlab::to_json(s);
    CHECK(js["identity"] == "nilpotency");
    CHECK(js["n"] == 4);
    CHECK(js["trials"] == 100);
    CHECK(js["pass"] == true);

    rbmlab::RunManifest m;
    m.command = "dos-scan";
    m.seed = 42;
    m.workers = 1;
    m.format = "csv";
    m.out_dir = "out";
    m.input_hash = rbmlab::content_hash("x");
    auto jm = rbmlab::to_json(m);
    CHECK(jm["command"] == "dos-scan");
    CHECK(jm["seed"] == 42);
    CHECK(jm["input_hash"] == rbmlab::content_hash("x"));
}

TEST_CASE("complex json and text file writer") {
    auto j = rbmlab::complex_json({1.5, -2.0});
    CHECK(j["re"] == 1.5);
    CHECK(j["im"] == -2.0);
    const std::string path = "test_report_write_tmp.txt";
    rbmlab::write_text_file(path, "line\n");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "line\n");
    std::remove(path.c_str());
}

}

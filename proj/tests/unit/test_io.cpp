#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbsmock/errors.hpp"
#include "gbsmock/io.hpp"
#include "gbsmock/samplers.hpp"

using namespace gbsmock;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / fs::path("gbsmock-test-" + std::to_string(::getpid()) + "-" +
                                                    std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("instance round trip is bit exact", "[io]") {
    TempDir dir;
    auto inst = random_instance(7, 8, 42, 0.73, 0.3, 1.7);
    save_instance(inst, dir.file("inst.json"));
    auto back = load_instance(dir.file("inst.json"));
    CHECK(back.n_output == 7);
    CHECK(back.n_input == 8);
    CHECK(back.squeezing == inst.squeezing);
    CHECK(back.transformation == inst.transformation);
    CHECK(instance_digest(back) == instance_digest(inst));
    CHECK(instance_digest(back).size() == 16);
    CHECK(instance_digest(random_instance(7, 8, 43)) != instance_digest(inst));
}

TEST_CASE("instance parse errors", "[io]") {
    auto text = instance_to_json(random_instance(3, 4, 1));
    CHECK_THROWS_AS(instance_from_json(text.substr(0, text.size() / 2)), ParseError);
    CHECK_THROWS_AS(instance_from_json("{\"schema\": \"other\"}"), ParseError);
    try {
        instance_from_json("{\n\"schema\": \"gbsmock-instance\",\n\"n_output\": ,\n}");
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    // Well-formed JSON with an invalid instance is rejected by validation.
    auto bad = random_instance(3, 4, 1);
    bad.squeezing[0] = -1.0;
    CHECK_THROWS_AS(instance_from_json(instance_to_json(bad)), DomainError);
}

TEST_CASE("sample files", "[io]") {
    TempDir dir;
    write_text(dir.file("plain.txt"), "0101\n0101\n0101\n");
    auto s = load_samples(dir.file("plain.txt"));
    CHECK(s.n_modes() == 4);
    CHECK(s.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.row_string(i) == "0101");
        // Leftmost character is mode 0.
        CHECK_FALSE(s.bit(i, 0));
        CHECK(s.bit(i, 1));
        CHECK(s.bit(i, 3));
    }
    CHECK(load_samples(dir.file("plain.txt"), 2).size() == 2);

    write_text(dir.file("bad.txt"), "0101\n0111\n011\n");
    try {
        load_samples(dir.file("bad.txt"));
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    write_text(dir.file("chars.txt"), "0101\n01x1\n");
    CHECK_THROWS_AS(load_samples(dir.file("chars.txt")), ParseError);
    CHECK_THROWS(load_samples(dir.file("missing.txt")));
}

TEST_CASE("sample round trip keeps metadata", "[io]") {
    TempDir dir;
    auto s = sample_uniform(70, 257, 5);
    s.metadata.instance_digest = "0123456789abcdef";
    s.metadata.extra["note"] = "x";
    save_samples(s, dir.file("s.txt"));
    CHECK(read_text(dir.file("s.txt")).rfind(kSampleHeaderTag, 0) == 0);
    auto back = load_samples(dir.file("s.txt"));
    CHECK(back == s);
    CHECK(back.metadata.sampler == "uniform");
    CHECK(back.metadata.seed == 5u);
    CHECK(back.metadata.instance_digest == "0123456789abcdef");
    CHECK(back.metadata.extra.at("note") == "x");

    // Declared count disagreeing with the body.
    auto text = read_text(dir.file("s.txt"));
    write_text(dir.file("short.txt"), text.substr(0, text.size() - 71));
    CHECK_THROWS_AS(load_samples(dir.file("short.txt")), ParseError);
}

TEST_CASE("report round trips", "[io]") {
    TempDir dir;
    MetricReport r;
    r.metric = "tvd";
    r.columns = {"delta_m", "delta_e"};
    r.add_row("k=1", {0}, {0.125, std::numeric_limits<double>::quiet_NaN()});
    r.add_row("k=2", {0, 3}, {0.1 + 0.2, 1e-300});
    r.compute_aggregates();
    r.aggregate("k=2", "delta_m").lower = -0.5;
    r.tables.push_back({"hist", {"x", "w"}, {{0, 0.25}, {1, 0.75}}});
    r.metadata["seed"] = "7";

    auto check_same = [&](const MetricReport& b) {
        CHECK(b.metric == r.metric);
        CHECK(b.columns == r.columns);
        REQUIRE(b.rows.size() == 2);
        CHECK(b.rows[1].modes == ModeList{0, 3});
        CHECK(b.rows[1].values == r.rows[1].values);
        CHECK(std::isnan(b.rows[0].values[1]));
        CHECK(b.aggregate("k=2", "delta_m").lower == -0.5);
        CHECK_FALSE(b.aggregate("k=1", "delta_m").upper.has_value());
        CHECK(b.tables.size() == 1);
        CHECK(b.tables[0].rows[1][1] == 0.75);
        CHECK(b.metadata.at("seed") == "7");
    };
    check_same(report_from_json(report_to_json(r)));

    save_report(r, dir.file("r.json"), ReportFormat::Json);
    check_same(load_report(dir.file("r.json")));

    save_report(r, dir.file("r.csv"), ReportFormat::Csv);
    CHECK(report_json_twin(dir.file("r.csv")) == dir.file("r.json"));
    check_same(load_report(report_json_twin(dir.file("r.csv"))));
    auto csv = read_text(dir.file("r.csv"));
    CHECK(csv.find("group") != std::string::npos);
    CHECK(csv.find("delta_m") != std::string::npos);
    CHECK_THROWS_AS(report_from_json("[1, 2"), ParseError);
}

TEST_CASE("text matrix import", "[io]") {
    TempDir dir;
    write_text(dir.file("re.txt"), "0.5 0\n0, 0.5\n");
    write_text(dir.file("im.txt"), "0 0\n0 0\n");
    write_text(dir.file("sq.txt"), "0.8\n");
    auto inst = import_ustc(dir.file("re.txt"), dir.file("im.txt"), dir.file("sq.txt"));
    CHECK(inst.n_output == 2);
    CHECK(inst.n_input == 2);
    CHECK(inst.squeezing == std::vector<double>{0.8});
    CHECK(inst.transformation(1, 1) == Complex(0.5, 0.0));
    write_text(dir.file("ragged.txt"), "0.5 0\n0\n");
    CHECK_THROWS_AS(import_ustc(dir.file("ragged.txt"), dir.file("im.txt"), dir.file("sq.txt")), ParseError);
}

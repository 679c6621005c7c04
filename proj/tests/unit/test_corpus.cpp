#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>

#include "doctest.h"
#include "fixture_path.hpp"
#include "oestylo/corpus.hpp"
#include "oestylo/error.hpp"
#include "synth.hpp"

using namespace oestylo;
namespace fs = std::filesystem;

namespace {

using test::TempDir;

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// Copies the fixture corpus and applies one edit to a file.
fs::path mutated_fixture(const TempDir& dir, const std::string& file, const std::string& content) {
    fs::copy(test::fixture("corpus"), dir.path, fs::copy_options::recursive);
    write_file(dir.path / file, content);
    return dir.path;
}

Poem plain_poem(const std::string& id, int lines, std::vector<PartRange> parts = {}) {
    Poem p;
    p.id = id;
    for (int i = 1; i <= lines; ++i) p.lines.push_back({i, "a" + std::to_string(i), "b", {}, {}, {}});
    if (parts.empty()) parts.push_back({id, 1, lines});
    p.parts = std::move(parts);
    return p;
}

}  // namespace

TEST_CASE("fixture corpus parses with parts, scansion and compounds") {
    const Corpus c = parse_corpus(test::fixture("corpus"));
    REQUIRE(c.poems.size() == 2);
    CHECK(c.total_lines() == 20);
    const Poem& g = c.poem("genesis");
    CHECK(g.has_scansion);
    CHECK(g.has_compounds);
    REQUIRE(g.parts.size() == 3);
    CHECK(g.parts[0] == PartRange{"A", 1, 3});
    CHECK(g.parts[1] == PartRange{"B", 4, 7});
    CHECK(g.parts[2] == PartRange{"A", 8, 10});
    CHECK(g.part_of(5) == "B");
    CHECK(g.part_of(9) == "A");
    CHECK(g.line(1).a_text == "Us is riht micel");
    CHECK(g.line(1).b_text == "ðæt we rodera weard,");
    CHECK(g.line(3).a_pattern == Scansion::D);
    CHECK_FALSE(g.line(3).b_pattern.has_value());
    CHECK_FALSE(g.line(6).a_pattern.has_value());
    CHECK(g.line(9).compounds == std::vector<std::string>{"soþ-fæst", "swiþ-feorm", "sweg-bosm"});
    const Poem& e = c.poem("exodus");
    CHECK_FALSE(e.has_scansion);
    CHECK(e.line(1).a_text == "Hwæt, we feor and neah");
    CHECK_THROWS_AS(c.poem("beowulf"), Error);
}

TEST_CASE("Genesis-style part layout with a repeated part name") {
    Poem g = plain_poem("genesis", 2936, {{"A", 1, 234}, {"B", 235, 851}, {"A", 852, 2936}});
    CHECK_NOTHROW(validate_poem(g));
    const auto a = partition_samples(g, 100, std::string("A"));
    CHECK(a.size() == 23);
    const auto b = partition_samples(g, 100, std::string("B"));
    CHECK(b.size() == 6);
    // The third A-sample spans the B insertion: positions 201-300 of the A lines.
    CHECK(a[2].lines.front() == 201);
    CHECK(a[2].lines[33] == 234);
    CHECK(a[2].lines[34] == 852);
    CHECK(a[2].composition.at("A") == 100);
}

TEST_CASE("validation errors") {
    SUBCASE("malformed scansion label names the line") {
        TempDir dir("badlabel");
        std::string tsv = "line\ta\tb\n1\tA\tB\n2\tF\tA\n";
        for (int i = 3; i <= 10; ++i) tsv += std::to_string(i) + "\tA\tA\n";
        const auto root = mutated_fixture(dir, "genesis.scansion.tsv", tsv);
        try {
            parse_corpus(root);
            FAIL("expected an error");
        } catch (const Error& e) {
            const std::string msg = e.what();
            CHECK(msg.find("genesis") != std::string::npos);
            CHECK(msg.find("line 2") != std::string::npos);
        }
    }
    SUBCASE("overlapping parts") {
        Poem p = plain_poem("p", 10, {{"A", 1, 6}, {"B", 5, 10}});
        CHECK_THROWS_AS(validate_poem(p), Error);
    }
    SUBCASE("gap in part coverage") {
        Poem p = plain_poem("p", 10, {{"A", 1, 4}, {"B", 6, 10}});
        CHECK_THROWS_AS(validate_poem(p), Error);
    }
    SUBCASE("parts shorter than the text") {
        Poem p = plain_poem("p", 10, {{"A", 1, 8}});
        CHECK_THROWS_AS(validate_poem(p), Error);
    }
    SUBCASE("missing file reports its path") {
        TempDir dir("missing");
        fs::copy(test::fixture("corpus"), dir.path, fs::copy_options::recursive);
        fs::remove(dir.path / "exodus.txt");
        try {
            parse_corpus(dir.path);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("exodus.txt") != std::string::npos);
        }
    }
    SUBCASE("annotation on a nonexistent line") {
        TempDir dir("badline");
        const auto root = mutated_fixture(dir, "exodus.compounds.tsv", "line\tlemma\n11\tx-y\n");
        CHECK_THROWS_AS(parse_corpus(root), Error);
    }
    SUBCASE("declared line count mismatch") {
        TempDir dir("count");
        fs::copy(test::fixture("corpus"), dir.path, fs::copy_options::recursive);
        std::ifstream in(dir.path / "corpus.json");
        std::string manifest((std::istreambuf_iterator<char>(in)), {});
        manifest.replace(manifest.find("\"lines\": 10"), 11, "\"lines\": 12");
        write_file(dir.path / "corpus.json", manifest);
        CHECK_THROWS_AS(parse_corpus(dir.path), Error);
    }
}

TEST_CASE("canonical round trip") {
    TempDir dir("roundtrip");
    const Corpus original = parse_corpus(test::fixture("corpus"));
    write_corpus(original, dir.path / "a");
    const Corpus again = parse_corpus(dir.path / "a");
    CHECK(again == original);

    const Corpus synthetic = synth::fixture_corpus(3, 1200);
    write_corpus(synthetic, dir.path / "b");
    CHECK(parse_corpus(dir.path / "b") == synthetic);
}

TEST_CASE("partition samples drop the remainder") {
    CHECK(partition_samples(plain_poem("c1", 439), 100).size() == 4);
    const auto w = partition_samples(plain_poem("p", 250), 100);
    REQUIRE(w.size() == 2);
    CHECK(w[0].first_line == 1);
    CHECK(w[1].last_line == 200);
    CHECK(partition_samples(plain_poem("short", 50), 100).empty());
    CHECK_THROWS_AS(partition_samples(plain_poem("p", 10), 0), Error);
}

TEST_CASE("rolling windows") {
    const auto w = rolling_windows(plain_poem("beo", 3182), 300, 100);
    REQUIRE(w.size() == 29);
    CHECK(w[0].first_line == 1);
    CHECK(w[0].last_line == 300);
    CHECK(w[1].first_line == 101);
    CHECK(w.back().last_line == 3100);
    CHECK(w[0].id() == "beo:00001-00300");
    CHECK(rolling_windows(plain_poem("p", 200), 200, 1).size() == 1);

    Poem guthlac = plain_poem("guthlac", 400, {{"A", 1, 200}, {"B", 201, 400}});
    const auto gw = rolling_windows(guthlac, 200, 100);
    REQUIRE(gw.size() == 3);
    CHECK(gw[1].composition.at("A") == 100);
    CHECK(gw[1].composition.at("B") == 100);
    CHECK(gw[1].majority_part() == "A");  // tie goes to the smaller name
    CHECK(gw[2].majority_part() == "B");
    for (const auto& win : gw) {
        int total = 0;
        for (const auto& [_, n] : win.composition) total += n;
        CHECK(total == win.size());
    }
}

TEST_CASE("window properties over random poems") {
    Xoshiro256 gen(RngStream{99, 0});
    for (int trial = 0; trial < 40; ++trial) {
        const int lines = 1 + static_cast<int>(gen.below(700));
        const int split = 1 + static_cast<int>(gen.below(static_cast<std::uint64_t>(lines)));
        std::vector<PartRange> parts{{"A", 1, split}};
        if (split < lines) parts.push_back({"B", split + 1, lines});
        const Poem p = plain_poem("r", lines, parts);
        const int len = 1 + static_cast<int>(gen.below(150));
        const auto part = partition_samples(p, len);
        const auto roll = rolling_windows(p, len, len);
        REQUIRE(part.size() == roll.size());
        int expected = 1;
        for (std::size_t i = 0; i < part.size(); ++i) {
            CHECK(part[i].lines == roll[i].lines);
            CHECK(part[i].composition == roll[i].composition);
            // Samples consume a contiguous prefix of the poem.
            for (int l : part[i].lines) CHECK(l == expected++);
        }
        CHECK(static_cast<int>(part.size()) == lines / len);
    }
}

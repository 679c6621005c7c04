#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cli.hpp"
#include "convert.hpp"
#include "doctest.h"
#include "fixture_path.hpp"
#include "json.hpp"
#include "oestylo/corpus.hpp"
#include "oestylo/error.hpp"
#include "synth.hpp"

using namespace oestylo;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "oestylo");
    return cli::dispatch(args);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
    }
    return out;
}

void write(const fs::path& p, const std::string& s) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_CASE("usage errors exit with 2, analysis errors with 1") {
    test::TempDir dir("cli_codes");
    const std::string corpus = test::fixture("corpus").string();
    const std::string out = (dir.path / "out").string();
    CHECK(run({}) == cli::kExitUsage);
    CHECK(run({"--corpus", corpus, "frobnicate"}) == cli::kExitUsage);
    CHECK(run({"--corpus", corpus, "--bogus", "sensepause"}) == cli::kExitUsage);
    CHECK(run({"--format", "xml", "--corpus", corpus, "sensepause"}) == cli::kExitUsage);
    CHECK(run({"--help"}) == cli::kExitOk);
    CHECK(run({"--out", out, "sensepause"}) == cli::kExitUsage);  // no corpus
    CHECK(run({"--out", out, "--corpus", (dir.path / "absent").string(), "sensepause"}) == cli::kExitAnalysisError);
    // exodus carries no scansion.
    CHECK(run({"--out", out, "--corpus", corpus, "metre", "--poem", "exodus"}) == cli::kExitAnalysisError);
    CHECK(run({"--out", out, "--corpus", corpus, "metre", "--poem", "genesis"}) == cli::kExitAnalysisError);
}

TEST_CASE("subcommands write their outputs and a manifest") {
    test::TempDir dir("cli_outputs");
    const fs::path corpus = dir.path / "corpus";
    write_corpus(synth::fixture_corpus(4, 3000), corpus);
    const std::string out = (dir.path / "out").string();
    const std::vector<std::string> base{"--out", out, "--corpus", corpus.string(), "--split-line", "600"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return run(args);
    };
    REQUIRE(with({"sensepause", "--compare", "beowulf:A", "beowulf:B"}) == cli::kExitOk);
    REQUIRE(with({"metre", "--bootstrap", "1000"}) == cli::kExitOk);
    REQUIRE(with({"hapax", "fit", "--poem", "genesis", "--parts", "3"}) == cli::kExitOk);
    REQUIRE(with({"shared", "--trials", "1000"}) == cli::kExitOk);
    REQUIRE(with({"cluster", "--poem", "beowulf", "--width", "200", "--step", "100", "--k-values", "100,200",
                  "sweep"}) == cli::kExitOk);

    CHECK(fs::exists(fs::path(out) / "sensepause/comparison.json"));
    CHECK(fs::exists(fs::path(out) / "sensepause/ratios.csv"));
    CHECK(fs::exists(fs::path(out) / "hapax/fits_genesis.svg"));
    CHECK(fs::exists(fs::path(out) / "shared/pair_scores.csv"));
    CHECK(fs::exists(fs::path(out) / "cluster/sweep_beowulf.svg"));

    const std::string split_csv = slurp(fs::path(out) / "metre/split_tests_beowulf.csv");
    CHECK(split_csv.rfind("granularity,test,statistic,df,p\n", 0) == 0);
    CHECK(split_csv.find("full,goodness_of_fit_bootstrap,") != std::string::npos);

    const auto manifest = nlohmann::json::parse(slurp(fs::path(out) / "metre/run.json"));
    CHECK(manifest["seed"] == 7);
    CHECK(manifest["split_line"] == 600);
    CHECK(manifest["parameters"]["bootstrap"] == 1000);
    CHECK(manifest["inputs"].contains("corpus.json"));
    CHECK(manifest["outputs"].size() >= 2);

    const std::string grid = slurp(fs::path(out) / "cluster/sweep_beowulf.csv");
    CHECK(grid.rfind("n,k,sample,cluster\n", 0) == 0);

    REQUIRE(with({"--format", "json", "shared", "--trials", "1000"}) == cli::kExitOk);
    CHECK(fs::exists(fs::path(out) / "shared/pair_scores.json"));
}

TEST_CASE("report is byte-identical across runs") {
    test::TempDir dir("cli_report");
    const fs::path corpus = dir.path / "corpus";
    write_corpus(synth::fixture_corpus(8, 3000), corpus);
    const fs::path a = dir.path / "a", b = dir.path / "b";
    REQUIRE(run({"--seed", "7", "--split-line", "700", "--out", a.string(), "--corpus", corpus.string(), "report",
                 "--bootstrap", "1000", "--trials", "1000"}) == cli::kExitOk);
    REQUIRE(run({"--seed", "7", "--split-line", "700", "--out", b.string(), "--corpus", corpus.string(), "report",
                 "--bootstrap", "1000", "--trials", "1000"}) == cli::kExitOk);
    const auto ta = tree_contents(a), tb = tree_contents(b);
    CHECK(ta.size() > 20);
    CHECK(ta == tb);
    bool has_svg = false;
    for (const auto& [name, _] : ta) has_svg = has_svg || name.ends_with(".svg");
    CHECK(has_svg);
}

TEST_CASE("converter: indexed and sequential scansion, parts and compounds") {
    test::TempDir dir("cli_convert");
    const fs::path src = dir.path / "src";
    write(src / "texts/poema.txt", "Hwæt we gardena\tin geardagum,\nþeodcyninga  þrym gefrunon,\nhu ða æþelingas\tellen fremedon.\n");
    write(src / "metre/poema.tsv", "1\tA\n2\tB\n3\tC\n5\tD\n6\tE\n");
    write(src / "compounds/poema.tsv", "2\tþeod-cyning\n");
    write(src / "texts/poemb.txt", "a\tb\nc\td\ne\tf\n");
    // Unindexed stream with an explicit gap marker, then a stream that is short.
    write(src / "metre/poemb.tsv", "A\n-\nB\nC\nD\nE\n");
    write(src / "texts/poemc.txt", "a\tb\nc\td\n");
    write(src / "metre/poemc.tsv", "A\nB\nC\n");
    write(src / "parts.json", R"({"poema": [{"name": "A", "first": 1, "last": 2}, {"name": "B", "first": 3, "last": 3}]})");

    const fs::path dst = dir.path / "dst";
    const auto report = cli::convert_dataset(src, dst);
    CHECK(report.poems == std::vector<std::string>{"poema", "poemb", "poemc"});
    CHECK(report.sequential_warnings == std::vector<std::string>{"poemc"});

    const Corpus c = parse_corpus(dst);
    const Poem& a = c.poem("poema");
    CHECK(a.line(2).a_text == "þeodcyninga");
    CHECK(a.line(2).b_text == "þrym gefrunon,");
    CHECK(a.line(1).a_pattern == Scansion::A);
    CHECK(a.line(2).a_pattern == Scansion::C);
    CHECK_FALSE(a.line(2).b_pattern.has_value());
    CHECK(a.line(3).b_pattern == Scansion::E);
    CHECK(a.line(2).compounds == std::vector<std::string>{"þeod-cyning"});
    CHECK(a.parts.size() == 2);
    const Poem& b = c.poem("poemb");
    CHECK(b.line(1).a_pattern == Scansion::A);
    CHECK_FALSE(b.line(1).b_pattern.has_value());
    CHECK(b.line(2).a_pattern == Scansion::B);
    CHECK(b.line(3).b_pattern == Scansion::E);
    CHECK_FALSE(c.poem("poemc").line(2).b_pattern.has_value());

    CHECK(run({"convert", "--from", src.string(), "--to", (dir.path / "dst2").string()}) == cli::kExitOk);
    CHECK(run({"convert", "--from", (dir.path / "nothing").string(), "--to", (dir.path / "dst3").string()}) ==
          cli::kExitAnalysisError);
}

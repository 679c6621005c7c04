#include "convert.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "oestylo/corpus.hpp"
#include "oestylo/error.hpp"

namespace oestylo::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_rows(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        rows.push_back(line);
    }
    return rows;
}

std::pair<std::string, std::string> split_verse(const std::string& row) {
    const auto tab = row.find('\t');
    if (tab != std::string::npos) return {row.substr(0, tab), row.substr(tab + 1)};
    const auto gap = row.find("  ");
    if (gap == std::string::npos) return {row, ""};
    std::size_t b = gap;
    while (b < row.size() && row[b] == ' ') ++b;
    return {row.substr(0, gap), row.substr(b)};
}

std::optional<Scansion> label_of(std::string s, const std::string& where) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty() || s == "-") return std::nullopt;
    const auto v = parse_scansion(s);
    if (!v) throw Error(where + ": malformed scansion label '" + s + "'");
    return v;
}

// Returns true when an unindexed stream had gaps.
bool read_metre(Poem& poem, const fs::path& path) {
    const auto rows = read_rows(path);
    std::vector<std::optional<Scansion>> halves(static_cast<std::size_t>(2 * poem.line_count()));
    bool indexed = false;
    for (const auto& r : rows) {
        if (r.find('\t') != std::string::npos) indexed = true;
    }
    bool gaps = false;
    if (indexed) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].empty()) continue;
            const auto tab = rows[i].find('\t');
            const std::string where = path.string() + " row " + std::to_string(i + 1);
            int h = 0;
            try {
                h = std::stoi(rows[i].substr(0, tab));
            } catch (const std::exception&) {
                if (i == 0) continue;  // header
                throw Error(where + ": invalid half-line index");
            }
            if (h < 1 || h > 2 * poem.line_count()) throw Error(where + ": half-line index out of range");
            halves[static_cast<std::size_t>(h - 1)] = label_of(rows[i].substr(tab + 1), where);
        }
    } else {
        std::size_t slot = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto v = label_of(rows[i], path.string() + " row " + std::to_string(i + 1));
            if (rows[i].empty() && i + 1 == rows.size()) break;
            if (slot >= halves.size()) throw Error(path.string() + ": more half-line labels than half-lines");
            // An explicit "-" keeps its slot; labels absent from the stream
            // shift every later pair.
            halves[slot++] = v;
        }
        gaps = slot < halves.size();
    }
    for (auto& line : poem.lines) {
        line.a_pattern = halves[static_cast<std::size_t>(2 * (line.index - 1))];
        line.b_pattern = halves[static_cast<std::size_t>(2 * (line.index - 1) + 1)];
    }
    poem.has_scansion = true;
    return gaps;
}

void read_compounds(Poem& poem, const fs::path& path) {
    const auto rows = read_rows(path);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty()) continue;
        const auto tab = rows[i].find('\t');
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        if (tab == std::string::npos) throw Error(where + ": expected <line>\\t<lemma>");
        int n = 0;
        try {
            n = std::stoi(rows[i].substr(0, tab));
        } catch (const std::exception&) {
            if (i == 0) continue;
            throw Error(where + ": invalid line number");
        }
        if (n < 1 || n > poem.line_count()) throw Error(where + ": line out of range");
        poem.lines[static_cast<std::size_t>(n - 1)].compounds.push_back(rows[i].substr(tab + 1));
    }
    poem.has_compounds = true;
}

}  // namespace

ConvertReport convert_dataset(const fs::path& source, const fs::path& target) {
    const fs::path texts = source / "texts";
    if (!fs::is_directory(texts)) throw Error("dataset has no texts/ directory: " + texts.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(texts)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .txt files under " + texts.string());

    nlohmann::json parts;
    if (fs::exists(source / "parts.json")) {
        std::ifstream in(source / "parts.json");
        try {
            parts = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed parts.json: " + std::string(e.what()));
        }
    }

    Corpus corpus;
    ConvertReport report;
    for (const auto& file : files) {
        Poem poem;
        poem.id = file.stem().string();
        const auto rows = read_rows(file);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            VerseLine line;
            line.index = static_cast<int>(i) + 1;
            std::tie(line.a_text, line.b_text) = split_verse(rows[i]);
            poem.lines.push_back(std::move(line));
        }
        const fs::path metre = source / "metre" / (poem.id + ".tsv");
        if (fs::exists(metre) && read_metre(poem, metre)) report.sequential_warnings.push_back(poem.id);
        const fs::path compounds = source / "compounds" / (poem.id + ".tsv");
        if (fs::exists(compounds)) read_compounds(poem, compounds);
        if (parts.contains(poem.id)) {
            for (const auto& p : parts[poem.id]) {
                poem.parts.push_back({p.at("name").get<std::string>(), p.at("first").get<int>(), p.at("last").get<int>()});
            }
        } else {
            poem.parts.push_back({poem.id, 1, poem.line_count()});
        }
        validate_poem(poem);
        report.poems.push_back(poem.id);
        corpus.poems.push_back(std::move(poem));
    }
    write_corpus(corpus, target);
    return report;
}

}  // namespace oestylo::cli

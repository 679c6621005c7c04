#include "oestylo/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "oestylo/error.hpp"

namespace oestylo {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<Scansion> parse_scansion(std::string_view label) {
    if (label.size() == 1 && label[0] >= 'A' && label[0] <= 'E') return static_cast<Scansion>(label[0]);
    return std::nullopt;
}

char scansion_char(Scansion s) { return static_cast<char>(s); }

const VerseLine& Poem::line(int index) const {
    if (index < 1 || index > line_count()) {
        throw Error("poem " + id + ": line " + std::to_string(index) + " out of range");
    }
    return lines[static_cast<std::size_t>(index - 1)];
}

const std::string& Poem::part_of(int index) const {
    for (const auto& p : parts) {
        if (index >= p.first_line && index <= p.last_line) return p.name;
    }
    throw Error("poem " + id + ": line " + std::to_string(index) + " is in no part");
}

const Poem& Corpus::poem(std::string_view id) const {
    for (const auto& p : poems) {
        if (p.id == id) return p;
    }
    throw Error("unknown poem '" + std::string(id) + "'");
}

bool Corpus::contains(std::string_view id) const {
    return std::any_of(poems.begin(), poems.end(), [&](const Poem& p) { return p.id == id; });
}

std::size_t Corpus::total_lines() const {
    std::size_t n = 0;
    for (const auto& p : poems) n += p.lines.size();
    return n;
}

void validate_poem(const Poem& poem) {
    for (std::size_t i = 0; i < poem.lines.size(); ++i) {
        if (poem.lines[i].index != static_cast<int>(i) + 1) {
            throw Error("poem " + poem.id + ": line numbering is not contiguous at position " +
                        std::to_string(i + 1));
        }
    }
    if (poem.parts.empty()) throw Error("poem " + poem.id + ": no part ranges");
    int expected_first = 1;
    for (const auto& p : poem.parts) {
        if (p.first_line > p.last_line) {
            throw Error("poem " + poem.id + ": part " + p.name + " has first > last");
        }
        if (p.first_line < expected_first) {
            throw Error("poem " + poem.id + ": part " + p.name + " overlaps the previous part");
        }
        if (p.first_line > expected_first) {
            throw Error("poem " + poem.id + ": lines " + std::to_string(expected_first) + "-" +
                        std::to_string(p.first_line - 1) + " are not covered by any part");
        }
        expected_first = p.last_line + 1;
    }
    if (expected_first - 1 != poem.line_count()) {
        throw Error("poem " + poem.id + ": parts cover " + std::to_string(expected_first - 1) + " lines but the text has " +
                    std::to_string(poem.line_count()));
    }
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(std::move(line));
        start = end + 1;
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            break;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cols;
}

int parse_line_number(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(where + ": invalid line number '" + s + "'");
    }
}

void read_text(Poem& poem, const fs::path& path) {
    const auto rows = split_lines(read_file(path));
    poem.lines.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        VerseLine line;
        line.index = static_cast<int>(i) + 1;
        const std::size_t tab = rows[i].find('\t');
        if (tab == std::string::npos) {
            line.a_text = rows[i];
        } else {
            line.a_text = rows[i].substr(0, tab);
            line.b_text = rows[i].substr(tab + 1);
        }
        poem.lines.push_back(std::move(line));
    }
}

bool is_header(const std::vector<std::string>& cols) { return !cols.empty() && cols[0] == "line"; }

void read_scansion(Poem& poem, const fs::path& path) {
    const auto rows = split_lines(read_file(path));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].empty()) continue;
        const auto cols = split_tabs(rows[r]);
        if (r == 0 && is_header(cols)) continue;
        const std::string where = "poem " + poem.id + " scansion row " + std::to_string(r + 1);
        if (cols.size() != 3) throw Error(where + ": expected 3 columns (line, a, b)");
        const int n = parse_line_number(cols[0], where);
        if (n < 1 || n > poem.line_count()) {
            throw Error("poem " + poem.id + " line " + std::to_string(n) + ": scansion refers to a nonexistent line");
        }
        auto& line = poem.lines[static_cast<std::size_t>(n - 1)];
        for (int half = 0; half < 2; ++half) {
            const std::string& label = cols[static_cast<std::size_t>(half + 1)];
            auto& slot = half == 0 ? line.a_pattern : line.b_pattern;
            if (label == "-") {
                slot.reset();
                continue;
            }
            const auto s = parse_scansion(label);
            if (!s) {
                throw Error("poem " + poem.id + " line " + std::to_string(n) + ": malformed scansion label '" + label + "'");
            }
            slot = *s;
        }
    }
    poem.has_scansion = true;
}

void read_compounds(Poem& poem, const fs::path& path) {
    const auto rows = split_lines(read_file(path));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].empty()) continue;
        const auto cols = split_tabs(rows[r]);
        if (r == 0 && is_header(cols)) continue;
        const std::string where = "poem " + poem.id + " compounds row " + std::to_string(r + 1);
        if (cols.size() != 2 || cols[1].empty()) throw Error(where + ": expected 2 columns (line, lemma)");
        const int n = parse_line_number(cols[0], where);
        if (n < 1 || n > poem.line_count()) {
            throw Error("poem " + poem.id + " line " + std::to_string(n) + ": compound refers to a nonexistent line");
        }
        poem.lines[static_cast<std::size_t>(n - 1)].compounds.push_back(cols[1]);
    }
    poem.has_compounds = true;
}

std::optional<std::string> optional_path(const json& entry, const char* key) {
    if (!entry.contains(key) || entry[key].is_null()) return std::nullopt;
    return entry[key].get<std::string>();
}

}  // namespace

Corpus parse_corpus(const fs::path& root) {
    const fs::path manifest_path = root / "corpus.json";
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw Error("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    Corpus corpus;
    try {
        for (const auto& entry : manifest.at("poems")) {
            Poem poem;
            poem.id = entry.at("id").get<std::string>();
            if (corpus.contains(poem.id)) throw Error("duplicate poem id '" + poem.id + "'");
            read_text(poem, root / entry.at("text").get<std::string>());
            if (entry.contains("lines") && entry["lines"].get<int>() != poem.line_count()) {
                throw Error("poem " + poem.id + ": manifest declares " + std::to_string(entry["lines"].get<int>()) +
                            " lines, text has " + std::to_string(poem.line_count()));
            }
            if (const auto p = optional_path(entry, "scansion")) read_scansion(poem, root / *p);
            if (const auto p = optional_path(entry, "compounds")) read_compounds(poem, root / *p);
            if (entry.contains("parts") && !entry["parts"].empty()) {
                for (const auto& part : entry["parts"]) {
                    poem.parts.push_back({part.at("name").get<std::string>(), part.at("first").get<int>(),
                                          part.at("last").get<int>()});
                }
            } else {
                poem.parts.push_back({poem.id, 1, poem.line_count()});
            }
            validate_poem(poem);
            corpus.poems.push_back(std::move(poem));
        }
    } catch (const json::exception& e) {
        throw Error("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    return corpus;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << content;
}

}  // namespace

void write_corpus(const Corpus& corpus, const fs::path& root) {
    fs::create_directories(root);
    json poems = json::array();
    for (const auto& poem : corpus.poems) {
        std::string text;
        for (const auto& line : poem.lines) {
            text += line.a_text;
            if (!line.b_text.empty()) text += "\t" + line.b_text;
            text += "\n";
        }
        const std::string text_name = poem.id + ".txt";
        write_file(root / text_name, text);
        json entry = {{"id", poem.id}, {"text", text_name}, {"lines", poem.line_count()}};
        if (poem.has_scansion) {
            std::string tsv = "line\ta\tb\n";
            for (const auto& line : poem.lines) {
                if (!line.a_pattern && !line.b_pattern) continue;
                tsv += std::to_string(line.index) + "\t";
                tsv += line.a_pattern ? std::string(1, scansion_char(*line.a_pattern)) : "-";
                tsv += "\t";
                tsv += line.b_pattern ? std::string(1, scansion_char(*line.b_pattern)) : "-";
                tsv += "\n";
            }
            const std::string name = poem.id + ".scansion.tsv";
            write_file(root / name, tsv);
            entry["scansion"] = name;
        } else {
            entry["scansion"] = nullptr;
        }
        if (poem.has_compounds) {
            std::string tsv = "line\tlemma\n";
            for (const auto& line : poem.lines) {
                for (const auto& lemma : line.compounds) tsv += std::to_string(line.index) + "\t" + lemma + "\n";
            }
            const std::string name = poem.id + ".compounds.tsv";
            write_file(root / name, tsv);
            entry["compounds"] = name;
        } else {
            entry["compounds"] = nullptr;
        }
        json parts = json::array();
        for (const auto& p : poem.parts) parts.push_back({{"name", p.name}, {"first", p.first_line}, {"last", p.last_line}});
        entry["parts"] = parts;
        poems.push_back(entry);
    }
    write_file(root / "corpus.json", json{{"poems", poems}}.dump(2) + "\n");
}

std::string SampleWindow::id() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, ":%05d-%05d", first_line, last_line);
    return source + buf;
}

std::string SampleWindow::majority_part() const {
    std::string best;
    int best_count = -1;
    for (const auto& [name, count] : composition) {
        if (count > best_count) {
            best = name;
            best_count = count;
        }
    }
    return best;
}

namespace {

std::vector<int> consumed_lines(const Poem& poem, const std::optional<std::string>& filter) {
    std::vector<int> out;
    out.reserve(poem.lines.size());
    for (const auto& p : poem.parts) {
        if (filter && p.name != *filter) continue;
        for (int i = p.first_line; i <= p.last_line; ++i) out.push_back(i);
    }
    if (filter && out.empty()) throw Error("poem " + poem.id + " has no part named '" + *filter + "'");
    return out;
}

SampleWindow make_window(const Poem& poem, const std::vector<int>& seq, int start, int width) {
    SampleWindow w;
    w.source = poem.id;
    w.first_line = start + 1;
    w.last_line = start + width;
    w.lines.assign(seq.begin() + start, seq.begin() + start + width);
    for (int line : w.lines) ++w.composition[poem.part_of(line)];
    return w;
}

}  // namespace

std::vector<SampleWindow> rolling_windows(const Poem& poem, int width, int step,
                                          const std::optional<std::string>& line_filter) {
    if (width < 1) throw Error("rolling_windows: width must be >= 1");
    if (step < 1) throw Error("rolling_windows: step must be >= 1");
    const auto seq = consumed_lines(poem, line_filter);
    std::vector<SampleWindow> out;
    const int n = static_cast<int>(seq.size());
    for (int start = 0; start + width <= n; start += step) out.push_back(make_window(poem, seq, start, width));
    return out;
}

std::vector<SampleWindow> partition_samples(const Poem& poem, int sample_len,
                                            const std::optional<std::string>& line_filter) {
    if (sample_len < 1) throw Error("partition_samples: sample_len must be >= 1");
    return rolling_windows(poem, sample_len, sample_len, line_filter);
}

std::vector<const VerseLine*> window_lines(const Poem& poem, const SampleWindow& window) {
    std::vector<const VerseLine*> out;
    out.reserve(window.lines.size());
    for (int i : window.lines) out.push_back(&poem.line(i));
    return out;
}

std::vector<const VerseLine*> range_lines(const Poem& poem, LineRange range) {
    if (range.first < 1 || range.last > poem.line_count() || range.first > range.last) {
        throw Error("poem " + poem.id + ": invalid line range " + std::to_string(range.first) + "-" +
                    std::to_string(range.last));
    }
    std::vector<const VerseLine*> out;
    out.reserve(static_cast<std::size_t>(range.size()));
    for (int i = range.first; i <= range.last; ++i) out.push_back(&poem.line(i));
    return out;
}

}  // namespace oestylo

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oestylo {

// Simplified Sievers half-line type.
enum class Scansion : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E' };

inline constexpr int kScansionTypes = 5;

inline int scansion_index(Scansion s) { return static_cast<char>(s) - 'A'; }
std::optional<Scansion> parse_scansion(std::string_view label);
char scansion_char(Scansion s);

struct VerseLine {
    int index = 0;  // 1-based
    std::string a_text;
    std::string b_text;
    std::optional<Scansion> a_pattern;
    std::optional<Scansion> b_pattern;
    std::vector<std::string> compounds;

    bool operator==(const VerseLine&) const = default;
};

struct PartRange {
    std::string name;
    int first_line = 0;
    int last_line = 0;

    bool operator==(const PartRange&) const = default;
};

// Inclusive 1-based range of line numbers.
struct LineRange {
    int first = 1;
    int last = 0;

    int size() const { return last >= first ? last - first + 1 : 0; }
    bool contains(int line) const { return line >= first && line <= last; }
    bool operator==(const LineRange&) const = default;
};

struct Poem {
    std::string id;
    std::vector<VerseLine> lines;
    std::vector<PartRange> parts;
    bool has_scansion = false;
    bool has_compounds = false;

    int line_count() const { return static_cast<int>(lines.size()); }
    LineRange full_range() const { return {1, line_count()}; }
    const VerseLine& line(int index) const;
    // Name of the part containing the given line.
    const std::string& part_of(int index) const;

    bool operator==(const Poem&) const = default;
};

struct Corpus {
    std::vector<Poem> poems;

    const Poem& poem(std::string_view id) const;
    bool contains(std::string_view id) const;
    std::size_t total_lines() const;

    bool operator==(const Corpus&) const = default;
};

// Checks part coverage and line numbering; throws oestylo::Error.
void validate_poem(const Poem& poem);

// Reads `corpus.json` and the per-poem files it names.
Corpus parse_corpus(const std::filesystem::path& root);
// Writes the canonical on-disk format (manifest + .txt/.scansion.tsv/.compounds.tsv).
void write_corpus(const Corpus& corpus, const std::filesystem::path& root);

// A slice of a poem. When windows are taken over a part filter, lines are
// renumbered contiguously: first/last are positions in the filtered
// sequence and `lines` holds the original line numbers.
struct SampleWindow {
    std::string source;
    int first_line = 0;
    int last_line = 0;
    std::map<std::string, int> composition;
    std::vector<int> lines;

    int size() const { return static_cast<int>(lines.size()); }
    // "<poem>:<first>-<last>", zero padded so ids sort in position order.
    std::string id() const;
    // Part holding most of the window's lines (ties go to the smaller name).
    std::string majority_part() const;
};

std::vector<SampleWindow> partition_samples(const Poem& poem, int sample_len,
                                            const std::optional<std::string>& line_filter = std::nullopt);
std::vector<SampleWindow> rolling_windows(const Poem& poem, int width, int step,
                                          const std::optional<std::string>& line_filter = std::nullopt);

std::vector<const VerseLine*> window_lines(const Poem& poem, const SampleWindow& window);
std::vector<const VerseLine*> range_lines(const Poem& poem, LineRange range);

}  // namespace oestylo

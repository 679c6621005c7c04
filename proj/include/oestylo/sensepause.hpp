#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oestylo/corpus.hpp"
#include "oestylo/stats.hpp"

namespace oestylo::sensepause {

enum class Position { Intraline, Final };

struct Mark {
    char32_t glyph = 0;
    int line = 0;
    Position position = Position::Intraline;
    bool suppressed_as_ellipsis = false;
};

struct Options {
    // Reproduce the original script: only . ? ! ; : ( ) - are marks, a mark is
    // Final only when it is the last character of the line, and editorial
    // ellipsis dots count as periods.
    bool strict_compat = false;
    // Treat ASCII ' and " as quote glyphs (for corpora with normalized quotes).
    bool ascii_quotes = false;
    bool count_hyphen = true;
};

// Every non-comma sense-pause glyph on the line, in text order. Dots that
// belong to an editorial ellipsis are returned with suppressed_as_ellipsis
// set and contribute to no count.
std::vector<Mark> classify_sense_pauses(const VerseLine& line, const Options& opts = {});

struct RatioReport {
    std::string unit_id;
    int intraline = 0;
    int final_count = 0;
    // intraline / (intraline + final); absent when there are no marks.
    std::optional<double> ratio;
};

RatioReport intraline_ratio(const std::vector<const VerseLine*>& lines, std::string unit_id = {},
                            const Options& opts = {});

// A poem, optionally restricted to one named part.
struct TextUnit {
    const Poem* poem = nullptr;
    std::optional<std::string> part;

    std::string label() const;
};

struct RatioComparison {
    std::vector<RatioReport> samples_a;
    std::vector<RatioReport> samples_b;
    stats::TestResult test;
};

RatioComparison sample_ratio_comparison(const TextUnit& a, const TextUnit& b, int sample_len = 100,
                                        const Options& opts = {});

// Syllable proxy: maximal vowel runs per half-line, summed over both halves.
int syllable_estimate(const VerseLine& line);
double mean_syllables_per_line(const std::vector<const VerseLine*>& lines);

// The sense-pause glyph set in use for the given options.
bool is_sense_pause_glyph(char32_t cp, const Options& opts);

}  // namespace oestylo::sensepause

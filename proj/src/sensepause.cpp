#include "oestylo/sensepause.hpp"

#include "oestylo/error.hpp"
#include "oestylo/utf8.hpp"

namespace oestylo::sensepause {

namespace {

constexpr char32_t kLeftSingle = 0x2018;
constexpr char32_t kRightSingle = 0x2019;
constexpr char32_t kLeftDouble = 0x201C;
constexpr char32_t kRightDouble = 0x201D;

bool is_quote(char32_t cp, const Options& opts) {
    if (cp == kLeftSingle || cp == kRightSingle || cp == kLeftDouble || cp == kRightDouble) return true;
    return opts.ascii_quotes && (cp == U'\'' || cp == U'"');
}

bool is_punctuation(char32_t cp) {
    if (cp < 0x80) return cp > 0x20 && cp < 0x7F && !(cp >= U'0' && cp <= U'9') && !(cp >= U'a' && cp <= U'z') &&
                          !(cp >= U'A' && cp <= U'Z');
    return (cp >= 0x2010 && cp <= 0x206F) || cp == 0xAB || cp == 0xBB || cp == 0xA1 || cp == 0xBF;
}

bool is_letter(char32_t cp) {
    if (cp < 0x80) return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
    return cp >= 0xC0 && !is_punctuation(cp) && !utf8::is_space(cp) && cp != 0xD7 && cp != 0xF7;
}

std::string raw_line(const VerseLine& line) {
    if (line.b_text.empty()) return line.a_text;
    return line.a_text + "\t" + line.b_text;
}

// Marks dots that belong to an editorial ellipsis: a stretch of dots and
// whitespace holding two or more dots, or a whitespace-delimited token made
// only of dots.
std::vector<bool> ellipsis_dots(const std::u32string& text) {
    const std::size_t n = text.size();
    std::vector<bool> suppressed(n, false);
    std::size_t i = 0;
    while (i < n) {
        if (text[i] != U'.' && !utf8::is_space(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        int dots = 0;
        while (j < n && (text[j] == U'.' || utf8::is_space(text[j]))) {
            if (text[j] == U'.') ++dots;
            ++j;
        }
        if (dots >= 2) {
            for (std::size_t k = i; k < j; ++k) suppressed[k] = text[k] == U'.';
        }
        i = j;
    }
    i = 0;
    while (i < n) {
        if (utf8::is_space(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        bool only_dots = true;
        while (j < n && !utf8::is_space(text[j])) {
            if (text[j] != U'.') only_dots = false;
            ++j;
        }
        if (only_dots) {
            for (std::size_t k = i; k < j; ++k) suppressed[k] = true;
        }
        i = j;
    }
    return suppressed;
}

}  // namespace

bool is_sense_pause_glyph(char32_t cp, const Options& opts) {
    switch (cp) {
        case U'.':
        case U'?':
        case U'!':
        case U';':
        case U':':
        case U'(':
        case U')':
            return true;
        case U'-':
            return opts.count_hyphen;
        default:
            break;
    }
    if (opts.strict_compat) return false;
    return is_quote(cp, opts);
}

std::vector<Mark> classify_sense_pauses(const VerseLine& line, const Options& opts) {
    const std::u32string text = utf8::to_u32(raw_line(line));
    const std::size_t n = text.size();
    std::vector<Mark> marks;
    if (n == 0) return marks;

    if (opts.strict_compat) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_sense_pause_glyph(text[i], opts)) continue;
            marks.push_back({text[i], line.index, i + 1 == n ? Position::Final : Position::Intraline, false});
        }
        return marks;
    }

    const std::vector<bool> suppressed = ellipsis_dots(text);
    std::size_t end = n;
    while (end > 0 && utf8::is_space(text[end - 1])) --end;
    std::size_t terminal_start = end;
    while (terminal_start > 0 &&
           (is_punctuation(text[terminal_start - 1]) || utf8::is_space(text[terminal_start - 1]) ||
            is_quote(text[terminal_start - 1], opts))) {
        --terminal_start;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const char32_t cp = text[i];
        if (!is_sense_pause_glyph(cp, opts)) continue;
        if (is_quote(cp, opts)) {
            const bool letter_before = i > 0 && is_letter(text[i - 1]);
            const bool letter_after = i + 1 < n && is_letter(text[i + 1]);
            if (letter_before && letter_after) continue;
        }
        Mark m{cp, line.index, (i >= terminal_start && i < end) ? Position::Final : Position::Intraline,
               cp == U'.' && suppressed[i]};
        marks.push_back(m);
    }
    return marks;
}

RatioReport intraline_ratio(const std::vector<const VerseLine*>& lines, std::string unit_id, const Options& opts) {
    RatioReport report;
    report.unit_id = std::move(unit_id);
    for (const VerseLine* line : lines) {
        for (const auto& m : classify_sense_pauses(*line, opts)) {
            if (m.suppressed_as_ellipsis) continue;
            if (m.position == Position::Final) ++report.final_count;
            else ++report.intraline;
        }
    }
    const int total = report.intraline + report.final_count;
    if (total > 0) report.ratio = static_cast<double>(report.intraline) / total;
    return report;
}

std::string TextUnit::label() const {
    if (!poem) return {};
    return part ? poem->id + "[" + *part + "]" : poem->id;
}

RatioComparison sample_ratio_comparison(const TextUnit& a, const TextUnit& b, int sample_len, const Options& opts) {
    if (!a.poem || !b.poem) throw Error("sample_ratio_comparison: missing poem");
    RatioComparison out;
    auto collect = [&](const TextUnit& unit, std::vector<RatioReport>& reports) {
        std::vector<double> ratios;
        for (const auto& w : partition_samples(*unit.poem, sample_len, unit.part)) {
            std::string id = w.id();
            if (unit.part) id = unit.poem->id + "[" + *unit.part + "]" + id.substr(unit.poem->id.size());
            auto report = intraline_ratio(window_lines(*unit.poem, w), id, opts);
            if (report.ratio) ratios.push_back(*report.ratio);
            reports.push_back(std::move(report));
        }
        if (ratios.size() < 2) throw Error("insufficient samples for " + unit.label());
        return ratios;
    };
    const auto ra = collect(a, out.samples_a);
    const auto rb = collect(b, out.samples_b);
    out.test = stats::pooled_t_test(ra, rb);
    return out;
}

namespace {

bool is_vowel(char32_t cp) {
    cp = utf8::to_lower(cp);
    switch (cp) {
        case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
        case 0xE6:  // æ
        case 0x153: // œ
        case 0xF8:  // ø
        case 0xFF:  // ÿ
        case 0xFD:  // ý
        case 0x1E3: // ǣ
        case 0x1FD: // ǽ
        case 0x233: // ȳ
            return true;
        default:
            break;
    }
    if (cp >= 0xE0 && cp <= 0xE5) return true;
    if (cp >= 0xE8 && cp <= 0xEF) return true;
    if (cp >= 0xF2 && cp <= 0xF6) return true;
    if (cp >= 0xF9 && cp <= 0xFC) return true;
    switch (cp) {
        case 0x101: case 0x103: case 0x105:
        case 0x113: case 0x115: case 0x117: case 0x119: case 0x11B:
        case 0x129: case 0x12B: case 0x12D: case 0x12F:
        case 0x14D: case 0x14F: case 0x151:
        case 0x169: case 0x16B: case 0x16D: case 0x16F: case 0x171: case 0x173:
            return true;
        default:
            return false;
    }
}

int vowel_runs(const std::string& text) {
    int runs = 0;
    bool in_run = false;
    for (const auto& c : utf8::decode(text)) {
        const bool v = is_vowel(c.value);
        if (v && !in_run) ++runs;
        in_run = v;
    }
    return runs;
}

}  // namespace

int syllable_estimate(const VerseLine& line) { return vowel_runs(line.a_text) + vowel_runs(line.b_text); }

double mean_syllables_per_line(const std::vector<const VerseLine*>& lines) {
    if (lines.empty()) return 0.0;
    long total = 0;
    for (const VerseLine* line : lines) total += syllable_estimate(*line);
    return static_cast<double>(total) / static_cast<double>(lines.size());
}

}  // namespace oestylo::sensepause

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oestylo::utf8 {

// One decoded code point and the byte span it came from.
struct CodePoint {
    char32_t value;
    std::size_t offset;
    std::size_t length;
};

// Invalid sequences decode to U+FFFD one byte at a time.
std::vector<CodePoint> decode(std::string_view text);
std::u32string to_u32(std::string_view text);
void append(std::string& out, char32_t cp);
std::string from_u32(std::u32string_view text);

// Lowercasing for Latin-1 and Latin Extended-A/B letters used in Old English
// editions (Æ, Þ, Ð, macron and acute vowels). Other code points pass through.
char32_t to_lower(char32_t cp);

bool is_space(char32_t cp);

}  // namespace oestylo::utf8

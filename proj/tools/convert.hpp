#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace oestylo::cli {

// Adapter from an external dataset checkout to the canonical corpus format.
//
// Expected source layout:
//   texts/<poem>.txt      one verse line per row; the a- and b-verse are
//                         separated by a TAB or by a run of two or more spaces
//   metre/<poem>.tsv      optional half-line scansion, either
//                           <halfline index>\t<label>   (odd = a-verse, even = b-verse)
//                         or one label per row, paired sequentially into lines
//   compounds/<poem>.tsv  optional, <line>\t<lemma> per compound occurrence
//   parts.json            optional, {"<poem>": [{"name":..,"first":..,"last":..}]}
// Labels are A-E; "-" or an empty field marks a missing half-line.
struct ConvertReport {
    std::vector<std::string> poems;
    // Poems whose scansion came as an unindexed stream with gaps: sequential
    // pairing shifts every later line by one half-line.
    std::vector<std::string> sequential_warnings;
};

ConvertReport convert_dataset(const std::filesystem::path& source, const std::filesystem::path& target);

}  // namespace oestylo::cli

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oestylo/corpus.hpp"
#include "oestylo/rng.hpp"
#include "oestylo/stats.hpp"

namespace oestylo::lexicon {

struct Occurrence {
    std::string poem;
    int line = 0;
};

struct CompoundIndex {
    std::map<std::string, std::vector<Occurrence>> by_type;
    std::map<std::string, int> totals;  // compound tokens per annotated poem
    std::set<std::string> hapax_set;    // corpus-wide frequency exactly 1

    bool is_hapax(const std::string& lemma) const { return hapax_set.count(lemma) > 0; }
};

// Indexes every poem that carries compound annotations.
CompoundIndex build_compound_index(const Corpus& corpus);

// A poem and a line range within it.
struct Unit {
    std::string poem;
    LineRange range;
};

struct HapaxFit {
    std::string unit;
    int first_line = 0;  // in the coordinates of the fitted series
    int last_line = 0;
    std::vector<std::pair<int, int>> series;  // (line, cumulative hapax tokens)
    stats::LinearFit fit;                     // per-line slope
    double slope_per100 = 0.0;
    int n_hapax = 0;
};

HapaxFit hapax_cumulative_fit(const CompoundIndex& index, const Corpus& corpus, const Unit& unit);

enum class SegmentMode { Partition, Merge };

struct SegmentFits {
    std::vector<HapaxFit> segments;
    HapaxFit combined;
};

// Partition: independent fits of segments of one poem, plus a fit over all
// segments in order. Merge: the units are concatenated in the given order
// with contiguous renumbering; segments report their renumbered boundaries.
SegmentFits segment_fits(const CompoundIndex& index, const Corpus& corpus, const std::vector<Unit>& units,
                         SegmentMode mode);

// Splits a poem into `parts` ranges of equal length (the last absorbs the remainder).
std::vector<Unit> equal_partition(const Poem& poem, int parts);

struct PairScore {
    std::string poem_a;
    std::string poem_b;
    int observed_shared = 0;
    double null_mean = 0.0;
    double null_sd = 0.0;
    std::optional<double> z;
    double empirical_tail = 0.0;
};

struct SharedScores {
    std::vector<std::string> poems;   // poems retained, in request order
    std::vector<std::string> excluded;  // requested poems without compounds
    std::vector<PairScore> pairs;     // i < j, row-major over `poems`

    const PairScore& pair(const std::string& a, const std::string& b) const;
};

// Null model: every compound token of the selected poems is reassigned
// independently to a poem with probability proportional to that poem's
// compound token total. Trial chunks use rng substreams.
SharedScores shared_compound_scores(const CompoundIndex& index, const std::vector<std::string>& poems, int trials,
                                    const RngStream& rng);

// One draw of the null model: for each compound type with tokens in the
// selected poems, the number of its tokens assigned to each poem (indexed
// like `poems`). Token totals per type are conserved.
std::map<std::string, std::vector<int>> draw_null_allocation(const CompoundIndex& index,
                                                             const std::vector<std::string>& poems,
                                                             Xoshiro256& gen);

// Observed number of compound types attested in both poems.
int shared_types(const CompoundIndex& index, const std::string& a, const std::string& b);

std::optional<double> type_token_ratio(const Poem& poem);

}  // namespace oestylo::lexicon

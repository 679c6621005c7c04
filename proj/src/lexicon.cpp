#include "oestylo/lexicon.hpp"

#include <algorithm>
#include <cmath>

#include "oestylo/error.hpp"

namespace oestylo::lexicon {

CompoundIndex build_compound_index(const Corpus& corpus) {
    CompoundIndex index;
    for (const auto& poem : corpus.poems) {
        if (!poem.has_compounds) continue;
        int tokens = 0;
        for (const auto& line : poem.lines) {
            if (line.index < 1 || line.index > poem.line_count()) {
                throw Error("poem " + poem.id + ": compound annotation on nonexistent line " +
                            std::to_string(line.index));
            }
            for (const auto& lemma : line.compounds) {
                index.by_type[lemma].push_back({poem.id, line.index});
                ++tokens;
            }
        }
        index.totals[poem.id] = tokens;
    }
    for (const auto& [lemma, occ] : index.by_type) {
        if (occ.size() == 1) index.hapax_set.insert(lemma);
    }
    return index;
}

namespace {

const Poem& annotated_poem(const Corpus& corpus, const std::string& id) {
    const Poem& poem = corpus.poem(id);
    if (!poem.has_compounds) throw Error("poem " + id + " has no compound annotations");
    return poem;
}

// Hapax tokens on each line of the unit, in order.
std::vector<int> hapax_per_line(const CompoundIndex& index, const Corpus& corpus, const Unit& unit) {
    const Poem& poem = annotated_poem(corpus, unit.poem);
    std::vector<int> out;
    for (const VerseLine* line : range_lines(poem, unit.range)) {
        int n = 0;
        for (const auto& lemma : line->compounds) n += index.is_hapax(lemma) ? 1 : 0;
        out.push_back(n);
    }
    return out;
}

HapaxFit fit_series(std::string label, int first_line, const std::vector<int>& per_line) {
    HapaxFit out;
    out.unit = std::move(label);
    out.first_line = first_line;
    out.last_line = first_line + static_cast<int>(per_line.size()) - 1;
    std::vector<double> xs, ys;
    int cumulative = 0;
    for (std::size_t i = 0; i < per_line.size(); ++i) {
        cumulative += per_line[i];
        const int x = first_line + static_cast<int>(i);
        out.series.emplace_back(x, cumulative);
        xs.push_back(x);
        ys.push_back(cumulative);
    }
    out.n_hapax = cumulative;
    if (cumulative == 0) throw Error("no hapax compounds in range (" + out.unit + ")");
    out.fit = stats::ols_fit(xs, ys);
    out.slope_per100 = out.fit.slope * 100.0;
    return out;
}

std::string unit_label(const Unit& u) {
    return u.poem + ":" + std::to_string(u.range.first) + "-" + std::to_string(u.range.last);
}

}  // namespace

HapaxFit hapax_cumulative_fit(const CompoundIndex& index, const Corpus& corpus, const Unit& unit) {
    return fit_series(unit_label(unit), unit.range.first, hapax_per_line(index, corpus, unit));
}

SegmentFits segment_fits(const CompoundIndex& index, const Corpus& corpus, const std::vector<Unit>& units,
                         SegmentMode mode) {
    if (units.size() < 2) throw Error("segment_fits: need at least two units");
    if (mode == SegmentMode::Partition) {
        for (const auto& u : units) {
            if (u.poem != units.front().poem) throw Error("segment_fits: partition units must come from one poem");
        }
    }
    SegmentFits out;
    std::vector<int> merged;
    std::string label;
    for (const auto& u : units) {
        const auto per_line = hapax_per_line(index, corpus, u);
        if (mode == SegmentMode::Partition) {
            out.segments.push_back(fit_series(unit_label(u), u.range.first, per_line));
        } else {
            out.segments.push_back(fit_series(unit_label(u), static_cast<int>(merged.size()) + 1, per_line));
        }
        merged.insert(merged.end(), per_line.begin(), per_line.end());
        label += (label.empty() ? "" : "+") + unit_label(u);
    }
    out.combined = fit_series(label, 1, merged);
    return out;
}

std::vector<Unit> equal_partition(const Poem& poem, int parts) {
    if (parts < 1 || parts > poem.line_count()) throw Error("equal_partition: invalid part count");
    const int len = poem.line_count() / parts;
    std::vector<Unit> out;
    for (int p = 0; p < parts; ++p) {
        const int first = p * len + 1;
        const int last = p + 1 == parts ? poem.line_count() : (p + 1) * len;
        out.push_back({poem.id, {first, last}});
    }
    return out;
}

const PairScore& SharedScores::pair(const std::string& a, const std::string& b) const {
    for (const auto& p : pairs) {
        if ((p.poem_a == a && p.poem_b == b) || (p.poem_a == b && p.poem_b == a)) return p;
    }
    throw Error("no pair score for " + a + " / " + b);
}

int shared_types(const CompoundIndex& index, const std::string& a, const std::string& b) {
    int shared = 0;
    for (const auto& [lemma, occ] : index.by_type) {
        bool in_a = false, in_b = false;
        for (const auto& o : occ) {
            in_a = in_a || o.poem == a;
            in_b = in_b || o.poem == b;
        }
        shared += (in_a && in_b) ? 1 : 0;
    }
    return shared;
}

SharedScores shared_compound_scores(const CompoundIndex& index, const std::vector<std::string>& poems, int trials,
                                    const RngStream& rng) {
    if (trials < 1000) throw Error("shared_compound_scores: need at least 1000 trials");
    SharedScores out;
    std::map<std::string, int> slot;
    for (const auto& id : poems) {
        if (slot.count(id)) throw Error("shared_compound_scores: duplicate poem " + id);
        const auto it = index.totals.find(id);
        if (it == index.totals.end() || it->second == 0) {
            out.excluded.push_back(id);
            continue;
        }
        slot[id] = static_cast<int>(out.poems.size());
        out.poems.push_back(id);
    }
    const int m = static_cast<int>(out.poems.size());
    if (m < 2) throw Error("shared_compound_scores: fewer than two poems with compounds");

    std::vector<double> cumulative(static_cast<std::size_t>(m));
    double acc = 0.0;
    for (int p = 0; p < m; ++p) {
        acc += index.totals.at(out.poems[static_cast<std::size_t>(p)]);
        cumulative[static_cast<std::size_t>(p)] = acc;
    }

    // Tokens per type inside the selected poems; types with a single token
    // cannot be shared under any allocation.
    std::vector<int> type_tokens;
    const auto n_pairs = static_cast<std::size_t>(m * (m - 1) / 2);
    std::vector<int> observed(n_pairs, 0);
    auto pair_slot = [m](int i, int j) { return static_cast<std::size_t>(i * m - i * (i + 1) / 2 + (j - i - 1)); };
    for (const auto& [lemma, occ] : index.by_type) {
        std::vector<int> present;
        int tokens = 0;
        for (const auto& o : occ) {
            const auto it = slot.find(o.poem);
            if (it == slot.end()) continue;
            ++tokens;
            if (std::find(present.begin(), present.end(), it->second) == present.end()) present.push_back(it->second);
        }
        std::sort(present.begin(), present.end());
        for (std::size_t x = 0; x < present.size(); ++x) {
            for (std::size_t y = x + 1; y < present.size(); ++y) ++observed[pair_slot(present[x], present[y])];
        }
        if (tokens >= 2) type_tokens.push_back(tokens);
    }

    struct ChunkStats {
        std::vector<long long> sum, sumsq, tail;
    };
    const int chunks = (trials + stats::kMonteCarloChunk - 1) / stats::kMonteCarloChunk;
    std::vector<ChunkStats> partial(static_cast<std::size_t>(chunks));
    stats::for_each_chunk(trials, stats::kMonteCarloChunk, 0, [&](int c, int first, int last) {
        Xoshiro256 gen(rng.substream(static_cast<std::uint64_t>(c)));
        ChunkStats cs{std::vector<long long>(n_pairs, 0), std::vector<long long>(n_pairs, 0),
                      std::vector<long long>(n_pairs, 0)};
        std::vector<int> shared(n_pairs);
        std::vector<int> stamp(static_cast<std::size_t>(m), -1);
        std::vector<int> hits;
        int stamp_id = 0;
        for (int trial = first; trial < last; ++trial) {
            std::fill(shared.begin(), shared.end(), 0);
            for (int tokens : type_tokens) {
                hits.clear();
                ++stamp_id;
                for (int t = 0; t < tokens; ++t) {
                    const auto p = static_cast<int>(gen.categorical(cumulative));
                    if (stamp[static_cast<std::size_t>(p)] != stamp_id) {
                        stamp[static_cast<std::size_t>(p)] = stamp_id;
                        hits.push_back(p);
                    }
                }
                if (hits.size() < 2) continue;
                std::sort(hits.begin(), hits.end());
                for (std::size_t x = 0; x < hits.size(); ++x) {
                    for (std::size_t y = x + 1; y < hits.size(); ++y) ++shared[pair_slot(hits[x], hits[y])];
                }
            }
            for (std::size_t k = 0; k < n_pairs; ++k) {
                cs.sum[k] += shared[k];
                cs.sumsq[k] += static_cast<long long>(shared[k]) * shared[k];
                cs.tail[k] += shared[k] >= observed[k] ? 1 : 0;
            }
        }
        partial[static_cast<std::size_t>(c)] = std::move(cs);
    });

    const double n = trials;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const std::size_t k = pair_slot(i, j);
            long long sum = 0, sumsq = 0, tail = 0;
            for (const auto& cs : partial) {
                sum += cs.sum[k];
                sumsq += cs.sumsq[k];
                tail += cs.tail[k];
            }
            PairScore ps;
            ps.poem_a = out.poems[static_cast<std::size_t>(i)];
            ps.poem_b = out.poems[static_cast<std::size_t>(j)];
            ps.observed_shared = observed[k];
            ps.null_mean = static_cast<double>(sum) / n;
            const long double var =
                (static_cast<long double>(sumsq) - static_cast<long double>(sum) * sum / n) / (n - 1.0);
            ps.null_sd = var > 0 ? static_cast<double>(std::sqrt(var)) : 0.0;
            if (ps.null_sd > 0) ps.z = (ps.observed_shared - ps.null_mean) / ps.null_sd;
            ps.empirical_tail = static_cast<double>(tail) / n;
            out.pairs.push_back(ps);
        }
    }
    return out;
}

std::map<std::string, std::vector<int>> draw_null_allocation(const CompoundIndex& index,
                                                             const std::vector<std::string>& poems,
                                                             Xoshiro256& gen) {
    std::map<std::string, int> slot;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& id : poems) {
        const auto it = index.totals.find(id);
        if (it == index.totals.end()) throw Error("draw_null_allocation: poem without compounds: " + id);
        if (!slot.emplace(id, static_cast<int>(slot.size())).second) {
            throw Error("draw_null_allocation: duplicate poem " + id);
        }
        acc += it->second;
        cumulative.push_back(acc);
    }
    if (acc <= 0) throw Error("draw_null_allocation: no compound tokens");
    std::map<std::string, std::vector<int>> out;
    for (const auto& [lemma, occ] : index.by_type) {
        int tokens = 0;
        for (const auto& o : occ) tokens += slot.count(o.poem) ? 1 : 0;
        if (tokens == 0) continue;
        auto& counts = out[lemma];
        counts.assign(poems.size(), 0);
        for (int t = 0; t < tokens; ++t) ++counts[gen.categorical(cumulative)];
    }
    return out;
}

std::optional<double> type_token_ratio(const Poem& poem) {
    if (!poem.has_compounds) throw Error("poem " + poem.id + " has no compound annotations");
    std::set<std::string> types;
    int tokens = 0;
    for (const auto& line : poem.lines) {
        for (const auto& lemma : line.compounds) {
            types.insert(lemma);
            ++tokens;
        }
    }
    if (tokens == 0) return std::nullopt;
    return static_cast<double>(types.size()) / tokens;
}

}  // namespace oestylo::lexicon

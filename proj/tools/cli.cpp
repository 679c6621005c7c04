#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "convert.hpp"
#include "oestylo/corpus.hpp"
#include "oestylo/error.hpp"
#include "oestylo/figure.hpp"
#include "oestylo/lexicon.hpp"
#include "oestylo/metre.hpp"
#include "oestylo/ngram.hpp"
#include "oestylo/sensepause.hpp"
#include "output.hpp"

namespace oestylo::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct Globals {
    std::uint64_t seed = 7;
    std::string out = "out";
    std::string format = "csv";
    std::string corpus;
    int split_line = metre::kDefaultSplitLine;
};

struct SensePauseParams {
    std::vector<std::string> units;
    std::vector<std::string> compare;
    int sample_len = 100;
    bool strict = false;
    bool ascii_quotes = false;
    bool no_hyphen = false;
};

struct MetreParams {
    std::string poem;
    int width = 200;
    int step = 1;
    std::string granularity = "both";
    int bootstrap = 10000;
    std::string pattern = "A";
    std::string range;
};

struct HapaxParams {
    std::string poem;
    std::string range;
    int parts = 0;
    std::vector<std::string> merge;
};

struct SharedParams {
    std::vector<std::string> poems;
    int trials = 1000;
};

struct ClusterParams {
    std::vector<std::string> poems;
    std::string poem;
    int width = 300;
    int step = 100;
    int n = 3;
    int k = 500;
    bool zscore = false;
    std::vector<int> n_values = {2, 3, 4, 5};
    std::vector<int> k_values = ngram::default_sweep_k();
};

Format parse_format(const std::string& f) { return f == "json" ? Format::Json : Format::Csv; }

LineRange parse_range(const std::string& s, const Poem& poem) {
    if (s.empty()) return poem.full_range();
    const auto dash = s.find('-');
    try {
        if (dash == std::string::npos) throw std::invalid_argument(s);
        return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
    } catch (const std::exception&) {
        throw Error("invalid line range '" + s + "' (expected FIRST-LAST)");
    }
}

sensepause::TextUnit parse_unit(const Corpus& corpus, const std::string& spec) {
    const auto colon = spec.find(':');
    sensepause::TextUnit unit;
    unit.poem = &corpus.poem(spec.substr(0, colon));
    if (colon != std::string::npos) unit.part = spec.substr(colon + 1);
    return unit;
}

std::vector<const VerseLine*> unit_lines(const sensepause::TextUnit& unit) {
    std::vector<const VerseLine*> out;
    for (const auto& line : unit.poem->lines) {
        if (!unit.part || unit.poem->part_of(line.index) == *unit.part) out.push_back(&line);
    }
    if (out.empty()) throw Error("no lines in " + unit.label());
    return out;
}

std::string default_poem(const Corpus& corpus, bool need_scansion) {
    if (corpus.contains("beowulf")) return "beowulf";
    const Poem* best = nullptr;
    for (const auto& p : corpus.poems) {
        if (need_scansion && !p.has_scansion) continue;
        if (!best || p.line_count() > best->line_count()) best = &p;
    }
    if (!best) throw Error("corpus has no suitable poem; pass --poem");
    return best->id;
}

// ---------------------------------------------------------------- sensepause

ojson run_sensepause(const Corpus& corpus, const SensePauseParams& p, OutputDir& out, const std::string& prefix) {
    sensepause::Options opts;
    opts.strict_compat = p.strict;
    opts.ascii_quotes = p.ascii_quotes;
    opts.count_hyphen = !p.no_hyphen;

    std::vector<sensepause::TextUnit> units;
    if (p.units.empty()) {
        for (const auto& poem : corpus.poems) units.push_back({&poem, std::nullopt});
    } else {
        for (const auto& s : p.units) units.push_back(parse_unit(corpus, s));
    }

    Table ratios{{"unit_id", "intraline", "final", "ratio"}, {}};
    Table samples{{"unit_id", "intraline", "final", "ratio"}, {}};
    Table syllables{{"unit_id", "lines", "mean_syllables"}, {}};
    figure::FigureSpec fig;
    fig.kind = figure::Kind::ScatterFit;
    fig.title = "Intraline-to-total sense-pause ratio per sample";
    fig.x_label = "sample start line";
    fig.y_label = "ratio";
    for (const auto& unit : units) {
        const auto lines = unit_lines(unit);
        const auto r = sensepause::intraline_ratio(lines, unit.label(), opts);
        ratios.add({r.unit_id, std::to_string(r.intraline), std::to_string(r.final_count), fmt_opt(r.ratio)});
        syllables.add({unit.label(), std::to_string(lines.size()), fmt(sensepause::mean_syllables_per_line(lines))});
        figure::Series series{unit.label(), {}};
        for (const auto& w : partition_samples(*unit.poem, p.sample_len, unit.part)) {
            const auto sr = sensepause::intraline_ratio(window_lines(*unit.poem, w), unit.label() + "@" +
                                                        std::to_string(w.lines.front()), opts);
            samples.add({sr.unit_id, std::to_string(sr.intraline), std::to_string(sr.final_count), fmt_opt(sr.ratio)});
            if (sr.ratio) series.points.emplace_back(w.lines.front(), *sr.ratio);
        }
        fig.series.push_back(std::move(series));
    }
    out.table(prefix + "ratios", ratios);
    out.table(prefix + "samples", samples);
    out.table(prefix + "syllables", syllables);
    const bool any_points = std::any_of(fig.series.begin(), fig.series.end(),
                                        [](const auto& s) { return !s.points.empty(); });
    if (any_points) out.svg(prefix + "samples", figure::render_figure(fig));

    ojson params = {{"units", p.units}, {"sample_len", p.sample_len}, {"strict", p.strict},
                    {"ascii_quotes", p.ascii_quotes}, {"count_hyphen", !p.no_hyphen}};
    if (p.compare.size() == 2) {
        const auto cmp = sensepause::sample_ratio_comparison(parse_unit(corpus, p.compare[0]),
                                                             parse_unit(corpus, p.compare[1]), p.sample_len, opts);
        auto ratios_of = [](const std::vector<sensepause::RatioReport>& rs) {
            ojson arr = ojson::array();
            for (const auto& r : rs) {
                ojson o = {{"unit_id", r.unit_id}, {"intraline", r.intraline}, {"final", r.final_count}};
                o["ratio"] = r.ratio ? ojson(*r.ratio) : ojson(nullptr);
                arr.push_back(o);
            }
            return arr;
        };
        out.json(prefix + "comparison", {{"a", p.compare[0]},
                                         {"b", p.compare[1]},
                                         {"samples_a", ratios_of(cmp.samples_a)},
                                         {"samples_b", ratios_of(cmp.samples_b)},
                                         {"test", test_result_json(cmp.test)}});
        params["compare"] = p.compare;
    }
    return params;
}

// --------------------------------------------------------------------- metre

std::vector<metre::Granularity> granularities(const std::string& g) {
    if (g == "half") return {metre::Granularity::HalfLine};
    if (g == "full") return {metre::Granularity::FullLine};
    return {metre::Granularity::HalfLine, metre::Granularity::FullLine};
}

void run_metre_rolling(const Poem& poem, const MetreParams& p, int split_line, OutputDir& out,
                       const std::string& prefix) {
    for (auto g : granularities(p.granularity)) {
        const auto series = metre::rolling_pattern_proportions(poem, p.width, p.step, g);
        Table t{{"window_start", "label", "proportion"}, {}};
        figure::FigureSpec fig;
        fig.kind = figure::Kind::StackedArea;
        fig.title = poem.id + ": " + metre::to_string(g) + "-line pattern proportions (" + std::to_string(p.width) +
                    "-line rolling window)";
        fig.x_label = "window start line";
        fig.y_label = "proportion";
        for (const auto& l : series.labels) fig.series.push_back({l, {}});
        for (std::size_t w = 0; w < series.window_start.size(); ++w) {
            const auto& props = series.proportions[w];
            if (!props) continue;
            for (std::size_t j = 0; j < series.labels.size(); ++j) {
                t.add({std::to_string(series.window_start[w]), series.labels[j], fmt((*props)[j])});
                fig.series[j].points.emplace_back(series.window_start[w], (*props)[j]);
            }
        }
        if (split_line > 0) fig.markers.push_back({static_cast<double>(split_line), "line " + std::to_string(split_line)});
        const std::string name = prefix + "rolling_" + poem.id + "_" + metre::to_string(g);
        out.table(name, t);
        if (!fig.series.front().points.empty()) out.svg(name, figure::render_figure(fig));
    }
}

ojson pairing_json(const metre::PairingLog& log) {
    return {{"paired", log.paired},
            {"skipped_missing_a", log.skipped_missing_a},
            {"skipped_missing_b", log.skipped_missing_b},
            {"misalignment_warnings", log.misalignment_warnings}};
}

void run_metre_split(const Poem& poem, int split_line, int bootstrap, const RngStream& rng, OutputDir& out,
                     const std::string& prefix) {
    const auto table = metre::split_distribution_tests(poem, split_line, bootstrap, rng);
    Table t{{"granularity", "test", "statistic", "df", "p"}, {}};
    ojson rows = ojson::array();
    for (const auto& row : table.rows) {
        const std::string test = metre::to_string(row.test) + (row.bootstrap ? "_bootstrap" : "");
        t.add({metre::to_string(row.granularity), test, fmt(row.result.statistic), fmt(row.result.df),
               fmt(row.result.p_value)});
        ojson r = {{"granularity", metre::to_string(row.granularity)}, {"test", test}};
        r["result"] = test_result_json(row.result);
        if (row.result.min_expected && *row.result.min_expected < 5.0) {
            r["caveat"] = "minimum expected cell count below 5";
        }
        rows.push_back(r);
    }
    const std::string name = prefix + "split_tests_" + poem.id;
    out.table(name, t);
    out.json(name, {{"poem", poem.id},
                    {"split_line", split_line},
                    {"before", {table.before.first, table.before.last}},
                    {"after", {table.after.first, table.after.last}},
                    {"bootstrap_replicates", bootstrap},
                    {"pairing_before", pairing_json(table.pairing_before)},
                    {"pairing_after", pairing_json(table.pairing_after)},
                    {"tests", rows}});
}

void run_metre_independence(const Poem& poem, const std::string& range, OutputDir& out, const std::string& prefix) {
    const LineRange r = parse_range(range, poem);
    const auto res = metre::halves_independence_test(poem, r);
    const auto pairing = metre::pair_full_lines(poem, r);
    out.json(prefix + "independence_" + poem.id, {{"poem", poem.id},
                                                  {"range", {r.first, r.last}},
                                                  {"pairing", pairing_json(pairing.log)},
                                                  {"test", test_result_json(res)}});
}

void run_metre_incidence(const Poem& poem, const MetreParams& p, OutputDir& out, const std::string& prefix) {
    for (auto g : granularities(p.granularity)) {
        if (static_cast<int>(p.pattern.size()) != (g == metre::Granularity::HalfLine ? 1 : 2)) continue;
        const LineRange r = parse_range(p.range, poem);
        const auto fit = metre::cumulative_incidence_r(poem, p.pattern, g, r);
        const std::string name = prefix + "incidence_" + poem.id + "_" + metre::to_string(g) + "_" + p.pattern;
        out.json(name, {{"poem", poem.id},
                        {"pattern", p.pattern},
                        {"granularity", metre::to_string(g)},
                        {"slope", fit.slope},
                        {"intercept", fit.intercept},
                        {"r", fit.r},
                        {"n", fit.n}});
    }
}

// --------------------------------------------------------------------- hapax

void write_fits(const std::vector<lexicon::HapaxFit>& fits, const std::string& title, OutputDir& out,
                const std::string& name) {
    Table t{{"unit", "first_line", "last_line", "slope_per100", "intercept", "r", "n_hapax"}, {}};
    figure::FigureSpec fig;
    fig.kind = figure::Kind::ScatterFit;
    fig.title = title;
    fig.x_label = "line";
    fig.y_label = "cumulative hapax compounds";
    for (const auto& f : fits) {
        t.add({f.unit, std::to_string(f.first_line), std::to_string(f.last_line), fmt(f.slope_per100),
               fmt(f.fit.intercept), fmt(f.fit.r), std::to_string(f.n_hapax)});
        figure::Series s{f.unit, {}};
        for (const auto& [x, y] : f.series) s.points.emplace_back(x, y);
        fig.series.push_back(std::move(s));
    }
    out.table(name, t);
    out.svg(name, figure::render_figure(fig));
}

ojson run_hapax_fit(const Corpus& corpus, const lexicon::CompoundIndex& index, const HapaxParams& p, OutputDir& out,
                    const std::string& prefix) {
    const Poem& poem = corpus.poem(p.poem);
    if (p.parts >= 2) {
        const auto fits = lexicon::segment_fits(index, corpus, lexicon::equal_partition(poem, p.parts),
                                                lexicon::SegmentMode::Partition);
        write_fits(fits.segments, poem.id + ": hapax compounds in " + std::to_string(p.parts) + " equal parts", out,
                   prefix + "fits_" + poem.id);
    } else {
        const auto fit = lexicon::hapax_cumulative_fit(index, corpus, {poem.id, parse_range(p.range, poem)});
        write_fits({fit}, poem.id + ": cumulative hapax compounds", out, prefix + "fit_" + poem.id);
    }
    return {{"poem", p.poem}, {"range", p.range}, {"parts", p.parts}};
}

ojson run_hapax_segments(const Corpus& corpus, const lexicon::CompoundIndex& index, const HapaxParams& p,
                         OutputDir& out) {
    std::vector<lexicon::Unit> units;
    std::string mode;
    lexicon::SegmentFits fits;
    if (!p.merge.empty()) {
        for (const auto& spec : p.merge) {
            const auto colon = spec.find(':');
            const Poem& poem = corpus.poem(spec.substr(0, colon));
            units.push_back({poem.id, colon == std::string::npos ? poem.full_range()
                                                                 : parse_range(spec.substr(colon + 1), poem)});
        }
        fits = lexicon::segment_fits(index, corpus, units, lexicon::SegmentMode::Merge);
        mode = "merge";
    } else {
        if (p.poem.empty() || p.parts < 2) throw Error("hapax segments: pass --merge A,B,... or --poem P --parts N");
        fits = lexicon::segment_fits(index, corpus, lexicon::equal_partition(corpus.poem(p.poem), p.parts),
                                     lexicon::SegmentMode::Partition);
        mode = "partition";
    }
    auto all = fits.segments;
    all.push_back(fits.combined);
    write_fits(all, "Hapax compounds (" + mode + ")", out, "segments_" + mode);
    return {{"mode", mode}, {"merge", p.merge}, {"poem", p.poem}, {"parts", p.parts}};
}

// -------------------------------------------------------------------- shared

ojson run_shared(const Corpus& corpus, const lexicon::CompoundIndex& index, const SharedParams& p,
                 const RngStream& rng, OutputDir& out, const std::string& prefix) {
    std::vector<std::string> poems = p.poems;
    if (poems.empty()) {
        for (const auto& poem : corpus.poems) {
            if (poem.has_compounds) poems.push_back(poem.id);
        }
    }
    const auto scores = lexicon::shared_compound_scores(index, poems, p.trials, rng);
    Table t{{"poem_a", "poem_b", "observed", "null_mean", "null_sd", "z", "tail"}, {}};
    for (const auto& s : scores.pairs) {
        t.add({s.poem_a, s.poem_b, std::to_string(s.observed_shared), fmt(s.null_mean), fmt(s.null_sd), fmt_opt(s.z),
               fmt(s.empirical_tail)});
    }
    out.table(prefix + "pair_scores", t);
    Table ttr{{"poem", "ttr"}, {}};
    for (const auto& id : poems) {
        const Poem& poem = corpus.poem(id);
        if (poem.has_compounds) ttr.add({id, fmt_opt(lexicon::type_token_ratio(poem))});
    }
    out.table(prefix + "type_token_ratio", ttr);
    return {{"poems", poems}, {"trials", p.trials}, {"excluded", scores.excluded}};
}

// ------------------------------------------------------------------- cluster

struct WindowSet {
    std::vector<std::pair<const Poem*, SampleWindow>> windows;
};

WindowSet collect_windows(const Corpus& corpus, const std::vector<std::string>& poems, int width, int step) {
    WindowSet set;
    std::vector<std::string> ids = poems;
    if (ids.empty()) {
        for (const auto& p : corpus.poems) ids.push_back(p.id);
    }
    for (const auto& id : ids) {
        const Poem& poem = corpus.poem(id);
        for (auto& w : rolling_windows(poem, width, step)) set.windows.emplace_back(&poem, std::move(w));
    }
    if (set.windows.size() < 2) throw Error("fewer than two windows; lower --width or add poems");
    return set;
}

figure::LeafLabel leaf_label(const Poem& poem, const SampleWindow& w) {
    figure::LeafLabel label;
    label.base = poem.id + " " + std::to_string(w.lines.front()) + "-" + std::to_string(w.lines.back());
    const bool trivial = poem.parts.size() == 1;
    if (!trivial) {
        for (const auto& [name, count] : w.composition) label.parts.emplace_back(name, count);
    }
    return label;
}

ojson run_cluster(const Corpus& corpus, const ClusterParams& p, const std::string& mode, OutputDir& out,
                  const std::string& prefix) {
    const auto set = collect_windows(corpus, p.poems, p.width, p.step);
    std::vector<ngram::LabeledText> texts;
    std::map<std::string, std::string> truth;
    std::map<std::string, figure::LeafLabel> labels;
    for (const auto& [poem, w] : set.windows) {
        texts.push_back(ngram::window_text(*poem, w));
        truth[w.id()] = poem->id + ":" + w.majority_part();
        labels[w.id()] = leaf_label(*poem, w);
    }
    ngram::ProfileOptions opts;
    opts.zscore = p.zscore;
    const auto profiles = ngram::build_profiles(texts, p.n, p.k, opts);
    const auto dist = ngram::cosine_distance_matrix(profiles);
    ojson params = {{"poems", p.poems}, {"width", p.width}, {"step", p.step}, {"n", p.n}, {"k", p.k},
                    {"zscore", p.zscore}};

    if (mode == "profiles") {
        Table features;
        features.columns = {"sample"};
        for (const auto& f : profiles.features) features.columns.push_back(f);
        for (const auto& prof : profiles.profiles) {
            std::vector<std::string> row{prof.sample};
            for (double v : prof.values) row.push_back(fmt(v));
            features.add(std::move(row));
        }
        out.table(prefix + "features", features);
        Table d;
        d.columns = {"sample"};
        for (const auto& id : dist.ids) d.columns.push_back(id);
        for (std::size_t i = 0; i < dist.size(); ++i) {
            std::vector<std::string> row{dist.ids[i]};
            for (std::size_t j = 0; j < dist.size(); ++j) row.push_back(fmt(dist.at(i, j)));
            d.add(std::move(row));
        }
        out.table(prefix + "distances", d);
        return params;
    }

    const auto tree = ngram::agglomerative_complete(dist);
    ojson merges = ojson::array();
    figure::Tree fig_tree;
    for (const auto& id : tree.leaves) fig_tree.leaves.push_back(labels.at(id));
    for (const auto& m : tree.merges) {
        merges.push_back({{"node_a", m.node_a}, {"node_b", m.node_b}, {"height", m.height}, {"size", m.size}});
        fig_tree.merges.push_back({m.node_a, m.node_b, m.height});
    }
    const auto assignment = ngram::top_two_assignment(tree);
    const auto quality = ngram::clustering_quality(assignment, truth);
    out.json(prefix + "dendrogram", {{"leaves", tree.leaves},
                                     {"merges", merges},
                                     {"top_two_purity", quality.purity},
                                     {"top_two_adjusted_rand", quality.adjusted_rand}});
    Table t{{"sample", "cluster", "truth"}, {}};
    for (const auto& [id, c] : assignment) t.add({id, std::to_string(c), truth.at(id)});
    out.table(prefix + "top_two", t);
    figure::FigureSpec fig;
    fig.kind = figure::Kind::Dendrogram;
    fig.title = "Overlapping " + std::to_string(p.width) + "-line samples, " + std::to_string(p.k) +
                " most frequent character " + std::to_string(p.n) + "-grams";
    fig.x_label = "cosine distance (complete linkage)";
    fig.tree = std::move(fig_tree);
    out.svg(prefix + "dendrogram", figure::render_figure(fig));
    return params;
}

ojson run_sweep(const Corpus& corpus, const ClusterParams& p, OutputDir& out, const std::string& prefix) {
    const std::string target_id = p.poem.empty() ? default_poem(corpus, false) : p.poem;
    const Poem& target = corpus.poem(target_id);
    const auto windows = rolling_windows(target, p.width, p.step);
    ngram::ProfileOptions opts;
    opts.zscore = p.zscore;
    const auto sweep = ngram::robustness_sweep(target, windows, p.n_values, p.k_values, opts);
    Table t{{"n", "k", "sample", "cluster"}, {}};
    figure::Grid grid;
    grid.columns = sweep.samples;
    for (auto& c : grid.columns) c = c.substr(target.id.size() + 1);
    for (const auto& cell : sweep.cells) {
        grid.rows.push_back("n=" + std::to_string(cell.n) + " k=" + std::to_string(cell.k));
        std::vector<int> row;
        for (const auto& s : sweep.samples) {
            if (cell.assignment) {
                const int c = cell.assignment->at(s);
                row.push_back(c);
                t.add({std::to_string(cell.n), std::to_string(cell.k), s, std::to_string(c)});
            } else {
                row.push_back(-1);
                t.add({std::to_string(cell.n), std::to_string(cell.k), s, ""});
            }
        }
        grid.cells.push_back(std::move(row));
    }
    const std::string name = prefix + "sweep_" + target.id;
    out.table(name, t);
    figure::FigureSpec fig;
    fig.kind = figure::Kind::SweepStrip;
    fig.title = target.id + ": top-two cluster membership across (n, k)";
    fig.x_label = "window";
    fig.grid = std::move(grid);
    out.svg(name, figure::render_figure(fig));
    ojson summary = {{"poem", target.id}, {"stability", sweep.stability}};
    if (sweep.majority_split) {
        const auto b = ngram::split_boundary(windows, *sweep.majority_split);
        summary["majority_boundary_line"] = b ? ojson(*b) : ojson(nullptr);
    }
    ojson failed = ojson::array();
    for (const auto& cell : sweep.cells) {
        if (!cell.assignment) failed.push_back({{"n", cell.n}, {"k", cell.k}, {"error", cell.error}});
    }
    summary["failed_cells"] = failed;
    out.json(name + "_summary", summary);
    return {{"poem", target.id}, {"width", p.width}, {"step", p.step}, {"n_values", p.n_values},
            {"k_values", p.k_values}, {"zscore", p.zscore}};
}

// -------------------------------------------------------------------- report

ojson run_report(const Corpus& corpus, const Globals& g, const MetreParams& mp, const SharedParams& sp,
                 const ClusterParams& cp, OutputDir& out) {
    ojson notes = ojson::array();
    auto attempt = [&](const std::string& what, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const Error& e) {
            notes.push_back({{"step", what}, {"skipped", e.what()}});
        }
    };
    const RngStream base{g.seed, 0};

    attempt("sensepause", [&] { run_sensepause(corpus, SensePauseParams{}, out, "sensepause_"); });

    for (const auto& poem : corpus.poems) {
        if (!poem.has_scansion) continue;
        attempt("metre rolling " + poem.id, [&] {
            MetreParams rolling = mp;
            rolling.granularity = "both";
            run_metre_rolling(poem, rolling, g.split_line < poem.line_count() ? g.split_line : 0, out, "metre_");
        });
        attempt("metre split-tests " + poem.id,
                [&] { run_metre_split(poem, g.split_line, mp.bootstrap, base.substream(1), out, "metre_"); });
        attempt("metre independence " + poem.id, [&] { run_metre_independence(poem, "", out, "metre_"); });
    }

    const auto index = lexicon::build_compound_index(corpus);
    for (const auto& poem : corpus.poems) {
        if (!poem.has_compounds) continue;
        attempt("hapax " + poem.id, [&] {
            HapaxParams hp;
            hp.poem = poem.id;
            hp.parts = 3;
            run_hapax_fit(corpus, index, hp, out, "hapax_");
        });
    }
    attempt("shared", [&] { run_shared(corpus, index, sp, base.substream(2), out, "shared_"); });
    attempt("cluster dendrogram", [&] { run_cluster(corpus, cp, "dendrogram", out, "cluster_"); });
    attempt("cluster sweep", [&] { run_sweep(corpus, cp, out, "cluster_"); });
    return notes;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        try {
            if (dots != std::string::npos) {
                // FIRST..LAST[:STEP]
                const auto colon = item.find(':', dots);
                const int first = std::stoi(item.substr(0, dots));
                const int last = std::stoi(item.substr(dots + 2, colon == std::string::npos ? std::string::npos
                                                                                            : colon - dots - 2));
                const int step = colon == std::string::npos ? 1 : std::stoi(item.substr(colon + 1));
                if (step < 1) throw std::invalid_argument(item);
                for (int v = first; v <= last; v += step) out.push_back(v);
            } else {
                out.push_back(std::stoi(item));
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError("integer list", "cannot parse '" + item + "'");
        }
    }
    return out;
}

void write_manifest(OutputDir& out, const std::string& command, const Globals& g, const ojson& params,
                    const ojson& extra = nullptr) {
    ojson manifest;
    manifest["command"] = command;
    manifest["seed"] = g.seed;
    manifest["format"] = g.format;
    manifest["split_line"] = g.split_line;
    manifest["rng"] = "xoshiro256** seeded via splitmix64(seed, stream_id)";
    manifest["parameters"] = params;
    if (!g.corpus.empty()) manifest["inputs"] = input_hashes(g.corpus);
    if (!extra.is_null()) manifest["notes"] = extra;
    auto files = out.written();
    std::sort(files.begin(), files.end());
    manifest["outputs"] = files;
    out.json("run", manifest);
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Stylometric analysis of line-structured annotated verse corpora"};
    app.name(args.empty() ? "oestylo" : fs::path(args[0]).filename().string());
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed for Monte Carlo and bootstrap work")->capture_default_str();
    app.add_option("--out", g.out, "Output root directory")->capture_default_str();
    app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--corpus", g.corpus, "Canonical corpus directory (contains corpus.json)");
    app.add_option("--split-line", g.split_line, "Split line for distribution tests (2300, 1939 or any line)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string convert_from, convert_to;
    auto* convert = app.add_subcommand("convert", "Convert an external dataset checkout to the canonical format");
    convert->add_option("--from", convert_from, "Dataset checkout (texts/, metre/, compounds/)")->required();
    convert->add_option("--to", convert_to, "Target corpus directory")->required();

    SensePauseParams spp;
    auto* sp = app.add_subcommand("sensepause", "Sense-pause ratios, sample comparison and syllable means");
    sp->add_option("--unit", spp.units, "Poem or poem:part to report (repeatable; default all poems)");
    sp->add_option("--compare", spp.compare, "Compare two units by 100-line samples")->expected(2);
    sp->add_option("--sample-len", spp.sample_len, "Sample length in lines")->check(CLI::PositiveNumber);
    sp->add_flag("--strict", spp.strict, "Reproduce the original 7-glyph classification");
    sp->add_flag("--ascii-quotes", spp.ascii_quotes, "Count ASCII quotes as quote glyphs");
    sp->add_flag("--no-hyphen", spp.no_hyphen, "Do not count hyphens as sense-pauses");

    MetreParams mpar;
    auto* mt = app.add_subcommand("metre", "Metrical pattern analyses (default mode: split-tests)");
    mt->add_option("--poem", mpar.poem, "Poem id");
    mt->add_option("--bootstrap", mpar.bootstrap, "Bootstrap replicates")->check(CLI::Range(1000, 10000000));
    mt->add_option("--granularity", mpar.granularity)->check(CLI::IsMember({"half", "full", "both"}));
    mt->fallthrough();
    auto* mt_rolling = mt->add_subcommand("rolling", "Rolling pattern proportions");
    mt_rolling->add_option("--width", mpar.width)->check(CLI::PositiveNumber);
    mt_rolling->add_option("--step", mpar.step)->check(CLI::PositiveNumber);
    auto* mt_split = mt->add_subcommand("split-tests", "Chi-square split tests with bootstrap verification");
    auto* mt_ind = mt->add_subcommand("independence", "Independence of a- and b-verse types");
    mt_ind->add_option("--range", mpar.range, "FIRST-LAST");
    auto* mt_inc = mt->add_subcommand("incidence-r", "Cumulative incidence regression (original metric)");
    mt_inc->add_option("--pattern", mpar.pattern, "Half-line (A) or full-line (AB) pattern");
    mt_inc->add_option("--range", mpar.range, "FIRST-LAST");
    for (auto* s : {mt_rolling, mt_split, mt_ind, mt_inc}) s->fallthrough();
    mt->require_subcommand(0, 1);

    HapaxParams hpar;
    std::string merge_list;
    auto* hx = app.add_subcommand("hapax", "Hapax compound regressions");
    hx->require_subcommand(1);
    auto* hx_fit = hx->add_subcommand("fit", "Cumulative hapax fit for one poem");
    hx_fit->add_option("--poem", hpar.poem)->required();
    hx_fit->add_option("--range", hpar.range, "FIRST-LAST");
    hx_fit->add_option("--parts", hpar.parts, "Fit N equal partitions instead");
    auto* hx_seg = hx->add_subcommand("segments", "Partition or merge experiments");
    hx_seg->add_option("--merge", merge_list, "Comma-separated poem[:FIRST-LAST] units to concatenate");
    hx_seg->add_option("--poem", hpar.poem);
    hx_seg->add_option("--parts", hpar.parts);
    for (auto* s : {hx, hx_fit, hx_seg}) s->fallthrough();

    SharedParams spar;
    std::string shared_poems;
    auto* sh = app.add_subcommand("shared", "Shared-compound null model pair scores");
    sh->add_option("--poems", shared_poems, "Comma-separated poem ids (default: all annotated)");
    sh->add_option("--trials", spar.trials, "Null model trials")->check(CLI::Range(1000, 100000000));
    sh->fallthrough();

    ClusterParams cpar;
    std::string cluster_poems, n_values, k_values;
    auto* cl = app.add_subcommand("cluster", "Character n-gram clustering");
    cl->require_subcommand(1);
    cl->add_option("--poems", cluster_poems, "Comma-separated poem ids (default: all)");
    cl->add_option("--poem", cpar.poem, "Sweep target poem");
    cl->add_option("--width", cpar.width)->check(CLI::PositiveNumber);
    cl->add_option("--step", cpar.step)->check(CLI::PositiveNumber);
    cl->add_option("--n", cpar.n)->check(CLI::Range(2, 5));
    cl->add_option("--k", cpar.k)->check(CLI::PositiveNumber);
    cl->add_flag("--zscore", cpar.zscore, "Standardize features before cosine distance");
    cl->add_option("--n-values", n_values, "Sweep n list, e.g. 2,3,4,5");
    cl->add_option("--k-values", k_values, "Sweep k list, e.g. 100..1000:50");
    cl->fallthrough();
    auto* cl_prof = cl->add_subcommand("profiles", "Feature and distance matrices");
    auto* cl_dend = cl->add_subcommand("dendrogram", "Complete-linkage dendrogram");
    auto* cl_sweep = cl->add_subcommand("sweep", "Top-two cluster robustness sweep over (n, k)");
    for (auto* s : {cl_prof, cl_dend, cl_sweep}) s->fallthrough();

    auto* report = app.add_subcommand("report", "Run the full battery into <out>/report");
    report->add_option("--bootstrap", mpar.bootstrap, "Bootstrap replicates")->check(CLI::Range(1000, 10000000));
    report->add_option("--trials", spar.trials, "Null model trials")->check(CLI::Range(1000, 100000000));
    report->add_option("--poem", cpar.poem, "Sweep target poem");
    report->fallthrough();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (!n_values.empty()) cpar.n_values = parse_int_list(n_values);
        if (!k_values.empty()) cpar.k_values = parse_int_list(k_values);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    auto split_list = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(item);
        }
        return out;
    };
    spar.poems = split_list(shared_poems);
    cpar.poems = split_list(cluster_poems);
    hpar.merge = split_list(merge_list);
    const Format format = parse_format(g.format);

    try {
        if (convert->parsed()) {
            const auto rep = convert_dataset(convert_from, convert_to);
            for (const auto& id : rep.sequential_warnings) {
                std::cerr << "warning: " << id
                          << ": unindexed half-line stream has gaps; sequential pairing misaligns later lines\n";
            }
            std::cout << "converted " << rep.poems.size() << " poems into " << convert_to << "\n";
            return kExitOk;
        }
        if (g.corpus.empty()) throw CLI::RequiredError("--corpus");
        const Corpus corpus = parse_corpus(g.corpus);

        if (sp->parsed()) {
            OutputDir out(g.out, "sensepause", format);
            const auto params = run_sensepause(corpus, spp, out, "");
            write_manifest(out, "sensepause", g, params);
        } else if (mt->parsed()) {
            if (mpar.poem.empty()) mpar.poem = default_poem(corpus, true);
            const Poem& poem = corpus.poem(mpar.poem);
            OutputDir out(g.out, "metre", format);
            std::string mode = "split-tests";
            if (mt_rolling->parsed()) {
                mode = "rolling";
                run_metre_rolling(poem, mpar, g.split_line < poem.line_count() ? g.split_line : 0, out, "");
            } else if (mt_ind->parsed()) {
                mode = "independence";
                run_metre_independence(poem, mpar.range, out, "");
            } else if (mt_inc->parsed()) {
                mode = "incidence-r";
                run_metre_incidence(poem, mpar, out, "");
            } else {
                run_metre_split(poem, g.split_line, mpar.bootstrap, RngStream{g.seed, 0}.substream(1), out, "");
            }
            write_manifest(out, "metre " + mode, g,
                           {{"poem", mpar.poem}, {"width", mpar.width}, {"step", mpar.step},
                            {"granularity", mpar.granularity}, {"bootstrap", mpar.bootstrap},
                            {"pattern", mpar.pattern}, {"range", mpar.range}});
        } else if (hx->parsed()) {
            const auto index = lexicon::build_compound_index(corpus);
            OutputDir out(g.out, "hapax", format);
            if (hx_fit->parsed()) {
                write_manifest(out, "hapax fit", g, run_hapax_fit(corpus, index, hpar, out, ""));
            } else {
                write_manifest(out, "hapax segments", g, run_hapax_segments(corpus, index, hpar, out));
            }
        } else if (sh->parsed()) {
            const auto index = lexicon::build_compound_index(corpus);
            OutputDir out(g.out, "shared", format);
            write_manifest(out, "shared", g, run_shared(corpus, index, spar, RngStream{g.seed, 0}.substream(2), out, ""));
        } else if (cl->parsed()) {
            OutputDir out(g.out, "cluster", format);
            if (cl_sweep->parsed()) {
                write_manifest(out, "cluster sweep", g, run_sweep(corpus, cpar, out, ""));
            } else {
                const std::string mode = cl_prof->parsed() ? "profiles" : "dendrogram";
                write_manifest(out, "cluster " + mode, g, run_cluster(corpus, cpar, mode, out, ""));
            }
        } else if (report->parsed()) {
            OutputDir out(g.out, "report", format);
            const auto notes = run_report(corpus, g, mpar, spar, cpar, out);
            write_manifest(out, "report", g,
                           {{"bootstrap", mpar.bootstrap}, {"trials", spar.trials}, {"cluster_width", cpar.width},
                            {"cluster_step", cpar.step}, {"n", cpar.n}, {"k", cpar.k}},
                           notes);
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysisError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysisError;
    }
    return kExitOk;
}

}  // namespace oestylo::cli

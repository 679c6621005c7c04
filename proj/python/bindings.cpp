#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cli.hpp"
#include "oestylo/corpus.hpp"
#include "oestylo/error.hpp"
#include "oestylo/lexicon.hpp"
#include "oestylo/metre.hpp"
#include "oestylo/ngram.hpp"
#include "oestylo/rng.hpp"
#include "oestylo/sensepause.hpp"
#include "oestylo/stats.hpp"
#include "oestylo/utf8.hpp"

namespace py = pybind11;
using namespace oestylo;

namespace {

metre::Granularity parse_granularity(const std::string& g) {
    if (g == "half") return metre::Granularity::HalfLine;
    if (g == "full") return metre::Granularity::FullLine;
    throw Error("granularity must be 'half' or 'full', got '" + g + "'");
}

void bind_stats(py::module_& m) {
    py::enum_<stats::Method>(m, "Method")
        .value("PooledT", stats::Method::PooledT)
        .value("Chi2Homogeneity", stats::Method::Chi2Homogeneity)
        .value("Chi2GoF", stats::Method::Chi2GoF)
        .value("Chi2Independence", stats::Method::Chi2Independence)
        .value("BootstrapEmpirical", stats::Method::BootstrapEmpirical);

    py::class_<stats::TestResult>(m, "TestResult")
        .def_readonly("statistic", &stats::TestResult::statistic)
        .def_readonly("df", &stats::TestResult::df)
        .def_readonly("p_value", &stats::TestResult::p_value)
        .def_readonly("method", &stats::TestResult::method)
        .def_readonly("n_obs", &stats::TestResult::n_obs)
        .def_readonly("min_expected", &stats::TestResult::min_expected)
        .def_readonly("dropped_categories", &stats::TestResult::dropped_categories)
        .def_readonly("merged_categories", &stats::TestResult::merged_categories)
        .def_readonly("replicates", &stats::TestResult::replicates)
        .def("__repr__", [](const stats::TestResult& r) {
            return "<TestResult " + stats::to_string(r.method) + " statistic=" + std::to_string(r.statistic) +
                   " df=" + std::to_string(r.df) + " p=" + std::to_string(r.p_value) + ">";
        });

    py::class_<stats::LinearFit>(m, "LinearFit")
        .def_readonly("slope", &stats::LinearFit::slope)
        .def_readonly("intercept", &stats::LinearFit::intercept)
        .def_readonly("r", &stats::LinearFit::r)
        .def_readonly("n", &stats::LinearFit::n);

    m.def("student_t_p", &stats::student_t_p, py::arg("t"), py::arg("df"),
          "Two-sided tail probability of Student's t.");
    m.def("chi_square_p", &stats::chi_square_p, py::arg("x2"), py::arg("df"),
          "Upper-tail probability of the chi-square distribution.");
    m.def("pooled_t_test", [](const std::vector<double>& a, const std::vector<double>& b) {
        return stats::pooled_t_test(a, b);
    }, py::arg("a"), py::arg("b"));
    m.def("chi2_homogeneity", [](const std::vector<int>& a, const std::vector<int>& b) {
        return stats::chi2_homogeneity(a, b);
    }, py::arg("counts_a"), py::arg("counts_b"));
    m.def("chi2_gof", [](const std::vector<int>& observed, const std::vector<int>& reference) {
        return stats::chi2_gof(observed, reference);
    }, py::arg("observed"), py::arg("reference_counts"));
    m.def("chi2_independence", [](const std::vector<std::vector<int>>& table) {
        if (table.empty()) throw Error("chi2_independence: empty table");
        std::vector<int> flat;
        for (const auto& row : table) {
            if (row.size() != table.front().size()) throw Error("chi2_independence: ragged table");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return stats::chi2_independence(flat, static_cast<int>(table.size()),
                                        static_cast<int>(table.front().size()));
    }, py::arg("table"));
    m.def("ols_fit", [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return stats::ols_fit(xs, ys);
    }, py::arg("xs"), py::arg("ys"));
    m.def("bootstrap_null_p", [](const std::vector<int>& pooled, int num_categories, int n_a, int n_b,
                                 double observed, const std::string& kind, int B, std::uint64_t seed,
                                 std::uint64_t stream) {
        const auto k = kind == "homogeneity" ? stats::StatKind::Homogeneity
                       : kind == "gof"       ? stats::StatKind::GoodnessOfFit
                                             : throw Error("kind must be 'homogeneity' or 'gof'");
        py::gil_scoped_release release;
        return stats::bootstrap_null_p(pooled, num_categories, n_a, n_b, observed, k, B, RngStream{seed, stream});
    }, py::arg("pooled_items"), py::arg("num_categories"), py::arg("n_a"), py::arg("n_b"),
       py::arg("observed_stat"), py::arg("kind"), py::arg("B"), py::arg("seed") = 7, py::arg("stream") = 0);
}

void bind_rng(py::module_& m) {
    py::class_<RngStream>(m, "RngStream")
        .def(py::init([](std::uint64_t seed, std::uint64_t stream) { return RngStream{seed, stream}; }),
             py::arg("seed"), py::arg("stream_id") = 0)
        .def_readonly("seed", &RngStream::seed)
        .def_readonly("stream_id", &RngStream::stream_id)
        .def("substream", &RngStream::substream, py::arg("k"))
        .def(py::self == py::self);

    py::class_<Xoshiro256>(m, "Xoshiro256")
        .def(py::init<const RngStream&>(), py::arg("stream"))
        .def("next", [](Xoshiro256& g) { return g(); })
        .def("uniform", &Xoshiro256::uniform)
        .def("below", &Xoshiro256::below, py::arg("bound"));
}

void bind_corpus(py::module_& m) {
    py::class_<VerseLine>(m, "VerseLine")
        .def(py::init<>())
        .def_readwrite("index", &VerseLine::index)
        .def_readwrite("a_text", &VerseLine::a_text)
        .def_readwrite("b_text", &VerseLine::b_text)
        .def_property(
            "a_pattern",
            [](const VerseLine& l) -> std::optional<std::string> {
                if (!l.a_pattern) return std::nullopt;
                return std::string(1, scansion_char(*l.a_pattern));
            },
            [](VerseLine& l, const std::optional<std::string>& s) {
                l.a_pattern = s ? parse_scansion(*s) : std::nullopt;
            })
        .def_property(
            "b_pattern",
            [](const VerseLine& l) -> std::optional<std::string> {
                if (!l.b_pattern) return std::nullopt;
                return std::string(1, scansion_char(*l.b_pattern));
            },
            [](VerseLine& l, const std::optional<std::string>& s) {
                l.b_pattern = s ? parse_scansion(*s) : std::nullopt;
            })
        .def_readwrite("compounds", &VerseLine::compounds);

    py::class_<PartRange>(m, "PartRange")
        .def_readonly("name", &PartRange::name)
        .def_readonly("first_line", &PartRange::first_line)
        .def_readonly("last_line", &PartRange::last_line);

    py::class_<Poem>(m, "Poem")
        .def_readonly("id", &Poem::id)
        .def_readonly("lines", &Poem::lines)
        .def_readonly("parts", &Poem::parts)
        .def_readonly("has_scansion", &Poem::has_scansion)
        .def_readonly("has_compounds", &Poem::has_compounds)
        .def("line_count", &Poem::line_count)
        .def("part_of", &Poem::part_of, py::arg("index"))
        .def("__len__", &Poem::line_count);

    py::class_<Corpus>(m, "Corpus")
        .def_readonly("poems", &Corpus::poems)
        .def("poem", &Corpus::poem, py::arg("id"), py::return_value_policy::reference_internal)
        .def("__contains__", &Corpus::contains)
        .def("total_lines", &Corpus::total_lines);

    m.def("parse_corpus", &parse_corpus, py::arg("root"), "Read corpus.json and the files it names.");
    m.def("write_corpus", &write_corpus, py::arg("corpus"), py::arg("root"));

    py::class_<SampleWindow>(m, "SampleWindow")
        .def_readonly("source", &SampleWindow::source)
        .def_readonly("first_line", &SampleWindow::first_line)
        .def_readonly("last_line", &SampleWindow::last_line)
        .def_readonly("composition", &SampleWindow::composition)
        .def_readonly("lines", &SampleWindow::lines)
        .def("id", &SampleWindow::id)
        .def("majority_part", &SampleWindow::majority_part);

    m.def("partition_samples", &partition_samples, py::arg("poem"), py::arg("sample_len"),
          py::arg("line_filter") = std::nullopt);
    m.def("rolling_windows", &rolling_windows, py::arg("poem"), py::arg("width"), py::arg("step"),
          py::arg("line_filter") = std::nullopt);
}

void bind_sensepause(py::module_& m) {
    auto sp = m.def_submodule("sensepause");
    auto options = [](bool strict, bool ascii_quotes, bool count_hyphen) {
        sensepause::Options o;
        o.strict_compat = strict;
        o.ascii_quotes = ascii_quotes;
        o.count_hyphen = count_hyphen;
        return o;
    };
    sp.def("classify", [options](const VerseLine& line, bool strict, bool ascii_quotes, bool count_hyphen) {
        py::list out;
        for (const auto& mk : sensepause::classify_sense_pauses(line, options(strict, ascii_quotes, count_hyphen))) {
            std::string glyph;
            utf8::append(glyph, mk.glyph);
            py::dict d;
            d["glyph"] = glyph;
            d["position"] = mk.position == sensepause::Position::Final ? "final" : "intraline";
            d["suppressed_as_ellipsis"] = mk.suppressed_as_ellipsis;
            out.append(d);
        }
        return out;
    }, py::arg("line"), py::arg("strict") = false, py::arg("ascii_quotes") = false, py::arg("count_hyphen") = true);
    sp.def("intraline_ratio", [options](const Poem& poem, std::optional<std::string> part, bool strict) {
        std::vector<const VerseLine*> lines;
        for (const auto& l : poem.lines)
            if (!part || poem.part_of(l.index) == *part) lines.push_back(&l);
        const auto r = sensepause::intraline_ratio(lines, poem.id, options(strict, false, true));
        py::dict d;
        d["intraline"] = r.intraline;
        d["final"] = r.final_count;
        d["ratio"] = r.ratio;
        return d;
    }, py::arg("poem"), py::arg("part") = std::nullopt, py::arg("strict") = false);
    sp.def("compare", [options](const Poem& a, std::optional<std::string> part_a, const Poem& b,
                                std::optional<std::string> part_b, int sample_len, bool strict) {
        return sensepause::sample_ratio_comparison({&a, part_a}, {&b, part_b}, sample_len,
                                                   options(strict, false, true))
            .test;
    }, py::arg("a"), py::arg("part_a"), py::arg("b"), py::arg("part_b"), py::arg("sample_len") = 100,
       py::arg("strict") = false);
    sp.def("syllable_estimate", &sensepause::syllable_estimate, py::arg("line"));
}

void bind_metre(py::module_& m) {
    auto mt = m.def_submodule("metre");
    mt.attr("DEFAULT_SPLIT_LINE") = metre::kDefaultSplitLine;
    mt.attr("SCRIBAL_HAND_SPLIT_LINE") = metre::kScribalHandSplitLine;
    mt.def("labels", [](const std::string& g) { return metre::labels(parse_granularity(g)); },
           py::arg("granularity"));
    mt.def("pattern_counts", [](const Poem& poem, int first, int last, const std::string& g) {
        return metre::pattern_counts(poem, {first, last}, parse_granularity(g)).counts;
    }, py::arg("poem"), py::arg("first"), py::arg("last"), py::arg("granularity"));
    mt.def("pairing_log", [](const Poem& poem) {
        const auto log = metre::pair_full_lines(poem, poem.full_range()).log;
        py::dict d;
        d["paired"] = log.paired;
        d["skipped_missing_a"] = log.skipped_missing_a;
        d["skipped_missing_b"] = log.skipped_missing_b;
        d["misalignment_warnings"] = log.misalignment_warnings;
        return d;
    }, py::arg("poem"));
    mt.def("incidence_r", [](const Poem& poem, const std::string& pattern, const std::string& g) {
        return metre::cumulative_incidence_r(poem, pattern, parse_granularity(g));
    }, py::arg("poem"), py::arg("pattern"), py::arg("granularity"));
    mt.def("split_tests", [](const Poem& poem, int split_line, int B, std::uint64_t seed) {
        metre::SplitTestTable table;
        {
            py::gil_scoped_release release;
            table = metre::split_distribution_tests(poem, split_line, B, RngStream{seed, 0}.substream(1));
        }
        py::list rows;
        for (const auto& r : table.rows) {
            py::dict d;
            d["granularity"] = metre::to_string(r.granularity);
            d["test"] = metre::to_string(r.test);
            d["bootstrap"] = r.bootstrap;
            d["result"] = r.result;
            rows.append(d);
        }
        return rows;
    }, py::arg("poem"), py::arg("split_line") = metre::kDefaultSplitLine, py::arg("B") = 10000,
       py::arg("seed") = 7);
    mt.def("independence", [](const Poem& poem) { return metre::halves_independence_test(poem); }, py::arg("poem"));
}

void bind_lexicon(py::module_& m) {
    auto lx = m.def_submodule("lexicon");
    py::class_<lexicon::CompoundIndex>(lx, "CompoundIndex")
        .def_readonly("totals", &lexicon::CompoundIndex::totals)
        .def_readonly("hapax_set", &lexicon::CompoundIndex::hapax_set)
        .def("is_hapax", &lexicon::CompoundIndex::is_hapax);
    py::class_<lexicon::HapaxFit>(lx, "HapaxFit")
        .def_readonly("unit", &lexicon::HapaxFit::unit)
        .def_readonly("first_line", &lexicon::HapaxFit::first_line)
        .def_readonly("last_line", &lexicon::HapaxFit::last_line)
        .def_readonly("series", &lexicon::HapaxFit::series)
        .def_readonly("fit", &lexicon::HapaxFit::fit)
        .def_readonly("slope_per100", &lexicon::HapaxFit::slope_per100)
        .def_readonly("n_hapax", &lexicon::HapaxFit::n_hapax);
    py::class_<lexicon::PairScore>(lx, "PairScore")
        .def_readonly("poem_a", &lexicon::PairScore::poem_a)
        .def_readonly("poem_b", &lexicon::PairScore::poem_b)
        .def_readonly("observed_shared", &lexicon::PairScore::observed_shared)
        .def_readonly("null_mean", &lexicon::PairScore::null_mean)
        .def_readonly("null_sd", &lexicon::PairScore::null_sd)
        .def_readonly("z", &lexicon::PairScore::z)
        .def_readonly("empirical_tail", &lexicon::PairScore::empirical_tail);

    lx.def("build_index", &lexicon::build_compound_index, py::arg("corpus"));
    lx.def("hapax_fit", [](const lexicon::CompoundIndex& index, const Corpus& corpus, const std::string& poem,
                           std::optional<std::pair<int, int>> range) {
        const auto r = range ? LineRange{range->first, range->second} : corpus.poem(poem).full_range();
        return lexicon::hapax_cumulative_fit(index, corpus, {poem, r});
    }, py::arg("index"), py::arg("corpus"), py::arg("poem"), py::arg("range") = std::nullopt);
    lx.def("partition_fits", [](const lexicon::CompoundIndex& index, const Corpus& corpus, const std::string& poem,
                                int parts) {
        return lexicon::segment_fits(index, corpus, lexicon::equal_partition(corpus.poem(poem), parts),
                                     lexicon::SegmentMode::Partition)
            .segments;
    }, py::arg("index"), py::arg("corpus"), py::arg("poem"), py::arg("parts"));
    lx.def("merge_fit", [](const lexicon::CompoundIndex& index, const Corpus& corpus,
                           const std::vector<std::tuple<std::string, int, int>>& units) {
        std::vector<lexicon::Unit> us;
        for (const auto& [poem, first, last] : units) us.push_back({poem, {first, last}});
        return lexicon::segment_fits(index, corpus, us, lexicon::SegmentMode::Merge).combined;
    }, py::arg("index"), py::arg("corpus"), py::arg("units"));
    lx.def("shared_scores", [](const lexicon::CompoundIndex& index, const std::vector<std::string>& poems,
                               int trials, std::uint64_t seed) {
        py::gil_scoped_release release;
        return lexicon::shared_compound_scores(index, poems, trials, RngStream{seed, 0}.substream(2)).pairs;
    }, py::arg("index"), py::arg("poems"), py::arg("trials") = 1000, py::arg("seed") = 7);
    lx.def("type_token_ratio", &lexicon::type_token_ratio, py::arg("poem"));
}

void bind_ngram(py::module_& m) {
    auto ng = m.def_submodule("ngram");
    py::class_<ngram::DistanceMatrix>(ng, "DistanceMatrix")
        .def_readonly("ids", &ngram::DistanceMatrix::ids)
        .def("at", py::overload_cast<std::size_t, std::size_t>(&ngram::DistanceMatrix::at, py::const_))
        .def("__len__", &ngram::DistanceMatrix::size)
        .def("rows", [](const ngram::DistanceMatrix& d) {
            std::vector<std::vector<double>> out(d.size());
            for (std::size_t i = 0; i < d.size(); ++i)
                for (std::size_t j = 0; j < d.size(); ++j) out[i].push_back(d.at(i, j));
            return out;
        });
    py::class_<ngram::Merge>(ng, "Merge")
        .def_readonly("node_a", &ngram::Merge::node_a)
        .def_readonly("node_b", &ngram::Merge::node_b)
        .def_readonly("height", &ngram::Merge::height)
        .def_readonly("size", &ngram::Merge::size);
    py::class_<ngram::Dendrogram>(ng, "Dendrogram")
        .def_readonly("leaves", &ngram::Dendrogram::leaves)
        .def_readonly("merges", &ngram::Dendrogram::merges)
        .def("members", &ngram::Dendrogram::members, py::arg("node"));

    ng.def("normalize", [](const std::string& text) { return utf8::from_u32(ngram::normalize(text)); }, py::arg("text"));
    ng.def("text_distances", [](const std::vector<std::pair<std::string, std::string>>& samples, int n, int k,
                                bool zscore) {
        std::vector<ngram::LabeledText> texts;
        for (const auto& [id, text] : samples) texts.push_back({id, ngram::normalize(text)});
        return ngram::cosine_distance_matrix(ngram::build_profiles(texts, n, k, {zscore}));
    }, py::arg("samples"), py::arg("n") = 3, py::arg("k") = 500, py::arg("zscore") = false);
    ng.def("window_distances", [](const Poem& poem, int width, int step, int n, int k, bool zscore) {
        return ngram::cosine_distance_matrix(
            ngram::build_profiles(poem, rolling_windows(poem, width, step), n, k, {zscore}));
    }, py::arg("poem"), py::arg("width") = 300, py::arg("step") = 100, py::arg("n") = 3, py::arg("k") = 500,
       py::arg("zscore") = false);
    ng.def("complete_linkage", [](const std::vector<std::string>& ids, const std::vector<std::vector<double>>& rows) {
        ngram::DistanceMatrix d;
        d.ids = ids;
        for (const auto& row : rows) {
            if (row.size() != ids.size()) throw Error("complete_linkage: matrix must be square and match ids");
            d.values.insert(d.values.end(), row.begin(), row.end());
        }
        if (rows.size() != ids.size()) throw Error("complete_linkage: matrix must be square and match ids");
        return ngram::agglomerative_complete(d);
    }, py::arg("ids"), py::arg("distances"));
    ng.def("cluster", &ngram::agglomerative_complete, py::arg("distances"));
    ng.def("top_two", &ngram::top_two_assignment, py::arg("tree"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic stylometry kernels for line-structured verse corpora.";
    py::register_exception<Error>(m, "OestyloError", PyExc_ValueError);

    bind_stats(m);
    bind_rng(m);
    bind_corpus(m);
    bind_sensepause(m);
    bind_metre(m);
    bind_lexicon(m);
    bind_ngram(m);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"oestylo"};
        argv.insert(argv.end(), args.begin(), args.end());
        return cli::dispatch(argv);
    }, py::arg("args"), "Run the command-line tool in-process; returns its exit code.");
}

#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixture_path.hpp"
#include "oestylo/error.hpp"
#include "oestylo/sensepause.hpp"

using namespace oestylo;
using sensepause::Position;

namespace {

VerseLine make_line(int index, const std::string& a, const std::string& b = {}) {
    VerseLine l;
    l.index = index;
    l.a_text = a;
    l.b_text = b;
    return l;
}

std::vector<VerseLine> load_fixture_lines() {
    std::ifstream in(test::fixture("sensepause_lines.txt"));
    REQUIRE(in.good());
    std::vector<VerseLine> lines;
    std::string text;
    while (std::getline(in, text)) {
        const auto tab = text.find('\t');
        lines.push_back(make_line(static_cast<int>(lines.size()) + 1, text.substr(0, tab),
                                  tab == std::string::npos ? std::string{} : text.substr(tab + 1)));
    }
    return lines;
}

struct Counts {
    int intraline = 0;
    int final_count = 0;
    int suppressed = 0;
};

Counts count(const std::vector<sensepause::Mark>& marks) {
    Counts c;
    for (const auto& m : marks) {
        if (m.suppressed_as_ellipsis) ++c.suppressed;
        else if (m.position == Position::Final) ++c.final_count;
        else ++c.intraline;
    }
    return c;
}

Poem poem_from(const std::vector<std::string>& texts, const std::string& id = "p") {
    Poem p;
    p.id = id;
    for (const auto& t : texts) p.lines.push_back(make_line(static_cast<int>(p.lines.size()) + 1, t));
    p.parts.push_back({id, 1, static_cast<int>(p.lines.size())});
    return p;
}

}  // namespace

TEST_CASE("bracket at the end of a line is final; ellipsis dots are not periods") {
    const auto lines = load_fixture_lines();
    REQUIRE(lines.size() == 2);

    const auto bracket = sensepause::classify_sense_pauses(lines[0]);
    REQUIRE(bracket.size() == 2);
    CHECK(bracket[0].glyph == U'(');
    CHECK(bracket[0].position == Position::Intraline);
    CHECK(bracket[1].glyph == U')');
    CHECK(bracket[1].position == Position::Final);

    const auto ellipsis = sensepause::classify_sense_pauses(lines[1]);
    CHECK(ellipsis.size() == 5);
    for (const auto& m : ellipsis) CHECK(m.suppressed_as_ellipsis);
    const auto r = sensepause::intraline_ratio({&lines[1]}, "ellipsis");
    CHECK(r.intraline == 0);
    CHECK(r.final_count == 0);
    CHECK_FALSE(r.ratio.has_value());
}

TEST_CASE("strict compatibility reproduces the original classification") {
    const auto lines = load_fixture_lines();
    sensepause::Options strict;
    strict.strict_compat = true;

    const auto bracket = sensepause::classify_sense_pauses(lines[0], strict);
    REQUIRE(bracket.size() == 2);
    CHECK(bracket[1].glyph == U')');
    CHECK(bracket[1].position == Position::Intraline);

    const auto ellipsis = count(sensepause::classify_sense_pauses(lines[1], strict));
    CHECK(ellipsis.suppressed == 0);
    CHECK(ellipsis.intraline == 5);
    CHECK(ellipsis.final_count == 0);
}

TEST_CASE("canonical classification examples") {
    const auto c = count(sensepause::classify_sense_pauses(make_line(1, "abc; def.")));
    CHECK(c.intraline == 1);
    CHECK(c.final_count == 1);

    // Every glyph of the full set, each in intraline position.
    for (const std::string g : {".", "?", "!", ";", ":", "(", ")", "-", "‘", "’", "“", "”"}) {
        CAPTURE(g);
        const auto marks = sensepause::classify_sense_pauses(make_line(1, "ab " + g + " cd"));
        REQUIRE(marks.size() == 1);
        CHECK(marks[0].position == Position::Intraline);
    }
    // Commas are ignored entirely.
    CHECK(sensepause::classify_sense_pauses(make_line(1, "ab, cd,")).empty());
    // Quote after a final period is also final; trailing whitespace is stripped.
    const auto q = count(sensepause::classify_sense_pauses(make_line(1, "ic sæde: “gað.”   ")));
    CHECK(q.intraline == 2);  // ":" and the opening quote
    CHECK(q.final_count == 2);
    // A single dot closing a word is a period, not an ellipsis.
    CHECK(count(sensepause::classify_sense_pauses(make_line(1, "se. god"))).intraline == 1);
    // A lone dot token is an editorial gap.
    CHECK(count(sensepause::classify_sense_pauses(make_line(1, "se . god"))).suppressed == 1);
    // Options: hyphen counting and ASCII quotes.
    sensepause::Options no_hyphen;
    no_hyphen.count_hyphen = false;
    CHECK(sensepause::classify_sense_pauses(make_line(1, "ab - cd"), no_hyphen).empty());
    sensepause::Options ascii;
    ascii.ascii_quotes = true;
    CHECK(sensepause::classify_sense_pauses(make_line(1, "ab \"cd\" ef"), ascii).size() == 2);
    CHECK(sensepause::classify_sense_pauses(make_line(1, "ab \"cd\" ef")).empty());
}

TEST_CASE("line-final rule spans both half-lines") {
    // a-verse ends in a period, b-verse continues: the period is intraline.
    const auto marks = sensepause::classify_sense_pauses(make_line(1, "ende.", "ac he bið;"));
    REQUIRE(marks.size() == 2);
    CHECK(marks[0].position == Position::Intraline);
    CHECK(marks[1].position == Position::Final);
}

TEST_CASE("ratio arithmetic") {
    const auto single = make_line(1, "a. b.");
    const auto r = sensepause::intraline_ratio({&single});
    CHECK(r.intraline == 1);
    CHECK(r.final_count == 1);
    CHECK(*r.ratio == doctest::Approx(0.5));

    std::vector<std::string> texts;
    for (int i = 0; i < 10; ++i) texts.push_back(i < 3 ? "ab; cd." : "ab cd.");
    // 3 lines with one intraline and one final, 7 with one final: 3 / (3 + 10).
    const Poem p = poem_from(texts);
    std::vector<const VerseLine*> ptrs;
    for (const auto& l : p.lines) ptrs.push_back(&l);
    CHECK(*sensepause::intraline_ratio(ptrs).ratio == doctest::Approx(3.0 / 13.0));

    std::vector<std::string> ten;
    for (int i = 0; i < 10; ++i) ten.push_back(i < 3 ? "ab; cd" : "ab cd.");
    const Poem q = poem_from(ten);
    std::vector<const VerseLine*> qptrs;
    for (const auto& l : q.lines) qptrs.push_back(&l);
    const auto rq = sensepause::intraline_ratio(qptrs);
    CHECK(rq.intraline == 3);
    CHECK(rq.final_count == 7);
    CHECK(*rq.ratio == doctest::Approx(0.3));

    const Poem finals = poem_from({"ab.", "cd!"});
    std::vector<const VerseLine*> fptrs{&finals.lines[0], &finals.lines[1]};
    CHECK(*sensepause::intraline_ratio(fptrs).ratio == 0.0);
}

TEST_CASE("sample comparison") {
    std::vector<std::string> texts;
    for (int i = 0; i < 400; ++i) texts.push_back(i % 3 == 0 ? "ab; cd." : (i % 2 ? "ab cd." : "ab: cd"));
    const Poem p = poem_from(texts);
    const sensepause::TextUnit unit{&p, std::nullopt};
    const auto self = sensepause::sample_ratio_comparison(unit, unit, 100);
    CHECK(self.samples_a.size() == 4);
    CHECK(self.test.statistic == 0.0);
    CHECK(self.test.p_value == 1.0);
    CHECK(self.test.df == 6);

    const Poem tiny = poem_from(std::vector<std::string>(150, "ab; cd."));
    const sensepause::TextUnit small{&tiny, std::nullopt};
    CHECK_THROWS_WITH_AS(sensepause::sample_ratio_comparison(unit, small, 100), doctest::Contains("insufficient samples"),
                         Error);
}

TEST_CASE("syllable proxy") {
    CHECK(sensepause::syllable_estimate(make_line(1, "se god")) == 2);
    CHECK(sensepause::syllable_estimate(make_line(1, "hwæt we gardena", "in geardagum")) == 9);
    CHECK(sensepause::syllable_estimate(make_line(1, "þþ ss")) == 0);
    CHECK(sensepause::syllable_estimate(make_line(1, "")) == 0);
    const auto a = make_line(1, "se god");
    const auto b = make_line(2, "ea ie");
    CHECK(sensepause::mean_syllables_per_line({&a, &b}) == doctest::Approx(2.0));
}

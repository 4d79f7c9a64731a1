#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "crowdfusion/io.hpp"

using namespace crowdfusion;

namespace {

AnswerWord word(int id, std::initializer_list<int> syms) {
    AnswerWord w;
    w.worker_id = id;
    for (int s : syms)
        w.symbols.push_back(s == 0 ? AnswerSymbol::Zero : s == 1 ? AnswerSymbol::One : AnswerSymbol::Skip);
    return w;
}
constexpr int SKIP = 2;

ParseError capture(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_answers(in);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error");
    return ParseError(0, 0, "");
}

} // namespace

TEST_CASE("answer files round-trip byte for byte") {
    const std::vector<AnswerWord> answers = {
        word(0, {1, 0, SKIP}), word(3, {SKIP, SKIP, SKIP}), word(7, {0, 1, 1})};
    std::ostringstream out;
    emit_answers(answers, 3, out);
    const std::string text = out.str();
    REQUIRE(text == "worker,b1,b2,b3\n"
                    "0,1,0,\xce\xbb\n"
                    "3,\xce\xbb,\xce\xbb,\xce\xbb\n"
                    "7,0,1,1\n");

    std::istringstream in(text);
    const AnswerFile file = parse_answers(in);
    REQUIRE(file.n_bits == 3);
    REQUIRE(file.answers.size() == 3);
    for (std::size_t i = 0; i < answers.size(); ++i) {
        REQUIRE(file.answers[i].worker_id == answers[i].worker_id);
        REQUIRE(file.answers[i].symbols == answers[i].symbols);
    }
    std::ostringstream out2;
    emit_answers(file.answers, file.n_bits, out2);
    REQUIRE(out2.str() == text);
}

TEST_CASE("skip token aliases and padding are accepted") {
    std::istringstream in("worker,b1,b2\n"
                          " 4 , - , skip \n"
                          "5,\xce\xbb,1\r\n");
    const AnswerFile file = parse_answers(in);
    REQUIRE(file.answers[0].worker_id == 4);
    REQUIRE(file.answers[0].symbols == std::vector<AnswerSymbol>{AnswerSymbol::Skip, AnswerSymbol::Skip});
    REQUIRE(file.answers[1].symbols == std::vector<AnswerSymbol>{AnswerSymbol::Skip, AnswerSymbol::One});
}

TEST_CASE("blank lines are ignored") {
    std::istringstream in("\nworker,b1\n\n0,1\n   \n1,0\n");
    REQUIRE(parse_answers(in).answers.size() == 2);
}

TEST_CASE("parse errors carry one-based line and column") {
    SECTION("bad header name") {
        const ParseError e = capture("user,b1\n0,1\n");
        REQUIRE(e.line == 1);
        REQUIRE(e.column == 1);
    }
    SECTION("bad question column") {
        const ParseError e = capture("worker,b1,q2\n");
        REQUIRE(e.line == 1);
        REQUIRE(e.column == 11);
    }
    SECTION("no question columns") {
        const ParseError e = capture("worker\n");
        REQUIRE(e.line == 1);
    }
    SECTION("wrong field count") {
        const ParseError e = capture("worker,b1,b2\n0,1\n");
        REQUIRE(e.line == 2);
    }
    SECTION("bad worker id") {
        const ParseError e = capture("worker,b1\nabc,1\n");
        REQUIRE(e.line == 2);
        REQUIRE(e.column == 1);
    }
    SECTION("negative worker id") {
        const ParseError e = capture("worker,b1\n-2,1\n");
        REQUIRE(e.line == 2);
    }
    SECTION("bad answer token") {
        const ParseError e = capture("worker,b1,b2\n0,1,2\n");
        REQUIRE(e.line == 2);
        REQUIRE(e.column == 5);
    }
    SECTION("empty file") {
        const ParseError e = capture("");
        REQUIRE(e.line == 1);
        REQUIRE(e.column == 1);
    }
}

TEST_CASE("gold files accept mixed separators") {
    std::istringstream in("1 0,1\n0\t1\r\n");
    REQUIRE(parse_gold(in) == std::vector<int>{1, 0, 1, 0, 1});

    std::istringstream bad("1 0 2\n");
    try {
        parse_gold(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.line == 1);
        REQUIRE(e.column == 5);
    }
}

TEST_CASE("report values use twelve significant digits") {
    REQUIRE(format_value(0.125) == "0.125");
    REQUIRE(format_value(1.0 / 3.0) == "0.333333333333");
    REQUIRE(format_value(1.0) == "1");
    REQUIRE(format_value(1234567.0) == "1234567");
}

TEST_CASE("report layout with and without optional columns") {
    Report r;
    r.metadata = {"generator=crowdfuse 1.0.0", "seed=7"};
    ReportRow a;
    a.sweep = "0.1";
    a.method = "proposed";
    a.pc = 0.5;
    a.stderr_pc = 0.01;
    a.has_analytic = true;
    a.analytic_pc = 0.499;
    ReportRow b;
    b.sweep = "0.2";
    b.method = "mv";
    b.pc = 1.0 / 3.0;
    b.stderr_pc = 0.0;
    b.has_runtime = true;
    b.runtime_ms = 12.5;
    r.rows = {a, b};
    std::ostringstream out;
    emit_report(r, out);
    REQUIRE(out.str() == "# generator=crowdfuse 1.0.0\n"
                         "# seed=7\n"
                         "sweep,method,pc,stderr,analytic_pc,runtime_ms\n"
                         "0.1,proposed,0.5,0.01,0.499,\n"
                         "0.2,mv,0.333333333333,0,,12.5\n");
}

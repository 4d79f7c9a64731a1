#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "answers.hpp"
#include "errors.hpp"

// Flat-file formats. Answer sets are CSV with a fixed header
// worker,b1,...,bN and one row per worker; skips are written as the lambda
// glyph and accepted as lambda, "-" or "skip" on input. Reports are CSV with
// 12 significant digits, '.' decimal separator and LF line endings, so runs
// with the same seed diff clean.

namespace crowdfusion {

struct AnswerFile {
    int n_bits = 0;
    std::vector<AnswerWord> answers;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

// split one CSV line, remembering the 1-based starting column of each field
inline std::vector<std::pair<std::string, int>> split_csv(const std::string& line) {
    std::vector<std::pair<std::string, int>> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string raw =
            comma == std::string::npos ? line.substr(start) : line.substr(start, comma - start);
        fields.emplace_back(trim(raw), static_cast<int>(start) + 1);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace detail

constexpr const char* kSkipGlyph = "\xce\xbb"; // lambda

inline AnswerFile parse_answers(std::istream& in) {
    AnswerFile file;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto fields = detail::split_csv(line);
        if (!have_header) {
            if (fields[0].first != "worker")
                throw ParseError(line_no, fields[0].second, "expected header starting with 'worker'");
            const int n = static_cast<int>(fields.size()) - 1;
            if (n < 1) throw ParseError(line_no, 1, "header names no question columns");
            for (int i = 1; i <= n; ++i) {
                const std::string expect = "b" + std::to_string(i);
                if (fields[static_cast<std::size_t>(i)].first != expect)
                    throw ParseError(line_no, fields[static_cast<std::size_t>(i)].second,
                                     "expected column '" + expect + "'");
            }
            file.n_bits = n;
            have_header = true;
            continue;
        }
        if (static_cast<int>(fields.size()) != file.n_bits + 1)
            throw ParseError(line_no, static_cast<int>(line.size()) + 1,
                             "expected " + std::to_string(file.n_bits + 1) + " fields, got " +
                                 std::to_string(fields.size()));
        AnswerWord word;
        {
            const auto& [tok, col] = fields[0];
            std::size_t used = 0;
            int id = 0;
            try {
                id = std::stoi(tok, &used);
            } catch (const std::exception&) {
                throw ParseError(line_no, col, "worker id is not an integer: '" + tok + "'");
            }
            if (used != tok.size() || id < 0)
                throw ParseError(line_no, col, "worker id is not a nonnegative integer: '" + tok + "'");
            word.worker_id = id;
        }
        for (int i = 1; i <= file.n_bits; ++i) {
            const auto& [tok, col] = fields[static_cast<std::size_t>(i)];
            AnswerSymbol s;
            if (tok == "0") s = AnswerSymbol::Zero;
            else if (tok == "1") s = AnswerSymbol::One;
            else if (tok == kSkipGlyph || tok == "-" || tok == "skip") s = AnswerSymbol::Skip;
            else throw ParseError(line_no, col, "bad answer token '" + tok + "'");
            word.symbols.push_back(s);
        }
        file.answers.push_back(std::move(word));
    }
    if (!have_header) throw ParseError(1, 1, "empty answer file");
    return file;
}

inline AnswerFile parse_answers_path(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open answer file: " + path);
    return parse_answers(in);
}

inline void emit_answers(const std::vector<AnswerWord>& answers, int n_bits, std::ostream& out) {
    out << "worker";
    for (int i = 1; i <= n_bits; ++i) out << ",b" << i;
    out << "\n";
    for (const AnswerWord& word : answers) {
        out << word.worker_id;
        for (const AnswerSymbol s : word.symbols) {
            out << ',';
            if (s == AnswerSymbol::Skip) out << kSkipGlyph;
            else out << (s == AnswerSymbol::One ? '1' : '0');
        }
        out << "\n";
    }
}

// gold file: whitespace or comma separated 0/1 tokens
inline std::vector<int> parse_gold(std::istream& in) {
    std::vector<int> bits;
    std::string tok;
    char c;
    int line = 1, col = 0, tok_col = 1;
    auto flush = [&]() {
        if (tok.empty()) return;
        if (tok == "0") bits.push_back(0);
        else if (tok == "1") bits.push_back(1);
        else throw ParseError(line, tok_col, "bad gold token '" + tok + "'");
        tok.clear();
    };
    while (in.get(c)) {
        ++col;
        if (c == '\n') {
            flush();
            ++line;
            col = 0;
        } else if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
            flush();
        } else {
            if (tok.empty()) tok_col = col;
            tok += c;
        }
    }
    flush();
    return bits;
}

inline std::vector<int> parse_gold_path(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open gold file: " + path);
    return parse_gold(in);
}

inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct ReportRow {
    std::string sweep;
    std::string method;
    double pc = 0.0;
    double stderr_pc = 0.0;
    bool has_analytic = false;
    double analytic_pc = 0.0;
    bool has_runtime = false;
    double runtime_ms = 0.0;
};

struct Report {
    std::vector<std::string> metadata; // emitted as leading '# ' comment lines
    std::vector<ReportRow> rows;
};

inline void emit_report(const Report& report, std::ostream& out) {
    for (const std::string& meta : report.metadata) out << "# " << meta << "\n";
    out << "sweep,method,pc,stderr,analytic_pc,runtime_ms\n";
    for (const ReportRow& row : report.rows) {
        out << row.sweep << ',' << row.method << ',' << format_value(row.pc) << ','
            << format_value(row.stderr_pc) << ',';
        if (row.has_analytic) out << format_value(row.analytic_pc);
        out << ',';
        if (row.has_runtime) out << format_value(row.runtime_ms);
        out << "\n";
    }
}

inline void write_report_file(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    emit_report(report, out);
}

} // namespace crowdfusion

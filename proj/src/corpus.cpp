#include "dbz/corpus.hpp"

#include <sstream>

#include "dbz/dbzcalc.hpp"
#include "json.hpp"

namespace dbz {

std::vector<CorpusRow> load_corpus(std::string_view json) {
    std::vector<CorpusRow> rows;
    try {
        auto doc = nlohmann::ordered_json::parse(json);
        if (doc.at("version").get<int>() != 1)
            throw Error(ErrorCode::InvalidArgument, "unsupported corpus version");
        for (const auto& r : doc.at("rows")) {
            CorpusRow row;
            row.id = r.at("id").get<std::string>();
            row.expr = r.at("expr").get<std::string>();
            row.var = r.at("var").get<std::string>();
            row.anchor = r.at("anchor").get<std::string>();
            for (const auto& [k, v] : r.at("bindings").items()) row.bindings.emplace_back(k, v.get<std::string>());
            row.expected_c0 = r.at("expected_C0").get<std::string>();
            row.paper_section = r.at("paper_section").get<std::string>();
            row.sense = r.at("sense").get<std::string>();
            if (row.sense != "good" && row.sense != "nonsense")
                throw Error(ErrorCode::InvalidArgument, "row " + row.id + ": sense must be good or nonsense");
            rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed corpus JSON: ") + e.what());
    }
    return rows;
}

std::vector<CorpusRow> builtin_corpus() { return load_corpus(builtin_corpus_json()); }

namespace {

RowResult run_row(const CorpusRow& row, const ExpandOptions& options) {
    RowResult out{row, {}, {}, false};
    try {
        Bindings bindings;
        for (const auto& [k, v] : row.bindings) bindings[k] = Scalar::parse(v, Mode::Exact);
        ExpansionPoint at = parse_point(row.anchor, bindings);
        Scalar actual = dbz_value(parse(row.expr), row.var, at, bindings, options);
        Scalar expected = Scalar::parse(row.expected_c0, Mode::Exact);
        out.actual = actual.str();
        if (actual.is_exact()) {
            out.pass = actual == expected;
        } else {
            BigFloat tol(1.0, options.precision);
            mpfr_mul_2si(tol.get(), tol.get(), -(options.precision - 16), MPFR_RNDN);
            BigFloat err = (actual - expected.to_float(options.precision)).floating().abs();
            out.pass = !(tol < err);
        }
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

CorpusReport corpus_run(const std::vector<CorpusRow>& rows, const ExpandOptions& options) {
    CorpusReport report;
    report.rows.reserve(rows.size());
    for (const auto& row : rows) report.rows.push_back(run_row(row, options));
    return report;
}

std::size_t CorpusReport::passed() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.pass ? 1 : 0;
    return n;
}

bool CorpusReport::all_passed() const { return passed() == rows.size(); }

std::string CorpusReport::to_text() const {
    std::ostringstream os;
    for (const auto& r : rows) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.row.id << "  expected " << r.row.expected_c0 << "  actual "
           << (r.error.empty() ? r.actual : r.error);
        if (r.row.sense == "nonsense") os << "  (flagged nonsense)";
        os << '\n';
    }
    os << passed() << "/" << rows.size() << " rows passed\n";
    return os.str();
}

std::string CorpusReport::to_json() const {
    nlohmann::ordered_json j;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["id"] = r.row.id;
        row["expr"] = r.row.expr;
        row["var"] = r.row.var;
        row["anchor"] = r.row.anchor;
        row["expected_C0"] = r.row.expected_c0;
        row["actual"] = r.actual;
        if (!r.error.empty()) row["error"] = r.error;
        row["paper_section"] = r.row.paper_section;
        row["sense"] = r.row.sense;
        row["status"] = r.pass ? "PASS" : "FAIL";
        arr.push_back(std::move(row));
    }
    j["rows"] = std::move(arr);
    j["passed"] = passed();
    j["total"] = rows.size();
    return j.dump(2) + "\n";
}

}  // namespace dbz

#include "eclab/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "eclab/errors.hpp"

namespace eclab::report {

using nlohmann::json;

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_cell(const json& cell) {
    switch (cell.type()) {
        case json::value_t::null: return "";
        case json::value_t::string: return csv_escape(cell.get<std::string>());
        case json::value_t::boolean: return cell.get<bool>() ? "true" : "false";
        case json::value_t::number_unsigned: return std::to_string(cell.get<std::uint64_t>());
        case json::value_t::number_integer: return std::to_string(cell.get<std::int64_t>());
        case json::value_t::number_float: return format_real(cell.get<double>());
        default: return csv_escape(cell.dump());
    }
}

json real(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

std::vector<json> complexity_cells(const complexity::ComplexityReport& r, std::size_t sample, std::uint64_t seed) {
    return {
        r.n,
        sample,
        seed,
        r.lz_len,
        r.khat,
        r.ec ? json(*r.ec) : json(std::string(kEmptyDomain)),
        std::string(complexity::mode_name(r.mode)),
        real(r.coarse_ec),
        r.witness ? std::string(ensembles::tag_name(r.witness->tag())) : std::string(),
        r.witness ? r.witness->params_string() : std::string(),
        real(r.delta),
        real(r.budget),
    };
}

const std::vector<std::string> kComplexityColumns = {"n",        "sample",      "seed",         "lz_len",
                                                     "khat",     "ec",          "ec_mode",      "coarse_ec",
                                                     "witness_tag", "witness_params", "delta", "Delta"};

}  // namespace

Format parse_format(std::string_view text) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    throw DomainError("format must be csv or json, got '" + std::string(text) + "'");
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    return fmt::format("{:.9g}", v);
}

void Table::add_row(std::vector<json> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("row width does not match the table columns");
    rows_.push_back(std::move(cells));
}

void Table::write(std::ostream& out, Format format) const {
    if (format == Format::Csv) {
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << csv_escape(columns_[i]);
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json object = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) object[columns_[i]] = row[i];
        doc.push_back(std::move(object));
    }
    out << doc.dump(2) << '\n';
}

std::string Table::render(Format format) const {
    std::ostringstream out;
    write(out, format);
    return out.str();
}

Table complexity_table() {
    return Table(kComplexityColumns);
}

void add_complexity_row(Table& table, const complexity::ComplexityReport& report, std::size_t sample,
                        std::uint64_t seed) {
    table.add_row(complexity_cells(report, sample, seed));
}

Table sweep_rows_table(const complexity::SweepResult& sweep) {
    auto columns = kComplexityColumns;
    for (const char* c : {"component", "r", "member", "sigma_hat", "budget_satisfied"}) columns.emplace_back(c);
    Table table(std::move(columns));
    for (const auto& row : sweep.rows) {
        auto cells = complexity_cells(row.report, row.sample, row.seed);
        cells.emplace_back(row.component);
        cells.emplace_back(row.r.to_string());
        cells.emplace_back(row.member);
        cells.push_back(real(row.sigma_hat));
        cells.emplace_back(row.budget_satisfied);
        table.add_row(std::move(cells));
    }
    return table;
}

Table sweep_summary_table(const complexity::SweepResult& sweep, double eps, double delta) {
    Table table({"n", "samples", "eps", "delta", "fraction_budget_satisfied", "fraction_member", "median_ec_upper",
                 "reference", "bound", "c_scheme"});
    const std::size_t samples = sweep.aggregates.empty() ? 0 : sweep.rows.size() / sweep.aggregates.size();
    for (const auto& a : sweep.aggregates) {
        table.add_row({a.n, samples, real(eps), real(delta), real(a.fraction_budget_satisfied), real(a.fraction_member),
                       real(a.median_ec_upper), real(a.reference), real(a.bound), a.c_scheme});
    }
    return table;
}

}  // namespace eclab::report

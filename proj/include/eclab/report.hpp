#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eclab/complexity.hpp"
#include "eclab/experiments.hpp"

// Tabular output. One Table renders either as CSV (header row, fixed column
// order) or as a JSON array of objects keyed by the same column names.
namespace eclab::report {

enum class Format { Csv, Json };

Format parse_format(std::string_view text);

/// Marker written in the ec column when the minimization domain is empty.
inline constexpr std::string_view kEmptyDomain = "EMPTY-DOMAIN";

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    /// Cells are strings, integers, reals, or booleans; the row must match the column count.
    void add_row(std::vector<nlohmann::json> cells);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t size() const { return rows_.size(); }

    void write(std::ostream& out, Format format) const;
    std::string render(Format format) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<nlohmann::json>> rows_;
};

/// Reals use 9 significant digits in CSV; JSON keeps full precision.
std::string format_real(double v);

/// n, sample, seed, lz_len, khat, ec, ec_mode, coarse_ec, witness_tag,
/// witness_params, delta, Delta.
Table complexity_table();
void add_complexity_row(Table& table, const complexity::ComplexityReport& report, std::size_t sample,
                        std::uint64_t seed);

/// Per-sample sweep rows: the complexity columns followed by component, r,
/// member, sigma_hat, budget_satisfied.
Table sweep_rows_table(const complexity::SweepResult& sweep);

/// Per-n aggregates.
Table sweep_summary_table(const complexity::SweepResult& sweep, double eps, double delta);

}  // namespace eclab::report

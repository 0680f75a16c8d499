#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "trigfit/core.hpp"

namespace trigfit::io
{

/// Decimal text with 17 significant digits, independent of the locale.
std::string format_double(double v);

/// Locale-independent parse of the whole field; throws Error(Parse) naming
/// `line` (1-based) otherwise.
double parse_double(std::string_view field, std::size_t line);

struct CsvTable
{
    std::vector<double> x; ///< empty for single-column input
    std::vector<double> y;
    bool header = false;
};

/// One or two comma-separated columns; a first line without numeric fields is
/// taken as a header. Blank lines are skipped. Throws Error(Parse) with the
/// line number on malformed rows, and on input without data rows.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Writes the header (if not empty) and the rows; every value in the
/// format_double form.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

/// Original sample interval [a, b), mapped affinely onto [0, 1).
struct Domain
{
    double a = 0.0;
    double b = 1.0;

    double length() const noexcept { return b - a; }
    /// (x - a) / (b - a) wrapped into [0, 1).
    double to_unit(double x) const;
    double from_unit(double t) const noexcept { return a + t * (b - a); }
};

/// Samples as a grid on [0, 1). Single-column tables are equispaced on
/// [0, 1). Two-column tables use `domain` when given, else [x_0, x_last + h)
/// with h the mean spacing; locations within 1e-9 / n of j / n snap to it.
SampleGrid to_grid(const CsvTable& t, std::optional<Domain> domain, Domain& used);

using Model = std::variant<TrigRational, ExpSum>;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct Provenance
{
    std::string tool = "trigfit";
    std::string version;
    KeyValues config;
    KeyValues report;
};

struct ModelFile
{
    int format_version = 1;
    Model model;
    Domain domain;
    Provenance provenance;

    bool is_rfun() const noexcept { return model.index() == 0; }
    const char* kind() const noexcept { return is_rfun() ? "rfun" : "efun"; }
};

inline constexpr int model_format_version = 1;

/// JSON document with format_version, kind, domain, payload and provenance.
/// Doubles are written in shortest round-trip form, so load(save(m)) is
/// bit-exact.
std::string to_string(const ModelFile& m);
ModelFile from_string(const std::string& text);

void save_model(const std::string& path, const ModelFile& m);
ModelFile load_model(const std::string& path);

} // namespace trigfit::io

#ifndef PBKG_CONFIG_HPP
#define PBKG_CONFIG_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pbkg/quadrature.hpp"

namespace pbkg {

/// Everything a CLI run needs.  Serialized as flat key=value text with
/// [section] headers; round-trips losslessly (floats printed with 17
/// significant digits).
struct RunConfig {
    double mass = 1.0;
    double theta = 0.0; // radians; the parser also accepts "0.25pi" forms
    int lattice_modes = 9;
    double lattice_spacing = 0.5;
    int lattice_local_dim = 2;
    QuadSpec quad;
    std::string format = "csv"; // csv | json
    std::string out_path;       // empty = stdout
    std::uint64_t seed = 1;
    double tol = 1e-10;

    void validate() const; // throws config_error
};

/// Accepts raw radians ("0.7853981633974483") or multiples of pi ("0.25pi",
/// "-0.5pi"), so boundary angles are representable as intent.
double parse_angle(const std::string& text);

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Fixed-format float: 17 significant digits, locale-independent.
std::string format_double(double v);

/// Parse a comma-separated list of angles/doubles (usage_error on nonsense).
std::vector<double> parse_angle_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Rectangular machine-readable table: CSV with a mandatory header row, or a
/// JSON array of row objects carrying the same values.
struct Table {
    std::vector<std::string> columns;
    using Cell = std::variant<double, std::string>;
    std::vector<std::vector<Cell>> rows;

    std::string to_csv() const;
    std::string to_json() const;
    std::string render(const std::string& format) const; // "csv" | "json"
};

/// Writes to the path, or stdout when the path is empty.
void write_output(const std::string& path, const std::string& content);

} // namespace pbkg

#endif

// cli.hpp: Command-line front end: run specs, grids, CSV/JSON emission

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qbm/quadrature.hpp"
#include "qbm/units.hpp"

namespace qbm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

enum class Command { msd, commutator, width, attenuation, profile, tau_d, sweep, vfun };
enum class Spacing { lin, log };
enum class OutputFormat { csv, json };

Command parse_command(std::string_view name);
std::string_view to_string(Command command);

// "start,stop,count,lin|log"
struct GridSpec {
    double start{0.0};
    double stop{1.0};
    long count{2};
    Spacing spacing{Spacing::lin};

    static GridSpec parse(std::string_view text);
    void validate() const;
    std::vector<double> points() const;
};

// Exactly one of tau_s, zeta, temperature_K, d_m takes a list of values.
struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    Command observable{Command::tau_d};
};

struct RunSpec {
    Command command{Command::msd};
    std::optional<units::PhysicalParams> params{};
    std::optional<GridSpec> grid{};
    OutputFormat output{OutputFormat::csv};
    quadrature::QuadratureConfig quad{};
    double time_s{0.0}; // profile snapshot time
    std::optional<SweepSpec> sweep{};

    void validate() const;
};

// Flat config object: PhysicalParams fields plus command, grid, output, rel_tol,
// abs_tol, time_s, sweep ({"<field>": [values]}) and sweep_command. Unknown keys
// are rejected by name.
RunSpec spec_from_json(const nlohmann::json& doc);

using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool failed{false}; // some row hit a numerical failure
};

// Computes the table for a validated spec. Throws ValidationError/NumericalError.
Table compute(const RunSpec& spec, std::ostream& warnings);

// Shortest round-trip decimal form.
std::string format_number(double value);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, Command command, std::ostream& out);

// Header row then one row per grid point. Returns 0, 2 (validation) or 3 (numerical).
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// Full argument handling: --config, --command, --grid, --output, --rel-tol, --abs-tol, --time.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qbm::cli

// cli.cpp: Command-line front end

#include "qbm/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qbm/decoherence.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/errors.hpp"
#include "qbm/specfun.hpp"

namespace qbm::cli {

namespace {

constexpr long max_grid_count = 10'000'000;

double parse_double(std::string_view text, const char* what) {
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    while (begin != end && *begin == ' ') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
    }
    return value;
}

double number_field(const nlohmann::json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) {
        throw ValidationError(std::string(key) + ": must be a number");
    }
    return v.get<double>();
}

std::string string_field(const nlohmann::json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_string()) {
        throw ValidationError(std::string(key) + ": must be a string");
    }
    return v.get<std::string>();
}

OutputFormat parse_output(std::string_view name) {
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw ValidationError("output: expected csv or json, got '" + std::string(name) + "'");
}

bool is_sweepable(std::string_view field) {
    return field == "tau_s" || field == "zeta" || field == "temperature_K" || field == "d_m";
}

void set_field(units::PhysicalParams& p, std::string_view field, double value) {
    if (field == "tau_s") {
        p.tau_s = value;
    } else if (field == "zeta") {
        p.zeta = value;
    } else if (field == "temperature_K") {
        p.temperature_K = value;
    } else if (field == "d_m") {
        p.d_m = value;
    } else {
        throw ValidationError("sweep: parameter '" + std::string(field) + "' cannot be swept");
    }
}

// Evaluation context in reduced units.
struct Reduced {
    units::ReducedParams r;
    FreeParticle particle;
    CatState state;

    explicit Reduced(const units::PhysicalParams& p)
        : r(units::reduce(p)), particle(units::reduced_particle(r)), state(units::reduced_cat_state(r)) {}
};

struct MsdEval {
    double value{0.0};
    bool ok{true};
    const char* method{"closed_form"};
};

MsdEval evaluate_msd(const Reduced& ctx, double t, const quadrature::QuadratureConfig& cfg) {
    if (ctx.r.theta == 0.0) {
        return {msd_zero_t(ctx.particle, t), true, "closed_form"};
    }
    const auto q = msd_finite_t(ctx.particle, t, ctx.r.theta, cfg);
    return {q.value, q.converged, "quadrature"};
}

const char* status(bool ok) { return ok ? "ok" : "failed"; }

std::vector<double> require_grid(const RunSpec& spec) {
    if (!spec.grid) {
        throw ValidationError("grid: required for command '" + std::string(to_string(spec.command)) + "'");
    }
    return spec.grid->points();
}

void check_time_grid(const std::vector<double>& times) {
    for (double t : times) {
        if (t < 0.0) {
            throw ValidationError("grid: times must be non-negative");
        }
    }
}

Table compute_params(const RunSpec& spec, const units::PhysicalParams& params, std::ostream& warnings) {
    const Reduced ctx(params);
    const double T = ctx.r.scale_time;
    const double L = ctx.r.scale_length;
    const double L2 = L * L;
    Table table;

    switch (spec.command) {
    case Command::msd: {
        const auto times = require_grid(spec);
        check_time_grid(times);
        table.columns = {"t_s", "t_reduced", "s_m2", "s_reduced", "method", "status"};
        for (double ts : times) {
            const double t = ts / T;
            const auto s = evaluate_msd(ctx, t, spec.quad);
            table.failed = table.failed || !s.ok;
            table.rows.push_back({ts, t, s.value * L2, s.value, std::string(s.method), std::string(status(s.ok))});
        }
        break;
    }
    case Command::commutator: {
        const auto times = require_grid(spec);
        check_time_grid(times);
        table.columns = {"t_s", "t_reduced", "C_m2", "C_reduced"};
        for (double ts : times) {
            const double t = ts / T;
            const double c = commutator_magnitude(ctx.particle, t);
            table.rows.push_back({ts, t, c * L2, c});
        }
        break;
    }
    case Command::width: {
        const auto times = require_grid(spec);
        check_time_grid(times);
        table.columns = {"t_s", "t_reduced", "w2_m2", "w2_reduced", "status"};
        for (double ts : times) {
            const double t = ts / T;
            const auto s = evaluate_msd(ctx, t, spec.quad);
            const double c = commutator_magnitude(ctx.particle, t);
            const double w2 = 1.0 + c * c / 4.0 + s.value;
            table.failed = table.failed || !s.ok;
            table.rows.push_back({ts, t, w2 * L2, w2, std::string(status(s.ok))});
        }
        break;
    }
    case Command::attenuation: {
        const auto times = require_grid(spec);
        check_time_grid(times);
        table.columns = {"t_s", "t_reduced", "a", "a_short", "a_intermediate", "status"};
        for (double ts : times) {
            const double t = ts / T;
            const auto s = evaluate_msd(ctx, t, spec.quad);
            TrajectoryPoint point;
            point.t = t;
            point.s = s.value;
            point.C = commutator_magnitude(ctx.particle, t);
            point.w2 = 1.0 + point.C * point.C / 4.0 + point.s;
            Cell short_cell;
            Cell intermediate_cell;
            if (!ctx.particle.bath.is_ohmic()) {
                short_cell = attenuation_short(ctx.state, ctx.particle, t);
            }
            try {
                intermediate_cell = attenuation_intermediate(ctx.state, ctx.particle, t);
            } catch (const ValidationError&) {
                // outside the intermediate window; left empty
            }
            table.failed = table.failed || !s.ok;
            table.rows.push_back({ts, t, attenuation_from(ctx.state, point), short_cell, intermediate_cell,
                                  std::string(status(s.ok))});
        }
        break;
    }
    case Command::profile: {
        const auto xs = require_grid(spec);
        if (spec.time_s < 0.0) {
            throw ValidationError("time_s: must be non-negative");
        }
        const auto pattern = InterferencePattern::evaluate(ctx.state, ctx.particle, spec.time_s / T,
                                                           ctx.r.theta, spec.quad);
        table.columns = {"x_m", "x_reduced", "P_per_m", "P_reduced"};
        for (double xm : xs) {
            const double x = xm / L;
            const double prob = pattern.probability(x);
            table.rows.push_back({xm, x, prob / L, prob});
        }
        break;
    }
    case Command::tau_d: {
        const auto report = decoherence_time(ctx.state, ctx.particle, ctx.r.theta, spec.quad);
        if (!report.ordering_holds) {
            warnings << "warning: tau_d >= tau0; the parameters are outside the regime zeta tau0 / m << 1\n";
        }
        table.columns = {"tau0_s", "tau0_reduced", "tau_d_s", "tau_d_reduced", "tau_d_approx_s",
                         "bracket_lo_s", "bracket_hi_s", "method", "ordering_holds"};
        Cell approx;
        if (report.tau_d_approx) {
            approx = *report.tau_d_approx * T;
        }
        table.rows.push_back({report.tau0 * T, report.tau0, report.tau_d * T, report.tau_d, approx,
                              report.bracket_lo * T, report.bracket_hi * T, std::string(to_string(report.method)),
                              report.ordering_holds});
        break;
    }
    case Command::vfun:
    case Command::sweep:
        throw ValidationError("internal: command does not take physical parameters");
    }
    return table;
}

void write_csv_cell(const Cell& cell, std::ostream& out) {
    if (const auto* d = std::get_if<double>(&cell)) {
        out << format_number(*d);
    } else if (const auto* s = std::get_if<std::string>(&cell)) {
        if (s->find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (char ch : *s) {
                if (ch == '"') {
                    out << '"';
                }
                out << ch;
            }
            out << '"';
        } else {
            out << *s;
        }
    } else if (const auto* b = std::get_if<bool>(&cell)) {
        out << (*b ? "true" : "false");
    }
}

nlohmann::json to_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        return *d;
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return *s;
    }
    if (const auto* b = std::get_if<bool>(&cell)) {
        return *b;
    }
    return nullptr;
}

} // namespace

Command parse_command(std::string_view name) {
    static constexpr std::pair<std::string_view, Command> names[] = {
        {"msd", Command::msd},         {"commutator", Command::commutator}, {"width", Command::width},
        {"attenuation", Command::attenuation}, {"profile", Command::profile}, {"tau-d", Command::tau_d},
        {"sweep", Command::sweep},     {"vfun", Command::vfun}};
    for (const auto& [key, value] : names) {
        if (key == name) {
            return value;
        }
    }
    throw ValidationError("command: unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Command command) {
    switch (command) {
    case Command::msd: return "msd";
    case Command::commutator: return "commutator";
    case Command::width: return "width";
    case Command::attenuation: return "attenuation";
    case Command::profile: return "profile";
    case Command::tau_d: return "tau-d";
    case Command::sweep: return "sweep";
    case Command::vfun: return "vfun";
    }
    return "unknown";
}

GridSpec GridSpec::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t begin = 0;
    while (true) {
        const auto comma = text.find(',', begin);
        parts.push_back(text.substr(begin, comma == std::string_view::npos ? std::string_view::npos : comma - begin));
        if (comma == std::string_view::npos) {
            break;
        }
        begin = comma + 1;
    }
    if (parts.size() != 4) {
        throw ValidationError("grid: expected start,stop,count,lin|log");
    }
    GridSpec g;
    g.start = parse_double(parts[0], "grid");
    g.stop = parse_double(parts[1], "grid");
    const double count = parse_double(parts[2], "grid");
    if (count != std::floor(count) || count < 2 || count > static_cast<double>(max_grid_count)) {
        throw ValidationError("grid: count must be an integer in [2, 10^7]");
    }
    g.count = static_cast<long>(count);
    if (parts[3] == "lin") {
        g.spacing = Spacing::lin;
    } else if (parts[3] == "log") {
        g.spacing = Spacing::log;
    } else {
        throw ValidationError("grid: spacing must be lin or log");
    }
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (count < 2 || count > max_grid_count) {
        throw ValidationError("grid: count must be in [2, 10^7]");
    }
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
        throw ValidationError("grid: requires finite start < stop");
    }
    if (spacing == Spacing::log && !(start > 0.0)) {
        throw ValidationError("grid: log spacing requires start > 0");
    }
}

std::vector<double> GridSpec::points() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(count));
    const double last = static_cast<double>(count - 1);
    if (spacing == Spacing::lin) {
        for (long i = 0; i < count; ++i) {
            out[i] = start + (stop - start) * (static_cast<double>(i) / last);
        }
    } else {
        const double lo = std::log(start);
        const double hi = std::log(stop);
        for (long i = 0; i < count; ++i) {
            out[i] = std::exp(lo + (hi - lo) * (static_cast<double>(i) / last));
        }
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

void RunSpec::validate() const {
    quad.validate();
    if (grid) {
        grid->validate();
    }
    if (command == Command::sweep) {
        if (!sweep) {
            throw ValidationError("sweep: requires a 'sweep' object with one ranged parameter");
        }
        if (sweep->observable == Command::sweep || sweep->observable == Command::vfun) {
            throw ValidationError("sweep_command: must be a physical observable command");
        }
        if (sweep->values.empty()) {
            throw ValidationError("sweep: value list is empty");
        }
    }
    if (command != Command::vfun) {
        if (!params) {
            throw ValidationError("params: physical parameters are required for '" + std::string(to_string(command)) + "'");
        }
        units::validate(*params);
    }
}

RunSpec spec_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }
    static const char* const known[] = {"mass_kg", "zeta", "tau_s", "sigma_m", "d_m", "temperature_K",
                                        "command", "grid", "output", "rel_tol", "abs_tol", "time_s",
                                        "sweep", "sweep_command"};
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || item.key() == k;
        }
        if (!ok) {
            throw ValidationError(item.key() + ": unknown config field");
        }
    }

    RunSpec spec;
    if (doc.contains("command")) {
        spec.command = parse_command(string_field(doc, "command"));
    }
    const char* param_fields[] = {"mass_kg", "zeta", "tau_s", "sigma_m", "d_m", "temperature_K"};
    bool any_param = false;
    for (const char* f : param_fields) {
        any_param = any_param || doc.contains(f);
    }
    if (any_param) {
        nlohmann::json params = doc;
        if (doc.contains("sweep") && doc.at("sweep").is_object()) {
            // The swept field may be absent from the base parameters.
            for (const auto& item : doc.at("sweep").items()) {
                if (!params.contains(item.key()) && item.value().is_array() && !item.value().empty()) {
                    params[item.key()] = item.value().front();
                }
            }
        }
        spec.params = units::params_from_json(params);
    }
    if (doc.contains("grid")) {
        spec.grid = GridSpec::parse(string_field(doc, "grid"));
    }
    if (doc.contains("output")) {
        spec.output = parse_output(string_field(doc, "output"));
    }
    if (doc.contains("rel_tol")) {
        spec.quad.rel_tol = number_field(doc, "rel_tol");
    }
    if (doc.contains("abs_tol")) {
        spec.quad.abs_tol = number_field(doc, "abs_tol");
    }
    if (doc.contains("time_s")) {
        spec.time_s = number_field(doc, "time_s");
    }
    if (doc.contains("sweep")) {
        const auto& sw = doc.at("sweep");
        if (!sw.is_object() || sw.empty()) {
            throw ValidationError("sweep: must be an object {\"<parameter>\": [values]}");
        }
        if (sw.size() > 1) {
            throw ValidationError("sweep: exactly one parameter may be ranged");
        }
        SweepSpec s;
        s.parameter = sw.begin().key();
        if (!is_sweepable(s.parameter)) {
            throw ValidationError("sweep: parameter '" + s.parameter + "' cannot be swept (tau_s, zeta, temperature_K, d_m)");
        }
        if (!sw.begin().value().is_array()) {
            throw ValidationError("sweep: values for '" + s.parameter + "' must be an array");
        }
        for (const auto& v : sw.begin().value()) {
            if (!v.is_number()) {
                throw ValidationError("sweep: values for '" + s.parameter + "' must be numbers");
            }
            s.values.push_back(v.get<double>());
        }
        if (doc.contains("sweep_command")) {
            s.observable = parse_command(string_field(doc, "sweep_command"));
        }
        spec.sweep = s;
    }
    return spec;
}

Table compute(const RunSpec& spec, std::ostream& warnings) {
    spec.validate();
    if (spec.command == Command::vfun) {
        Table table;
        table.columns = {"x", "V", "method", "est_error"};
        for (double x : require_grid(spec)) {
            const auto v = specfun::v_function(x);
            table.rows.push_back({x, v.value, std::string(specfun::to_string(v.method)), v.est_error});
        }
        return table;
    }
    if (units::separation_warning(*spec.params)) {
        warnings << "warning: d < 3 sigma; the cat-state formulas assume well separated packets\n";
    }
    if (spec.command != Command::sweep) {
        return compute_params(spec, *spec.params, warnings);
    }

    Table table;
    table.columns = {"parameter", "parameter_value"};
    RunSpec inner = spec;
    inner.command = spec.sweep->observable;
    inner.sweep.reset();
    for (double value : spec.sweep->values) {
        units::PhysicalParams p = *spec.params;
        set_field(p, spec.sweep->parameter, value);
        inner.params = p;
        inner.validate();
        Table part = compute_params(inner, p, warnings);
        if (table.columns.size() == 2) {
            table.columns.insert(table.columns.end(), part.columns.begin(), part.columns.end());
        }
        for (auto& row : part.rows) {
            std::vector<Cell> full{spec.sweep->parameter, value};
            full.insert(full.end(), row.begin(), row.end());
            table.rows.push_back(std::move(full));
        }
        table.failed = table.failed || part.failed;
    }
    return table;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ec == std::errc() ? ptr : buffer);
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out << ',';
            }
            write_csv_cell(row[i], out);
        }
        out << '\n';
    }
}

void write_json(const Table& table, Command command, std::ostream& out) {
    nlohmann::json doc;
    doc["command"] = std::string(to_string(command));
    doc["columns"] = table.columns;
    doc["status"] = table.failed ? "failed" : "ok";
    auto rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            obj[table.columns[i]] = to_json(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    Table table;
    try {
        table = compute(spec, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    if (spec.output == OutputFormat::csv) {
        write_csv(table, out);
    } else {
        write_json(table, spec.command, out);
    }
    if (table.failed) {
        err << "numerical failure: quadrature did not reach tolerance on rows marked 'failed'\n";
        return exit_numerical;
    }
    return exit_ok;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decoherence observables of a free quantum Brownian particle", "qbm"};
    std::string config_path;
    std::string command;
    std::string grid;
    std::string output;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<double> time_s;
    app.add_option("--config", config_path, "JSON config: PhysicalParams fields plus grid/output");
    app.add_option("--command", command, "msd | commutator | width | attenuation | profile | tau-d | sweep | vfun");
    app.add_option("--grid", grid, "start,stop,count,lin|log");
    app.add_option("--output", output, "csv | json");
    app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    app.add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
    app.add_option("--time", time_s, "snapshot time in seconds (profile)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }

    RunSpec spec;
    try {
        nlohmann::json doc = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ValidationError("config: cannot open '" + config_path + "'");
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            try {
                doc = nlohmann::json::parse(buffer.str());
            } catch (const nlohmann::json::parse_error& e) {
                throw ValidationError(std::string("config: malformed JSON: ") + e.what());
            }
        }
        if (!command.empty()) {
            doc["command"] = command;
        }
        if (!doc.contains("command")) {
            throw ValidationError("command: not given (use --command or the config field)");
        }
        spec = spec_from_json(doc);
        if (!grid.empty()) {
            spec.grid = GridSpec::parse(grid);
        }
        if (!output.empty()) {
            spec.output = parse_output(output);
        }
        if (rel_tol) {
            spec.quad.rel_tol = *rel_tol;
        }
        if (abs_tol) {
            spec.quad.abs_tol = *abs_tol;
        }
        if (time_s) {
            spec.time_s = *time_s;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
    return run(spec, out, err);
}

} // namespace qbm::cli

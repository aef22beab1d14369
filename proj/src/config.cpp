#include "pbkg/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pbkg/errors.hpp"

namespace pbkg {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw usage_error("cannot parse " + what + " from '" + text + "'");
    }
}

TailMethod parse_tail(const std::string& text) {
    if (text == "between_zeros") return TailMethod::between_zeros_acceleration;
    if (text == "exp_regulator") return TailMethod::exp_regulator_extrapolation;
    throw config_error("unknown tail method '" + text + "'");
}

std::string tail_name(TailMethod method) {
    return method == TailMethod::between_zeros_acceleration ? "between_zeros" : "exp_regulator";
}

} // namespace

void RunConfig::validate() const {
    if (!(mass > 0.0)) throw config_error("config: mass must be positive");
    if (lattice_modes < 1 || lattice_modes % 2 == 0) {
        throw config_error("config: lattice modes must be a positive odd integer");
    }
    if (!(lattice_spacing > 0.0)) throw config_error("config: lattice spacing must be positive");
    if (lattice_local_dim < 2) throw config_error("config: local Fock dimension must be >= 2");
    if (format != "csv" && format != "json") throw config_error("config: format must be csv|json");
    if (!(tol > 0.0)) throw config_error("config: tol must be positive");
    try {
        quad.validate();
    } catch (const parameter_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
}

double parse_angle(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
        const std::string head = trim(text.substr(0, text.size() - 2));
        const double mult = head.empty() ? 1.0 : parse_double(head, "angle");
        return mult * M_PI;
    }
    return parse_double(text, "angle");
}

std::vector<double> parse_angle_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_angle(item));
    }
    if (out.empty()) throw usage_error("empty angle list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_double(trim(item), "list entry"));
    }
    if (out.empty()) throw usage_error("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) {
        const int n = static_cast<int>(std::llround(v));
        if (std::fabs(v - n) > 1e-9) throw usage_error("expected integer list");
        out.push_back(n);
    }
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    while (std::getline(ss, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw config_error("config: expected key=value, got '" + t + "'");
        const std::string key = section + "." + trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "physics.mass") config.mass = parse_double(value, key);
        else if (key == "physics.theta") config.theta = parse_angle(value);
        else if (key == "lattice.modes") config.lattice_modes = static_cast<int>(parse_double(value, key));
        else if (key == "lattice.spacing") config.lattice_spacing = parse_double(value, key);
        else if (key == "lattice.local_dim") config.lattice_local_dim = static_cast<int>(parse_double(value, key));
        else if (key == "quad.abs_tol") config.quad.abs_tol = parse_double(value, key);
        else if (key == "quad.finite_cutoff") config.quad.finite_cutoff = parse_double(value, key);
        else if (key == "quad.tail") config.quad.tail_method = parse_tail(value);
        else if (key == "quad.max_subdivisions") config.quad.max_subdivisions = static_cast<int>(parse_double(value, key));
        else if (key == "quad.acceleration_depth") config.quad.acceleration_depth = static_cast<int>(parse_double(value, key));
        else if (key == "run.format") config.format = value;
        else if (key == "run.out") config.out_path = value;
        else if (key == "run.seed") config.seed = static_cast<std::uint64_t>(std::stoull(value));
        else if (key == "run.tol") config.tol = parse_double(value, key);
        else throw config_error("config: unknown key '" + key + "'");
    }
    config.validate();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    out << "[physics]\n";
    out << "mass=" << format_double(config.mass) << "\n";
    out << "theta=" << format_double(config.theta) << "\n";
    out << "[lattice]\n";
    out << "modes=" << config.lattice_modes << "\n";
    out << "spacing=" << format_double(config.lattice_spacing) << "\n";
    out << "local_dim=" << config.lattice_local_dim << "\n";
    out << "[quad]\n";
    out << "abs_tol=" << format_double(config.quad.abs_tol) << "\n";
    out << "finite_cutoff=" << format_double(config.quad.finite_cutoff) << "\n";
    out << "tail=" << tail_name(config.quad.tail_method) << "\n";
    out << "max_subdivisions=" << config.quad.max_subdivisions << "\n";
    out << "acceleration_depth=" << config.quad.acceleration_depth << "\n";
    out << "[run]\n";
    out << "format=" << config.format << "\n";
    out << "out=" << config.out_path << "\n";
    out << "seed=" << config.seed << "\n";
    out << "tol=" << format_double(config.tol) << "\n";
    return out.str();
}

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << columns[i] << (i + 1 < columns.size() ? "," : "");
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (std::holds_alternative<double>(row[i])) {
                out << format_double(std::get<double>(row[i]));
            } else {
                out << std::get<std::string>(row[i]);
            }
            out << (i + 1 < row.size() ? "," : "");
        }
        out << "\n";
    }
    return out.str();
}

std::string Table::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) {
            if (std::holds_alternative<double>(row[i])) {
                obj[columns[i]] = std::get<double>(row[i]);
            } else {
                obj[columns[i]] = std::get<std::string>(row[i]);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string Table::render(const std::string& format) const {
    if (format == "csv") return to_csv();
    if (format == "json") return to_json();
    throw usage_error("unknown output format '" + format + "'");
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open output file '" + path + "'");
    out << content;
}

} // namespace pbkg

#include "mcln/io.hpp"

#include "mcln/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

namespace mcln {

namespace {

using cd = std::complex<double>;
using nlohmann::json;

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    }
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open " + path.string() + " for reading");
    }
    return in;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw Error(ErrorKind::io, "write to " + path.string() + " failed");
    }
}

void append_pair(std::string& line, cd value)
{
    line += ' ';
    line += format_double(value.real());
    line += ' ';
    line += format_double(value.imag());
}

double frequency_scale(std::string unit)
{
    std::transform(unit.begin(), unit.end(), unit.begin(), [](unsigned char c) { return std::tolower(c); });
    if (unit == "hz") return 1.0;
    if (unit == "khz") return 1e3;
    if (unit == "mhz") return 1e6;
    if (unit == "ghz") return 1e9;
    throw Error(ErrorKind::io, "unknown Touchstone frequency unit '" + unit + "'");
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream s(line);
    while (std::getline(s, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

} // namespace

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return {buf.data(), res.ptr};
}

double parse_double(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::io, "malformed number '" + std::string(text) + "'");
    }
    return value;
}

// ---------------------------------------------------------------------------

void write_touchstone(std::ostream& out, std::span<const SParameterBlock> sweep)
{
    if (sweep.empty()) {
        throw Error(ErrorKind::dimension, "cannot write an empty sweep");
    }
    const auto n = sweep.front().matrix.rows();
    const double z0 = sweep.front().reference_impedance;
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        const auto& b = sweep[k];
        if (b.matrix.rows() != n || b.matrix.cols() != n || n < 1) {
            throw Error(ErrorKind::dimension, "S block " + std::to_string(k) + " has a different port count");
        }
        if (b.reference_impedance != z0) {
            throw Error(ErrorKind::dimension, "S block " + std::to_string(k) + " has a different reference impedance");
        }
        if (k > 0 && !(b.frequency > sweep[k - 1].frequency)) {
            throw Error(ErrorKind::dimension, "sweep frequencies must be strictly ascending");
        }
    }

    out << "! " << n << "-port S-parameters, lumped coupled-line network\n";
    out << "# Hz S RI R " << format_double(z0) << '\n';
    for (const auto& b : sweep) {
        std::string line = format_double(b.frequency);
        if (n == 2) {
            append_pair(line, b.matrix(0, 0));
            append_pair(line, b.matrix(1, 0));
            append_pair(line, b.matrix(0, 1));
            append_pair(line, b.matrix(1, 1));
            out << line << '\n';
            continue;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index c = 0; c < n; ++c) {
                if (c > 0 && c % 4 == 0) {
                    out << line << '\n';
                    line.clear();
                }
                append_pair(line, b.matrix(r, c));
            }
            out << line << '\n';
            line.clear();
        }
    }
}

void export_touchstone(std::span<const SParameterBlock> sweep, const std::filesystem::path& path)
{
    // Render first so nothing is created on a validation failure.
    std::ostringstream buffer;
    write_touchstone(buffer, sweep);
    auto out = open_for_write(path);
    out << buffer.str();
    finish_write(out, path);
}

TouchstoneDocument read_touchstone(std::istream& in, int num_ports)
{
    if (num_ports < 1) {
        throw Error(ErrorKind::io, "Touchstone port count must be >= 1");
    }
    TouchstoneDocument doc;
    doc.num_ports = num_ports;
    double scale = 1e9; // v1 default unit is GHz
    enum class Format { ri, ma, db } format = Format::ma;
    bool saw_option = false;

    std::vector<double> numbers;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto bang = line.find('!'); bang != std::string::npos) {
            line.erase(bang);
        }
        std::istringstream tokens(line);
        std::string tok;
        if (!(tokens >> tok)) {
            continue;
        }
        if (tok[0] == '#') {
            if (saw_option) {
                continue; // later option lines are ignored
            }
            saw_option = true;
            std::vector<std::string> opts;
            if (tok.size() > 1) {
                opts.push_back(tok.substr(1));
            }
            while (tokens >> tok) {
                opts.push_back(tok);
            }
            for (std::size_t i = 0; i < opts.size(); ++i) {
                std::string o = opts[i];
                std::transform(o.begin(), o.end(), o.begin(), [](unsigned char c) { return std::tolower(c); });
                if (o == "hz" || o == "khz" || o == "mhz" || o == "ghz") {
                    scale = frequency_scale(o);
                } else if (o == "ri") {
                    format = Format::ri;
                } else if (o == "ma") {
                    format = Format::ma;
                } else if (o == "db") {
                    format = Format::db;
                } else if (o == "r" && i + 1 < opts.size()) {
                    doc.reference_impedance = parse_double(opts[++i]);
                } else if (o != "s") {
                    throw Error(ErrorKind::io, "unsupported Touchstone option '" + opts[i] + "'");
                }
            }
            continue;
        }
        do {
            numbers.push_back(parse_double(tok));
        } while (tokens >> tok);
    }

    const std::size_t n = static_cast<std::size_t>(num_ports);
    const std::size_t arity = 1 + 2 * n * n;
    if (numbers.size() % arity != 0) {
        throw Error(ErrorKind::io, "Touchstone data count " + std::to_string(numbers.size()) +
                                       " is not a multiple of the record size " + std::to_string(arity));
    }
    for (std::size_t rec = 0; rec < numbers.size() / arity; ++rec) {
        const double* v = numbers.data() + rec * arity;
        SParameterBlock block;
        block.frequency = v[0] * scale;
        block.reference_impedance = doc.reference_impedance;
        block.matrix.resize(num_ports, num_ports);
        for (std::size_t k = 0; k < n * n; ++k) {
            const double a = v[1 + 2 * k];
            const double b = v[2 + 2 * k];
            cd value;
            switch (format) {
            case Format::ri: value = {a, b}; break;
            case Format::ma: value = std::polar(a, b * std::numbers::pi / 180.0); break;
            case Format::db: value = std::polar(std::pow(10.0, a / 20.0), b * std::numbers::pi / 180.0); break;
            }
            auto r = static_cast<Eigen::Index>(k / n);
            auto c = static_cast<Eigen::Index>(k % n);
            if (n == 2) {
                std::swap(r, c); // S11 S21 S12 S22
            }
            block.matrix(r, c) = value;
        }
        if (!doc.blocks.empty() && !(block.frequency > doc.blocks.back().frequency)) {
            throw Error(ErrorKind::io, "Touchstone frequencies are not strictly ascending");
        }
        doc.blocks.push_back(std::move(block));
    }
    return doc;
}

TouchstoneDocument read_touchstone(const std::filesystem::path& path, int num_ports)
{
    if (num_ports <= 0) {
        static const std::regex ext(R"(\.s(\d+)p)", std::regex::icase);
        std::smatch match;
        const std::string e = path.extension().string();
        if (!std::regex_match(e, match, ext)) {
            throw Error(ErrorKind::io, "cannot infer port count from " + path.string());
        }
        num_ports = std::stoi(match[1].str());
    }
    auto in = open_for_read(path);
    return read_touchstone(in, num_ports);
}

// ---------------------------------------------------------------------------

void export_csv_evolution(std::span<const double> z_samples, const Eigen::MatrixXd& magnitudes,
                          const std::filesystem::path& path)
{
    if (z_samples.empty() || magnitudes.cols() < 1 ||
        magnitudes.rows() != static_cast<Eigen::Index>(z_samples.size())) {
        throw Error(ErrorKind::dimension, "evolution table must be nonempty with one row per z sample");
    }
    std::ostringstream buf;
    buf << "z_m";
    for (Eigen::Index c = 0; c < magnitudes.cols(); ++c) {
        buf << ",line_" << c + 1;
    }
    buf << '\n';
    for (Eigen::Index r = 0; r < magnitudes.rows(); ++r) {
        buf << format_double(z_samples[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < magnitudes.cols(); ++c) {
            buf << ',' << format_double(magnitudes(r, c));
        }
        buf << '\n';
    }
    auto out = open_for_write(path);
    out << buf.str();
    finish_write(out, path);
}

EvolutionTable read_csv_evolution(const std::filesystem::path& path)
{
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::io, path.string() + " is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "z_m") {
        throw Error(ErrorKind::io, path.string() + " lacks the z_m header");
    }
    const auto cols = static_cast<Eigen::Index>(header.size() - 1);
    std::vector<std::vector<double>> rows;
    EvolutionTable table;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::io, "ragged row in " + path.string());
        }
        table.z.push_back(parse_double(fields[0]));
        std::vector<double> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.push_back(parse_double(fields[i]));
        }
        rows.push_back(std::move(row));
    }
    table.magnitudes.resize(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            table.magnitudes(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
        }
    }
    return table;
}

void write_transform_report(std::ostream& out, const TransformReport& report)
{
    const auto m = report.lattice_output.size();
    const bool has_circuit = report.circuit_output.size() == m;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << "port,lattice_mag,lattice_phase_rad,circuit_mag,circuit_phase_rad,delta_mag,delta_phase_rad\n";
    for (Eigen::Index i = 0; i < m; ++i) {
        const cd l = report.lattice_output(i);
        out << i + 1 << ',' << format_double(std::abs(l)) << ',' << format_double(std::arg(l));
        if (has_circuit) {
            const cd c = report.circuit_output(i);
            out << ',' << format_double(std::abs(c)) << ',' << format_double(std::arg(c)) << ','
                << format_double(report.magnitude_error.per_port(i)) << ','
                << format_double(report.phase_error.per_port(i));
        } else {
            for (int k = 0; k < 4; ++k) {
                out << ',' << format_double(nan);
            }
        }
        out << '\n';
    }
}

void export_transform_report(const TransformReport& report, const std::filesystem::path& path)
{
    std::ostringstream buf;
    write_transform_report(buf, report);
    auto out = open_for_write(path);
    out << buf.str();
    finish_write(out, path);
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
T take(const json& obj, const char* key)
{
    if (!obj.contains(key)) {
        throw Error(ErrorKind::config, std::string("missing key '") + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
void take_optional(const json& obj, const char* key, T& target)
{
    if (obj.contains(key)) {
        target = take<T>(obj, key);
    }
}

json parse_object(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorKind::config, "document root must be an object");
    }
    return doc;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known)
{
    for (const auto& item : obj.items()) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return item.key() == k; }) == known.end()) {
            throw Error(ErrorKind::config, "unknown key '" + item.key() + "'");
        }
    }
}

} // namespace

DesignSpec design_spec_from_json(const std::string& text)
{
    json doc = parse_object(text);
    if (doc.contains("design")) {
        doc = doc.at("design");
        if (!doc.is_object()) {
            throw Error(ErrorKind::config, "'design' must be an object");
        }
    }
    reject_unknown(doc, {"num_lines", "alpha", "center_frequency_hz", "kappa_max", "line_impedance_ohm",
                         "cells_per_guided_wavelength", "effective_permittivity", "balanced_loading"});
    DesignSpec spec;
    spec.num_lines = take<int>(doc, "num_lines");
    spec.alpha = take<double>(doc, "alpha");
    spec.center_frequency = take<double>(doc, "center_frequency_hz");
    spec.kappa_max = take<double>(doc, "kappa_max");
    take_optional(doc, "line_impedance_ohm", spec.line_impedance);
    take_optional(doc, "cells_per_guided_wavelength", spec.cells_per_guided_wavelength);
    take_optional(doc, "effective_permittivity", spec.effective_permittivity);
    take_optional(doc, "balanced_loading", spec.balanced_loading);
    return spec;
}

std::string design_spec_to_json(const DesignSpec& spec)
{
    json doc = {{"num_lines", spec.num_lines},
                {"alpha", spec.alpha},
                {"center_frequency_hz", spec.center_frequency},
                {"kappa_max", spec.kappa_max},
                {"line_impedance_ohm", spec.line_impedance},
                {"cells_per_guided_wavelength", spec.cells_per_guided_wavelength},
                {"effective_permittivity", spec.effective_permittivity},
                {"balanced_loading", spec.balanced_loading}};
    return doc.dump(2) + "\n";
}

std::string design_result_to_json(const DesignResult& design)
{
    const auto& c = design.cell_params;
    json doc;
    doc["jx_spec"] = {{"num_lines", design.jx_spec.num_lines},
                      {"kappa0", design.jx_spec.kappa0},
                      {"beta0", design.jx_spec.beta0},
                      {"length_m", design.jx_spec.length}};
    doc["cell"] = {{"num_lines", c.num_lines},
                   {"series_inductance_h", c.series_inductance},
                   {"shunt_capacitance_f", c.shunt_capacitance},
                   {"coupling_capacitances_f", c.coupling_capacitances},
                   {"pitch_m", c.pitch},
                   {"num_cells", c.num_cells},
                   {"balanced_loading", c.balanced_loading}};
    doc["guided_wavelength_m"] = design.guided_wavelength;
    doc["achieved_alpha"] = design.achieved_alpha;
    doc["center_frequency_hz"] = design.center_frequency;
    doc["reference_impedance_ohm"] = design.reference_impedance;
    return doc.dump(2) + "\n";
}

DesignResult design_result_from_json(const std::string& text)
{
    const json doc = parse_object(text);
    const auto jx = take<json>(doc, "jx_spec");
    const auto cell = take<json>(doc, "cell");

    DesignResult d;
    d.jx_spec.num_lines = take<int>(jx, "num_lines");
    d.jx_spec.kappa0 = take<double>(jx, "kappa0");
    d.jx_spec.beta0 = take<double>(jx, "beta0");
    d.jx_spec.length = take<double>(jx, "length_m");

    auto& c = d.cell_params;
    c.num_lines = take<int>(cell, "num_lines");
    c.series_inductance = take<double>(cell, "series_inductance_h");
    c.shunt_capacitance = take<double>(cell, "shunt_capacitance_f");
    c.coupling_capacitances = take<std::vector<double>>(cell, "coupling_capacitances_f");
    c.pitch = take<double>(cell, "pitch_m");
    c.num_cells = take<int>(cell, "num_cells");
    c.balanced_loading = take<bool>(cell, "balanced_loading");

    d.guided_wavelength = take<double>(doc, "guided_wavelength_m");
    d.achieved_alpha = take<double>(doc, "achieved_alpha");
    d.center_frequency = take<double>(doc, "center_frequency_hz");
    d.reference_impedance = take<double>(doc, "reference_impedance_ohm");

    try {
        d.jx_spec.validate();
        c.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::config, std::string("design file: ") + e.what());
    }
    if (c.num_lines != d.jx_spec.num_lines) {
        throw Error(ErrorKind::config, "design file: lattice and cell line counts differ");
    }
    return d;
}

std::string read_text_file(const std::filesystem::path& path)
{
    auto in = open_for_read(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents)
{
    auto out = open_for_write(path);
    out << contents;
    finish_write(out, path);
}

} // namespace mcln

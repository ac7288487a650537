#ifndef MCLN_IO_HPP
#define MCLN_IO_HPP

#include "mcln/circuit.hpp"
#include "mcln/synthesis.hpp"
#include "mcln/transform.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mcln {

// Shortest text form that parses back to the same double (17 significant
// digits at most), independent of the global locale.
std::string format_double(double value);
double parse_double(std::string_view text);

// ---------------------------------------------------------------------------
// Touchstone v1 (`# Hz S RI R <Z0>`). Two-port files put S11 S21 S12 S22 on a
// single line; larger files write the matrix row by row with at most four
// real/imaginary pairs per line, each row starting a new line.

struct TouchstoneDocument {
    int num_ports = 0;
    double reference_impedance = 50.0;
    std::vector<SParameterBlock> blocks;
};

void write_touchstone(std::ostream& out, std::span<const SParameterBlock> sweep);

// Validates before touching the filesystem: an empty or ragged sweep leaves no file.
void export_touchstone(std::span<const SParameterBlock> sweep, const std::filesystem::path& path);

// Port count from the `.sNp` extension unless num_ports > 0.
TouchstoneDocument read_touchstone(std::istream& in, int num_ports);
TouchstoneDocument read_touchstone(const std::filesystem::path& path, int num_ports = 0);

// ---------------------------------------------------------------------------
// CSV

// Header `z_m,line_1,...,line_M`, one row per z sample.
void export_csv_evolution(std::span<const double> z_samples, const Eigen::MatrixXd& magnitudes,
                          const std::filesystem::path& path);

struct EvolutionTable {
    std::vector<double> z;
    Eigen::MatrixXd magnitudes;
};
EvolutionTable read_csv_evolution(const std::filesystem::path& path);

// Columns: port,lattice_mag,lattice_phase_rad,circuit_mag,circuit_phase_rad,delta_mag,delta_phase_rad.
// Reports without a circuit route (circuit_output empty) write nan in the circuit columns.
void write_transform_report(std::ostream& out, const TransformReport& report);
void export_transform_report(const TransformReport& report, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Design documents (JSON)

DesignSpec design_spec_from_json(const std::string& text);
std::string design_spec_to_json(const DesignSpec& spec);

std::string design_result_to_json(const DesignResult& design);
DesignResult design_result_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace mcln

#endif

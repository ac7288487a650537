#ifndef MCLN_CIRCUIT_HPP
#define MCLN_CIRCUIT_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mcln {

// Lumped column cell of an M-line network: L/2 - shunt node - L/2 on every
// line, with coupling capacitors between adjacent nodes. Values are per cell.
//
// With balanced_loading the capacitance from node i to ground is reduced by
// the coupling capacitors touching it, so every node carries the same total
// capacitance shunt_capacitance. Otherwise every node has shunt_capacitance to
// ground plus its coupling capacitors.
struct UnitCellParams {
    int num_lines = 1;
    double series_inductance = 0.0;
    double shunt_capacitance = 0.0;
    std::vector<double> coupling_capacitances;
    double pitch = 0.0;
    int num_cells = 1;
    bool balanced_loading = false;

    void validate() const;

    // Capacitance from the node of `line` (0-based) to ground.
    double ground_capacitance(int line) const;
};

// 2M x 2M chain matrix [A B; C D] relating (V_in, I_in) to (V_out, I_out),
// output current flowing out of the cell.
struct BlockTransmissionMatrix {
    Eigen::MatrixXcd matrix;

    int ports_per_side() const { return static_cast<int>(matrix.rows() / 2); }
    Eigen::MatrixXcd A() const;
    Eigen::MatrixXcd B() const;
    Eigen::MatrixXcd C() const;
    Eigen::MatrixXcd D() const;
};

// Ports 0..M-1 are the left (input) ends of lines 1..M, ports M..2M-1 the
// right (output) ends in the same order.
struct SParameterBlock {
    double frequency = 0.0;
    double reference_impedance = 50.0;
    Eigen::MatrixXcd matrix;
};

Eigen::MatrixXcd vertical_admittance_matrix(const UnitCellParams& params, double omega);

BlockTransmissionMatrix unit_cell_matrix(const UnitCellParams& params, double omega);

// cell^N by binary exponentiation.
BlockTransmissionMatrix cascade_network(const BlockTransmissionMatrix& cell, int num_cells);

// Z11 = A C^-1, Z12 = A C^-1 D - B, Z21 = C^-1, Z22 = C^-1 D. A C block with
// reciprocal condition below 1e-12, or whose smallest gain relative to the
// chain matrix normalized by reference_impedance is below 1e-12, raises
// ErrorKind::degenerate_network. `frequency` only labels the message.
Eigen::MatrixXcd abcd_to_impedance(const BlockTransmissionMatrix& T, double frequency = 0.0,
                                   double reference_impedance = 50.0);

// S = (Z/Z0 - I)(Z/Z0 + I)^-1.
SParameterBlock impedance_to_scattering(const Eigen::MatrixXcd& Z, double reference_impedance, double frequency = 0.0);

// Full chain: cell -> cascade -> Z -> S at one frequency (Hz).
SParameterBlock network_response(const UnitCellParams& params, double frequency, double reference_impedance);

// Linear grid; both ends included.
std::vector<double> frequency_grid(double f_start, double f_stop, int points);

struct SweepPoint {
    double frequency = 0.0;
    std::optional<SParameterBlock> block; // empty at a degenerate frequency
    std::string failure;
};

struct SweepResult {
    std::vector<SweepPoint> points;

    std::vector<SParameterBlock> valid_blocks() const;
    std::size_t degenerate_count() const;
};

// One S block per grid frequency; the frequency loop runs under OpenMP.
// Degenerate points are recorded and do not stop the sweep.
SweepResult frequency_sweep(const UnitCellParams& params, double f_start, double f_stop, int points,
                            double reference_impedance = 50.0);

// Single-threaded reference for frequency_sweep.
SweepResult frequency_sweep_serial(const UnitCellParams& params, double f_start, double f_stop, int points,
                                   double reference_impedance = 50.0);

struct SymmetryReport {
    double max_deviation = 0.0;
    int worst_output = 0; // 0-based line indices of the worst entry
    int worst_input = 0;
};

// Mirror symmetry of the transmission block: max | |S_out(i),in(j)| - |S_out(M-1-i),in(M-1-j)| |.
SymmetryReport check_port_symmetry(const SParameterBlock& block, int num_lines);

// max |S^H S - I| and max |S - S^T|.
double losslessness_error(const Eigen::MatrixXcd& S);
double reciprocity_error(const Eigen::MatrixXcd& S);

// max |T^T J T - J| with J = [0 I; -I 0].
double symplectic_error(const BlockTransmissionMatrix& T);

} // namespace mcln

#endif

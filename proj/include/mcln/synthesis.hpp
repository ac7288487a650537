#ifndef MCLN_SYNTHESIS_HPP
#define MCLN_SYNTHESIS_HPP

#include "mcln/circuit.hpp"
#include "mcln/lattice.hpp"

#include <string>

namespace mcln {

// Target of the design procedure.
struct DesignSpec {
    int num_lines = 16;
    double alpha = 1.0;
    double center_frequency = 2.5e9; // Hz
    double kappa_max = 1.0;          // rad/m, largest realizable pair coupling
    double line_impedance = 50.0;    // ohm
    int cells_per_guided_wavelength = 10;
    double effective_permittivity = 1.0;
    bool balanced_loading = true;

    void validate() const;
};

struct DesignResult {
    JxSpec jx_spec;
    UnitCellParams cell_params;
    double guided_wavelength = 0.0; // m
    double achieved_alpha = 0.0;
    double center_frequency = 0.0;  // Hz
    double reference_impedance = 50.0;
};

struct HomogeneityCheck {
    bool pass = false;
    double ratio = 0.0; // p / lambda_g
};

HomogeneityCheck homogeneity_check(double pitch, double guided_wavelength, int margin = 10);

// Even/odd Bloch analysis of a two-line cell: each mode is a scalar
// L/2 - C_mode - L/2 section with cos(beta p) = (A + D)/2, and
// kappa = (beta_odd - beta_even)/2. Unbalanced loading uses C_even = C,
// C_odd = C + 2 C1; balanced loading uses C - C1 and C + C1.
double extract_coupling(const UnitCellParams& two_line_cell, double omega);

// Pair `pair` (0-based) of an M-line cell reduced to an isolated two-line cell.
UnitCellParams pair_cell(const UnitCellParams& cell, int pair);

// Largest C1 for which both modes of the reduced two-line cell stay in the passband.
double coupling_capacitance_ceiling(const UnitCellParams& base_cell, double omega);

// Bisection on C1 in [0, ceiling] so that extract_coupling hits target_kappa.
double solve_coupling_capacitance(double target_kappa, const UnitCellParams& base_cell, double omega);

DesignResult synthesize_design(const DesignSpec& spec);

// Pair couplings of a design recovered with extract_coupling at its center frequency.
Eigen::VectorXd extracted_couplings(const DesignResult& design);

} // namespace mcln

#endif

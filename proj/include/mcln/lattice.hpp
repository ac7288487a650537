#ifndef MCLN_LATTICE_HPP
#define MCLN_LATTICE_HPP

#include <Eigen/Dense>

#include <span>

namespace mcln {

using SignalVector = Eigen::VectorXcd;

// Ideal Jx coupled-line array: M lines of propagation constant beta0 (rad/m)
// with couplings kappa0/2 * sqrt((M-i) i) over a length in meters.
struct JxSpec {
    int num_lines = 2;
    double kappa0 = 1.0;
    double beta0 = 0.0;
    double length = 0.0;

    void validate() const;

    // alpha = kappa0 * L / (pi/2)
    double order() const;
};

// Real symmetric tridiagonal matrix H of the coupled-mode equations da/dz = -j H a.
struct CoupledModeMatrix {
    Eigen::VectorXd diagonal;
    Eigen::VectorXd off_diagonal;

    int size() const { return static_cast<int>(diagonal.size()); }
    Eigen::MatrixXd dense() const;
};

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // columns paired with eigenvalues
    int iterations = 0;           // total QL sweeps
};

// T = exp(j * global_phase) * entries. global_phase is zero unless the
// common propagation phase was factored out.
struct TransferMatrix {
    Eigen::MatrixXcd entries;
    double global_phase = 0.0;

    int size() const { return static_cast<int>(entries.rows()); }
    Eigen::MatrixXcd full() const;
};

enum class GlobalPhase { keep, strip };

Eigen::VectorXd jx_couplings(int num_lines, double kappa0);

CoupledModeMatrix coupled_mode_matrix(const JxSpec& spec);

// Throws ErrorKind::invalid_spec on size or symmetric-structure violations.
CoupledModeMatrix make_coupled_mode_matrix(Eigen::VectorXd diagonal, Eigen::VectorXd off_diagonal);

// Implicit-shift QL on the tridiagonal form. Eigenvector signs are fixed so
// the first nonzero component of each column is positive.
SpectralDecomposition spectral_decomposition(const CoupledModeMatrix& H);

// exp(-j H L) through the spectral form. GlobalPhase::strip factors out
// exp(-j beta0 L) with beta0 the mean of the diagonal.
TransferMatrix transfer_matrix(const CoupledModeMatrix& H, double length,
                               GlobalPhase phase = GlobalPhase::keep);
TransferMatrix transfer_matrix(const CoupledModeMatrix& H, const SpectralDecomposition& spectrum,
                               double length, GlobalPhase phase = GlobalPhase::keep);

// K_alpha = sum_m exp(-j pi/2 alpha m) phi_m phi_m^T with m = -(M-1)/2 .. (M-1)/2
// the ascending spectral rank of the Jx eigenvectors phi_m.
TransferMatrix dfrft_matrix(int num_lines, double alpha);

enum class Conversion { length_to_order, order_to_length };

double convert_order_length(double kappa0, double value, Conversion direction);
inline double fractional_order(double kappa0, double length)
{
    return convert_order_length(kappa0, length, Conversion::length_to_order);
}
inline double network_length(double kappa0, double alpha)
{
    return convert_order_length(kappa0, alpha, Conversion::order_to_length);
}

// Unitary DFT, F(k,n) = exp(-j 2 pi k n / M) / sqrt(M).
TransferMatrix dft_matrix(int num_lines);

// Mirror permutation, ones on the antidiagonal.
Eigen::MatrixXd parity_matrix(int num_lines);

// Index reversal modulo M, x_n -> x_(-n mod M). This is F^2 for the DFT;
// it keeps index 0 fixed, unlike the lattice mirror.
Eigen::MatrixXd dft_parity_matrix(int num_lines);

// |a_i(z)| for each z sample (rows) and line (columns). Parallel over z.
Eigen::MatrixXd field_evolution(const CoupledModeMatrix& H, const SignalVector& input,
                                std::span<const double> z_samples);

// Single-threaded reference for field_evolution.
Eigen::MatrixXd field_evolution_serial(const CoupledModeMatrix& H, const SignalVector& input,
                                       std::span<const double> z_samples);

} // namespace mcln

#endif

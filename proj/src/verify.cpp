#include "mcln/verify.hpp"

#include "mcln/circuit.hpp"
#include "mcln/lattice.hpp"
#include "mcln/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

namespace mcln {

namespace {

using cd = std::complex<double>;

CheckResult check(std::string name, double value, double tolerance)
{
    return {std::move(name), value, tolerance, std::isfinite(value) && value < tolerance};
}

double max_abs(const Eigen::MatrixXcd& M)
{
    return M.cwiseAbs().maxCoeff();
}

double unitarity_error(const Eigen::MatrixXcd& T)
{
    return max_abs(T.adjoint() * T - Eigen::MatrixXcd::Identity(T.rows(), T.cols()));
}

double eigenvalue_spacing_error(int m, double kappa0)
{
    const auto s = spectral_decomposition(coupled_mode_matrix({m, kappa0, 0.0, 0.0}));
    double err = 0.0;
    for (Eigen::Index k = 0; k + 1 < s.eigenvalues.size(); ++k) {
        err = std::max(err, std::abs(s.eigenvalues(k + 1) - s.eigenvalues(k) - kappa0));
    }
    return err;
}

} // namespace

double phase_aligned_distance(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B)
{
    const cd overlap = (B.adjoint() * A).trace();
    const cd rotation = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd{1.0, 0.0};
    return max_abs(A - rotation * B);
}

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& o)
{
    std::vector<CheckResult> out;
    const int m = o.num_lines;
    const JxSpec spec{m, o.kappa0, 0.0, network_length(o.kappa0, o.alpha)};
    const auto H = coupled_mode_matrix(spec);
    const auto spectrum = spectral_decomposition(H);
    const Eigen::MatrixXd& V = spectrum.eigenvectors;

    out.push_back(check("jx_eigenvalue_spacing", eigenvalue_spacing_error(m, o.kappa0), 1e-9));
    out.push_back(check("eigenvector_orthonormality",
                        (V.transpose() * V - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-12));
    out.push_back(check("spectral_reconstruction",
                        (V * spectrum.eigenvalues.asDiagonal() * V.transpose() - H.dense()).cwiseAbs().maxCoeff(),
                        1e-10));

    const Eigen::MatrixXcd T = transfer_matrix(H, spectrum, spec.length).full();
    double unitarity = unitarity_error(T);
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> lines(2, 32);
    std::uniform_real_distribution<double> order(0.0, 8.0);
    for (int k = 0; k < o.random_cases; ++k) {
        const int mk = lines(rng);
        const double ak = order(rng);
        unitarity = std::max(unitarity, unitarity_error(dfrft_matrix(mk, ak).entries));
    }
    out.push_back(check("transfer_unitarity", unitarity, 1e-10));

    const Eigen::MatrixXcd K = dfrft_matrix(m, o.alpha).entries;
    out.push_back(check("dfrft_matches_transfer", phase_aligned_distance(T, K), 1e-9));
    out.push_back(check("dfrft_identity_at_zero",
                        max_abs(dfrft_matrix(m, 0.0).entries - Eigen::MatrixXcd::Identity(m, m)), 1e-12));
    const Eigen::MatrixXd P = parity_matrix(m);
    out.push_back(check("dfrft_parity_at_two", (dfrft_matrix(m, 2.0).entries.cwiseAbs() - P).cwiseAbs().maxCoeff(),
                        1e-9));
    const double second = 0.37;
    out.push_back(check("dfrft_additivity",
                        phase_aligned_distance(K * dfrft_matrix(m, second).entries,
                                               dfrft_matrix(m, o.alpha + second).entries),
                        1e-9));
    out.push_back(check("dfrft_periodicity",
                        (dfrft_matrix(m, o.alpha + 4.0).entries.cwiseAbs() - K.cwiseAbs()).cwiseAbs().maxCoeff(),
                        1e-10));
    const Eigen::MatrixXcd Pc = P.cast<cd>();
    out.push_back(check("mirror_commutation", max_abs(T * Pc - Pc * T), 1e-9));

    double dft_square = 0.0;
    double dft_fourth = 0.0;
    double dft_eigen = 0.0;
    for (int mk : {4, 8, 16, m}) {
        const Eigen::MatrixXcd F = dft_matrix(mk).entries;
        const Eigen::MatrixXcd F2 = F * F;
        dft_square = std::max(dft_square, max_abs(F2 - dft_parity_matrix(mk).cast<cd>()));
        dft_fourth = std::max(dft_fourth, max_abs(F2 * F2 - Eigen::MatrixXcd::Identity(mk, mk)));
        const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(F, false);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const cd ev = es.eigenvalues()(k);
            double nearest = std::abs(ev - 1.0);
            for (cd root : {cd{0, 1}, cd{-1, 0}, cd{0, -1}}) {
                nearest = std::min(nearest, std::abs(ev - root));
            }
            dft_eigen = std::max(dft_eigen, nearest);
        }
    }
    out.push_back(check("dft_square_is_parity", dft_square, 1e-10));
    out.push_back(check("dft_fourth_power_identity", dft_fourth, 1e-10));
    out.push_back(check("dft_eigenvalues_fourth_roots", dft_eigen, 1e-9));

    if (!o.circuit) {
        return out;
    }

    DesignSpec ds;
    ds.num_lines = m;
    ds.alpha = o.alpha;
    ds.center_frequency = o.center_frequency;
    ds.kappa_max = o.kappa_max;
    ds.effective_permittivity = o.effective_permittivity;
    const auto design = synthesize_design(ds);

    const auto sweep = frequency_sweep(design.cell_params, 0.8 * o.center_frequency, 1.2 * o.center_frequency,
                                       o.sweep_points, design.reference_impedance);
    double lossless = 0.0;
    double reciprocal = 0.0;
    for (const auto& b : sweep.valid_blocks()) {
        lossless = std::max(lossless, losslessness_error(b.matrix));
        reciprocal = std::max(reciprocal, reciprocity_error(b.matrix));
    }
    if (sweep.valid_blocks().empty()) {
        lossless = reciprocal = std::numeric_limits<double>::infinity();
    }
    out.push_back(check("circuit_losslessness", lossless, 1e-8));
    out.push_back(check("circuit_reciprocity", reciprocal, 1e-8));

    const auto center =
        network_response(design.cell_params, design.center_frequency, design.reference_impedance);
    out.push_back(check("circuit_mirror_symmetry", check_port_symmetry(center, m).max_deviation, 1e-8));

    const double omega = 2.0 * std::numbers::pi * design.center_frequency;
    const auto cell = unit_cell_matrix(design.cell_params, omega);
    out.push_back(check("cell_symplectic", symplectic_error(cell), 1e-8));
    Eigen::MatrixXcd sequential = cell.matrix;
    const int cascade_cells = 64;
    for (int k = 1; k < cascade_cells; ++k) {
        sequential = sequential * cell.matrix;
    }
    const Eigen::MatrixXcd binary = cascade_network(cell, cascade_cells).matrix;
    out.push_back(check("cascade_consistency", max_abs(binary - sequential) / max_abs(sequential), 1e-10));

    const Eigen::VectorXd target = jx_couplings(m, design.jx_spec.kappa0);
    const Eigen::VectorXd extracted = extracted_couplings(design);
    out.push_back(
        check("calibration_profile", ((extracted - target).cwiseAbs().array() / target.array()).maxCoeff(), 1e-5));
    return out;
}

} // namespace mcln

#include "mcln/lattice.hpp"

#include "mcln/errors.hpp"
#include "tridiagonal_ql.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace mcln {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void require_lines(int num_lines)
{
    if (num_lines < 2) {
        throw Error(ErrorKind::invalid_spec, "num_lines must be >= 2, got " + std::to_string(num_lines));
    }
}

void require_kappa0(double kappa0)
{
    if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) {
        throw Error(ErrorKind::invalid_spec, "kappa0 must be > 0, got " + std::to_string(kappa0));
    }
}

// Propagate the spectral components of `coefficients` to z.
Eigen::VectorXd propagated_magnitudes(const SpectralDecomposition& spectrum, const Eigen::VectorXcd& coefficients,
                                      double z)
{
    Eigen::VectorXcd phased(coefficients.size());
    for (Eigen::Index n = 0; n < coefficients.size(); ++n) {
        phased(n) = std::exp(-I * spectrum.eigenvalues(n) * z) * coefficients(n);
    }
    return (spectrum.eigenvectors.cast<cd>() * phased).cwiseAbs();
}

void check_evolution_inputs(const CoupledModeMatrix& H, const SignalVector& input, std::span<const double> z_samples)
{
    if (input.size() != H.size()) {
        throw Error(ErrorKind::dimension, "input length " + std::to_string(input.size()) +
                                              " does not match lattice size " + std::to_string(H.size()));
    }
    for (std::size_t k = 0; k < z_samples.size(); ++k) {
        if (!(z_samples[k] >= 0.0)) {
            throw Error(ErrorKind::invalid_spec, "z samples must be nonnegative");
        }
        if (k > 0 && z_samples[k] < z_samples[k - 1]) {
            throw Error(ErrorKind::invalid_spec, "z samples must be ascending");
        }
    }
}

} // namespace

void JxSpec::validate() const
{
    require_lines(num_lines);
    require_kappa0(kappa0);
    if (!(beta0 >= 0.0) || !std::isfinite(beta0)) {
        throw Error(ErrorKind::invalid_spec, "beta0 must be >= 0");
    }
    if (!(length >= 0.0) || !std::isfinite(length)) {
        throw Error(ErrorKind::invalid_spec, "length must be >= 0");
    }
    if (!std::isfinite(order())) {
        throw Error(ErrorKind::invalid_spec, "fractional order is not finite");
    }
}

double JxSpec::order() const
{
    return kappa0 * length / (std::numbers::pi / 2.0);
}

Eigen::MatrixXd CoupledModeMatrix::dense() const
{
    const Eigen::Index n = diagonal.size();
    Eigen::MatrixXd H = diagonal.asDiagonal();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        H(i, i + 1) = off_diagonal(i);
        H(i + 1, i) = off_diagonal(i);
    }
    return H;
}

Eigen::MatrixXcd TransferMatrix::full() const
{
    return std::exp(I * global_phase) * entries;
}

Eigen::VectorXd jx_couplings(int num_lines, double kappa0)
{
    require_lines(num_lines);
    require_kappa0(kappa0);
    Eigen::VectorXd kappa(num_lines - 1);
    for (int i = 1; i < num_lines; ++i) {
        kappa(i - 1) = 0.5 * kappa0 * std::sqrt(static_cast<double>(num_lines - i) * i);
    }
    return kappa;
}

CoupledModeMatrix coupled_mode_matrix(const JxSpec& spec)
{
    spec.validate();
    return {Eigen::VectorXd::Constant(spec.num_lines, spec.beta0), jx_couplings(spec.num_lines, spec.kappa0)};
}

CoupledModeMatrix make_coupled_mode_matrix(Eigen::VectorXd diagonal, Eigen::VectorXd off_diagonal)
{
    if (diagonal.size() < 1 || off_diagonal.size() != diagonal.size() - 1) {
        throw Error(ErrorKind::invalid_spec, "coupled-mode matrix needs M diagonal and M-1 off-diagonal entries");
    }
    if (!diagonal.allFinite() || !off_diagonal.allFinite()) {
        throw Error(ErrorKind::invalid_spec, "coupled-mode matrix entries must be finite");
    }
    return {std::move(diagonal), std::move(off_diagonal)};
}

SpectralDecomposition spectral_decomposition(const CoupledModeMatrix& H)
{
    auto raw = detail::tridiagonal_ql(H.diagonal, H.off_diagonal);
    const Eigen::Index n = raw.values.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return raw.values(a) < raw.values(b); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    out.iterations = raw.sweeps;
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = raw.values(order[static_cast<std::size_t>(k)]);
        Eigen::VectorXd v = raw.vectors.col(order[static_cast<std::size_t>(k)]);
        v.normalize();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(v(i)) > 1e-13) {
                if (v(i) < 0.0) {
                    v = -v;
                }
                break;
            }
        }
        out.eigenvectors.col(k) = v;
    }
    return out;
}

TransferMatrix transfer_matrix(const CoupledModeMatrix& H, double length, GlobalPhase phase)
{
    return transfer_matrix(H, spectral_decomposition(H), length, phase);
}

TransferMatrix transfer_matrix(const CoupledModeMatrix& H, const SpectralDecomposition& spectrum, double length,
                               GlobalPhase phase)
{
    if (!(length >= 0.0) || !std::isfinite(length)) {
        throw Error(ErrorKind::invalid_spec, "length must be >= 0");
    }
    const double reference = phase == GlobalPhase::strip ? H.diagonal.mean() : 0.0;
    const Eigen::Index n = spectrum.eigenvalues.size();

    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phases(k) = std::exp(-I * ((spectrum.eigenvalues(k) - reference) * length));
    }
    const Eigen::MatrixXcd V = spectrum.eigenvectors.cast<cd>();

    TransferMatrix T;
    T.entries = V * phases.asDiagonal() * V.transpose();
    T.global_phase = -reference * length;
    return T;
}

TransferMatrix dfrft_matrix(int num_lines, double alpha)
{
    require_lines(num_lines);
    if (!std::isfinite(alpha)) {
        throw Error(ErrorKind::invalid_spec, "alpha must be finite");
    }
    const auto spectrum = spectral_decomposition(coupled_mode_matrix({num_lines, 1.0, 0.0, 0.0}));
    const double half_span = 0.5 * (num_lines - 1);

    Eigen::VectorXcd phases(num_lines);
    for (int k = 0; k < num_lines; ++k) {
        const double rank = k - half_span;
        phases(k) = std::exp(-I * (std::numbers::pi / 2.0 * alpha * rank));
    }
    const Eigen::MatrixXcd V = spectrum.eigenvectors.cast<cd>();
    return {V * phases.asDiagonal() * V.transpose(), 0.0};
}

double convert_order_length(double kappa0, double value, Conversion direction)
{
    require_kappa0(kappa0);
    constexpr double quarter_turn = std::numbers::pi / 2.0;
    return direction == Conversion::length_to_order ? kappa0 * value / quarter_turn : quarter_turn * value / kappa0;
}

TransferMatrix dft_matrix(int num_lines)
{
    require_lines(num_lines);
    const double scale = 1.0 / std::sqrt(static_cast<double>(num_lines));
    Eigen::MatrixXcd F(num_lines, num_lines);
    for (int k = 0; k < num_lines; ++k) {
        for (int n = 0; n < num_lines; ++n) {
            // reduce k*n mod M first so the angle stays small
            const long kn = (static_cast<long>(k) * n) % num_lines;
            F(k, n) = scale * std::exp(-I * (2.0 * std::numbers::pi * static_cast<double>(kn) / num_lines));
        }
    }
    return {F, 0.0};
}

Eigen::MatrixXd parity_matrix(int num_lines)
{
    return Eigen::MatrixXd::Identity(num_lines, num_lines).rowwise().reverse();
}

Eigen::MatrixXd dft_parity_matrix(int num_lines)
{
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(num_lines, num_lines);
    for (int k = 0; k < num_lines; ++k) {
        P(k, (num_lines - k) % num_lines) = 1.0;
    }
    return P;
}

Eigen::MatrixXd field_evolution(const CoupledModeMatrix& H, const SignalVector& input, std::span<const double> z_samples)
{
    check_evolution_inputs(H, input, z_samples);
    const auto spectrum = spectral_decomposition(H);
    const Eigen::VectorXcd coefficients = spectrum.eigenvectors.transpose().cast<cd>() * input;

    const auto rows = static_cast<Eigen::Index>(z_samples.size());
    Eigen::MatrixXd out(rows, H.size());
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < rows; ++r) {
        out.row(r) = propagated_magnitudes(spectrum, coefficients, z_samples[static_cast<std::size_t>(r)]).transpose();
    }
    return out;
}

Eigen::MatrixXd field_evolution_serial(const CoupledModeMatrix& H, const SignalVector& input,
                                       std::span<const double> z_samples)
{
    check_evolution_inputs(H, input, z_samples);
    const auto spectrum = spectral_decomposition(H);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(z_samples.size()), H.size());
    for (std::size_t r = 0; r < z_samples.size(); ++r) {
        const Eigen::MatrixXcd T = transfer_matrix(H, spectrum, z_samples[r]).full();
        out.row(static_cast<Eigen::Index>(r)) = (T * input).cwiseAbs().transpose();
    }
    return out;
}

} // namespace mcln

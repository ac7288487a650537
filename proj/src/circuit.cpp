#include "mcln/circuit.hpp"

#include "mcln/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <iomanip>
#include <sstream>

namespace mcln {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
constexpr double min_rcond = 1e-12;

std::string frequency_label(double frequency)
{
    std::ostringstream s;
    s << " at " << std::setprecision(12) << frequency << " Hz";
    return s.str();
}

void require_omega(double omega)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorKind::invalid_frequency, "angular frequency must be > 0");
    }
}

} // namespace

void UnitCellParams::validate() const
{
    if (num_lines < 1) {
        throw Error(ErrorKind::invalid_spec, "unit cell needs at least one line");
    }
    if (!(series_inductance > 0.0) || !std::isfinite(series_inductance)) {
        throw Error(ErrorKind::invalid_spec, "series inductance must be > 0");
    }
    if (!(shunt_capacitance > 0.0) || !std::isfinite(shunt_capacitance)) {
        throw Error(ErrorKind::invalid_spec, "shunt capacitance must be > 0");
    }
    if (coupling_capacitances.size() != static_cast<std::size_t>(num_lines - 1)) {
        throw Error(ErrorKind::invalid_spec, "expected " + std::to_string(num_lines - 1) +
                                                 " coupling capacitances, got " +
                                                 std::to_string(coupling_capacitances.size()));
    }
    for (double c : coupling_capacitances) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw Error(ErrorKind::invalid_spec, "coupling capacitances must be >= 0");
        }
    }
    if (!(pitch > 0.0) || !std::isfinite(pitch)) {
        throw Error(ErrorKind::invalid_spec, "cell pitch must be > 0");
    }
    if (num_cells < 1) {
        throw Error(ErrorKind::invalid_spec, "num_cells must be >= 1");
    }
    for (int i = 0; i < num_lines; ++i) {
        if (ground_capacitance(i) < 0.0) {
            throw Error(ErrorKind::invalid_spec, "balanced loading leaves negative ground capacitance on line " +
                                                     std::to_string(i + 1));
        }
    }
}

double UnitCellParams::ground_capacitance(int line) const
{
    if (!balanced_loading) {
        return shunt_capacitance;
    }
    double c = shunt_capacitance;
    if (line > 0) {
        c -= coupling_capacitances[static_cast<std::size_t>(line - 1)];
    }
    if (line + 1 < num_lines) {
        c -= coupling_capacitances[static_cast<std::size_t>(line)];
    }
    return c;
}

Eigen::MatrixXcd BlockTransmissionMatrix::A() const
{
    const int m = ports_per_side();
    return matrix.topLeftCorner(m, m);
}

Eigen::MatrixXcd BlockTransmissionMatrix::B() const
{
    const int m = ports_per_side();
    return matrix.topRightCorner(m, m);
}

Eigen::MatrixXcd BlockTransmissionMatrix::C() const
{
    const int m = ports_per_side();
    return matrix.bottomLeftCorner(m, m);
}

Eigen::MatrixXcd BlockTransmissionMatrix::D() const
{
    const int m = ports_per_side();
    return matrix.bottomRightCorner(m, m);
}

Eigen::MatrixXcd vertical_admittance_matrix(const UnitCellParams& params, double omega)
{
    require_omega(omega);
    params.validate();
    const int m = params.num_lines;
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        Y(i, i) = I * omega * params.ground_capacitance(i);
    }
    for (int i = 0; i + 1 < m; ++i) {
        const cd yi = I * omega * params.coupling_capacitances[static_cast<std::size_t>(i)];
        Y(i, i) += yi;
        Y(i + 1, i + 1) += yi;
        Y(i, i + 1) = -yi;
        Y(i + 1, i) = -yi;
    }
    return Y;
}

BlockTransmissionMatrix unit_cell_matrix(const UnitCellParams& params, double omega)
{
    const Eigen::MatrixXcd Yv = vertical_admittance_matrix(params, omega);
    const int m = params.num_lines;
    const cd half_z = I * omega * params.series_inductance / 2.0;
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(m, m);

    // T_h T_v T_h with T_h = [I zI; 0 I], T_v = [I 0; Y I], expanded blockwise.
    const Eigen::MatrixXcd A = Id + half_z * Yv;
    BlockTransmissionMatrix T;
    T.matrix.resize(2 * m, 2 * m);
    T.matrix.topLeftCorner(m, m) = A;
    T.matrix.topRightCorner(m, m) = half_z * (A + Id);
    T.matrix.bottomLeftCorner(m, m) = Yv;
    T.matrix.bottomRightCorner(m, m) = A;
    return T;
}

BlockTransmissionMatrix cascade_network(const BlockTransmissionMatrix& cell, int num_cells)
{
    if (num_cells < 1) {
        throw Error(ErrorKind::invalid_spec, "num_cells must be >= 1");
    }
    Eigen::MatrixXcd result;
    Eigen::MatrixXcd base = cell.matrix;
    bool have_result = false;
    for (unsigned n = static_cast<unsigned>(num_cells); n != 0; n >>= 1) {
        if (n & 1U) {
            result = have_result ? Eigen::MatrixXcd(result * base) : base;
            have_result = true;
        }
        if (n > 1) {
            base = base * base;
        }
    }
    return {result};
}

Eigen::MatrixXcd abcd_to_impedance(const BlockTransmissionMatrix& T, double frequency, double reference_impedance)
{
    const int m = T.ports_per_side();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(T.C());
    // rcond alone misses a C block that vanishes uniformly, so also compare
    // the smallest gain of C Z0 with the size of the Z0-normalized chain matrix.
    double gain = 0.0;
    if (lu.rcond() > min_rcond) {
        Eigen::MatrixXcd normalized = T.matrix;
        normalized.topRightCorner(m, m) /= reference_impedance;
        normalized.bottomLeftCorner(m, m) *= reference_impedance;
        const double inverse_norm = lu.inverse().cwiseAbs().colwise().sum().maxCoeff() / reference_impedance;
        gain = 1.0 / (inverse_norm * normalized.cwiseAbs().colwise().sum().maxCoeff());
    }
    if (!(gain > min_rcond)) {
        std::ostringstream msg;
        msg << "C block is singular or ill-conditioned (rcond " << lu.rcond() << ", relative gain " << gain << ")"
            << frequency_label(frequency);
        throw Error(ErrorKind::degenerate_network, msg.str());
    }
    const Eigen::MatrixXcd Cinv = lu.inverse();
    const Eigen::MatrixXcd ACinv = T.A() * Cinv;

    Eigen::MatrixXcd Z(2 * m, 2 * m);
    Z.topLeftCorner(m, m) = ACinv;
    Z.topRightCorner(m, m) = ACinv * T.D() - T.B();
    Z.bottomLeftCorner(m, m) = Cinv;
    Z.bottomRightCorner(m, m) = Cinv * T.D();
    return Z;
}

SParameterBlock impedance_to_scattering(const Eigen::MatrixXcd& Z, double reference_impedance, double frequency)
{
    if (!(reference_impedance > 0.0) || !std::isfinite(reference_impedance)) {
        throw Error(ErrorKind::invalid_spec, "reference impedance must be > 0");
    }
    if (Z.rows() != Z.cols()) {
        throw Error(ErrorKind::dimension, "impedance matrix must be square");
    }
    const Eigen::MatrixXcd Zn = Z / reference_impedance;
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(Z.rows(), Z.cols());
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Zn + Id);
    if (!(lu.rcond() > min_rcond)) {
        std::ostringstream msg;
        msg << "Z/Z0 + I is singular (rcond " << lu.rcond() << ")" << frequency_label(frequency);
        throw Error(ErrorKind::resonance_degeneracy, msg.str());
    }
    // S (Zn + I) = Zn - I, solved from the transposed system.
    const Eigen::MatrixXcd St = lu.transpose().solve((Zn - Id).transpose());
    return {frequency, reference_impedance, St.transpose()};
}

SParameterBlock network_response(const UnitCellParams& params, double frequency, double reference_impedance)
{
    if (!(frequency > 0.0) || !std::isfinite(frequency)) {
        throw Error(ErrorKind::invalid_frequency, "frequency must be > 0");
    }
    const double omega = 2.0 * std::numbers::pi * frequency;
    const auto network = cascade_network(unit_cell_matrix(params, omega), params.num_cells);
    return impedance_to_scattering(abcd_to_impedance(network, frequency, reference_impedance), reference_impedance, frequency);
}

std::vector<double> frequency_grid(double f_start, double f_stop, int points)
{
    if (!(f_start > 0.0) || !(f_stop > f_start) || !std::isfinite(f_stop) || points < 2) {
        throw Error(ErrorKind::invalid_spec, "sweep grid requires 0 < f_start < f_stop and points >= 2");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = (f_stop - f_start) / (points - 1);
    for (int k = 0; k < points; ++k) {
        grid[static_cast<std::size_t>(k)] = f_start + k * step;
    }
    grid.back() = f_stop;
    return grid;
}

std::vector<SParameterBlock> SweepResult::valid_blocks() const
{
    std::vector<SParameterBlock> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (p.block) {
            out.push_back(*p.block);
        }
    }
    return out;
}

std::size_t SweepResult::degenerate_count() const
{
    std::size_t n = 0;
    for (const auto& p : points) {
        n += p.block ? 0 : 1;
    }
    return n;
}

namespace {

SweepPoint evaluate_point(const UnitCellParams& params, double frequency, double reference_impedance)
{
    SweepPoint point;
    point.frequency = frequency;
    try {
        point.block = network_response(params, frequency, reference_impedance);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate_network && e.kind() != ErrorKind::resonance_degeneracy) {
            throw;
        }
        point.failure = e.what();
    }
    return point;
}

void validate_sweep(const UnitCellParams& params, double reference_impedance)
{
    params.validate();
    if (!(reference_impedance > 0.0) || !std::isfinite(reference_impedance)) {
        throw Error(ErrorKind::invalid_spec, "reference impedance must be > 0");
    }
}

} // namespace

SweepResult frequency_sweep(const UnitCellParams& params, double f_start, double f_stop, int points,
                            double reference_impedance)
{
    validate_sweep(params, reference_impedance);
    const auto grid = frequency_grid(f_start, f_stop, points);

    SweepResult result;
    result.points.resize(grid.size());
    const auto n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        // params are validated above, so only degenerate points can fail here
        result.points[idx] = evaluate_point(params, grid[idx], reference_impedance);
    }
    return result;
}

SweepResult frequency_sweep_serial(const UnitCellParams& params, double f_start, double f_stop, int points,
                                   double reference_impedance)
{
    validate_sweep(params, reference_impedance);
    SweepResult result;
    for (double f : frequency_grid(f_start, f_stop, points)) {
        result.points.push_back(evaluate_point(params, f, reference_impedance));
    }
    return result;
}

SymmetryReport check_port_symmetry(const SParameterBlock& block, int num_lines)
{
    if (num_lines < 1 || block.matrix.rows() != 2 * num_lines || block.matrix.cols() != 2 * num_lines) {
        throw Error(ErrorKind::dimension, "S block dimension does not match 2M for M = " + std::to_string(num_lines));
    }
    const int m = num_lines;
    SymmetryReport report;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double a = std::abs(block.matrix(m + i, j));
            const double b = std::abs(block.matrix(m + (m - 1 - i), m - 1 - j));
            const double dev = std::abs(a - b);
            if (dev > report.max_deviation) {
                report = {dev, i, j};
            }
        }
    }
    return report;
}

double losslessness_error(const Eigen::MatrixXcd& S)
{
    return (S.adjoint() * S - Eigen::MatrixXcd::Identity(S.rows(), S.cols())).cwiseAbs().maxCoeff();
}

double reciprocity_error(const Eigen::MatrixXcd& S)
{
    return (S - S.transpose()).cwiseAbs().maxCoeff();
}

double symplectic_error(const BlockTransmissionMatrix& T)
{
    const int m = T.ports_per_side();
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m).setIdentity();
    J.bottomLeftCorner(m, m) = -Eigen::MatrixXcd::Identity(m, m);
    return (T.matrix.transpose() * J * T.matrix - J).cwiseAbs().maxCoeff();
}

} // namespace mcln

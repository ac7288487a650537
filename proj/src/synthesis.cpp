#include "mcln/synthesis.hpp"

#include "mcln/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mcln {

namespace {

constexpr double speed_of_light = 299792458.0;
constexpr int bisection_cap = 60;

// Bloch phase per cell of a scalar L/2 - C - L/2 section.
double mode_phase(double inductance, double capacitance, double omega)
{
    const double half_trace = 1.0 - omega * omega * inductance * capacitance / 2.0;
    if (std::abs(half_trace) > 1.0) {
        std::ostringstream msg;
        msg << "mode is in a stopband: |(A+D)/2| = " << std::abs(half_trace) << " > 1";
        throw Error(ErrorKind::out_of_band, msg.str());
    }
    return std::acos(half_trace);
}

double pair_coupling(double inductance, double shunt, double c1, bool balanced, double pitch, double omega)
{
    const double c_even = balanced ? shunt - c1 : shunt;
    const double c_odd = balanced ? shunt + c1 : shunt + 2.0 * c1;
    const double beta_even = mode_phase(inductance, c_even, omega) / pitch;
    const double beta_odd = mode_phase(inductance, c_odd, omega) / pitch;
    return 0.5 * (beta_odd - beta_even);
}

void require_omega(double omega)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorKind::invalid_frequency, "angular frequency must be > 0");
    }
}

} // namespace

void DesignSpec::validate() const
{
    auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_spec, "DesignSpec: " + what); };
    if (num_lines < 2) {
        fail("num_lines must be >= 2");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        fail("alpha must be > 0");
    }
    if (!(center_frequency > 0.0) || !std::isfinite(center_frequency)) {
        fail("center_frequency must be > 0");
    }
    if (!(kappa_max > 0.0) || !std::isfinite(kappa_max)) {
        fail("kappa_max must be > 0");
    }
    if (!(line_impedance > 0.0) || !std::isfinite(line_impedance)) {
        fail("line_impedance must be > 0");
    }
    if (cells_per_guided_wavelength < 10) {
        fail("cells_per_guided_wavelength must be >= 10");
    }
    if (!(effective_permittivity > 0.0) || !std::isfinite(effective_permittivity)) {
        fail("effective_permittivity must be > 0");
    }
}

HomogeneityCheck homogeneity_check(double pitch, double guided_wavelength, int margin)
{
    const double ratio = pitch / guided_wavelength;
    return {ratio * margin <= 1.0 + 1e-12, ratio};
}

double extract_coupling(const UnitCellParams& two_line_cell, double omega)
{
    require_omega(omega);
    if (two_line_cell.num_lines != 2) {
        throw Error(ErrorKind::dimension, "extract_coupling needs a two-line cell");
    }
    two_line_cell.validate();
    return pair_coupling(two_line_cell.series_inductance, two_line_cell.shunt_capacitance,
                         two_line_cell.coupling_capacitances[0], two_line_cell.balanced_loading, two_line_cell.pitch,
                         omega);
}

UnitCellParams pair_cell(const UnitCellParams& cell, int pair)
{
    if (pair < 0 || pair + 1 >= cell.num_lines) {
        throw Error(ErrorKind::dimension, "pair index out of range");
    }
    UnitCellParams reduced = cell;
    reduced.num_lines = 2;
    reduced.coupling_capacitances = {cell.coupling_capacitances[static_cast<std::size_t>(pair)]};
    return reduced;
}

double coupling_capacitance_ceiling(const UnitCellParams& base_cell, double omega)
{
    require_omega(omega);
    const double L = base_cell.series_inductance;
    const double C = base_cell.shunt_capacitance;
    // Passband edge of a scalar section: omega^2 L C_mode = 4.
    const double edge = 4.0 / (omega * omega * L);
    if (!(C < edge)) {
        throw Error(ErrorKind::out_of_band, "isolated line is already beyond its Bragg cutoff");
    }
    const double ceiling = base_cell.balanced_loading ? std::min(C, edge - C) : 0.5 * (edge - C);
    return ceiling * (1.0 - 1e-12);
}

double solve_coupling_capacitance(double target_kappa, const UnitCellParams& base_cell, double omega)
{
    require_omega(omega);
    if (!(target_kappa >= 0.0) || !std::isfinite(target_kappa)) {
        throw Error(ErrorKind::invalid_spec, "target coupling must be >= 0");
    }
    if (target_kappa == 0.0) {
        return 0.0;
    }
    const double L = base_cell.series_inductance;
    const double C = base_cell.shunt_capacitance;
    const double p = base_cell.pitch;
    const bool balanced = base_cell.balanced_loading;

    double lo = 0.0;
    double hi = coupling_capacitance_ceiling(base_cell, omega);
    const double best = pair_coupling(L, C, hi, balanced, p, omega);
    if (best < target_kappa) {
        std::ostringstream msg;
        msg << "coupling " << target_kappa << " rad/m exceeds the " << best
            << " rad/m reachable below the Bragg cutoff; lower kappa_max or shorten the pitch";
        throw Error(ErrorKind::infeasible_coupling, msg.str());
    }

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < bisection_cap; ++iter) {
        mid = 0.5 * (lo + hi);
        const double kappa = pair_coupling(L, C, mid, balanced, p, omega);
        if (std::abs(kappa - target_kappa) <= 1e-13 * target_kappa) {
            break;
        }
        (kappa < target_kappa ? lo : hi) = mid;
    }
    return mid;
}

DesignResult synthesize_design(const DesignSpec& spec)
{
    spec.validate();
    const int m = spec.num_lines;
    const double omega = 2.0 * std::numbers::pi * spec.center_frequency;
    const double lambda_g = speed_of_light / (spec.center_frequency * std::sqrt(spec.effective_permittivity));
    const double beta0 = 2.0 * std::numbers::pi / lambda_g;

    // Center pair saturates the coupling ceiling.
    const Eigen::VectorXd unit_profile = jx_couplings(m, 1.0);
    const double kappa0 = spec.kappa_max / unit_profile.maxCoeff();
    const double length = network_length(kappa0, spec.alpha);

    const double max_pitch = lambda_g / spec.cells_per_guided_wavelength;
    const double cells = std::ceil(length / max_pitch * (1.0 - 1e-12));
    if (!(cells >= 1.0) || cells > 1e9) {
        throw Error(ErrorKind::design, "network length " + std::to_string(length) + " m gives an unusable cell count");
    }
    const int num_cells = static_cast<int>(cells);
    const double pitch = length / num_cells;

    const auto homogeneity = homogeneity_check(pitch, lambda_g, spec.cells_per_guided_wavelength);
    if (!homogeneity.pass) {
        throw Error(ErrorKind::design, "homogeneity violated: p/lambda_g = " + std::to_string(homogeneity.ratio));
    }

    // sqrt(L/C) = Z0 and omega0 sqrt(L C) = beta0 p.
    const double electrical = beta0 * pitch / omega;
    UnitCellParams cell;
    cell.num_lines = m;
    cell.series_inductance = spec.line_impedance * electrical;
    cell.shunt_capacitance = electrical / spec.line_impedance;
    cell.pitch = pitch;
    cell.num_cells = num_cells;
    cell.balanced_loading = spec.balanced_loading;
    cell.coupling_capacitances.assign(static_cast<std::size_t>(m - 1), 0.0);

    const Eigen::VectorXd targets = kappa0 * unit_profile;
    UnitCellParams base = cell;
    base.num_lines = 2;
    base.coupling_capacitances = {0.0};

    // Pair solves are independent; errors are collected and rethrown after the loop.
    std::vector<std::string> failures(static_cast<std::size_t>(m - 1));
    std::vector<ErrorKind> failure_kinds(static_cast<std::size_t>(m - 1), ErrorKind::design);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m - 1; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            cell.coupling_capacitances[idx] = solve_coupling_capacitance(targets(i), base, omega);
        } catch (const Error& e) {
            failures[idx] = e.what();
            failure_kinds[idx] = e.kind();
        }
    }
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i].empty()) {
            throw Error(failure_kinds[i], "pair " + std::to_string(i + 1) + ": " + failures[i]);
        }
    }
    for (int i = 0; i < m; ++i) {
        if (cell.ground_capacitance(i) < 0.0) {
            throw Error(ErrorKind::design, "balanced loading infeasible on line " + std::to_string(i + 1) +
                                               ": coupling capacitors exceed the shunt capacitance; lower kappa_max");
        }
    }

    DesignResult result;
    result.jx_spec = {m, kappa0, beta0, length};
    result.cell_params = std::move(cell);
    result.guided_wavelength = lambda_g;
    result.achieved_alpha = fractional_order(kappa0, num_cells * pitch);
    result.center_frequency = spec.center_frequency;
    result.reference_impedance = spec.line_impedance;
    return result;
}

Eigen::VectorXd extracted_couplings(const DesignResult& design)
{
    const auto& cell = design.cell_params;
    const double omega = 2.0 * std::numbers::pi * design.center_frequency;
    Eigen::VectorXd kappa(cell.num_lines - 1);
    for (int i = 0; i + 1 < cell.num_lines; ++i) {
        kappa(i) = extract_coupling(pair_cell(cell, i), omega);
    }
    return kappa;
}

} // namespace mcln

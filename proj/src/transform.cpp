#include "mcln/transform.hpp"

#include "mcln/errors.hpp"

#include <cmath>
#include <complex>

namespace mcln {

namespace {

using cd = std::complex<double>;

DeviationSummary summarize(Eigen::VectorXd per_port)
{
    DeviationSummary s;
    s.max = per_port.size() ? per_port.maxCoeff() : 0.0;
    s.rms = per_port.size() ? std::sqrt(per_port.squaredNorm() / static_cast<double>(per_port.size())) : 0.0;
    s.per_port = std::move(per_port);
    return s;
}

Eigen::VectorXcd alternating_signs(int n)
{
    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i) {
        g(i) = (i % 2 == 0) ? 1.0 : -1.0;
    }
    return g;
}

} // namespace

std::string_view to_string(SignalKind kind)
{
    switch (kind) {
    case SignalKind::pulse: return "pulse";
    case SignalKind::gaussian: return "gaussian";
    case SignalKind::unit_port: return "unit-port";
    case SignalKind::custom: return "custom";
    }
    return "custom";
}

std::optional<SignalKind> parse_signal_kind(std::string_view name)
{
    for (auto k : {SignalKind::pulse, SignalKind::gaussian, SignalKind::unit_port, SignalKind::custom}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    return std::nullopt;
}

TestSignal generate_test_signal(SignalKind kind, int num_lines, int center, double width)
{
    if (num_lines < 1) {
        throw Error(ErrorKind::invalid_signal, "signal needs at least one line");
    }
    if (center < 1 || center > num_lines) {
        throw Error(ErrorKind::invalid_signal,
                    "center " + std::to_string(center) + " outside 1.." + std::to_string(num_lines));
    }
    if (!(width >= 1.0) || !std::isfinite(width)) {
        throw Error(ErrorKind::invalid_signal, "width must be >= 1");
    }

    SignalVector x = SignalVector::Zero(num_lines);
    switch (kind) {
    case SignalKind::unit_port:
        x(center - 1) = 1.0;
        break;
    case SignalKind::pulse: {
        const long count = std::lround(width);
        const long first = center - count / 2;
        for (long i = first; i < first + count; ++i) {
            if (i >= 1 && i <= num_lines) {
                x(i - 1) = 1.0;
            }
        }
        break;
    }
    case SignalKind::gaussian:
        for (int i = 1; i <= num_lines; ++i) {
            const double d = i - center;
            x(i - 1) = std::exp(-d * d / (2.0 * width * width));
        }
        break;
    case SignalKind::custom:
        throw Error(ErrorKind::invalid_signal, "custom signals are built with custom_signal()");
    }
    x.normalize();
    return {kind, center, width, std::move(x)};
}

TestSignal custom_signal(const SignalVector& samples)
{
    const double norm = samples.norm();
    if (samples.size() < 1 || !(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::invalid_signal, "custom signal must be nonzero and finite");
    }
    return {SignalKind::custom, 1, 1.0, samples / norm};
}

SignalVector apply_dfrft(const TestSignal& signal, double alpha, int num_lines)
{
    if (signal.samples.size() != num_lines) {
        throw Error(ErrorKind::dimension, "signal length " + std::to_string(signal.samples.size()) +
                                              " does not match M = " + std::to_string(num_lines));
    }
    return dfrft_matrix(num_lines, alpha).entries * signal.samples;
}

double fit_global_phase(const SignalVector& reference, const SignalVector& actual)
{
    return std::arg(actual.dot(reference));
}

TransformReport cross_validate(const DesignResult& design, const TestSignal& signal)
{
    const int m = design.jx_spec.num_lines;
    if (design.cell_params.num_lines != m) {
        throw Error(ErrorKind::dimension, "design lattice and circuit line counts differ");
    }
    if (signal.samples.size() != m) {
        throw Error(ErrorKind::dimension, "signal length " + std::to_string(signal.samples.size()) +
                                              " does not match M = " + std::to_string(m));
    }

    SParameterBlock response;
    try {
        response = network_response(design.cell_params, design.center_frequency, design.reference_impedance);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::degenerate_network) {
            throw Error(ErrorKind::resonance_degeneracy, e.what());
        }
        throw;
    }

    TransformReport report;
    report.input = signal;
    report.alpha = design.jx_spec.order();
    report.frequency = design.center_frequency;
    report.lattice_output = dfrft_matrix(m, report.alpha).entries * signal.samples;

    const Eigen::VectorXcd g = alternating_signs(m);
    const Eigen::MatrixXcd transmission = response.matrix.bottomLeftCorner(m, m);
    const SignalVector raw = g.asDiagonal() * (transmission * (g.asDiagonal() * signal.samples));

    report.aligned_phase = fit_global_phase(report.lattice_output, raw);
    report.circuit_output = std::exp(cd{0.0, report.aligned_phase}) * raw;

    const double peak = report.lattice_output.cwiseAbs().maxCoeff();
    Eigen::VectorXd mag(m);
    Eigen::VectorXd phase(m);
    for (int i = 0; i < m; ++i) {
        const cd l = report.lattice_output(i);
        const cd c = report.circuit_output(i);
        mag(i) = std::abs(std::abs(c) - std::abs(l));
        phase(i) = (std::abs(l) > 1e-6 * peak && std::abs(c) > 0.0) ? std::abs(std::arg(c * std::conj(l))) : 0.0;
    }
    report.magnitude_error = summarize(std::move(mag));
    report.phase_error = summarize(std::move(phase));
    return report;
}

} // namespace mcln

#ifndef MCLN_TRANSFORM_HPP
#define MCLN_TRANSFORM_HPP

#include "mcln/lattice.hpp"
#include "mcln/synthesis.hpp"

#include <optional>
#include <string_view>

namespace mcln {

enum class SignalKind { pulse, gaussian, unit_port, custom };

std::string_view to_string(SignalKind kind);
std::optional<SignalKind> parse_signal_kind(std::string_view name);

// Unit-power excitation of the M input ports. center is 1-based.
struct TestSignal {
    SignalKind kind = SignalKind::custom;
    int center = 1;
    double width = 1.0;
    SignalVector samples;
};

// pulse: round(width) equal samples on lines center - floor(width/2) ...,
// clipped to the array. gaussian: exp(-(i - center)^2 / (2 width^2)).
// unit_port: basis vector e_center. All normalized to unit power.
TestSignal generate_test_signal(SignalKind kind, int num_lines, int center, double width = 1.0);

// Normalizes an arbitrary nonzero excitation.
TestSignal custom_signal(const SignalVector& samples);

SignalVector apply_dfrft(const TestSignal& signal, double alpha, int num_lines);

struct DeviationSummary {
    Eigen::VectorXd per_port;
    double max = 0.0;
    double rms = 0.0;
};

struct TransformReport {
    TestSignal input;
    double alpha = 0.0;
    double frequency = 0.0;
    SignalVector lattice_output;
    SignalVector circuit_output; // aligned to the lattice output's global phase
    double aligned_phase = 0.0;  // rotation applied to the raw circuit output, rad
    DeviationSummary magnitude_error;
    DeviationSummary phase_error; // rad, ports with negligible lattice amplitude report 0
};

// Drives the design's lumped network at its center frequency by superposing
// S-matrix columns, and compares the output ports with the Jx transform of
// the same order. Capacitive coupling realizes the Jx couplings with negative
// sign, so input and output port references alternate sign line by line
// (diag((-1)^i)) before comparison.
TransformReport cross_validate(const DesignResult& design, const TestSignal& signal);

// Least-squares common phase: phi minimizing |reference - exp(j phi) actual|.
double fit_global_phase(const SignalVector& reference, const SignalVector& actual);

} // namespace mcln

#endif

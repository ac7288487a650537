#include "mcln/cli.hpp"

#include "mcln/circuit.hpp"
#include "mcln/errors.hpp"
#include "mcln/io.hpp"
#include "mcln/lattice.hpp"
#include "mcln/synthesis.hpp"
#include "mcln/transform.hpp"
#include "mcln/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>

namespace mcln {

namespace {

namespace fs = std::filesystem;

constexpr const char* exit_code_help = R"(Exit status:
  0  success
  1  verify: at least one invariant failed
  2  usage error (unknown subcommand, bad or missing flag)
  3  malformed configuration or design file
  4  invalid input (spec, signal, frequency or dimension preconditions)
  5  numeric failure (eigensolver did not converge)
  6  degenerate network or resonance at a requested frequency
  7  design infeasible (coupling ceiling, stopband, homogeneity)
  8  file I/O failure
Errors are printed to stderr as one line:
  error: kind=<kind> exit=<status> message=<text>)";

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config: return exit_config;
    case ErrorKind::invalid_spec:
    case ErrorKind::invalid_frequency:
    case ErrorKind::invalid_signal:
    case ErrorKind::dimension: return exit_invalid_input;
    case ErrorKind::numeric: return exit_numeric;
    case ErrorKind::degenerate_network:
    case ErrorKind::resonance_degeneracy: return exit_degenerate;
    case ErrorKind::out_of_band:
    case ErrorKind::infeasible_coupling:
    case ErrorKind::design: return exit_design;
    case ErrorKind::io: return exit_io;
    }
    return exit_invalid_input;
}

std::string one_line(std::string text)
{
    for (char& c : text) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    return text;
}

int report_error(std::ostream& err, std::string_view kind, int code, const std::string& message)
{
    err << "error: kind=" << kind << " exit=" << code << " message=" << one_line(message) << '\n';
    return code;
}

void require_writable(const fs::path& path)
{
    const fs::path parent = path.parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
        throw Error(ErrorKind::io, "output directory " + parent.string() + " does not exist");
    }
}

struct DesignArgs {
    std::string config;
    std::string out;
    DesignSpec spec;
    bool unbalanced = false;
};

struct SimulateArgs {
    std::string design;
    std::string out;
    double f_start = 2.0e9;
    double f_stop = 3.0e9;
    int points = 201;
    double z0 = 0.0;
};

struct SignalArgs {
    std::string kind = "gaussian";
    int center = 0; // 0: middle line
    double width = 2.0;
};

struct TransformArgs {
    std::string design;
    std::string out;
    int lines = 16;
    double alpha = 1.0;
    SignalArgs signal;
};

struct EvolveArgs {
    std::string out;
    int lines = 16;
    double kappa0 = 1.0;
    double beta0 = 0.0;
    double alpha = 1.0;
    double length = -1.0;
    int samples = 101;
    SignalArgs signal{"unit-port", 1, 1.0};
};

TestSignal make_signal(const SignalArgs& a, int lines)
{
    const auto kind = parse_signal_kind(a.kind);
    if (!kind || *kind == SignalKind::custom) {
        throw Error(ErrorKind::invalid_signal, "signal must be pulse, gaussian or unit-port, got '" + a.kind + "'");
    }
    const int center = a.center == 0 ? (lines + 1) / 2 : a.center;
    return generate_test_signal(*kind, lines, center, a.width);
}

void add_signal_options(CLI::App& cmd, SignalArgs& a)
{
    cmd.add_option("--signal", a.kind, "Excitation: pulse, gaussian or unit-port")->capture_default_str();
    cmd.add_option("--center", a.center, "1-based center line (0 = middle line)")->capture_default_str();
    cmd.add_option("--width", a.width, "Pulse length or Gaussian sigma, in lines")->capture_default_str();
}

int run_design(const DesignArgs& a, CLI::App& cmd, std::ostream& out)
{
    DesignSpec spec;
    if (!a.config.empty()) {
        spec = design_spec_from_json(read_text_file(a.config));
    }
    // explicit flags override the config file
    auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
    if (given("--lines")) spec.num_lines = a.spec.num_lines;
    if (given("--alpha")) spec.alpha = a.spec.alpha;
    if (given("--f0")) spec.center_frequency = a.spec.center_frequency;
    if (given("--kappa-max")) spec.kappa_max = a.spec.kappa_max;
    if (given("--z0")) spec.line_impedance = a.spec.line_impedance;
    if (given("--margin")) spec.cells_per_guided_wavelength = a.spec.cells_per_guided_wavelength;
    if (given("--eps-eff")) spec.effective_permittivity = a.spec.effective_permittivity;
    if (a.unbalanced) spec.balanced_loading = false;
    if (a.config.empty() && !(given("--lines") && given("--alpha") && given("--kappa-max"))) {
        throw Error(ErrorKind::config, "design needs --config or at least --lines, --alpha and --kappa-max");
    }

    spec.validate();
    require_writable(a.out);
    const auto design = synthesize_design(spec);
    write_text_file(a.out, design_result_to_json(design));

    out << "lines " << design.jx_spec.num_lines << ", kappa0 " << format_double(design.jx_spec.kappa0)
        << " rad/m, length " << format_double(design.jx_spec.length) << " m, cells " << design.cell_params.num_cells
        << ", pitch " << format_double(design.cell_params.pitch) << " m, alpha "
        << format_double(design.achieved_alpha) << '\n';
    return exit_ok;
}

int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
    const auto design = design_result_from_json(read_text_file(a.design));
    const double z0 = a.z0 > 0.0 ? a.z0 : design.reference_impedance;
    frequency_grid(a.f_start, a.f_stop, a.points); // validates the grid
    require_writable(a.out);

    const auto sweep = frequency_sweep(design.cell_params, a.f_start, a.f_stop, a.points, z0);
    for (const auto& p : sweep.points) {
        if (!p.block) {
            err << "warning: skipped " << format_double(p.frequency) << " Hz: " << one_line(p.failure) << '\n';
        }
    }
    const auto blocks = sweep.valid_blocks();
    if (blocks.empty()) {
        throw Error(ErrorKind::degenerate_network, "every sweep frequency was degenerate");
    }
    export_touchstone(blocks, a.out);
    out << "wrote " << blocks.size() << " frequencies, " << 2 * design.cell_params.num_lines << " ports to " << a.out
        << '\n';
    return exit_ok;
}

int run_transform(const TransformArgs& a, std::ostream& out)
{
    TransformReport report;
    if (!a.design.empty()) {
        const auto design = design_result_from_json(read_text_file(a.design));
        const auto signal = make_signal(a.signal, design.jx_spec.num_lines);
        require_writable(a.out);
        report = cross_validate(design, signal);
        out << "alpha " << format_double(report.alpha) << ", max |mag| deviation "
            << format_double(report.magnitude_error.max) << ", max phase deviation "
            << format_double(report.phase_error.max) << " rad\n";
    } else {
        const auto signal = make_signal(a.signal, a.lines);
        require_writable(a.out);
        report.input = signal;
        report.alpha = a.alpha;
        report.lattice_output = apply_dfrft(signal, a.alpha, a.lines);
        out << "alpha " << format_double(report.alpha) << ", lattice route only\n";
    }
    export_transform_report(report, a.out);
    return exit_ok;
}

int run_verify(const VerifyOptions& o, std::ostream& out)
{
    const auto results = run_invariant_suite(o);
    bool all = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << " value=" << format_double(r.value)
            << " tol=" << format_double(r.tolerance) << '\n';
        all = all && r.pass;
    }
    out << (all ? "verify: all invariants hold\n" : "verify: invariant failures\n");
    return all ? exit_ok : exit_verify_failed;
}

int run_evolve(const EvolveArgs& a, std::ostream& out)
{
    JxSpec spec{a.lines, a.kappa0, a.beta0, 0.0};
    spec.length = a.length >= 0.0 ? a.length : network_length(a.kappa0, a.alpha);
    spec.validate();
    if (a.samples < 1) {
        throw Error(ErrorKind::invalid_spec, "samples must be >= 1");
    }
    const auto signal = make_signal(a.signal, a.lines);
    require_writable(a.out);

    std::vector<double> z(static_cast<std::size_t>(a.samples));
    for (int k = 0; k < a.samples; ++k) {
        z[static_cast<std::size_t>(k)] = a.samples == 1 ? spec.length : spec.length * k / (a.samples - 1);
    }
    const auto magnitudes = field_evolution(coupled_mode_matrix(spec), signal.samples, z);
    export_csv_evolution(z, magnitudes, a.out);
    out << "wrote " << a.samples << " z samples for " << a.lines << " lines to " << a.out << '\n';
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Jx coupled-line network toolkit: design, circuit simulation and discrete fractional Fourier "
                 "transforms",
                 "mcln"};
    app.footer(exit_code_help);
    app.require_subcommand(1);

    DesignArgs design_args;
    auto* design = app.add_subcommand("design", "Synthesize a lumped network from a design spec");
    design->add_option("--config", design_args.config, "JSON design spec (keys: num_lines, alpha, "
                                                        "center_frequency_hz, kappa_max, line_impedance_ohm, "
                                                        "cells_per_guided_wavelength, effective_permittivity, "
                                                        "balanced_loading)");
    design->add_option("--out", design_args.out, "Design result file (JSON)")->required();
    design->add_option("--lines", design_args.spec.num_lines, "Number of lines M");
    design->add_option("--alpha", design_args.spec.alpha, "Target fractional order");
    design->add_option("--f0", design_args.spec.center_frequency, "Center frequency, Hz");
    design->add_option("--kappa-max", design_args.spec.kappa_max, "Largest pair coupling, rad/m");
    design->add_option("--z0", design_args.spec.line_impedance, "Line impedance, ohm");
    design->add_option("--margin", design_args.spec.cells_per_guided_wavelength, "Cells per guided wavelength (>= 10)");
    design->add_option("--eps-eff", design_args.spec.effective_permittivity, "Effective permittivity of the lines");
    design->add_flag("--unbalanced", design_args.unbalanced,
                     "Keep the full shunt capacitance to ground on every line");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Sweep a design and write a Touchstone file");
    simulate->add_option("--design", sim_args.design, "Design result file")->required();
    simulate->add_option("--out", sim_args.out, "Touchstone output (.s<2M>p)")->required();
    simulate->add_option("--f-start", sim_args.f_start, "First frequency, Hz")->capture_default_str();
    simulate->add_option("--f-stop", sim_args.f_stop, "Last frequency, Hz")->capture_default_str();
    simulate->add_option("--points", sim_args.points, "Grid points (>= 2)")->capture_default_str();
    simulate->add_option("--z0", sim_args.z0, "Reference impedance, ohm (default: design value)");

    TransformArgs tr_args;
    auto* transform = app.add_subcommand("transform", "Apply the fractional transform to a test signal");
    transform->add_option("--design", tr_args.design, "Design result file; enables the circuit comparison");
    transform->add_option("--lines", tr_args.lines, "Number of lines without --design")->capture_default_str();
    transform->add_option("--alpha", tr_args.alpha, "Order without --design")->capture_default_str();
    transform->add_option("--out", tr_args.out, "Report CSV")->required();
    add_signal_options(*transform, tr_args.signal);

    VerifyOptions verify_opts;
    bool lattice_only = false;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--lines", verify_opts.num_lines, "Number of lines M")->capture_default_str();
    verify->add_option("--alpha", verify_opts.alpha, "Fractional order")->capture_default_str();
    verify->add_option("--kappa0", verify_opts.kappa0, "Coupling scale, rad/m")->capture_default_str();
    verify->add_option("--cases", verify_opts.random_cases, "Random unitarity cases")->capture_default_str();
    verify->add_option("--seed", verify_opts.seed, "Random seed")->capture_default_str();
    verify->add_option("--kappa-max", verify_opts.kappa_max, "Coupling ceiling of the test design, rad/m")
        ->capture_default_str();
    verify->add_flag("--lattice-only", lattice_only, "Skip the circuit checks");

    EvolveArgs ev_args;
    auto* evolve = app.add_subcommand("evolve", "Field amplitudes along the ideal lattice (CSV)");
    evolve->add_option("--lines", ev_args.lines, "Number of lines M")->capture_default_str();
    evolve->add_option("--kappa0", ev_args.kappa0, "Coupling scale, rad/m")->capture_default_str();
    evolve->add_option("--beta0", ev_args.beta0, "Line propagation constant, rad/m")->capture_default_str();
    evolve->add_option("--alpha", ev_args.alpha, "Order setting the length")->capture_default_str();
    evolve->add_option("--length", ev_args.length, "Length in meters (overrides --alpha)");
    evolve->add_option("--samples", ev_args.samples, "Number of z samples")->capture_default_str();
    evolve->add_option("--out", ev_args.out, "CSV output")->required();
    add_signal_options(*evolve, ev_args.signal);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        return report_error(err, "usage", exit_usage, e.what());
    }

    try {
        if (*design) return run_design(design_args, *design, out);
        if (*simulate) return run_simulate(sim_args, out, err);
        if (*transform) return run_transform(tr_args, out);
        if (*verify) {
            verify_opts.circuit = !lattice_only;
            return run_verify(verify_opts, out);
        }
        if (*evolve) return run_evolve(ev_args, out);
    } catch (const Error& e) {
        return report_error(err, to_string(e.kind()), exit_code_for(e.kind()), e.what());
    } catch (const std::exception& e) {
        return report_error(err, "internal", exit_invalid_input, e.what());
    }
    return report_error(err, "usage", exit_usage, "no subcommand");
}

} // namespace mcln

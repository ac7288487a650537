#include "mcln/circuit.hpp"
#include "mcln/errors.hpp"
#include "mcln/io.hpp"
#include "mcln/lattice.hpp"
#include "mcln/synthesis.hpp"
#include "mcln/transform.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace mcln;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace {

template <class F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected mcln::Error");
    return ErrorKind::io;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "mcln_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<SParameterBlock> random_sweep(int ports, int points, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<SParameterBlock> sweep;
    for (int k = 0; k < points; ++k) {
        SParameterBlock b;
        b.frequency = 2e9 + 5e6 * k + 0.123;
        b.reference_impedance = 50.0;
        b.matrix.resize(ports, ports);
        for (int i = 0; i < ports; ++i) {
            for (int j = 0; j < ports; ++j) {
                b.matrix(i, j) = cd{n(rng), n(rng)} * std::pow(10.0, n(rng) * 3);
            }
        }
        sweep.push_back(std::move(b));
    }
    return sweep;
}

} // namespace

TEST_CASE("double formatting round trips")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int k = 0; k < 2000; ++k) {
        const double v = std::ldexp(mantissa(rng), exponent(rng));
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
    CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
    CHECK(kind_of([] { parse_double("1.2.3"); }) == ErrorKind::io);
    CHECK(kind_of([] { parse_double(""); }) == ErrorKind::io);
}

TEST_CASE("touchstone two-port layout")
{
    SParameterBlock b;
    b.frequency = 1e9;
    b.reference_impedance = 50.0;
    b.matrix = Eigen::MatrixXcd::Identity(2, 2);
    b.matrix(1, 0) = cd{0.25, -0.5};
    std::ostringstream out;
    write_touchstone(out, std::span(&b, 1));
    std::istringstream lines(out.str());
    std::string line;
    std::vector<std::string> data;
    bool option = false;
    while (std::getline(lines, line)) {
        if (line.rfind("#", 0) == 0) {
            CHECK(line == "# Hz S RI R 50");
            option = true;
        } else if (!line.empty() && line[0] != '!') {
            data.push_back(line);
        }
    }
    CHECK(option);
    REQUIRE(data.size() == 1);
    std::istringstream row(data[0]);
    std::vector<double> numbers;
    for (std::string tok; row >> tok;) {
        numbers.push_back(parse_double(tok));
    }
    REQUIRE(numbers.size() == 9);
    // S11 S21 S12 S22
    CHECK(numbers[3] == 0.25);
    CHECK(numbers[4] == -0.5);

    std::istringstream back(out.str());
    const auto doc = read_touchstone(back, 2);
    REQUIRE(doc.blocks.size() == 1);
    CHECK((doc.blocks[0].matrix - b.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("touchstone round trip, 32 ports")
{
    const auto sweep = random_sweep(32, 201, 11);
    const auto path = scratch("round.s32p");
    export_touchstone(sweep, path);
    const auto doc = read_touchstone(path);
    CHECK(doc.num_ports == 32);
    CHECK(doc.reference_impedance == 50.0);
    REQUIRE(doc.blocks.size() == sweep.size());
    double err = 0.0;
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        CHECK(doc.blocks[k].frequency == sweep[k].frequency);
        err = std::max(err, ((doc.blocks[k].matrix - sweep[k].matrix).cwiseAbs().array() /
                             sweep[k].matrix.cwiseAbs().array().max(1.0))
                                .maxCoeff());
    }
    CHECK(err < 1e-12);

    // no line carries more than four pairs
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '!' || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        int count = 0;
        for (std::string tok; row >> tok;) {
            ++count;
        }
        CHECK(count <= 9);
    }
}

TEST_CASE("touchstone reader options")
{
    const std::string text = "! comment\n# GHz S MA R 75\n1.5 0.5 90 1 0 1 0 0.5 -90\n";
    std::istringstream in(text);
    const auto doc = read_touchstone(in, 2);
    CHECK(doc.reference_impedance == 75.0);
    REQUIRE(doc.blocks.size() == 1);
    CHECK(doc.blocks[0].frequency == 1.5e9);
    CHECK(std::abs(doc.blocks[0].matrix(0, 0) - cd{0.0, 0.5}) < 1e-15);
    CHECK(std::abs(doc.blocks[0].matrix(1, 1) - cd{0.0, -0.5}) < 1e-15);

    std::istringstream db("# MHz S DB R 50\n100 -20 0 0 0 0 0 -6.020599913279624 180\n");
    const auto ddoc = read_touchstone(db, 2);
    CHECK(ddoc.blocks[0].frequency == 1e8);
    CHECK(std::abs(ddoc.blocks[0].matrix(0, 0) - 0.1) < 1e-14);
    CHECK(std::abs(ddoc.blocks[0].matrix(1, 1) + 0.5) < 1e-12);

    std::istringstream ragged("# Hz S RI R 50\n1 0 0 0 0 0 0 0\n");
    CHECK(kind_of([&] { read_touchstone(ragged, 2); }) == ErrorKind::io);
    std::istringstream z("# Hz Z RI R 50\n1 0 0 0 0 0 0 0 0\n");
    CHECK(kind_of([&] { read_touchstone(z, 2); }) == ErrorKind::io);
    CHECK(kind_of([] { read_touchstone(fs::path("/nonexistent/x.s2p")); }) == ErrorKind::io);
}

TEST_CASE("touchstone writer validation")
{
    const auto path = scratch("never.s4p");
    fs::remove(path);
    std::vector<SParameterBlock> empty;
    CHECK(kind_of([&] { export_touchstone(empty, path); }) == ErrorKind::dimension);
    CHECK(!fs::exists(path));

    auto mixed = random_sweep(4, 2, 3);
    mixed[1].matrix = Eigen::MatrixXcd::Zero(2, 2);
    CHECK(kind_of([&] { export_touchstone(mixed, path); }) == ErrorKind::dimension);
    CHECK(!fs::exists(path));

    auto unordered = random_sweep(4, 2, 3);
    unordered[1].frequency = unordered[0].frequency;
    CHECK(kind_of([&] { export_touchstone(unordered, path); }) == ErrorKind::dimension);
    CHECK(!fs::exists(path));

    auto z0 = random_sweep(4, 2, 3);
    z0[1].reference_impedance = 75.0;
    CHECK(kind_of([&] { export_touchstone(z0, path); }) == ErrorKind::dimension);

    CHECK(kind_of([&] { export_touchstone(random_sweep(4, 1, 3), "/nonexistent/dir/a.s4p"); }) == ErrorKind::io);
}

TEST_CASE("evolution csv")
{
    const auto H = coupled_mode_matrix({2, 1.0, 0.0, 0.0});
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = 1.0;
    const std::vector<double> one{0.0};
    const auto path1 = scratch("one.csv");
    export_csv_evolution(one, field_evolution(H, e1, one), path1);
    std::ifstream in(path1);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) {
        lines.push_back(l);
    }
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "z_m,line_1,line_2");

    const auto H16 = coupled_mode_matrix({16, 1.0, 0.0, 0.0});
    Eigen::VectorXcd e5 = Eigen::VectorXcd::Zero(16);
    e5(4) = 1.0;
    std::vector<double> z;
    for (int k = 0; k < 64; ++k) {
        z.push_back(0.05 * k);
    }
    const Eigen::MatrixXd mags = field_evolution(H16, e5, z);
    const auto path = scratch("evo.csv");
    export_csv_evolution(z, mags, path);
    const auto table = read_csv_evolution(path);
    REQUIRE(table.z.size() == z.size());
    CHECK((table.magnitudes - mags).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(table.z[k] == z[k]);
        if (k > 0) {
            CHECK(table.z[k] > table.z[k - 1]);
        }
        CHECK(std::abs(table.magnitudes.row(static_cast<Eigen::Index>(k)).squaredNorm() - 1.0) < 1e-9);
    }

    CHECK(kind_of([&] { export_csv_evolution(z, Eigen::MatrixXd::Zero(3, 2), path); }) == ErrorKind::dimension);
}

TEST_CASE("transform report csv")
{
    TransformReport r;
    r.input = generate_test_signal(SignalKind::gaussian, 4, 2, 1.0);
    r.alpha = 1.0;
    r.lattice_output = apply_dfrft(r.input, 1.0, 4);
    std::ostringstream out;
    write_transform_report(out, r);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "port,lattice_mag,lattice_phase_rad,circuit_mag,circuit_phase_rad,delta_mag,delta_phase_rad");
    std::string row;
    std::getline(in, row);
    CHECK(row.rfind("1,", 0) == 0);
    CHECK(row.find("nan") != std::string::npos);
}

TEST_CASE("design spec json")
{
    DesignSpec s;
    s.num_lines = 8;
    s.alpha = 0.5;
    s.kappa_max = 1.25;
    s.effective_permittivity = 1.86;
    s.balanced_loading = false;
    const auto back = design_spec_from_json(design_spec_to_json(s));
    CHECK(back.num_lines == 8);
    CHECK(back.alpha == 0.5);
    CHECK(back.kappa_max == 1.25);
    CHECK(back.effective_permittivity == 1.86);
    CHECK(!back.balanced_loading);

    const auto wrapped = design_spec_from_json(R"({"design": {"num_lines": 4, "alpha": 2, "center_frequency_hz": 2.5e9, "kappa_max": 1}})");
    CHECK(wrapped.num_lines == 4);
    CHECK(wrapped.alpha == 2.0);
    CHECK(wrapped.line_impedance == DesignSpec{}.line_impedance);
    CHECK(kind_of([] { design_spec_from_json(R"({"num_lines": 4, "alpha": 2})"); }) == ErrorKind::config);

    CHECK(kind_of([] { design_spec_from_json(R"({"num_line": 4})"); }) == ErrorKind::config);
    CHECK(kind_of([] { design_spec_from_json(R"({"num_lines": "four"})"); }) == ErrorKind::config);
    CHECK(kind_of([] { design_spec_from_json("{ not json"); }) == ErrorKind::config);
    CHECK(kind_of([] { design_spec_from_json("[1, 2]"); }) == ErrorKind::config);
}

TEST_CASE("design result json")
{
    DesignSpec s;
    s.num_lines = 6;
    s.kappa_max = 2.0;
    s.effective_permittivity = 1.86;
    const auto d = synthesize_design(s);
    const std::string text = design_result_to_json(d);
    const auto back = design_result_from_json(text);
    CHECK(back.jx_spec.kappa0 == d.jx_spec.kappa0);
    CHECK(back.jx_spec.length == d.jx_spec.length);
    CHECK(back.cell_params.coupling_capacitances == d.cell_params.coupling_capacitances);
    CHECK(back.cell_params.num_cells == d.cell_params.num_cells);
    CHECK(back.cell_params.balanced_loading == d.cell_params.balanced_loading);
    CHECK(back.achieved_alpha == d.achieved_alpha);
    // identical input gives identical bytes
    CHECK(design_result_to_json(back) == text);
    CHECK(design_result_to_json(synthesize_design(s)) == text);

    CHECK(kind_of([] { design_result_from_json("{}"); }) == ErrorKind::config);
    CHECK(kind_of([] { read_text_file("/nonexistent/design.json"); }) == ErrorKind::io);
}

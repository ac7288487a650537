#ifndef MCLN_VERIFY_HPP
#define MCLN_VERIFY_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mcln {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    int num_lines = 16;
    double alpha = 1.0;
    double kappa0 = 1.0;
    int random_cases = 50;
    std::uint64_t seed = 20231015;
    bool circuit = true;
    // circuit checks run on a synthesized design with these settings
    double center_frequency = 2.5e9;
    double kappa_max = 2.0;
    double effective_permittivity = 1.86;
    int sweep_points = 21;
};

// Lattice spectrum, unitarity, transform group law, DFT reference, and
// (optionally) passivity, reciprocity, mirror symmetry and calibration of a
// synthesized network.
std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options);

// max |A - exp(j phi) B| after the least-squares phase phi = arg tr(B^H A).
double phase_aligned_distance(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

} // namespace mcln

#endif

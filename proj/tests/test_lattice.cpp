#include "mcln/errors.hpp"
#include "mcln/lattice.hpp"
#include "oracles.hpp"
#include "tridiagonal_ql.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace mcln;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

double max_abs(const Eigen::MatrixXcd& m)
{
    return m.cwiseAbs().maxCoeff();
}

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

} // namespace

TEST_CASE("jx couplings")
{
    CHECK(jx_couplings(2, 1.0)(0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto k4 = jx_couplings(4, 1.0);
    REQUIRE(k4.size() == 3);
    CHECK(k4(0) == doctest::Approx(0.8660254037844386).epsilon(1e-12));
    CHECK(k4(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k4(2) == doctest::Approx(0.8660254037844386).epsilon(1e-12));

    const auto k16 = jx_couplings(16, 1.0);
    Eigen::Index arg = 0;
    CHECK(k16.maxCoeff(&arg) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(arg == 7); // i = 8
    for (Eigen::Index i = 0; i < k16.size(); ++i) {
        CHECK(k16(i) == k16(k16.size() - 1 - i));
    }

    CHECK(kind_of([] { jx_couplings(1, 1.0); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { jx_couplings(4, 0.0); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { jx_couplings(4, -1.0); }) == ErrorKind::invalid_spec);
}

TEST_CASE("coupled-mode matrix assembly")
{
    const auto H2 = coupled_mode_matrix({2, 1.0, 0.0, 0.0}).dense();
    Eigen::Matrix2d expected;
    expected << 0.0, 0.5, 0.5, 0.0;
    CHECK((H2 - expected).cwiseAbs().maxCoeff() == 0.0);

    const auto H3 = coupled_mode_matrix({3, 2.0, 10.0, 0.0});
    CHECK((H3.diagonal.array() == 10.0).all());
    CHECK(H3.off_diagonal(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(H3.off_diagonal(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    const Eigen::VectorXd ev = oracle::dense_eigenvalues(coupled_mode_matrix({4, 1.0, 0.0, 0.0}).dense());
    const double expected4[] = {-1.5, -0.5, 0.5, 1.5};
    for (int k = 0; k < 4; ++k) {
        CHECK(ev(k) == doctest::Approx(expected4[k]).epsilon(1e-12));
    }

    CHECK(kind_of([] { coupled_mode_matrix({1, 1.0, 0.0, 0.0}); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { coupled_mode_matrix({4, 1.0, 0.0, -1.0}); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { coupled_mode_matrix({4, 1.0, -2.0, 1.0}); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { make_coupled_mode_matrix(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)); }) ==
          ErrorKind::invalid_spec);
}

TEST_CASE("spectral decomposition")
{
    const auto s2 = spectral_decomposition(coupled_mode_matrix({2, 1.0, 0.0, 0.0}));
    CHECK(s2.eigenvalues(0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(s2.eigenvalues(1) == doctest::Approx(0.5).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(s2.eigenvectors(0, 0) == doctest::Approx(r).epsilon(1e-14));
    CHECK(s2.eigenvectors(1, 0) == doctest::Approx(-r).epsilon(1e-14));
    CHECK(s2.eigenvectors(0, 1) == doctest::Approx(r).epsilon(1e-14));
    CHECK(s2.eigenvectors(1, 1) == doctest::Approx(r).epsilon(1e-14));

    const auto H16 = coupled_mode_matrix({16, 1.0, 5.0, 0.0});
    const auto s16 = spectral_decomposition(H16);
    const Eigen::VectorXd brute = oracle::dense_eigenvalues(H16.dense());
    for (Eigen::Index k = 0; k < 16; ++k) {
        CHECK(std::abs(s16.eigenvalues(k) - brute(k)) < 1e-10);
        if (k > 0) {
            CHECK(std::abs(s16.eigenvalues(k) - s16.eigenvalues(k - 1) - 1.0) < 1e-9);
        }
    }

    for (int m : {2, 3, 7, 16, 33}) {
        const auto H = coupled_mode_matrix({m, 0.7, 1.3, 0.0});
        const auto s = spectral_decomposition(H);
        const Eigen::MatrixXd& V = s.eigenvectors;
        CHECK((V * s.eigenvalues.asDiagonal() * V.transpose() - H.dense()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-12);
        for (int k = 0; k < m; ++k) {
            for (int i = 0; i < m; ++i) {
                if (std::abs(V(i, k)) > 1e-13) {
                    CHECK(V(i, k) > 0.0);
                    break;
                }
            }
        }
    }

    // a non-Jx tridiagonal still decomposes
    Eigen::VectorXd d(5), e(4);
    d << 1.0, -2.0, 0.5, 3.0, 0.0;
    e << 0.3, 1.1, -0.4, 2.0;
    const auto H = make_coupled_mode_matrix(d, e);
    const auto s = spectral_decomposition(H);
    const Eigen::VectorXd brute5 = oracle::dense_eigenvalues(H.dense());
    CHECK((s.eigenvalues - brute5).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigensolver reports non-convergence")
{
    const auto H = coupled_mode_matrix({16, 1.0, 0.0, 0.0});
    try {
        detail::tridiagonal_ql(H.diagonal, H.off_diagonal, 1);
        FAIL("expected a convergence failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::numeric);
        CHECK(std::string(e.what()).find("sweep") != std::string::npos);
    }
    CHECK(kind_of([] { make_coupled_mode_matrix(Eigen::VectorXd::Constant(2, std::nan("")), Eigen::VectorXd::Zero(1)); }) ==
          ErrorKind::invalid_spec);
}

TEST_CASE("transfer matrix")
{
    const auto H = coupled_mode_matrix({5, 1.3, 2.0, 0.0});
    CHECK(max_abs(transfer_matrix(H, 0.0).full() - Eigen::MatrixXcd::Identity(5, 5)) < 1e-14);

    const auto H4 = coupled_mode_matrix({4, 1.0, 0.0, 0.0});
    const Eigen::MatrixXcd T = transfer_matrix(H4, pi).full();
    const Eigen::MatrixXcd oracle_T = oracle::propagator(H4.dense(), pi);
    CHECK(max_abs(T - oracle_T) < 1e-9);
    CHECK((oracle_T.cwiseAbs() - parity_matrix(4)).cwiseAbs().maxCoeff() < 1e-9);

    const auto H8 = coupled_mode_matrix({8, 1.0, 0.0, 0.0});
    const double l1 = 0.4, l2 = 1.7;
    CHECK(max_abs(transfer_matrix(H8, l1).full() * transfer_matrix(H8, l2).full() -
                  transfer_matrix(H8, l1 + l2).full()) < 1e-10);

    const auto Hb = coupled_mode_matrix({6, 1.0, 40.0, 0.0});
    const auto kept = transfer_matrix(Hb, 0.9, GlobalPhase::keep);
    const auto stripped = transfer_matrix(Hb, 0.9, GlobalPhase::strip);
    CHECK(stripped.global_phase == doctest::Approx(-40.0 * 0.9));
    CHECK(max_abs(kept.full() - stripped.full()) < 1e-12);
    CHECK(max_abs(stripped.entries - transfer_matrix(coupled_mode_matrix({6, 1.0, 0.0, 0.0}), 0.9).entries) < 1e-12);

    CHECK(kind_of([&] { transfer_matrix(H, -1.0); }) == ErrorKind::invalid_spec);
}

TEST_CASE("dfrft matrix")
{
    CHECK(max_abs(dfrft_matrix(4, 0.0).entries - Eigen::MatrixXcd::Identity(4, 4)) < 1e-14);
    CHECK((oracle::propagator(oracle::jx_dense(4, 1.0, 0.0), pi).cwiseAbs() - parity_matrix(4)).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK((dfrft_matrix(4, 2.0).entries.cwiseAbs() - parity_matrix(4)).cwiseAbs().maxCoeff() < 1e-9);

    // equals the transfer matrix of a beta0 = 0 lattice for any kappa0, up to the constant rank offset
    for (double kappa0 : {0.3, 1.0, 4.5}) {
        for (int m : {3, 8}) {
            const double alpha = 0.73;
            const Eigen::MatrixXcd T =
                transfer_matrix(coupled_mode_matrix({m, kappa0, 0.0, network_length(kappa0, alpha)}),
                                network_length(kappa0, alpha))
                    .full();
            CHECK(max_abs(dfrft_matrix(m, alpha).entries - T) < 1e-10);
        }
    }

    const Eigen::MatrixXcd K = dfrft_matrix(7, 1.3).entries;
    CHECK((dfrft_matrix(7, 5.3).entries.cwiseAbs() - K.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(kind_of([] { dfrft_matrix(1, 1.0); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { dfrft_matrix(4, std::nan("")); }) == ErrorKind::invalid_spec);
}

TEST_CASE("order and length conversion")
{
    CHECK(fractional_order(1.0, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(network_length(2.0, 1.0) == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(fractional_order(0.5, 2 * pi) == doctest::Approx(2.0).epsilon(1e-15));
    for (double a : {0.0, 0.1, 1.0, 3.7, 100.0}) {
        CHECK(std::abs(fractional_order(1.7, network_length(1.7, a)) - a) <= 1e-12 * std::max(1.0, a));
    }
    CHECK(kind_of([] { convert_order_length(0.0, 1.0, Conversion::order_to_length); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([] { convert_order_length(-2.0, 1.0, Conversion::length_to_order); }) == ErrorKind::invalid_spec);
    CHECK(JxSpec{16, 1.0, 0.0, pi / 2}.order() == doctest::Approx(1.0));
}

TEST_CASE("dft reference")
{
    const Eigen::MatrixXcd F2 = dft_matrix(2).entries;
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(F2(0, 0) - r) < 1e-15);
    CHECK(std::abs(F2(0, 1) - r) < 1e-15);
    CHECK(std::abs(F2(1, 0) - r) < 1e-15);
    CHECK(std::abs(F2(1, 1) + r) < 1e-15);

    const Eigen::MatrixXcd F8 = dft_matrix(8).entries;
    const Eigen::MatrixXcd F8sq = F8 * F8;
    CHECK(max_abs(F8sq * F8sq - Eigen::MatrixXcd::Identity(8, 8)) < 1e-10);
    CHECK(max_abs(F8sq - dft_parity_matrix(8).cast<cd>()) < 1e-10);
    CHECK(max_abs(F8.adjoint() * F8 - Eigen::MatrixXcd::Identity(8, 8)) < 1e-12);

    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dft_matrix(16).entries, false);
    for (Eigen::Index k = 0; k < 16; ++k) {
        const cd ev = es.eigenvalues()(k);
        const double d = std::min({std::abs(ev - 1.0), std::abs(ev + 1.0), std::abs(ev - cd{0, 1}),
                                   std::abs(ev + cd{0, 1})});
        CHECK(d < 1e-9);
    }

    // the DFT parity keeps index 0 fixed; the lattice mirror does not
    CHECK(dft_parity_matrix(4)(0, 0) == 1.0);
    CHECK(parity_matrix(4)(0, 3) == 1.0);
}

TEST_CASE("field evolution")
{
    const auto H2 = coupled_mode_matrix({2, 1.0, 0.0, 0.0});
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = 1.0;
    const std::vector<double> z{0.0, pi / 2, pi};
    const Eigen::MatrixXd a = field_evolution(H2, e1, z);
    CHECK(a(0, 0) == doctest::Approx(1.0));
    CHECK(a(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(a(2, 1) - 1.0) < 1e-12);
    CHECK(std::abs(a(2, 0)) < 1e-12);
    // closed form: |a1| = |cos(kappa z)|, kappa = 0.5
    CHECK(std::abs(a(1, 0) - std::cos(0.5 * pi / 2)) < 1e-12);
    const Eigen::VectorXd oracle_row = (oracle::propagator(H2.dense(), pi) * e1).cwiseAbs();
    CHECK(std::abs(oracle_row(1) - a(2, 1)) < 1e-12);

    const auto H16 = coupled_mode_matrix({16, 1.0, 3.0, 0.0});
    Eigen::VectorXcd e8 = Eigen::VectorXcd::Zero(16);
    e8(7) = 1.0;
    std::vector<double> zs;
    for (int k = 0; k <= 40; ++k) {
        zs.push_back(0.1 * k);
    }
    const Eigen::MatrixXd evo = field_evolution(H16, e8, zs);
    const Eigen::MatrixXd evo_serial = field_evolution_serial(H16, e8, zs);
    CHECK((evo - evo_serial).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index r = 0; r < evo.rows(); ++r) {
        CHECK(std::abs(evo.row(r).squaredNorm() - 1.0) < 1e-10);
    }

    CHECK(kind_of([&] { field_evolution(H16, e1, zs); }) == ErrorKind::dimension);
    const std::vector<double> descending{1.0, 0.5};
    CHECK(kind_of([&] { field_evolution(H2, e1, descending); }) == ErrorKind::invalid_spec);
    const std::vector<double> negative{-0.1};
    CHECK(kind_of([&] { field_evolution(H2, e1, negative); }) == ErrorKind::invalid_spec);
}

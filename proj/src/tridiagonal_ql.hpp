#ifndef MCLN_TRIDIAGONAL_QL_HPP
#define MCLN_TRIDIAGONAL_QL_HPP

#include <Eigen/Dense>

namespace mcln::detail {

struct TridiagonalEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    int sweeps = 0;
};

// Symmetric tridiagonal eigenproblem by implicit-shift QL (EISPACK tql2
// without the tred2 reduction). Unsorted output. Throws ErrorKind::numeric
// when an eigenvalue fails to converge within max_sweeps QL sweeps.
TridiagonalEigen tridiagonal_ql(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& off_diagonal,
                                int max_sweeps = 30);

} // namespace mcln::detail

#endif

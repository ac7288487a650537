#include "tridiagonal_ql.hpp"

#include "mcln/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mcln::detail {

TridiagonalEigen tridiagonal_ql(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& off_diagonal,
                                int max_sweeps)
{
    const Eigen::Index n = diagonal.size();
    TridiagonalEigen out;
    out.values = diagonal;
    out.vectors = Eigen::MatrixXd::Identity(n, n);
    if (n == 0) {
        return out;
    }

    Eigen::VectorXd& d = out.values;
    Eigen::MatrixXd& V = out.vectors;
    // e(i) couples i and i+1; e(n-1) is scratch.
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e.head(n - 1) = off_diagonal;

    const double eps = std::numeric_limits<double>::epsilon();
    double shift_sum = 0.0;
    double tst1 = 0.0;

    for (Eigen::Index l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
        Eigen::Index m = l;
        while (m < n) {
            if (std::abs(e(m)) <= eps * tst1) {
                break;
            }
            ++m;
        }

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > max_sweeps) {
                    std::ostringstream msg;
                    msg << "tridiagonal QL did not converge: eigenvalue " << l << " after " << max_sweeps
                        << " sweeps, residual off-diagonal " << std::abs(e(l)) << " vs threshold "
                        << eps * tst1;
                    throw Error(ErrorKind::numeric, msg.str());
                }
                ++out.sweeps;

                double g = d(l);
                double p = (d(l + 1) - g) / (2.0 * e(l));
                double r = std::hypot(p, 1.0);
                if (p < 0) {
                    r = -r;
                }
                d(l) = e(l) / (p + r);
                d(l + 1) = e(l) * (p + r);
                const double dl1 = d(l + 1);
                double h = g - d(l);
                for (Eigen::Index i = l + 2; i < n; ++i) {
                    d(i) -= h;
                }
                shift_sum += h;

                p = d(m);
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e(l + 1);
                double s = 0.0;
                double s2 = 0.0;
                for (Eigen::Index i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e(i);
                    h = c * p;
                    r = std::hypot(p, e(i));
                    e(i + 1) = s * r;
                    s = e(i) / r;
                    c = p / r;
                    p = c * d(i) - s * g;
                    d(i + 1) = h + s * (c * g + s * d(i));
                    for (Eigen::Index k = 0; k < n; ++k) {
                        h = V(k, i + 1);
                        V(k, i + 1) = s * V(k, i) + c * h;
                        V(k, i) = c * V(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e(l) / dl1;
                e(l) = s * p;
                d(l) = c * p;
            } while (std::abs(e(l)) > eps * tst1);
        }
        d(l) += shift_sum;
        e(l) = 0.0;
    }
    return out;
}

} // namespace mcln::detail

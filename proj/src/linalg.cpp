#include "rggenv/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "rggenv/errors.hpp"

namespace rggenv {

SymMatrix SymMatrix::identity(int d) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

namespace {

void require_symmetric(const SymMatrix& h) {
    if (h.dim < 1 || h.entries.size() != static_cast<std::size_t>(h.dim) * h.dim)
        throw Error(ErrorKind::invalid_input, "matrix storage does not match its dimension");
    for (int i = 0; i < h.dim; ++i)
        for (int j = i + 1; j < h.dim; ++j)
            if (std::abs(h(i, j) - h(j, i)) > 1e-12)
                throw Error(ErrorKind::invalid_input, "matrix is not symmetric");
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const SymMatrix& h, double off_diagonal_tol) {
    require_symmetric(h);
    const int d = h.dim;
    SymMatrix a = h;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) off = std::max(off, std::abs(a(i, j)));
        if (off <= off_diagonal_tol) break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                if (a(p, q) == 0.0) continue;
                // Rotation annihilating a(p,q) (Golub & Van Loan, symmetric Schur).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(d);
    for (int i = 0; i < d; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double lambda_min(const SymMatrix& h) {
    require_symmetric(h);
    if (h.dim == 1) return h(0, 0);
    if (h.dim == 2) {
        const double mean = 0.5 * (h(0, 0) + h(1, 1));
        const double half_gap = 0.5 * (h(0, 0) - h(1, 1));
        return mean - std::hypot(half_gap, h(0, 1));
    }
    return symmetric_eigenvalues(h).front();
}

double lambda_max(const SymMatrix& h) {
    SymMatrix neg = h;
    for (double& v : neg.entries) v = -v;
    return -lambda_min(neg);
}

}  // namespace rggenv

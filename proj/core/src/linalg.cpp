#include "circqft/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "circqft/errors.hpp"

namespace circqft {

DegeneracyError::DegeneracyError(const std::string& what, double time)
    : PhysicsError(what), time_(time) {}

DegeneracyError::DegeneracyError(const std::string& what)
    : PhysicsError(what), time_(std::numeric_limits<double>::quiet_NaN()) {}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> entries) {
    ComplexMatrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> entries) {
    ComplexMatrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

ComplexVector ComplexMatrix::column(std::size_t col) const {
    ComplexVector out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) out[r] = (*this)(r, col);
    return out;
}

void ComplexMatrix::set_column(std::size_t col, std::span<const cplx> values) {
    if (values.size() != dim_) throw PreconditionError("set_column: size mismatch");
    for (std::size_t r = 0; r < dim_; ++r) (*this)(r, col) = values[r];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw PreconditionError("matrix sum: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw PreconditionError("matrix difference: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
    for (auto& x : data_) x *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cplx scale, ComplexMatrix m) { return m *= scale; }
ComplexMatrix operator*(double scale, ComplexMatrix m) { return m *= cplx(scale); }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    const std::size_t n = lhs.dim();
    if (rhs.dim() != n) throw PreconditionError("matrix product: dimension mismatch");
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = lhs(i, k);
            if (a == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const cplx> v) {
    const std::size_t n = m.dim();
    if (v.size() != n) throw PreconditionError("matrix-vector product: dimension mismatch");
    ComplexVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

double frobenius_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (const auto& x : m.data()) acc += std::norm(x);
    return std::sqrt(acc);
}

double max_abs_entry(const ComplexMatrix& m) {
    double best = 0.0;
    for (const auto& x : m.data()) best = std::max(best, std::abs(x));
    return best;
}

bool all_finite(const ComplexMatrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](const cplx& x) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    });
}

double hermitian_deviation(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc += std::norm(m(i, j) - std::conj(m(j, i)));
    return std::sqrt(acc);
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
    return hermitian_deviation(m) <= rel_tol * frobenius_norm(m);
}

double unitarity_deviation(const ComplexMatrix& u) {
    ComplexMatrix g = adjoint(u) * u;
    g -= ComplexMatrix::identity(u.dim());
    return frobenius_norm(g);
}

double off_diagonal_norm(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) acc += std::norm(m(i, j));
    return std::sqrt(acc);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw PreconditionError("inner: size mismatch");
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

namespace {

// One two-sided rotation annihilating a(p,q). The unitary acting on the
// (p,q) plane is diag(1, e^{-i theta}) followed by a real Givens rotation.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag <= std::numeric_limits<double>::min()) return;

    const cplx phase = apq / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    double t;
    if (std::abs(tau) > 1e150) {
        t = 0.5 / tau;
    } else {
        t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const cplx jpp = c;
    const cplx jpq = s;
    const cplx jqp = -s * std::conj(phase);
    const cplx jqq = c * std::conj(phase);

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 0) throw PreconditionError("hermitian_eigen: empty matrix");
    if (!all_finite(m)) throw PreconditionError("hermitian_eigen: non-finite entries");
    if (!is_hermitian(m)) {
        std::ostringstream os;
        os << "hermitian_eigen: matrix is not Hermitian (||M - M^H||_F = " << hermitian_deviation(m)
           << ")";
        throw PreconditionError(os.str());
    }

    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double target = kJacobiTolerance * frobenius_norm(a);
    double off = off_diagonal_norm(a);
    int sweeps = 0;
    while (off > target) {
        if (sweeps == kJacobiMaxSweeps) {
            std::ostringstream os;
            os << "hermitian_eigen: no convergence after " << kJacobiMaxSweeps
               << " sweeps, off-diagonal mass " << off;
            throw ConvergenceError(os.str(), off);
        }
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
        off = off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    out.sweeps = sweeps;
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

ComplexMatrix unitary_exp(const EigenDecomposition& eig, double dt) {
    if (!std::isfinite(dt)) throw PreconditionError("unitary_exp: non-finite time step");
    const std::size_t n = eig.values.size();
    std::vector<cplx> phases(n);
    for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, -eig.values[k] * dt);

    const ComplexMatrix& v = eig.vectors;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * phases[k] * std::conj(v(j, k));
            out(i, j) = acc;
        }
    }
    return out;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double dt) {
    return unitary_exp(hermitian_eigen(h), dt);
}

}  // namespace circqft

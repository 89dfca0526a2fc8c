#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace circqft {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Dense square complex matrix, row-major.
///
/// Energies are in units of 1/T with hbar = 1 throughout the library.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> entries);
    static ComplexMatrix diagonal(std::span<const cplx> entries);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    cplx& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    std::span<const cplx> data() const noexcept { return data_; }

    ComplexVector column(std::size_t col) const;
    void set_column(std::size_t col, std::span<const cplx> values);

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx scale, ComplexMatrix m);
ComplexMatrix operator*(double scale, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, std::span<const cplx> v);

ComplexMatrix adjoint(const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);
double max_abs_entry(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

/// ||M - M^dagger||_F.
double hermitian_deviation(const ComplexMatrix& m);

/// True when ||M - M^dagger||_F <= rel_tol * ||M||_F.
bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

/// ||U^dagger U - I||_F.
double unitarity_deviation(const ComplexMatrix& u);

/// Frobenius norm of the strictly off-diagonal part.
double off_diagonal_norm(const ComplexMatrix& m);

/// <a|b> with the first argument conjugated.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

struct EigenDecomposition {
    std::vector<double> values;  ///< ascending
    ComplexMatrix vectors;       ///< column k pairs with values[k]
    int sweeps = 0;
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiTolerance = 1e-14;

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Converges once the off-diagonal Frobenius mass drops to
/// kJacobiTolerance * ||M||_F. Within a degenerate cluster the returned
/// vectors only span the eigenspace.
///
/// Throws PreconditionError for non-Hermitian input and ConvergenceError
/// (carrying the achieved off-diagonal mass) after kJacobiMaxSweeps sweeps.
EigenDecomposition hermitian_eigen(const ComplexMatrix& m);

/// exp(-i H dt) assembled from the eigen-decomposition of H.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double dt);
ComplexMatrix unitary_exp(const EigenDecomposition& eig, double dt);

/// Relative spacing below which two eigenvalues are treated as one cluster.
inline constexpr double kClusterGap = 1e-9;

}  // namespace circqft

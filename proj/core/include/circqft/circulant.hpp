#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "circqft/linalg.hpp"

namespace circqft {

/// A circulant matrix described by its first column c_0..c_{N-1}.
/// Entry (j, k) of the materialized matrix is c_{(j - k) mod N}.
class CirculantSpec {
public:
    explicit CirculantSpec(std::vector<cplx> first_column);

    std::size_t size() const noexcept { return column_.size(); }
    std::span<const cplx> first_column() const noexcept { return column_; }
    const cplx& operator[](std::size_t k) const { return column_[k % column_.size()]; }

    /// c_k == conj(c_{(N-k) mod N}) for all k, to `tol` relative to the largest |c_k|.
    bool is_hermitian(double tol = 1e-12) const;

private:
    std::vector<cplx> column_;
};

ComplexMatrix materialize(const CirculantSpec& spec);

/// lambda_n = sum_k c_k exp(-2 pi i k n / N). Column n of dft_matrix(N) is the
/// matching eigenvector.
std::vector<cplx> circulant_eigenvalues(const CirculantSpec& spec);

/// Real parts of circulant_eigenvalues; throws PreconditionError unless the spec is Hermitian.
std::vector<double> hermitian_circulant_eigenvalues(const CirculantSpec& spec);

/// F_{kn} = N^{-1/2} exp(2 pi i k n / N).
ComplexMatrix dft_matrix(std::size_t n);

/// ||offdiag(F^dagger C F)||_F. Throws NumericalError if the diagonal of
/// F^dagger C F departs from circulant_eigenvalues by more than
/// 1e-10 * max(1, ||c||).
double verify_dft_diagonalizes(const CirculantSpec& spec);

/// Reads the first column of `m` and checks every entry against it.
/// Returns the spec when max |m(j,k) - c_{(j-k) mod N}| <= tol * max(1, max|m|),
/// otherwise throws PreconditionError.
CirculantSpec circulant_from_matrix(const ComplexMatrix& m, double tol = 1e-12);
bool is_circulant(const ComplexMatrix& m, double tol = 1e-12);

/// D(beta) M D(beta)^dagger with D = diag(e^{i beta_k}).
ComplexMatrix apply_gauge(const ComplexMatrix& m, std::span<const double> beta);

struct GaugeReduction {
    std::vector<double> beta;  ///< beta_0 == 0
    CirculantSpec spec;
    cplx loop_product;         ///< prod_k H_{(k+1) mod N, k}, gauge invariant
    double residual = 0.0;     ///< max |materialize(spec) - D H D^dagger|
};

/// Finds diagonal phases turning a ring (cyclic nearest-neighbour) Hamiltonian
/// into a circulant one.
///
/// The ring must have equal diagonal entries and one common modulus on all
/// cyclic sub-diagonal entries; moduli are gauge invariant, so a mismatch
/// raises GaugeError. Any other nonzero entry also raises GaugeError.
/// c_1 is the principal N-th root of the loop product.
GaugeReduction phase_equivalent_circulant(const ComplexMatrix& h);

}  // namespace circqft

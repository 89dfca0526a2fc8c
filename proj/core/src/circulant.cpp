#include "circqft/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "circqft/errors.hpp"

namespace circqft {

namespace {

// e^{sign * 2 pi i m / n}, reducing m mod n first to keep the argument small.
cplx root_of_unity(std::size_t m, std::size_t n, double sign) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(m % n) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

double max_modulus(std::span<const cplx> values) {
    double best = 0.0;
    for (const auto& x : values) best = std::max(best, std::abs(x));
    return best;
}

}  // namespace

CirculantSpec::CirculantSpec(std::vector<cplx> first_column) : column_(std::move(first_column)) {
    if (column_.empty()) throw PreconditionError("CirculantSpec: empty first column");
    for (const auto& c : column_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw PreconditionError("CirculantSpec: non-finite entry");
    }
}

bool CirculantSpec::is_hermitian(double tol) const {
    const std::size_t n = column_.size();
    const double scale = std::max(1.0, max_modulus(column_));
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(column_[k] - std::conj(column_[(n - k) % n])) > tol * scale) return false;
    }
    return true;
}

ComplexMatrix materialize(const CirculantSpec& spec) {
    const std::size_t n = spec.size();
    if (n < 2) throw PreconditionError("materialize: circulant dimension must be at least 2");
    ComplexMatrix m(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) m(j, k) = spec[(j + n - k) % n];
    return m;
}

std::vector<cplx> circulant_eigenvalues(const CirculantSpec& spec) {
    const std::size_t n = spec.size();
    std::vector<cplx> lambda(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) acc += spec[k] * root_of_unity(k * m, n, -1.0);
        lambda[m] = acc;
    }
    return lambda;
}

std::vector<double> hermitian_circulant_eigenvalues(const CirculantSpec& spec) {
    if (!spec.is_hermitian())
        throw PreconditionError("hermitian_circulant_eigenvalues: spec is not Hermitian");
    const auto lambda = circulant_eigenvalues(spec);
    std::vector<double> out(lambda.size());
    std::transform(lambda.begin(), lambda.end(), out.begin(), [](const cplx& x) { return x.real(); });
    return out;
}

ComplexMatrix dft_matrix(std::size_t n) {
    if (n < 2) throw PreconditionError("dft_matrix: dimension must be at least 2");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix f(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) f(k, m) = scale * root_of_unity(k * m, n, 1.0);
    return f;
}

double verify_dft_diagonalizes(const CirculantSpec& spec) {
    const std::size_t n = spec.size();
    const ComplexMatrix f = dft_matrix(n);
    const ComplexMatrix d = adjoint(f) * materialize(spec) * f;
    const auto lambda = circulant_eigenvalues(spec);

    const double scale = std::max(1.0, norm(spec.first_column()));
    double mismatch = 0.0;
    for (std::size_t m = 0; m < n; ++m) mismatch = std::max(mismatch, std::abs(d(m, m) - lambda[m]));
    if (mismatch > 1e-10 * scale) {
        std::ostringstream os;
        os << "verify_dft_diagonalizes: diagonal of F^H C F departs from the analytic spectrum by "
           << mismatch;
        throw NumericalError(os.str());
    }
    return off_diagonal_norm(d);
}

CirculantSpec circulant_from_matrix(const ComplexMatrix& m, double tol) {
    const std::size_t n = m.dim();
    if (n < 2) throw PreconditionError("circulant_from_matrix: dimension must be at least 2");
    CirculantSpec spec(m.column(0));
    const double scale = std::max(1.0, max_abs_entry(m));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(m(j, k) - spec[(j + n - k) % n]) > tol * scale) {
                std::ostringstream os;
                os << "matrix is not circulant: entry (" << j << "," << k << ") differs from c_"
                   << (j + n - k) % n;
                throw PreconditionError(os.str());
            }
        }
    }
    return spec;
}

bool is_circulant(const ComplexMatrix& m, double tol) {
    try {
        circulant_from_matrix(m, tol);
        return true;
    } catch (const PreconditionError&) {
        return false;
    }
}

ComplexMatrix apply_gauge(const ComplexMatrix& m, std::span<const double> beta) {
    const std::size_t n = m.dim();
    if (beta.size() != n) throw PreconditionError("apply_gauge: phase count mismatch");
    ComplexMatrix out(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) out(j, k) = std::polar(1.0, beta[j] - beta[k]) * m(j, k);
    return out;
}

GaugeReduction phase_equivalent_circulant(const ComplexMatrix& h) {
    const std::size_t n = h.dim();
    if (n < 2) throw PreconditionError("phase_equivalent_circulant: dimension must be at least 2");
    if (!is_hermitian(h)) throw PreconditionError("phase_equivalent_circulant: matrix is not Hermitian");

    const double scale = std::max(1.0, max_abs_entry(h));
    auto on_ring = [n](std::size_t j, std::size_t k) {
        return j == k || j == (k + 1) % n || k == (j + 1) % n;
    };
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!on_ring(j, k) && std::abs(h(j, k)) > 1e-12 * scale) {
                std::ostringstream os;
                os << "phase_equivalent_circulant: unexpected coupling at (" << j << "," << k
                   << "); only cyclic nearest-neighbour entries are allowed";
                throw GaugeError(os.str());
            }
        }
    }
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs(h(j, j) - h(0, 0)) > 1e-12 * scale)
            throw GaugeError("phase_equivalent_circulant: diagonal entries differ; no gauge can equalize them");
    }

    // Sub-diagonal link k couples |k> -> |k+1 mod N>.
    std::vector<cplx> links(n);
    for (std::size_t k = 0; k < n; ++k) links[k] = h((k + 1) % n, k);

    const double modulus = std::abs(links[0]);
    if (modulus <= 1e-12 * scale)
        throw GaugeError("phase_equivalent_circulant: ring coupling vanishes; not phase-equivalent to circulant");
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(std::abs(links[k]) - modulus) > 1e-10 * modulus) {
            std::ostringstream os;
            os << "not phase-equivalent to circulant: ring coupling moduli differ (|H(" << (k + 1) % n
               << "," << k << ")| = " << std::abs(links[k]) << " vs |H(1,0)| = " << modulus
               << "); a diagonal phase change cannot alter moduli";
            throw GaugeError(os.str());
        }
    }

    cplx loop = 1.0;
    for (const auto& l : links) loop *= l / modulus;
    // Principal root: arg(loop) taken in (-pi, pi], so -1 maps to +pi even when
    // rounding leaves a negative zero (or tiny negative) imaginary part.
    double loop_arg = std::arg(loop);
    if (loop_arg <= -std::numbers::pi + 1e-12) loop_arg += 2.0 * std::numbers::pi;
    const double root_arg = loop_arg / static_cast<double>(n);
    const cplx c1 = std::polar(modulus, root_arg);

    std::vector<double> beta(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) beta[k + 1] = beta[k] + std::arg(c1 / links[k]);

    std::vector<cplx> column(n, cplx{});
    column[0] = h(0, 0).real();
    if (n == 2) {
        column[1] = modulus;
    } else {
        column[1] = c1;
        column[n - 1] = std::conj(c1);
    }
    CirculantSpec spec(std::move(column));

    const ComplexMatrix transformed = apply_gauge(h, beta);
    ComplexMatrix diff = materialize(spec) - transformed;
    const double residual = max_abs_entry(diff);

    cplx loop_product = 1.0;
    for (const auto& l : links) loop_product *= l;
    return GaugeReduction{std::move(beta), std::move(spec), loop_product, residual};
}

}  // namespace circqft

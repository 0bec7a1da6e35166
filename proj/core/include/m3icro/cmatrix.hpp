// Dense complex/real matrices and the metric checks used across the library.
//
// Storage is row-major throughout; this is load-bearing for the binary LUT
// format and the JSON checkpoint layouts, which serialize entry buffers
// verbatim. Scalars are 64-bit doubles, complex numbers (re, im) pairs.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace m3icro {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<cplx> entries() { return a_; }
    std::span<const cplx> entries() const { return a_; }

    CMatrix transpose() const;
    CMatrix adjoint() const;

    /// Frobenius norm.
    double frob_norm() const;
    /// Squared Frobenius norm.
    double frob_norm_sq() const;

    /// True when every entry is finite (no NaN/Inf).
    bool finite() const;

    bool operator==(const CMatrix& other) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

/// Dense real matrix, row-major. Same shape/finiteness rules as CMatrix.
class RMatrix {
public:
    RMatrix() = default;
    RMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static RMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<double> entries() { return a_; }
    std::span<const double> entries() const { return a_; }

    RMatrix transpose() const;
    double frob_norm() const;
    double frob_norm_sq() const;
    bool finite() const;

    bool operator==(const RMatrix& other) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// Complex matrix product. Throws DimensionError when a.cols != b.rows.
CMatrix cmatmul(const CMatrix& a, const CMatrix& b);

/// y = w * x for a complex vector x. Throws DimensionError on length mismatch.
std::vector<cplx> matvec(const CMatrix& w, std::span<const cplx> x);

/// y = w * x for a real vector x (full-range real input encoding).
std::vector<cplx> matvec(const CMatrix& w, std::span<const double> x);

/// y = w * x for a real matrix/vector pair.
std::vector<double> matvec(const RMatrix& w, std::span<const double> x);

/// Relative squared Frobenius distance ||a - b||_F^2 / ||b||_F^2.
/// Throws DimensionError on shape mismatch and DomainError when b is all-zero.
double rel_frob_distance(const CMatrix& a, const CMatrix& b);
double rel_frob_distance(const RMatrix& a, const RMatrix& b);

/// max(0, sigma_max(w) - 1): how far w exceeds a passive (non-amplifying)
/// transfer function. sigma_max found by power iteration on w^H w with a
/// 1e-12 convergence threshold and a 10k iteration cap.
double passivity_excess(const CMatrix& w);

/// ||w - w^T||_F / max(||w||_F, tiny) for square w. Throws DimensionError
/// when w is not square.
double symmetry_error(const CMatrix& w);

} // namespace m3icro

#include "m3icro/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "m3icro/errors.hpp"
#include "m3icro/rng.hpp"

namespace m3icro {

namespace {

void check_same_shape(std::size_t ar, std::size_t ac, std::size_t br, std::size_t bc,
                      const char* op) {
    if (ar != br || ac != bc) {
        throw DimensionError(std::string(op) + ": shape mismatch (" + std::to_string(ar) + "x" +
                             std::to_string(ac) + " vs " + std::to_string(br) + "x" +
                             std::to_string(bc) + ")");
    }
}

} // namespace

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx{1.0, 0.0};
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

double CMatrix::frob_norm_sq() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return s;
}

double CMatrix::frob_norm() const { return std::sqrt(frob_norm_sq()); }

bool CMatrix::finite() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

RMatrix RMatrix::identity(std::size_t n) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RMatrix RMatrix::transpose() const {
    RMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double RMatrix::frob_norm_sq() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return s;
}

double RMatrix::frob_norm() const { return std::sqrt(frob_norm_sq()); }

bool RMatrix::finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

CMatrix cmatmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("cmatmul: inner dimensions differ (" + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.rows()) + ")");
    }
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const cplx ail = a(i, l);
            if (ail == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
        }
    }
    return c;
}

std::vector<cplx> matvec(const CMatrix& w, std::span<const cplx> x) {
    if (w.cols() != x.size()) {
        throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                             " does not match " + std::to_string(w.cols()) + " columns");
    }
    std::vector<cplx> y(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < w.cols(); ++j) s += w(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<cplx> matvec(const CMatrix& w, std::span<const double> x) {
    if (w.cols() != x.size()) {
        throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                             " does not match " + std::to_string(w.cols()) + " columns");
    }
    std::vector<cplx> y(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < w.cols(); ++j) s += w(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec(const RMatrix& w, std::span<const double> x) {
    if (w.cols() != x.size()) {
        throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                             " does not match " + std::to_string(w.cols()) + " columns");
    }
    std::vector<double> y(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.cols(); ++j) s += w(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double rel_frob_distance(const CMatrix& a, const CMatrix& b) {
    check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "rel_frob_distance");
    const double denom = b.frob_norm_sq();
    if (denom == 0.0) {
        throw DomainError("rel_frob_distance: reference matrix is all-zero (division by zero)");
    }
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) num += std::norm(a.entries()[i] - b.entries()[i]);
    return num / denom;
}

double rel_frob_distance(const RMatrix& a, const RMatrix& b) {
    check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "rel_frob_distance");
    const double denom = b.frob_norm_sq();
    if (denom == 0.0) {
        throw DomainError("rel_frob_distance: reference matrix is all-zero (division by zero)");
    }
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.entries()[i] - b.entries()[i];
        num += d * d;
    }
    return num / denom;
}

double passivity_excess(const CMatrix& w) {
    const std::size_t n = w.cols();
    if (n == 0 || w.rows() == 0) return 0.0;

    // Power iteration on g = w^H w. Only the top singular value is needed.
    CMatrix g = cmatmul(w.adjoint(), w);

    Rng rng(0x5eedULL); // fixed start vector; independent of caller state
    std::vector<cplx> v(n);
    double norm = 0.0;
    for (auto& vi : v) {
        vi = cplx{rng.gaussian(), rng.gaussian()};
        norm += std::norm(vi);
    }
    norm = std::sqrt(norm);
    for (auto& vi : v) vi /= norm;

    double lambda = 0.0;
    constexpr int kMaxIter = 10000;
    constexpr double kTol = 1e-12;
    for (int it = 0; it < kMaxIter; ++it) {
        std::vector<cplx> gv = matvec(g, std::span<const cplx>(v));
        double gv_norm = 0.0;
        for (const auto& x : gv) gv_norm += std::norm(x);
        gv_norm = std::sqrt(gv_norm);
        if (gv_norm == 0.0) return 0.0; // w is the zero map
        // Rayleigh quotient v^H g v with unit v equals the current ||gv|| projection.
        double next = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            next += (std::conj(v[i]) * gv[i]).real();
        for (std::size_t i = 0; i < n; ++i) v[i] = gv[i] / gv_norm;
        if (it > 0 && std::abs(next - lambda) <= kTol * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    const double sigma_max = std::sqrt(std::max(lambda, 0.0));
    return std::max(0.0, sigma_max - 1.0);
}

double symmetry_error(const CMatrix& w) {
    if (w.rows() != w.cols()) {
        throw DimensionError("symmetry_error: matrix must be square, got " +
                             std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
    }
    double num = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) num += std::norm(w(i, j) - w(j, i));
    constexpr double kTiny = 1e-300;
    return std::sqrt(num) / std::max(w.frob_norm(), kTiny);
}

} // namespace m3icro

#pragma once

#include "orthlift/types.hpp"

namespace orthlift {

// Small dense matrix over an exact scalar (Int or Rat).  Row-major.
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    Mat operator*(const Mat& o) const {
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& x = (*this)(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        std::vector<T> r(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    void swap_rows(int i, int j) {
        for (int k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;
using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

QMat to_rational(const IMat& m);
QVec to_rational(const IVec& v);

// ax + by = gcd(a, b) >= 0
Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y);

Int vec_gcd(const IVec& v);

// Coefficients u with u . v = gcd(v) > 0.  v must be nonzero.
IVec vec_ext_gcd(const IVec& v);

Rat rat_det(QMat m);

// Gauss-Jordan inverse; throws Singular.
QMat rat_inverse(const QMat& m);

// Solve m x = b exactly; throws Singular.
QVec rat_solve(const QMat& m, const QVec& b);

struct Inertia {
    int positives = 0;
    int negatives = 0;
    int zeros = 0;
};

// Signature of a symmetric rational matrix by congruence reduction
// (Lagrange / Jacobi diagonalization, exact).
Inertia symmetric_inertia(QMat g);

struct SmithForm {
    IMat d;      // diagonal, d_i | d_{i+1}, all >= 0
    IMat u;      // unimodular, u * a * v = d
    IMat v;      //
    IMat u_inv;  //
    IMat v_inv;  //
};

SmithForm smith_normal_form(const IMat& a);

// Basis of { x in Z^n : a x = 0 } as columns; saturated (a primitive basis of
// the kernel lattice).
IMat integer_kernel(const IMat& a);

}  // namespace orthlift

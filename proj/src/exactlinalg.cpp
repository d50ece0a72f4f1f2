#include "orthlift/exactlinalg.hpp"

#include <algorithm>

namespace orthlift {

QMat to_rational(const IMat& m) {
    QMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

QVec to_rational(const IVec& v) {
    QVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        if (a < 0) {
            x = -1;
            y = 0;
            return -a;
        }
        x = 1;
        y = 0;
        return a;
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

Int vec_gcd(const IVec& v) {
    Int g = 0;
    for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
    return g;
}

IVec vec_ext_gcd(const IVec& v) {
    require(!v.empty(), ErrorCode::ZeroVector, "vec_ext_gcd: empty vector");
    IVec u(v.size(), Int(0));
    Int g = 0;
    // Fold in one entry at a time: g_{k} = gcd(g_{k-1}, v_k).
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0) continue;
        if (g == 0) {
            g = boost::multiprecision::abs(v[k]);
            u[k] = v[k] > 0 ? 1 : -1;
            continue;
        }
        Int x, y;
        Int g2 = ext_gcd(g, v[k], x, y);
        for (std::size_t i = 0; i < k; ++i) u[i] *= x;
        u[k] = y;
        g = g2;
    }
    require(g != 0, ErrorCode::ZeroVector, "vec_ext_gcd: zero vector");
    return u;
}

Rat rat_det(QMat m) {
    require(m.rows() == m.cols(), ErrorCode::InternalError, "det of non-square matrix");
    int n = m.rows();
    Rat det = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (m(r, c) != 0) {
                p = r;
                break;
            }
        if (p < 0) return Rat(0);
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        Rat inv = Rat(1) / m(c, c);
        for (int r = c + 1; r < n; ++r) {
            if (m(r, c) == 0) continue;
            Rat f = m(r, c) * inv;
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

QMat rat_inverse(const QMat& m) {
    require(m.rows() == m.cols(), ErrorCode::InternalError, "inverse of non-square matrix");
    int n = m.rows();
    QMat a = m;
    QMat inv = QMat::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (a(r, c) != 0) {
                p = r;
                break;
            }
        require(p >= 0, ErrorCode::Singular, "matrix is singular");
        if (p != c) {
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
        }
        Rat piv = a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            Rat f = a(r, c);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

QVec rat_solve(const QMat& m, const QVec& b) {
    QMat inv = rat_inverse(m);
    return inv * b;
}

Inertia symmetric_inertia(QMat g) {
    int n = g.rows();
    Inertia res;
    // Reduce the symmetric form step by step.  If all remaining diagonal
    // entries vanish but some off-diagonal g(i,j) != 0, replace basis vector
    // e_i by e_i + e_j to create a nonzero diagonal entry.
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int p = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && g(i, i) != 0) {
                p = i;
                break;
            }
        if (p < 0) {
            int bi = -1, bj = -1;
            for (int i = 0; i < n && bi < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (!done[i] && !done[j] && g(i, j) != 0) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi < 0) {
                for (int i = 0; i < n; ++i)
                    if (!done[i]) ++res.zeros;
                return res;
            }
            // e_bi += e_bj
            for (int k = 0; k < n; ++k) g(bi, k) += g(bj, k);
            for (int k = 0; k < n; ++k) g(k, bi) += g(k, bj);
            p = bi;
        }
        Rat d = g(p, p);
        if (d > 0)
            ++res.positives;
        else
            ++res.negatives;
        // Clear row/column p against the pivot.
        for (int i = 0; i < n; ++i) {
            if (i == p || done[i] || g(i, p) == 0) continue;
            Rat f = g(i, p) / d;
            for (int k = 0; k < n; ++k) g(i, k) -= f * g(p, k);
            for (int k = 0; k < n; ++k) g(k, i) -= f * g(k, p);
        }
        done[p] = true;
    }
    return res;
}

namespace {

// One cleanup pass: make d(t,t) divide everything below/right of it and clear
// its row and column.
void snf_pivot_cleanup(IMat& d, IMat& u, IMat& v, int t) {
    int m = d.rows(), n = d.cols();
    for (;;) {
        // Find the entry of smallest absolute value in the submatrix to use
        // as pivot at (t, t).
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j) {
                if (d(i, j) == 0) continue;
                Int a = boost::multiprecision::abs(d(i, j));
                if (pi < 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) return;  // submatrix is zero
        if (pi != t) {
            d.swap_rows(pi, t);
            u.swap_rows(pi, t);
        }
        if (pj != t) {
            d.swap_cols(pj, t);
            v.swap_cols(pj, t);
        }
        bool clean = true;
        for (int i = t + 1; i < m; ++i) {
            if (d(i, t) == 0) continue;
            Int q = d(i, t) / d(t, t);
            // row_i -= q * row_t  (on d and u)
            for (int k = 0; k < n; ++k) d(i, k) -= q * d(t, k);
            for (int k = 0; k < u.cols(); ++k) u(i, k) -= q * u(t, k);
            if (d(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < n; ++j) {
            if (d(t, j) == 0) continue;
            Int q = d(t, j) / d(t, t);
            for (int k = 0; k < m; ++k) d(k, j) -= q * d(k, t);
            for (int k = 0; k < v.rows(); ++k) v(k, j) -= q * v(k, t);
            if (d(t, j) != 0) clean = false;
        }
        if (!clean) continue;
        // Row/column are clear; enforce divisibility of the remaining block.
        bool divides = true;
        for (int i = t + 1; i < m && divides; ++i)
            for (int j = t + 1; j < n; ++j)
                if (d(i, j) % d(t, t) != 0) {
                    // add row i to row t, then restart the cleanup
                    for (int k = 0; k < n; ++k) d(t, k) += d(i, k);
                    for (int k = 0; k < u.cols(); ++k) u(t, k) += u(i, k);
                    divides = false;
                    break;
                }
        if (divides) {
            if (d(t, t) < 0) {
                for (int k = 0; k < n; ++k) d(t, k) = -d(t, k);
                for (int k = 0; k < u.cols(); ++k) u(t, k) = -u(t, k);
            }
            return;
        }
    }
}

IMat unimodular_inverse(const IMat& a) {
    QMat inv = rat_inverse(to_rational(a));
    IMat r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            require(boost::multiprecision::denominator(inv(i, j)) == 1, ErrorCode::InternalError,
                    "unimodular_inverse: non-integral inverse");
            r(i, j) = boost::multiprecision::numerator(inv(i, j));
        }
    return r;
}

}  // namespace

SmithForm smith_normal_form(const IMat& a) {
    SmithForm f;
    f.d = a;
    f.u = IMat::identity(a.rows());
    f.v = IMat::identity(a.cols());
    int steps = std::min(a.rows(), a.cols());
    for (int t = 0; t < steps; ++t) snf_pivot_cleanup(f.d, f.u, f.v, t);
    f.u_inv = unimodular_inverse(f.u);
    f.v_inv = unimodular_inverse(f.v);
    return f;
}

IMat integer_kernel(const IMat& a) {
    SmithForm f = smith_normal_form(a);
    int n = a.cols();
    int rank = 0;
    for (int i = 0; i < std::min(a.rows(), n); ++i)
        if (f.d(i, i) != 0) ++rank;
    IMat ker(n, n - rank);
    for (int j = rank; j < n; ++j)
        for (int i = 0; i < n; ++i) ker(i, j - rank) = f.v(i, j);
    return ker;
}

}  // namespace orthlift

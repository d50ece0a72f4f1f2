#include "orthlift/lattice.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace orthlift {

namespace {

Rat rat_mod1(const Rat& x) {
    Int num = boost::multiprecision::numerator(x);
    Int den = boost::multiprecision::denominator(x);
    Int r = num % den;
    if (r < 0) r += den;
    return Rat(r, den);
}

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

long positive_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

Rat GramLattice::pair(const QVec& a, const QVec& b) const {
    Rat s = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (a[i] != 0 && b[j] != 0) s += a[i] * gram_q(i, j) * b[j];
    return s;
}

Rat GramLattice::q(const QVec& a) const { return pair(a, a) / 2; }

bool GramLattice::in_lattice(const QVec& a) const {
    for (const Rat& x : a)
        if (boost::multiprecision::denominator(x) != 1) return false;
    return true;
}

bool GramLattice::in_dual(const QVec& a) const {
    for (int i = 0; i < rank; ++i) {
        Rat s = 0;
        for (int j = 0; j < rank; ++j) s += gram_q(i, j) * a[j];
        if (boost::multiprecision::denominator(s) != 1) return false;
    }
    return true;
}

Eigen::VectorXd GramLattice::to_real(const QVec& a) const {
    Eigen::VectorXd v(rank);
    for (int i = 0; i < rank; ++i) v[i] = to_double(a[i]);
    return v;
}

GramLattice build_lattice(const IMat& gram, const std::string& name) {
    GramLattice L;
    require(gram.rows() == gram.cols(), ErrorCode::NotSymmetric, "Gram matrix must be square");
    int n = gram.rows();
    for (int i = 0; i < n; ++i) {
        require(gram(i, i) % 2 == 0, ErrorCode::OddDiagonal, "Gram diagonal must be even");
        for (int j = 0; j < n; ++j)
            require(gram(i, j) == gram(j, i), ErrorCode::NotSymmetric, "Gram matrix must be symmetric");
    }
    L.gram = gram;
    L.rank = n;
    L.name = name;
    L.gram_q = to_rational(gram);
    Rat det = rat_det(L.gram_q);
    require(det != 0, ErrorCode::Singular, "Gram matrix is singular");
    L.det = boost::multiprecision::numerator(det);
    L.gram_inv = rat_inverse(L.gram_q);
    Inertia in = symmetric_inertia(L.gram_q);
    L.b_plus = in.positives;
    L.b_minus = in.negatives;
    return L;
}

GramLattice direct_sum(const std::vector<GramLattice>& blocks, const std::string& name) {
    int n = 0;
    for (const auto& b : blocks) n += b.rank;
    IMat g(n, n);
    int off = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rank; ++i)
            for (int j = 0; j < b.rank; ++j) g(off + i, off + j) = b.gram(i, j);
        off += b.rank;
    }
    std::string nm = name;
    if (nm.empty()) {
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (i) nm += "+";
            nm += blocks[i].name.empty() ? "?" : blocks[i].name;
        }
    }
    return build_lattice(g, nm);
}

GramLattice named_block(const std::string& name) {
    auto scaled = [&](const std::string& base) -> std::optional<long> {
        if (name == base) return 1;
        if (name.size() > base.size() + 2 && name.compare(0, base.size(), base) == 0 &&
            name[base.size()] == '(' && name.back() == ')') {
            return std::stol(name.substr(base.size() + 1, name.size() - base.size() - 2));
        }
        return std::nullopt;
    };
    if (auto n = scaled("U")) {
        IMat g(2, 2);
        g(0, 1) = *n;
        g(1, 0) = *n;
        return build_lattice(g, name);
    }
    if (auto n = scaled("A1")) {
        IMat g(1, 1);
        g(0, 0) = 2 * *n;
        return build_lattice(g, name);
    }
    fail(ErrorCode::UsageError, "unknown lattice block '" + name + "'");
}

namespace {

GramLattice lattice_from_json(const nlohmann::json& j) {
    std::string name = j.value("name", "");
    if (j.contains("gram")) {
        auto rows = j.at("gram");
        int n = static_cast<int>(rows.size());
        IMat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) g(i, k) = Int(rows[i][k].get<long long>());
        return build_lattice(g, name);
    }
    if (j.contains("blocks")) {
        std::vector<GramLattice> blocks;
        for (const auto& b : j.at("blocks")) {
            if (b.is_string())
                blocks.push_back(named_block(b.get<std::string>()));
            else {
                nlohmann::json sub;
                sub["gram"] = b;
                blocks.push_back(lattice_from_json(sub));
            }
        }
        return direct_sum(blocks, name);
    }
    fail(ErrorCode::UsageError, "lattice json needs 'gram' or 'blocks'");
}

}  // namespace

GramLattice lattice_from_json_text(const std::string& text) {
    return lattice_from_json(nlohmann::json::parse(text));
}

GramLattice lattice_from_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::UsageError, "cannot open lattice file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return lattice_from_json_text(ss.str());
}

// ---------------------------------------------------------------------------

DiscriminantForm DiscriminantForm::from_lattice(const GramLattice& L) {
    DiscriminantForm D;
    D.L_ = std::make_shared<GramLattice>(L);
    SmithForm snf = smith_normal_form(L.gram);
    int n = L.rank;
    D.u_ = snf.u;
    D.d_full_.resize(n);
    for (int i = 0; i < n; ++i) D.d_full_[i] = snf.d(i, i);
    for (int i = 0; i < n; ++i) {
        if (snf.d(i, i) > 1) {
            D.orders_.push_back(to_long(snf.d(i, i)));
            D.gen_pos_.push_back(i);
            // generator: G^{-1} U^{-1} e_i
            QVec g(n, Rat(0));
            for (int r = 0; r < n; ++r)
                for (int k = 0; k < n; ++k) g[r] += L.gram_inv(r, k) * Rat(snf.u_inv(k, i));
            D.gen_reps_.push_back(g);
        }
    }
    D.size_ = 1;
    for (long d : D.orders_) {
        D.size_ *= d;
        require(D.size_ <= (1L << 22), ErrorCode::BoundTooLargeForBoxSearch,
                "discriminant group too large");
    }
    require(Int(D.size_) == boost::multiprecision::abs(L.det), ErrorCode::InternalError,
            "discriminant group order must equal |det|");
    return D;
}

DiscElement DiscriminantForm::element(long index) const {
    DiscElement e = zero();
    for (std::size_t k = orders_.size(); k-- > 0;) {
        e.a[k] = index % orders_[k];
        index /= orders_[k];
    }
    return e;
}

long DiscriminantForm::index(const DiscElement& e) const {
    long idx = 0;
    for (std::size_t k = 0; k < orders_.size(); ++k) idx = idx * orders_[k] + e.a[k];
    return idx;
}

DiscElement DiscriminantForm::add(const DiscElement& x, const DiscElement& y) const {
    DiscElement r = zero();
    for (std::size_t k = 0; k < orders_.size(); ++k) r.a[k] = positive_mod(x.a[k] + y.a[k], orders_[k]);
    return r;
}

DiscElement DiscriminantForm::neg(const DiscElement& x) const {
    DiscElement r = zero();
    for (std::size_t k = 0; k < orders_.size(); ++k) r.a[k] = positive_mod(-x.a[k], orders_[k]);
    return r;
}

DiscElement DiscriminantForm::mul(const Int& n, const DiscElement& x) const {
    DiscElement r = zero();
    for (std::size_t k = 0; k < orders_.size(); ++k) {
        Int v = (n * x.a[k]) % orders_[k];
        if (v < 0) v += orders_[k];
        r.a[k] = to_long(v);
    }
    return r;
}

long DiscriminantForm::order_of(const DiscElement& x) const {
    long ord = 1;
    for (std::size_t k = 0; k < orders_.size(); ++k) {
        long d = orders_[k] / std::gcd(orders_[k], x.a[k]);
        ord = std::lcm(ord, d);
    }
    return ord;
}

QVec DiscriminantForm::rep(const DiscElement& e) const {
    int n = L_->rank;
    QVec r(n, Rat(0));
    for (std::size_t k = 0; k < orders_.size(); ++k)
        if (e.a[k] != 0)
            for (int i = 0; i < n; ++i) r[i] += Rat(e.a[k]) * gen_reps_[k][i];
    // reduce mod L into a small canonical box
    for (int i = 0; i < n; ++i) {
        Int num = boost::multiprecision::numerator(r[i]);
        Int den = boost::multiprecision::denominator(r[i]);
        r[i] -= Rat(floor_div(num, den));
    }
    return r;
}

DiscElement DiscriminantForm::classify(const QVec& dual_vector) const {
    int n = L_->rank;
    require(static_cast<int>(dual_vector.size()) == n, ErrorCode::UsageError, "bad vector size");
    // x = gram * lambda must be integral
    IVec x(n);
    for (int i = 0; i < n; ++i) {
        Rat s = 0;
        for (int j = 0; j < n; ++j) s += L_->gram_q(i, j) * dual_vector[j];
        require(boost::multiprecision::denominator(s) == 1, ErrorCode::NotInDualLattice,
                "vector is not in the dual lattice");
        x[i] = boost::multiprecision::numerator(s);
    }
    DiscElement e = zero();
    for (std::size_t k = 0; k < orders_.size(); ++k) {
        Int y = 0;
        for (int j = 0; j < n; ++j) y += u_(gen_pos_[k], j) * x[j];
        Int m = y % orders_[k];
        if (m < 0) m += orders_[k];
        e.a[k] = to_long(m);
    }
    return e;
}

Rat DiscriminantForm::q(const DiscElement& e) const { return rat_mod1(L_->q(rep(e))); }

Rat DiscriminantForm::bilin(const DiscElement& x, const DiscElement& y) const {
    return rat_mod1(L_->pair(rep(x), rep(y)));
}

std::vector<DiscElement> DiscriminantForm::isotropic_elements() const {
    std::vector<DiscElement> iso;
    for (long i = 0; i < size_; ++i) {
        DiscElement e = element(i);
        if (q(e) == 0) iso.push_back(e);
    }
    return iso;
}

std::vector<DiscElement> isotropic_classes(const DiscriminantForm& D) {
    return D.isotropic_elements();
}

// ---------------------------------------------------------------------------

Int level_of(const GramLattice& L, const IVec& z) {
    bool zero = true;
    for (const Int& c : z)
        if (c != 0) zero = false;
    require(!zero, ErrorCode::ZeroVector, "level of the zero vector");
    IVec gz(L.rank, Int(0));
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j) gz[i] += L.gram(i, j) * z[j];
    return vec_gcd(gz);
}

std::vector<std::vector<long>> enumerate_ellipsoid(const Eigen::MatrixXd& A,
                                                   const Eigen::VectorXd& center, double bound,
                                                   std::size_t node_limit) {
    int n = static_cast<int>(A.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    require(llt.info() == Eigen::Success, ErrorCode::DegenerateFrame,
            "ellipsoid form is not positive definite");
    Eigen::MatrixXd R = llt.matrixU();  // A = R^T R
    // Q(x) = sum_i R_ii^2 (y_i + sum_{j>i} (R_ij/R_ii) y_j)^2,  y = x - center
    std::vector<std::vector<long>> out;
    std::vector<long> x(n, 0);
    std::size_t nodes = 0;
    double slack = bound * 1e-12 + 1e-12;

    auto rec = [&](auto&& self, int i, double remaining) -> void {
        require(++nodes <= node_limit, ErrorCode::BoundTooLargeForBoxSearch,
                "ellipsoid enumeration exceeds the node limit");
        double rii = R(i, i);
        double shift = -center[i];
        for (int j = i + 1; j < n; ++j) shift += (R(i, j) / rii) * (x[j] - center[j]);
        double half_width = std::sqrt(std::max(0.0, remaining + slack)) / rii;
        long lo = static_cast<long>(std::ceil(-shift - half_width - 1e-12));
        long hi = static_cast<long>(std::floor(-shift + half_width + 1e-12));
        for (long xi = lo; xi <= hi; ++xi) {
            x[i] = xi;
            double term = rii * (xi + shift);
            term *= term;
            if (term > remaining + slack) continue;
            if (i == 0) {
                out.push_back(x);
            } else {
                self(self, i - 1, remaining - term);
            }
        }
        x[i] = 0;
    };
    if (n > 0 && bound >= 0) rec(rec, n - 1, bound);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IsotropicVectorRecord> enumerate_isotropic_vectors(const GramLattice& L,
                                                               const Eigen::MatrixXd& majorant,
                                                               double bound) {
    int n = L.rank;
    // Work in dual coordinates lambda = G^{-1} x, x in Z^n.
    Eigen::MatrixXd ginv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ginv(i, j) = to_double(L.gram_inv(i, j));
    Eigen::MatrixXd A = 0.5 * ginv.transpose() * majorant * ginv;
    A = 0.5 * (A + A.transpose());
    auto points = enumerate_ellipsoid(A, Eigen::VectorXd::Zero(n), bound);

    std::vector<IsotropicVectorRecord> out;
    for (const auto& xs : points) {
        bool zero = true;
        for (long c : xs)
            if (c) zero = false;
        if (zero) continue;
        // q(lambda) = x^T G^{-1} x / 2, exact
        QVec lambda(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (xs[j] != 0) lambda[i] += L.gram_inv(i, j) * Rat(xs[j]);
        Rat qv = L.q(lambda);
        if (qv != 0) continue;
        IsotropicVectorRecord rec;
        rec.vector = lambda;
        IVec x(n);
        for (int i = 0; i < n; ++i) x[i] = Int(xs[i]);
        Int g = vec_gcd(x);
        rec.multiplier = g;
        rec.primitive = (g == 1);
        rec.level = g;  // (lambda, L) = gcd(x) Z in dual coordinates
        rec.primitive_part = lambda;
        for (auto& c : rec.primitive_part) c /= Rat(g);
        Eigen::VectorXd lr = L.to_real(lambda);
        rec.majorant = 0.5 * lr.dot(majorant * lr);
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(), [](const IsotropicVectorRecord& a, const IsotropicVectorRecord& b) {
        if (a.majorant != b.majorant) return a.majorant < b.majorant;
        return a.vector < b.vector;
    });
    return out;
}

// ---------------------------------------------------------------------------

QVec CuspComplement::embed_K(const QVec& k) const {
    int n = L->rank;
    QVec r(n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < embed.cols(); ++j) r[i] += Rat(embed(i, j)) * k[j];
    return r;
}

QVec CuspComplement::k_coords(const QVec& ambient) const {
    // Solve K_gram c = E^T G ambient.
    int m = embed.cols();
    QVec rhs(m, Rat(0));
    QVec g_amb(L->rank, Rat(0));
    for (int i = 0; i < L->rank; ++i)
        for (int j = 0; j < L->rank; ++j) g_amb[i] += L->gram_q(i, j) * ambient[j];
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < L->rank; ++i) rhs[j] += Rat(embed(i, j)) * g_amb[i];
    QVec c = rat_solve(K.gram_q, rhs);
    QVec back = embed_K(c);
    require(back == ambient, ErrorCode::InternalError, "vector does not lie in K tensor Q");
    return c;
}

CuspComplement make_cusp(const GramLattice& L, const IVec& z) {
    CuspComplement cusp;
    cusp.L = std::make_shared<GramLattice>(L);
    int n = L.rank;
    require(vec_gcd(z) == 1, ErrorCode::UsageError, "cusp vector must be primitive");
    QVec zq = to_rational(z);
    require(L.q(zq) == 0, ErrorCode::UsageError, "cusp vector must be isotropic");
    cusp.z = z;
    cusp.N_z = level_of(L, z);

    // z' in L' with (z, z') = 1: in dual coordinates (z, G^{-1}x) = z . x.
    IVec u = vec_ext_gcd(z);
    QVec zp(n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) zp[i] += L.gram_inv(i, j) * Rat(u[j]);
    cusp.z_prime = zp;
    Rat qzp = L.q(zp);
    cusp.z_tilde = zp;
    for (int i = 0; i < n; ++i) cusp.z_tilde[i] -= qzp * Rat(z[i]);

    // zeta in L with (z, zeta) = N_z
    IVec gz(n, Int(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gz[i] += L.gram(i, j) * z[j];
    cusp.zeta = vec_ext_gcd(gz);

    // K = kernel of the pairing functionals of z and z'
    IMat rows(2, n);
    for (int j = 0; j < n; ++j) {
        rows(0, j) = gz[j];
        Rat s = 0;
        for (int i = 0; i < n; ++i) s += L.gram_q(j, i) * zp[i];
        require(boost::multiprecision::denominator(s) == 1, ErrorCode::InternalError, "z' not dual");
        rows(1, j) = boost::multiprecision::numerator(s);
    }
    cusp.embed = integer_kernel(rows);
    require(cusp.embed.cols() == n - 2, ErrorCode::InternalError, "cusp complement has wrong rank");
    IMat kg(n - 2, n - 2);
    for (int a = 0; a < n - 2; ++a)
        for (int b = 0; b < n - 2; ++b) {
            Int s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += cusp.embed(i, a) * L.gram(i, j) * cusp.embed(j, b);
            kg(a, b) = s;
        }
    cusp.K = build_lattice(kg, L.name.empty() ? "K" : "K(" + L.name + ")");
    require(cusp.K.b_plus == L.b_plus - 1 && cusp.K.b_minus == L.b_minus - 1, ErrorCode::InternalError,
            "K signature mismatch");

    QVec zetaq = to_rational(cusp.zeta);
    cusp.B_coeff = L.pair(zetaq, zp) - Rat(cusp.N_z) * L.pair(zp, zp);
    return cusp;
}

std::optional<CuspComplement> split_hyperbolic(const GramLattice& L, int search_bound) {
    int n = L.rank;
    // Shells of increasing max-norm; within a shell, descending lexicographic
    // order so that standard basis vectors are preferred.
    for (int m = 1; m <= search_bound; ++m) {
        std::vector<long> x(n, m);
        for (;;) {
            long maxabs = 0;
            for (long c : x) maxabs = std::max(maxabs, std::abs(c));
            if (maxabs == m) {
                int first_nonzero = -1;
                for (int i = 0; i < n; ++i)
                    if (x[i] != 0) {
                        first_nonzero = i;
                        break;
                    }
                if (first_nonzero >= 0 && x[first_nonzero] > 0) {
                    IVec z(n);
                    for (int i = 0; i < n; ++i) z[i] = Int(x[i]);
                    if (vec_gcd(z) == 1 && L.q(to_rational(z)) == 0 && level_of(L, z) == 1)
                        return make_cusp(L, z);
                }
            }
            int i = n - 1;
            while (i >= 0 && x[i] == -m) x[i--] = m;
            if (i < 0) break;
            --x[i];
        }
    }
    return std::nullopt;
}

QVec k_projection(const CuspComplement& cusp, const QVec& lambda) {
    const GramLattice& L = *cusp.L;
    QVec zq = to_rational(cusp.z);
    Rat lz = L.pair(lambda, zq);
    Rat lzp = L.pair(lambda, cusp.z_prime);
    Rat zpzp = L.pair(cusp.z_prime, cusp.z_prime);
    QVec amb = lambda;
    for (int i = 0; i < L.rank; ++i)
        amb[i] += -lz * cusp.z_prime[i] + (lz * zpzp - lzp) * Rat(cusp.z[i]);
    return cusp.k_coords(amb);
}

DiscElement pi_class_map(const DiscriminantForm& D, const CuspComplement& cusp) {
    return pi_class_map(D, *cusp.L, cusp.z);
}

DiscElement pi_class_map(const DiscriminantForm& D, const GramLattice& L, const IVec& z) {
    require(vec_gcd(z) == 1, ErrorCode::UsageError, "pi_class_map needs a primitive vector");
    Int N = level_of(L, z);
    QVec znz(L.rank);
    for (int i = 0; i < L.rank; ++i) znz[i] = Rat(z[i], N);
    DiscElement e = D.classify(znz);  // throws NotInDualLattice if violated
    require(D.q(e) == 0, ErrorCode::InternalError, "pi_L image must be isotropic");
    return e;
}

PiSublatticeData pi_sublattice_data(const CuspComplement& cusp, const DiscriminantForm& D,
                                    const DiscriminantForm& DK) {
    PiSublatticeData out;
    const GramLattice& L = *cusp.L;
    QVec zq = to_rational(cusp.z);
    QVec zetaK_amb;
    {
        QVec zetaq = to_rational(cusp.zeta);
        QVec zk = k_projection(cusp, zetaq);
        zetaK_amb = cusp.embed_K(zk);
    }
    out.fibers.resize(DK.size());
    for (long i = 0; i < D.size(); ++i) {
        DiscElement e = D.element(i);
        QVec lam = D.rep(e);
        Rat pz = L.pair(lam, zq);
        require(boost::multiprecision::denominator(pz) == 1, ErrorCode::InternalError,
                "(lambda, z) must be integral");
        if (boost::multiprecision::numerator(pz) % cusp.N_z != 0) continue;
        Rat c = pz / Rat(cusp.N_z);
        // pi(lambda) = lambda_K + ((lambda, z)/N_z) zeta_K
        QVec lamK = k_projection(cusp, lam);
        QVec amb = cusp.embed_K(lamK);
        for (int r = 0; r < L.rank; ++r) amb[r] += c * zetaK_amb[r];
        DiscElement img = DK.classify(cusp.k_coords(amb));
        out.l0_classes.push_back(e);
        out.pi_images.push_back(img);
        out.fibers[DK.index(img)].push_back(e);
    }
    return out;
}

std::vector<DiscElement> pi_fiber_over_vector(const CuspComplement& cusp,
                                              const DiscriminantForm& D, const QVec& lambda_K) {
    const GramLattice& L = *cusp.L;
    QVec lam = cusp.embed_K(lambda_K);
    Rat lzeta = L.pair(lam, to_rational(cusp.zeta));
    long N = to_long(cusp.N_z);
    std::vector<DiscElement> fiber;
    for (long b = 0; b < N; ++b) {
        QVec v = lam;
        Rat coef = Rat(b, N) - lzeta / Rat(N);
        for (int i = 0; i < L.rank; ++i) v[i] += coef * Rat(cusp.z[i]);
        fiber.push_back(D.classify(v));
    }
    return fiber;
}

}  // namespace orthlift

#include "orthlift/lattice.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace orthlift;

namespace {

IMat mat(std::vector<std::vector<long>> rows) {
    IMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = Int(rows[i][j]);
    return m;
}

GramLattice U() { return named_block("U"); }
GramLattice A1() { return named_block("A1"); }
GramLattice A1m() { return named_block("A1(-1)"); }

// Independent brute-force box search for isotropic dual vectors: coordinate
// bounds straight from the inverse of the quadratic form, then filter.
std::vector<std::vector<long>> box_isotropic_oracle(const GramLattice& L, const Eigen::MatrixXd& M,
                                                    double bound) {
    int n = L.rank;
    Eigen::MatrixXd ginv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ginv(i, j) = to_double(L.gram_inv(i, j));
    Eigen::MatrixXd A = 0.5 * ginv.transpose() * M * ginv;
    Eigen::MatrixXd Ainv = A.inverse();
    std::vector<long> lim(n);
    for (int i = 0; i < n; ++i) lim[i] = static_cast<long>(std::floor(std::sqrt(bound * Ainv(i, i)) + 1e-9)) + 1;
    std::vector<std::vector<long>> found;
    std::vector<long> x(n, 0);
    double slack = bound * 1e-12 + 1e-12;
    auto value = [&]() {
        Eigen::VectorXd xv(n);
        for (int i = 0; i < n; ++i) xv[i] = static_cast<double>(x[i]);
        return xv.dot(A * xv);
    };
    auto q_exact_zero = [&]() {
        Rat s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += Rat(x[i]) * L.gram_inv(i, j) * Rat(x[j]);
        return s == 0;
    };
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            bool zero = std::all_of(x.begin(), x.end(), [](long c) { return c == 0; });
            if (!zero && value() <= bound + slack && q_exact_zero()) found.push_back(x);
            return;
        }
        for (long v = -lim[i]; v <= lim[i]; ++v) {
            x[i] = v;
            rec(i + 1);
        }
        x[i] = 0;
    };
    rec(0);
    std::sort(found.begin(), found.end());
    return found;
}

std::vector<std::vector<long>> dual_coords_of(const GramLattice& L,
                                              const std::vector<IsotropicVectorRecord>& recs) {
    std::vector<std::vector<long>> out;
    for (const auto& r : recs) {
        std::vector<long> x(L.rank);
        for (int i = 0; i < L.rank; ++i) {
            Rat s = 0;
            for (int j = 0; j < L.rank; ++j) s += L.gram_q(i, j) * r.vector[j];
            REQUIRE(boost::multiprecision::denominator(s) == 1);
            x[i] = to_long(boost::multiprecision::numerator(s));
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("build_lattice signatures") {
    CHECK(U().b_plus == 1);
    CHECK(U().b_minus == 1);
    CHECK(A1().b_plus == 1);
    CHECK(A1().b_minus == 0);
    auto UU = direct_sum({U(), U()});
    CHECK(UU.b_plus == 2);
    CHECK(UU.b_minus == 2);
    CHECK(UU.det == 1);

    CHECK_THROWS_AS(build_lattice(mat({{1}})), Error);             // odd diagonal
    CHECK_THROWS_AS(build_lattice(mat({{2, 2}, {2, 2}})), Error);  // singular
    CHECK_THROWS_AS(build_lattice(mat({{2, 1}, {0, 2}})), Error);  // not symmetric
}

TEST_CASE("smith normal form properties") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dist(-6, 6);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + trial % 4;
        IMat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
        SmithForm f = smith_normal_form(a);
        CHECK(f.u * a * f.v == f.d);
        Rat du = rat_det(to_rational(f.u));
        Rat dv = rat_det(to_rational(f.v));
        CHECK((du == 1 || du == -1));
        CHECK((dv == 1 || dv == -1));
        for (int i = 0; i + 1 < n; ++i) {
            if (f.d(i + 1, i + 1) != 0) {
                CHECK(f.d(i, i) != 0);
                CHECK(f.d(i + 1, i + 1) % f.d(i, i) == 0);
            }
        }
        CHECK(f.u * f.u_inv == IMat::identity(n));
        CHECK(f.v * f.v_inv == IMat::identity(n));
    }
}

TEST_CASE("inertia matches Eigen on random symmetric matrices") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + trial % 4;
        Eigen::MatrixXd m(n, n);
        QMat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                int v = dist(rng);
                m(i, j) = m(j, i) = v;
                g(i, j) = g(j, i) = v;
            }
        Inertia in = symmetric_inertia(g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        int pos = 0, neg = 0, zero = 0;
        for (int i = 0; i < n; ++i) {
            double ev = es.eigenvalues()[i];
            if (ev > 1e-9)
                ++pos;
            else if (ev < -1e-9)
                ++neg;
            else
                ++zero;
        }
        CHECK(in.positives == pos);
        CHECK(in.negatives == neg);
        CHECK(in.zeros == zero);
    }
}

TEST_CASE("discriminant forms of small lattices") {
    auto DU = DiscriminantForm::from_lattice(U());
    CHECK(DU.size() == 1);
    CHECK(DU.isotropic_elements().size() == 1);

    // brute-force oracle for A1: dual cosets (1/2)Z/Z have q = 0, 1/4
    auto DA = DiscriminantForm::from_lattice(A1());
    CHECK(DA.size() == 2);
    CHECK(DA.generator_orders() == std::vector<long>{2});
    CHECK(DA.q(DA.element(1)) == Rat(1, 4));

    auto DAm = DiscriminantForm::from_lattice(A1m());
    CHECK(DAm.q(DAm.element(1)) == Rat(3, 4));

    auto D2 = DiscriminantForm::from_lattice(direct_sum({A1(), A1m()}));
    CHECK(D2.size() == 4);
    auto iso = D2.isotropic_elements();
    CHECK(iso.size() == 2);  // {(0,0), (1,1)}: q = x^2/4 - y^2/4 mod 1
}

TEST_CASE("q(x+y) - q(x) - q(y) = (x,y) mod 1 exhaustively") {
    std::vector<GramLattice> Ls = {U(),
                                   A1(),
                                   A1m(),
                                   named_block("U(2)"),
                                   direct_sum({A1(), A1m()}),
                                   direct_sum({U(), U(), A1m(), A1m()}),
                                   direct_sum({named_block("U(2)"), U(), A1m()})};
    for (const auto& L : Ls) {
        auto D = DiscriminantForm::from_lattice(L);
        REQUIRE(D.size() <= 64);
        for (long i = 0; i < D.size(); ++i)
            for (long j = 0; j < D.size(); ++j) {
                auto x = D.element(i), y = D.element(j);
                Rat lhs = D.q(D.add(x, y)) - D.q(x) - D.q(y);
                Rat diff = lhs - D.bilin(x, y);
                Int num = boost::multiprecision::numerator(diff);
                Int den = boost::multiprecision::denominator(diff);
                CHECK(num % den == 0);  // equality mod 1
            }
        for (long i = 0; i < D.size(); ++i) {
            auto x = D.element(i);
            CHECK(D.q(D.neg(x)) == D.q(x));
        }
    }
}

TEST_CASE("level_of") {
    CHECK(level_of(U(), {Int(1), Int(0)}) == 1);
    CHECK(level_of(U(), {Int(2), Int(0)}) == 2);
    CHECK(level_of(named_block("U(2)"), {Int(1), Int(0)}) == 2);
    CHECK_THROWS_AS(level_of(U(), {Int(0), Int(0)}), Error);
}

TEST_CASE("isotropic vector enumeration equals box oracle") {
    std::vector<GramLattice> Ls = {U(), direct_sum({U(), U()}), direct_sum({U(), A1m()}),
                                   direct_sum({U(), U(), A1m(), A1m()}),
                                   direct_sum({named_block("U(2)"), U()})};
    for (const auto& L : Ls) {
        Eigen::MatrixXd M = 2.0 * Eigen::MatrixXd::Identity(L.rank, L.rank);
        for (double bound : {2.0, 10.0}) {
            auto recs = enumerate_isotropic_vectors(L, M, bound);
            auto got = dual_coords_of(L, recs);
            auto expect = box_isotropic_oracle(L, M, bound);
            CHECK(got == expect);
        }
    }
    // negative definite: no isotropic vectors at all
    auto neg = direct_sum({A1m(), A1m()});
    CHECK(enumerate_isotropic_vectors(neg, Eigen::MatrixXd::Identity(2, 2), 10.0).empty());
}

TEST_CASE("U enumeration contains the isotropic lines") {
    auto recs = enumerate_isotropic_vectors(U(), 2.0 * Eigen::MatrixXd::Identity(2, 2), 4.0);
    auto got = dual_coords_of(U(), recs);
    // dual coords of e1 = G e1 = (0,1)
    CHECK(std::find(got.begin(), got.end(), std::vector<long>{0, 1}) != got.end());
    CHECK(std::find(got.begin(), got.end(), std::vector<long>{1, 0}) != got.end());
    CHECK(std::find(got.begin(), got.end(), std::vector<long>{-1, 0}) != got.end());
    CHECK(std::find(got.begin(), got.end(), std::vector<long>{0, -1}) != got.end());
}

TEST_CASE("split_hyperbolic") {
    auto c = split_hyperbolic(U(), 2);
    REQUIRE(c.has_value());
    CHECK(c->N_z == 1);
    CHECK(c->K.rank == 0);
    CHECK(c->z == IVec{Int(1), Int(0)});
    CHECK(c->L->pair(to_rational(c->z), c->z_prime) == 1);

    // U(2) has no level-1 isotropic vectors
    CHECK(!split_hyperbolic(named_block("U(2)"), 3).has_value());

    auto UU = direct_sum({U(), U()});
    auto c2 = split_hyperbolic(UU, 2);
    REQUIRE(c2.has_value());
    CHECK(c2->K.b_plus == 1);
    CHECK(c2->K.b_minus == 1);
    CHECK(c2->K.det == -1);
}

TEST_CASE("k_projection kills z and z', fixes K") {
    auto UU = direct_sum({U(), U()});
    auto cusp = split_hyperbolic(UU, 2).value();
    const auto& L = *cusp.L;

    QVec zq = to_rational(cusp.z);
    auto in_K = k_projection(cusp, zq);
    for (const auto& c : in_K) CHECK(c == 0);
    auto in_K2 = k_projection(cusp, cusp.z_prime);
    for (const auto& c : in_K2) CHECK(c == 0);

    // a vector already in K projects to itself
    QVec k_test = {Rat(2), Rat(-3)};
    QVec amb = cusp.embed_K(k_test);
    CHECK(k_projection(cusp, amb) == k_test);

    // ambient orthogonality for a generic vector
    QVec lam = {Rat(1), Rat(2), Rat(3, 2), Rat(-1)};
    QVec proj_amb = cusp.embed_K(k_projection(cusp, lam));
    CHECK(L.pair(proj_amb, zq) == 0);
    CHECK(L.pair(proj_amb, cusp.z_prime) == 0);
}

TEST_CASE("pi_class_map") {
    auto DU = DiscriminantForm::from_lattice(U());
    CHECK(pi_class_map(DU, U(), {Int(1), Int(0)}) == DU.zero());

    auto U2 = named_block("U(2)");
    auto D2 = DiscriminantForm::from_lattice(U2);
    auto cls = pi_class_map(D2, U2, {Int(1), Int(0)});
    CHECK(!(cls == D2.zero()));
    CHECK(D2.order_of(cls) == 2);
    CHECK(D2.q(cls) == 0);

    auto UU = direct_sum({U(), U()});
    auto DUU = DiscriminantForm::from_lattice(UU);
    CHECK(pi_class_map(DUU, UU, {Int(0), Int(1), Int(0), Int(0)}) == DUU.zero());
}

TEST_CASE("pi sublattice data and fibers") {
    // N_z = 1: natural bijection, singleton fibers
    auto UA = direct_sum({U(), A1()});
    auto cusp = make_cusp(UA, {Int(1), Int(0), Int(0)});
    REQUIRE(cusp.N_z == 1);
    auto D = DiscriminantForm::from_lattice(UA);
    auto DK = DiscriminantForm::from_lattice(cusp.K);
    auto data = pi_sublattice_data(cusp, D, DK);
    CHECK(data.l0_classes.size() == static_cast<std::size_t>(D.size()));
    for (const auto& f : data.fibers) CHECK(f.size() == 1);

    // U(2) + U with z of level 2: fibers of size 2
    auto U2U = direct_sum({named_block("U(2)"), U()});
    auto cusp2 = make_cusp(U2U, {Int(1), Int(0), Int(0), Int(0)});
    REQUIRE(cusp2.N_z == 2);
    auto D2 = DiscriminantForm::from_lattice(U2U);
    auto DK2 = DiscriminantForm::from_lattice(cusp2.K);
    auto data2 = pi_sublattice_data(cusp2, D2, DK2);
    CHECK(data2.l0_classes.size() == 2);
    CHECK(DK2.size() == 1);
    CHECK(data2.fibers[0].size() == 2);

    // fiber over the zero vector of K'
    QVec zeroK(cusp2.K.rank, Rat(0));
    auto fib = pi_fiber_over_vector(cusp2, D2, zeroK);
    CHECK(fib.size() == 2);
    std::sort(fib.begin(), fib.end());
    CHECK(std::unique(fib.begin(), fib.end()) == fib.end());
    for (const auto& e : fib) {
        auto found = std::find(data2.fibers[0].begin(), data2.fibers[0].end(), e);
        CHECK(found != data2.fibers[0].end());
    }
}

TEST_CASE("cusp decomposition identity zeta = zeta_K + N_z z' + B z") {
    for (auto& L : {direct_sum({named_block("U(2)"), U()}), direct_sum({U(), U(), A1m()})}) {
        auto cusp = split_hyperbolic(L, 2).has_value() ? split_hyperbolic(L, 2).value()
                                                       : make_cusp(L, {Int(1), Int(0), Int(0), Int(0)});
        QVec zetaq = to_rational(cusp.zeta);
        QVec zk_amb = cusp.embed_K(k_projection(cusp, zetaq));
        for (int i = 0; i < cusp.L->rank; ++i) {
            Rat rhs = zk_amb[i] + Rat(cusp.N_z) * cusp.z_prime[i] + cusp.B_coeff * Rat(cusp.z[i]);
            CHECK(zetaq[i] == rhs);
        }
        CHECK(cusp.L->q(cusp.z_tilde) == 0);
        CHECK(cusp.L->pair(to_rational(cusp.z), cusp.z_tilde) == 1);
    }
}

TEST_CASE("lattice json input") {
    auto L = lattice_from_json_text(R"js({"name":"uu","gram":[[0,1],[1,0]]})js");
    CHECK(L.rank == 2);
    CHECK(L.name == "uu");
    auto L2 = lattice_from_json_text(R"js({"blocks":["U","U","A1(-1)"]})js");
    CHECK(L2.rank == 5);
    CHECK(L2.b_minus == 3);
    auto L3 = lattice_from_json_text(R"js({"blocks":["U",[[4,1],[1,4]]]})js");
    CHECK(L3.rank == 4);
}

#include "orthlift/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orthlift {

const PrecisionConfig& default_precision() {
    static PrecisionConfig cfg;
    return cfg;
}

Cplx e_of(Cplx z) { return std::exp(Cplx(0.0, 2.0 * PI) * z); }

Cplx principal_sqrt(Cplx z) {
    // normalize -0 imaginary parts so the cut maps the negative real axis to +i R
    if (z.imag() == 0.0) z = Cplx(z.real(), 0.0);
    Cplx r = std::sqrt(z);
    if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
    return r;
}

Cplx cpow(Cplx z, Cplx w) {
    if (z == Cplx(0.0, 0.0)) return (w == Cplx(0.0, 0.0)) ? Cplx(1.0, 0.0) : Cplx(0.0, 0.0);
    if (z.imag() == 0.0) z = Cplx(z.real(), 0.0);
    return std::exp(w * std::log(z));
}

// ---------------------------------------------------------------------------
// Gamma.  Lanczos approximation with g = 607/128, 15 coefficients (Godfrey's
// table, the same set used by Boost.Math and SciPy); relative error below
// 1e-15 on Re(s) >= 1/2.  Reflection formula for the left half plane.

namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczosCoeff[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

Cplx gamma_right_half(Cplx s) {
    // valid for Re(s) >= 0.5
    Cplx a(kLanczosCoeff[0], 0.0);
    for (int k = 1; k < 15; ++k) a += kLanczosCoeff[k] / (s - 1.0 + static_cast<double>(k));
    Cplx t = s + (kLanczosG - 0.5);
    return std::sqrt(2.0 * PI) * cpow(t, s - 0.5) * std::exp(-t) * a;
}

}  // namespace

Cplx gamma_c(Cplx s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
        fail(ErrorCode::PoleAtNonPositiveInteger, "gamma pole at s = " + std::to_string(s.real()));
    if (s.real() >= 0.5) return gamma_right_half(s);
    // Gamma(s) Gamma(1-s) = pi / sin(pi s)
    return PI / (std::sin(PI * s) * gamma_right_half(1.0 - s));
}

// ---------------------------------------------------------------------------
// Hurwitz zeta by Euler-Maclaurin:
//   zeta(s, a) = sum_{n<N} (n+a)^{-s} + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
//              + sum_{k=1..K} B_{2k}/(2k)! * (s)_{2k-1} * (N+a)^{-s-2k+1}
// The correction terms give the analytic continuation to Re(s) > 1 - 2K.

namespace {

// B_2, B_4, ..., B_26
constexpr double kBernoulli[13] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
};

double factorial_d(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

Cplx hurwitz_zeta(Cplx s, double a, const PrecisionConfig& cfg) {
    require(a > 0.0 && a <= 1.0, ErrorCode::UsageError, "hurwitz_zeta: a must be in (0, 1]");
    require(std::abs(s - Cplx(1.0, 0.0)) > 1e-14, ErrorCode::PoleAtOne, "hurwitz zeta pole at s = 1");
    int depth = std::min(cfg.euler_maclaurin_depth, 13);
    require(s.real() > 2.0 - 2.0 * depth, ErrorCode::UsageError,
            "hurwitz_zeta: Re(s) out of the continuation range for the configured depth");
    // Base point: large enough for the asymptotic tail to converge quickly.
    int N = static_cast<int>(std::max({25.0, std::abs(s.imag()) * 0.8, std::abs(s.real()) * 1.2}));
    Cplx sum(0.0, 0.0);
    for (int n = 0; n < N; ++n) sum += cpow(Cplx(n + a, 0.0), -s);
    double x = N + a;
    sum += cpow(Cplx(x, 0.0), 1.0 - s) / (s - 1.0);
    sum += 0.5 * cpow(Cplx(x, 0.0), -s);
    Cplx poch = s;  // (s)_{2k-1} rising factorial, k = 1 gives s
    for (int k = 1; k <= depth; ++k) {
        if (k > 1) {
            poch *= (s + static_cast<double>(2 * k - 3));
            poch *= (s + static_cast<double>(2 * k - 2));
        }
        sum += kBernoulli[k - 1] / factorial_d(2 * k) * poch * cpow(Cplx(x, 0.0), -s - static_cast<double>(2 * k - 1));
    }
    return sum;
}

Cplx zeta_plus(long N, long c, Cplx s, const PrecisionConfig& cfg) {
    require(N >= 1, ErrorCode::UsageError, "zeta_plus: modulus must be positive");
    long c0 = c % N;
    if (c0 <= 0) c0 += N;  // positive representative in 1..N
    return cpow(Cplx(static_cast<double>(N), 0.0), -s) * hurwitz_zeta(s, static_cast<double>(c0) / N, cfg);
}

Cplx zeta_signed(long N, long c, Cplx s, const PrecisionConfig& cfg) {
    return zeta_plus(N, c, s, cfg) + std::exp(Cplx(0.0, -PI) * s) * zeta_plus(N, -c, s, cfg);
}

// ---------------------------------------------------------------------------
// Bessel K.

Cplx bessel_k(Cplx order, double x, const PrecisionConfig& cfg) {
    require(x > 0.0, ErrorCode::UsageError, "bessel_k: x must be positive");
    if (x > 700.0) fail(ErrorCode::UnderflowToZero, "bessel_k underflows for x > 700");
    double eps = cfg.target_rel_error;
    double nu_re = std::abs(order.real());
    // Truncation point: x cosh(t) - |Re nu| t >= x + log(1/eps) + margin.
    double L = std::log(1.0 / eps) + 12.0;
    double t_max = std::acosh(std::max(1.0, 1.0 + L / x));
    for (int it = 0; it < 32; ++it) {
        double next = std::acosh(std::max(1.0, 1.0 + (L + nu_re * t_max) / x));
        if (next <= t_max + 1e-12) {
            t_max = next;
            break;
        }
        t_max = next;
    }
    auto integrand = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(order * t); };
    // trapezoid with node doubling; integrand is analytic and decays like
    // exp(-x e^t / 2), so the trapezoid rule converges geometrically
    int n = std::max(cfg.quadrature_nodes, 16);
    double h = t_max / n;
    Cplx acc = 0.5 * (integrand(0.0) + integrand(t_max));
    for (int i = 1; i < n; ++i) acc += integrand(i * h);
    Cplx prev = acc * h;
    for (int round = 0; round < 14; ++round) {
        // add midpoints
        Cplx mids(0.0, 0.0);
        for (int i = 0; i < n; ++i) mids += integrand((i + 0.5) * h);
        Cplx cur = 0.5 * prev + mids * (0.5 * h);
        n *= 2;
        h *= 0.5;
        if (std::abs(cur - prev) <= eps * std::abs(cur) + 1e-300) return cur;
        prev = cur;
    }
    return prev;
}

// ---------------------------------------------------------------------------
// Dirichlet characters.

long euler_phi(long N) {
    long phi = 1;
    long n = N;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        long pk = 1;
        while (n % p == 0) {
            n /= p;
            pk *= p;
        }
        phi *= pk - pk / p;
    }
    if (n > 1) phi *= n - 1;
    return phi;
}

namespace {

long pow_mod(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// cyclic generators of (Z/p^e)^x for odd p; (Z/2^e)^x handled separately
long primitive_root(long pe, long phi) {
    std::vector<long> prime_factors;
    long f = phi;
    for (long p = 2; p * p <= f; ++p)
        if (f % p == 0) {
            prime_factors.push_back(p);
            while (f % p == 0) f /= p;
        }
    if (f > 1) prime_factors.push_back(f);
    for (long g = 2; g < pe; ++g) {
        if (std::gcd(g, pe) != 1) continue;
        bool ok = true;
        for (long p : prime_factors)
            if (pow_mod(g, phi / p, pe) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    fail(ErrorCode::InternalError, "no primitive root found");
}

struct UnitComponent {
    long modulus;               // prime power
    std::vector<long> gens;     // generators mod `modulus`
    std::vector<long> orders;   // their orders
};

}  // namespace

std::vector<DirichletCharacter> characters_mod(long N) {
    require(N >= 1, ErrorCode::UsageError, "characters_mod: N must be positive");
    // factor N into prime powers
    std::vector<std::pair<long, long>> prime_powers;  // (p, p^e)
    {
        long n = N;
        for (long p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            long pe = 1;
            while (n % p == 0) {
                n /= p;
                pe *= p;
            }
            prime_powers.emplace_back(p, pe);
        }
        if (n > 1) prime_powers.emplace_back(n, n);
    }
    std::vector<UnitComponent> comps;
    for (auto [p, pe] : prime_powers) {
        UnitComponent c;
        c.modulus = pe;
        if (p == 2) {
            if (pe == 2) {
                // trivial unit group
            } else if (pe == 4) {
                c.gens = {3};
                c.orders = {2};
            } else {
                c.gens = {pe - 1, 5};
                c.orders = {2, pe / 4};
            }
        } else {
            long phi = pe - pe / p;
            c.gens = {primitive_root(pe, phi)};
            c.orders = {phi};
        }
        comps.push_back(c);
    }

    // discrete logs of every unit against the component generators
    long phiN = euler_phi(N);
    std::vector<std::vector<long>> dlogs(static_cast<std::size_t>(N));
    std::vector<long> all_orders;
    for (const auto& c : comps)
        for (long o : c.orders) all_orders.push_back(o);

    for (long u = 0; u < N; ++u) {
        if (std::gcd(u, N) != 1) continue;
        std::vector<long> dl;
        for (const auto& c : comps) {
            long r = u % c.modulus;
            if (c.gens.empty()) continue;
            if (c.gens.size() == 1) {
                long g = c.gens[0], ord = c.orders[0];
                long cur = 1 % c.modulus;
                long e = 0;
                while (cur != r) {
                    cur = cur * g % c.modulus;
                    require(++e <= ord, ErrorCode::InternalError, "discrete log failure");
                }
                dl.push_back(e);
            } else {
                // (Z/2^e)^x = <-1> x <5>
                long ord5 = c.orders[1];
                long cur = 1;
                bool found = false;
                for (long e = 0; e < ord5 && !found; ++e) {
                    if (cur == r) {
                        dl.push_back(0);
                        dl.push_back(e);
                        found = true;
                    } else if ((c.modulus - cur) % c.modulus == r) {
                        dl.push_back(1);
                        dl.push_back(e);
                        found = true;
                    }
                    cur = cur * 5 % c.modulus;
                }
                require(found, ErrorCode::InternalError, "discrete log failure mod 2^e");
            }
        }
        dlogs[static_cast<std::size_t>(u)] = dl;
    }

    // characters: one exponent tuple per divisor combination
    std::vector<DirichletCharacter> chars;
    std::vector<long> exps(all_orders.size(), 0);
    for (;;) {
        DirichletCharacter chi;
        chi.modulus = N;
        chi.values.assign(static_cast<std::size_t>(N), Cplx(0.0, 0.0));
        bool principal = true;
        for (std::size_t k = 0; k < exps.size(); ++k)
            if (exps[k] != 0) principal = false;
        chi.principal = principal;
        for (long u = 0; u < N; ++u) {
            if (std::gcd(u, N) != 1) continue;
            double angle = 0.0;
            const auto& dl = dlogs[static_cast<std::size_t>(u)];
            for (std::size_t k = 0; k < exps.size(); ++k)
                angle += static_cast<double>(exps[k]) * dl[k] / all_orders[k];
            chi.values[static_cast<std::size_t>(u)] = e_of(Cplx(angle, 0.0));
        }
        if (N == 1) chi.values[0] = Cplx(1.0, 0.0);
        chars.push_back(std::move(chi));
        // next tuple
        std::size_t k = 0;
        while (k < exps.size()) {
            if (++exps[k] < all_orders[k]) break;
            exps[k++] = 0;
        }
        if (k == exps.size()) break;
        if (exps.empty()) break;
    }
    // put the principal character first, keep the rest in generation order
    std::stable_sort(chars.begin(), chars.end(),
                     [](const DirichletCharacter& a, const DirichletCharacter& b) {
                         return a.principal > b.principal;
                     });
    require(static_cast<long>(chars.size()) == phiN, ErrorCode::InternalError,
            "character count must equal phi(N)");
    return chars;
}

}  // namespace orthlift

#pragma once

#include "orthlift/types.hpp"

#include <map>

namespace orthlift {

struct PrecisionConfig {
    double target_rel_error = 1e-12;
    int series_terms_cap = 2000000;
    int quadrature_nodes = 64;     // starting node count for adaptive quadrature
    int euler_maclaurin_depth = 12;  // number of Bernoulli correction terms
};

const PrecisionConfig& default_precision();

// e(z) = exp(2 pi i z)
Cplx e_of(Cplx z);

// Principal branch, arg in (-pi/2, pi/2].
Cplx principal_sqrt(Cplx z);

// Principal power z^w = exp(w log z).
Cplx cpow(Cplx z, Cplx w);

// Complex Gamma function: Lanczos approximation plus reflection.
Cplx gamma_c(Cplx s);

// Hurwitz zeta by Euler-Maclaurin, analytic continuation included.
// a in (0, 1]; s != 1.
Cplx hurwitz_zeta(Cplx s, double a, const PrecisionConfig& cfg = default_precision());

// zeta_+^c(s) = sum over n > 0, n = c mod N of n^{-s}  (= N^{-s} zeta_H(s, c0/N))
Cplx zeta_plus(long N, long c, Cplx s, const PrecisionConfig& cfg = default_precision());

// zeta^c(s) = zeta_+^c(s) + e^{-pi i s} zeta_+^{-c}(s)
Cplx zeta_signed(long N, long c, Cplx s, const PrecisionConfig& cfg = default_precision());

// Modified Bessel function of the second kind with complex order, x > 0:
// K_nu(x) = int_0^infty exp(-x cosh t) cosh(nu t) dt, by trapezoidal quadrature
// with node doubling.  Throws UnderflowToZero when exp(-x) is not representable.
Cplx bessel_k(Cplx order, double x, const PrecisionConfig& cfg = default_precision());

struct DirichletCharacter {
    long modulus = 1;
    std::vector<Cplx> values;  // indexed by residue, 0 on non-units
    bool principal = false;

    Cplx operator()(long n) const {
        long r = n % modulus;
        if (r < 0) r += modulus;
        return values[static_cast<std::size_t>(r)];
    }
};

// All phi(N) Dirichlet characters mod N, principal character first.
std::vector<DirichletCharacter> characters_mod(long N);

long euler_phi(long N);

}  // namespace orthlift

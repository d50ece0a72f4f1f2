#pragma once

#include "orthlift/exactlinalg.hpp"
#include "orthlift/types.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>

namespace orthlift {

// An even non-degenerate lattice given by its Gram matrix.  Vectors of L are
// integer coordinate tuples against the implicit basis; vectors of the dual
// lattice L' and of L (x) Q are rational coordinate tuples in the same basis.
struct GramLattice {
    IMat gram;
    int rank = 0;
    int b_plus = 0;
    int b_minus = 0;
    std::string name;

    QMat gram_q;     // gram over Q
    QMat gram_inv;   // inverse, columns = dual basis
    Int det;         // det(gram), nonzero

    Rat pair(const QVec& a, const QVec& b) const;  // a^T gram b
    Rat q(const QVec& a) const;                    // pair(a, a) / 2
    bool in_lattice(const QVec& a) const;
    bool in_dual(const QVec& a) const;             // gram * a integral

    Eigen::VectorXd to_real(const QVec& a) const;
    int signature_diff() const { return b_plus - b_minus; }  // b+ - b-
};

GramLattice build_lattice(const IMat& gram, const std::string& name = "");

// Block-diagonal sum.
GramLattice direct_sum(const std::vector<GramLattice>& blocks, const std::string& name = "");

// Named blocks: "U", "U(n)", "A1", "A1(-1)", "A1(n)".
GramLattice named_block(const std::string& name);

// Parses {"name": ..., "gram": [[...]]} or {"name": ..., "blocks": [...]}
// where a block is a name string or an explicit gram matrix.
GramLattice lattice_from_json_text(const std::string& text);
GramLattice lattice_from_file(const std::string& path);

// --------------------------------------------------------------------------
// Discriminant form L'/L with q : L'/L -> Q/Z.

// An element is a residue tuple against the cyclic generator orders coming
// from the Smith normal form of the Gram matrix.
struct DiscElement {
    std::vector<long> a;
    bool operator==(const DiscElement& o) const { return a == o.a; }
    bool operator<(const DiscElement& o) const { return a < o.a; }
};

class DiscriminantForm {
public:
    static DiscriminantForm from_lattice(const GramLattice& L);

    long size() const { return size_; }
    int num_gens() const { return static_cast<int>(orders_.size()); }
    const std::vector<long>& generator_orders() const { return orders_; }

    DiscElement zero() const { return DiscElement{std::vector<long>(orders_.size(), 0)}; }
    DiscElement element(long index) const;
    long index(const DiscElement& e) const;

    DiscElement add(const DiscElement& x, const DiscElement& y) const;
    DiscElement neg(const DiscElement& x) const;
    DiscElement mul(const Int& n, const DiscElement& x) const;
    long order_of(const DiscElement& x) const;

    // Canonical dual-vector representative (coordinates in the basis of L).
    QVec rep(const DiscElement& e) const;

    // Coset of an arbitrary dual vector.
    DiscElement classify(const QVec& dual_vector) const;

    Rat q(const DiscElement& e) const;                               // in [0,1)
    Rat bilin(const DiscElement& x, const DiscElement& y) const;    // in [0,1)

    std::vector<DiscElement> isotropic_elements() const;

    const GramLattice& lattice() const { return *L_; }

private:
    std::shared_ptr<const GramLattice> L_;
    std::vector<long> orders_;       // SNF elementary divisors > 1
    std::vector<int> gen_pos_;       // positions of those divisors in the full SNF
    std::vector<QVec> gen_reps_;     // dual representatives of the generators
    IMat u_;                         // SNF row transform: classify via u * (gram * v) mod d
    IVec d_full_;                    // all elementary divisors
    long size_ = 1;
};

std::vector<DiscElement> isotropic_classes(const DiscriminantForm& D);

// --------------------------------------------------------------------------
// Isotropic vectors.

struct IsotropicVectorRecord {
    QVec vector;          // in L', q = 0, nonzero
    bool primitive;       // primitive in L'
    Int multiplier;       // vector = multiplier * primitive_part, multiplier >= 1
    QVec primitive_part;
    Int level;            // positive generator of the pairing ideal (vector, L)
    double majorant = 0;  // value of the supplied majorant at `vector`
};

// Positive generator of { (z, x) : x in L } for z in L.
Int level_of(const GramLattice& L, const IVec& z);

// All integer points x with form(x - center) <= bound for a positive definite
// float form given by matrix A (value x^T A x).  Recursive Cholesky walk.
std::vector<std::vector<long>> enumerate_ellipsoid(const Eigen::MatrixXd& A,
                                                   const Eigen::VectorXd& center, double bound,
                                                   std::size_t node_limit = 400000000);

// All nonzero lambda in L' with q(lambda) = 0 exactly and majorant(lambda) <= bound.
// The majorant is given by its matrix M in the basis of L, value q_nu(x) = x^T M x / 2.
std::vector<IsotropicVectorRecord> enumerate_isotropic_vectors(const GramLattice& L,
                                                               const Eigen::MatrixXd& majorant,
                                                               double bound);

// --------------------------------------------------------------------------
// Cusp data: a primitive isotropic z, a dual z' with (z, z') = 1, and the
// complement K = L cap z-perp cap z'-perp together with the splitting
// L = K (+) Z zeta + Z z.

struct CuspComplement {
    std::shared_ptr<const GramLattice> L;
    IVec z;          // primitive isotropic in L
    QVec z_prime;    // in L', (z, z') = 1
    QVec z_tilde;    // z' - q(z') z  (isotropic, (z, z_tilde) = 1)
    Int N_z;         // level of z
    IVec zeta;       // in L with (z, zeta) = N_z
    Rat B_coeff;     // zeta = zeta_K + N_z z' + B z
    GramLattice K;   // signature (b+ - 1, b- - 1)
    IMat embed;      // rank x (rank-2), columns = K basis in L coordinates

    QVec embed_K(const QVec& k_coords) const;      // K coords -> L coords
    QVec k_coords(const QVec& ambient_in_K) const; // exact; input must lie in K (x) Q
};

// Builds the cusp complement for a given primitive isotropic z in L.
CuspComplement make_cusp(const GramLattice& L, const IVec& z);

// Searches primitive isotropic z of level 1 with |coords|_inf <= search_bound.
// Never decides non-existence: absence within the bound is NotFoundWithinBound.
std::optional<CuspComplement> split_hyperbolic(const GramLattice& L, int search_bound);

// Orthogonal projection L (x) Q -> K (x) Q, returned in K coordinates.
QVec k_projection(const CuspComplement& cusp, const QVec& lambda);

// Class of z / N_z in L'/L for a primitive isotropic z in L.
DiscElement pi_class_map(const DiscriminantForm& D, const CuspComplement& cusp);
DiscElement pi_class_map(const DiscriminantForm& D, const GramLattice& L, const IVec& z);

// The sublattice L_0' / L = { lambda : (lambda, z) = 0 mod N_z } and the
// projection pi : L_0'/L -> K'/K.
struct PiSublatticeData {
    std::vector<DiscElement> l0_classes;           // elements of L'/L lying in L_0'/L
    std::vector<DiscElement> pi_images;            // their images in K'/K
    // fibers[j] = all delta in L_0'/L with pi(delta) = (K'/K element with index j)
    std::vector<std::vector<DiscElement>> fibers;
};

PiSublatticeData pi_sublattice_data(const CuspComplement& cusp, const DiscriminantForm& D,
                                    const DiscriminantForm& DK);

// Fiber of pi over lambda + K for a vector lambda in K': the classes of
// lambda - ((lambda, zeta)/N_z) z + (b/N_z) z, b = 0..N_z-1, in L'/L
// (lambda given in K coordinates).
std::vector<DiscElement> pi_fiber_over_vector(const CuspComplement& cusp,
                                              const DiscriminantForm& D, const QVec& lambda_K);

}  // namespace orthlift

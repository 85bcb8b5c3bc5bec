#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "widthlab/automorphism.hpp"
#include "widthlab/group_spec.hpp"
#include "widthlab/subgroups.hpp"
#include "widthlab/words.hpp"

namespace widthlab {

using BigInt = boost::multiprecision::cpp_int;

// a^x >= b^y for rationals x, y, compared over the integers after clearing
// denominators. a, b >= 1.
bool power_geq(const BigInt& a, const Rational& x, const BigInt& b, const Rational& y);
BigInt big_pow(const BigInt& base, std::uint64_t e);

// ---------------------------------------------------------------------------
// Linear algebra over a prime field.

struct FpMatrix {
  unsigned p = 2;
  std::size_t n = 0;
  std::vector<unsigned> a;  // row-major n x n

  FpMatrix() = default;
  FpMatrix(unsigned prime, std::size_t dim) : p(prime), n(dim), a(dim * dim, 0) {}
  static FpMatrix identity(unsigned prime, std::size_t dim);
  static FpMatrix from_rows(unsigned prime, const std::vector<std::vector<int>>& rows);
  unsigned& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  unsigned at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  friend FpMatrix operator*(const FpMatrix& x, const FpMatrix& y);
  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
  bool invertible() const { return rank() == n; }
  std::size_t rank() const;
  // dim of the fixed space {v : v A = v}
  std::size_t fixed_dimension() const;
};

// N/Z as an F_p-space with row vectors; g acts by v -> v A(g), the matrix of
// conjugation on coset representatives.
class FpModuleView {
 public:
  // Throws PreconditionError when Z is not normal in N or N/Z is not
  // elementary abelian.
  FpModuleView(const ElementSet& n, const ElementSet& z);

  const TablePtr& table() const { return n_.table(); }
  const ElementSet& n() const { return n_; }
  const ElementSet& z() const { return z_; }
  unsigned p() const { return p_; }
  std::size_t dim() const { return basis_.size(); }
  std::uint64_t size() const { return size_; }  // |N/Z|
  const std::vector<ElemId>& basis() const { return basis_; }
  // Vectors are packed as sum c_i p^i.
  std::uint64_t coords(ElemId x) const;
  ElemId representative(std::uint64_t v) const { return reps_[v]; }
  std::vector<unsigned> unpack(std::uint64_t v) const;
  std::uint64_t pack(const std::vector<unsigned>& c) const;
  std::uint64_t add(std::uint64_t u, std::uint64_t v) const;
  // Requires g to normalise N and Z.
  FpMatrix action(ElemId g) const;
  // Every action matrix invertible and consistent with conjugation on all
  // representatives.
  bool consistent(const std::vector<ElemId>& gs) const;
  // No proper nonzero subspace is invariant under every matrix.
  bool irreducible(const std::vector<ElemId>& gs) const;

 private:
  ElementSet n_, z_;
  unsigned p_ = 2;
  std::uint64_t size_ = 1;
  std::vector<ElemId> basis_;
  std::vector<std::uint64_t> coord_;  // indexed by element id, for members of N
  std::vector<ElemId> reps_;
};

// ---------------------------------------------------------------------------
// Fixed-point and fixed-space properties.

struct FixedPropertyResult {
  bool holds = false;
  std::vector<std::size_t> witnesses;  // qualifying indices
  std::vector<std::size_t> measure;    // moved points, or codimension of C_V(y_i)
  std::size_t n = 0;
};

// At least k of the y_i move at least eps*n points of the transitive action
// generated by action_generators (all permutations on n points).
FixedPropertyResult fixed_point_property(const std::vector<Permutation>& action_generators,
                                         const std::vector<Permutation>& y, std::size_t k, const Rational& eps);
// At least k of the matrices satisfy dim C_V(y_i) <= (1 - eps) n.
FixedPropertyResult fixed_space_property(const std::vector<FpMatrix>& y, std::size_t k, const Rational& eps);

// ---------------------------------------------------------------------------
// Counting non-generating conjugate tuples.

struct NongeneratingConstants {
  std::size_t d = 0;        // 0 means min_generators(G)
  std::size_t k = 0;
  Rational eps{1, 2};
  Rational mu_prime{1, 2};  // quasi-semisimple case only
  Rational C0{1, 1};        // quasi-semisimple case only
};

struct NongeneratingReport {
  std::uint64_t count = 0;     // |{a in N^m : <y_i^{a_i}> != G}|
  std::uint64_t total = 0;     // |N|^m
  std::size_t d = 0;
  std::size_t maximal_supplements = 0;
  bool soluble = true;
  Rational exponent;           // d - k eps, or 1 - s
  bool property_on_quotient = false;  // (k, eps) measured on N/Z
  std::size_t k_on_quotient = 0;
  bool strict_ok = true;       // count < |N|^m (quasi-semisimple)
  bool pass = false;           // count <= |N|^m |N/Z|^exponent
};

// Requires G = <y> N and |N|^m <= limit. Counts exactly via the maximal
// subgroups containing each conjugate.
NongeneratingReport count_nongenerating(const QmnInfo& qmn, const std::vector<ElemId>& y,
                                        const NongeneratingConstants& c, std::uint64_t limit = 10'000'000);

// ---------------------------------------------------------------------------
// v(M; y) = |{a in N : y^a in M}|.

struct VIdentityReport {
  std::uint64_t direct = 0;
  std::vector<std::uint64_t> formula;  // one value per b in N with y^b in M
  bool agree = false;
};
// Throws InputError when M is not maximal or NM != G.
VIdentityReport v_identity_check(const ElementSet& m, const ElementSet& n, ElemId y);
bool is_maximal_subgroup(const ElementSet& m);

// ---------------------------------------------------------------------------
// |C_V(g)| |[g,V] cap U| <= |V| |V:U|^{-eps/2} for V = A^t.

struct SubdirectReport {
  std::uint64_t centralizer = 0;
  std::uint64_t bracket_meet = 0;  // |[g,V] cap U|
  std::uint64_t lhs = 0;
  std::uint64_t v_order = 0, u_order = 0;
  std::size_t moved = 0, t = 0;    // eps = moved / t
  bool pass = false;
};

// g permutes the factors of A^t: (x^g)(i) = comp_i(x(sigma(i))). U = B^t with
// B_i = images of b under the cycle structure (U^g = U checked, B proper), or
// Delta = {(a,...,a)} (needs t >= 3 and Delta^g = Delta).
SubdirectReport subdirect_product_check(const TablePtr& a, const std::vector<std::size_t>& sigma,
                                        const std::vector<Automorphism>& comps, const std::vector<ElementSet>& b);
SubdirectReport subdirect_diagonal_check(const TablePtr& a, const std::vector<std::size_t>& sigma,
                                         const std::vector<Automorphism>& comps);

// ---------------------------------------------------------------------------
// Fibres of phi_i(a) = prod_j [a_j, x_ij].

enum class FibreCase : std::uint8_t { Abelian, CommutatorOrderTwo, BruteForce };

struct FibreReport {
  std::size_t map = 0;                         // i
  std::map<ElemId, std::uint64_t> histogram;   // nonempty fibres
  ElemId target = 0;                           // kappa_i of the chosen decomposition
  std::uint64_t fibre = 0;
  BigInt bound_numerator, bound_denominator;   // |N|^m / |M|^{d+1}
  bool pass = false;
};

struct FibreAnalysis {
  FibreCase fibre_case = FibreCase::Abelian;
  std::size_t d = 0, m = 0;
  std::vector<ElemId> k_elements;              // K = N or N'
  // kappa -> (kappa_1, kappa_2, kappa_3) meeting all three bounds
  std::map<ElemId, std::array<ElemId, 3>> decompositions;
  std::vector<ElemId> failures;                // kappa in K with no decomposition
  std::vector<std::map<ElemId, std::uint64_t>> histograms;
  BigInt bound_numerator, bound_denominator;
  bool coset_granular = false;
  bool pass = false;

  FibreReport report(std::size_t i, ElemId kappa) const;
};

// Checks N soluble with N/Z elementary abelian, [Z,G] = 1 and K<x_i1..x_im> = G
// for each i; |N|^m <= limit.
FibreAnalysis phi_fibres(const ElementSet& n, const ElementSet& z, const std::vector<std::vector<ElemId>>& x,
                         std::size_t d = 0, std::uint64_t limit = 10'000'000);

// ---------------------------------------------------------------------------
// F_2 bilinear form of phi on V = ker(phi~) when |N'| = 2.

struct BilinearReport {
  std::size_t dim_v = 0;                 // over F_2
  std::uint64_t v_size = 0;
  bool formula_matches_polarization = false;  // order-corrected cross terms
  std::uint64_t displayed_mismatches = 0;     // pairs where the j<l [[u_j,x_j],[v_l,x_l]] form disagrees
  bool displayed_defect_is_diagonal = false;  // disagreement equals sum_j [[u_j,x_j],[v_j,x_j]]
  bool bilinear = false;
  bool quadratic = false;
  std::uint64_t min_fibre = 0;           // over N' = {1, c^2}
  bool fibre_bound = false;              // min_fibre >= |V| / 4
  std::vector<std::vector<unsigned>> gram;  // B on a basis of V
};
BilinearReport bilinear_extract(const ElementSet& n, const ElementSet& z, const std::vector<ElemId>& x);

// ---------------------------------------------------------------------------
// psi(a) = prod a^{eps_j g_j} for a relation sum eps_j g_j = 0.

struct RelationTerm {
  int sign = 1;
  Automorphism g;
};

struct PsiWitness {
  // psi(a) = prod [a^{h_i}, a^{k_i}]; h, k index into the relation.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::uint64_t checked = 0;
  bool holds = false;
};

// Requires A' central in A and fixed by every g. Throws InputError when the
// relation does not sum to zero.
PsiWitness psi_identity_check(const TablePtr& a, const std::vector<RelationTerm>& relation);
// psi(c^mu z) = psi(c)^{mu^2} for every c, scalar mu and z in Z(A).
bool psi_scalar_check(const TablePtr& a, const std::vector<RelationTerm>& relation);

// ---------------------------------------------------------------------------
// H = <y_1^q .. y_r^q, x_1 .. x_{r sigma(q)}> for abelian H = <X>.

struct QGeneration {
  std::vector<ElemId> y;
  std::vector<ElemId> x;
  bool verified = false;
};
std::size_t distinct_prime_divisors(std::uint64_t q);
QGeneration abelian_q_generation(const ElementSet& h, const std::vector<ElemId>& x, std::uint64_t q, std::size_t r);

// ---------------------------------------------------------------------------
// Built-in instances.

// N x| A as a permutation group on the elements of N: n acts by right
// multiplication, alpha by applying it.
Group holomorph_subgroup(const TablePtr& n, const std::vector<Automorphism>& autos, const std::string& name);

struct SolubleInstance {
  std::string name;
  TablePtr g;
  ElementSet n, z;
  std::vector<std::vector<ElemId>> x;  // three tuples for the fibre maps
  std::vector<ElemId> y;               // tuple for the non-generation count
};
// Alt(4) on V, SL(2,3) on Q8, Heisenberg(3) x| Q8, Sym(3), Sym(4) on V, Sym(3) wr 2.
std::vector<SolubleInstance> builtin_soluble_instances();
// Extraspecial 2^{1+4} of minus type with an automorphism of order 5.
SolubleInstance extraspecial_instance();

}  // namespace widthlab

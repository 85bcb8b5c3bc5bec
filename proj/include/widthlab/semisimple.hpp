#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "widthlab/automorphism.hpp"
#include "widthlab/gamma.hpp"

namespace widthlab {

// Element of N = S^r, one coordinate per copy.
using NElem = std::vector<ElemId>;

NElem n_identity(std::size_t r);
NElem n_mul(const ElementTable& s, const NElem& a, const NElem& b);
NElem n_inv(const ElementTable& s, const NElem& a);
NElem n_random(const ElementTable& s, std::size_t r, std::mt19937_64& rng);
// Enumerates S^r in mixed-radix order; index < |S|^r.
NElem n_from_index(const ElementTable& s, std::size_t r, std::uint64_t index);

// Automorphism of S^r permuting the copies: (x^g)(i) = x(sigma(i))^{comp(i)},
// where sigma(i) is the copy written ^g i.
class Actor {
 public:
  Actor() = default;
  Actor(std::vector<std::size_t> sigma, std::vector<Automorphism> comps);
  static Actor identity(const TablePtr& s, std::size_t r);
  // Conjugation by an element of N.
  static Actor inner(const TablePtr& s, const NElem& n);

  std::size_t copies() const { return sigma_.size(); }
  const TablePtr& table() const { return comps_.front().table(); }
  const std::vector<std::size_t>& sigma() const { return sigma_; }
  const Automorphism& comp(std::size_t i) const { return comps_[i]; }
  NElem apply(const NElem& x) const;
  Actor inverse() const;
  Actor pow(long long k) const;
  // compose(a, b) applies a first.
  friend Actor compose(const Actor& a, const Actor& b);
  friend Actor operator*(const Actor& a, const Actor& b) { return compose(a, b); }
  friend bool operator==(const Actor& a, const Actor& b);

  // Cycles of sigma, each listed from its smallest member in the order
  // k, sigma(k), sigma^2(k), ...; cycles sorted by first member.
  std::vector<std::vector<std::size_t>> cycles() const;
  std::size_t cycle_count() const { return cycles().size(); }
  bool fixes(std::size_t i) const { return sigma_[i] == i; }
  // Restriction to an invariant set of copies (listed in increasing order).
  Actor restrict_to(const std::vector<std::size_t>& copies) const;

 private:
  std::vector<std::size_t> sigma_;
  std::vector<Automorphism> comps_;
};

// Element n*phi of the semidirect product N x| Aut(N), with
// (a, phi)(b, chi) = (a b^{phi^-1}, phi chi). It acts on N by x -> (n^-1 x n)^phi.
struct GElem {
  NElem n;
  Actor phi;
};
GElem g_mul(const GElem& a, const GElem& b);
GElem g_inv(const GElem& a);
GElem g_pow(const GElem& a, long long k);
// x^y = y^-1 x y
GElem g_conj(const GElem& x, const GElem& y);
GElem g_from_n(const TablePtr& s, const NElem& n);
GElem g_from_actor(const Actor& a);
// The automorphism of N induced by conjugation.
Actor g_action(const GElem& g);
bool g_is_pure(const GElem& g);  // trivial Aut(N) part

struct SemisimpleAction {
  TablePtr S;
  std::size_t r = 0;
  std::vector<Actor> actors;

  NElem identity() const { return n_identity(r); }
  NElem mul(const NElem& a, const NElem& b) const { return n_mul(*S, a, b); }
  NElem inv(const NElem& a) const { return n_inv(*S, a); }
  // [u, g] = u^-1 u^g
  NElem commutator(const NElem& u, const Actor& g) const;
  std::uint64_t order() const;
  void validate() const;
};

// Orbits of the permutation group generated by the sigmas, each sorted;
// orbits sorted by first member.
std::vector<std::vector<std::size_t>> copy_orbits(std::size_t r, const std::vector<const Actor*>& actors);

// ---------------------------------------------------------------------------
// Symbolic equation systems.

struct Equation {
  Symbol lhs;       // a parameter whose value is given
  GammaWord rhs;
};

// In equation `equation`: rhs = left (symbol^exponent)^sign right.
struct Substitution {
  std::size_t equation = 0;
  Symbol symbol;
  int sign = 1;
  GammaExponent exponent;
  GammaWord left, right;
};

struct Reduction {
  GammaWord word;  // lhs(root) = word
  std::size_t root = 0;
  std::vector<Substitution> trace;
};

// Eliminates n-1 equations by substitutions (l -> root). Every eliminable
// symbol must occur exactly once with each sign across the system. Among the
// equations linked to the root, the lowest index is taken, then the lowest
// symbol. Throws InvariantError when the linkage graph is disconnected.
Reduction reduce_equations(const std::vector<Equation>& eqs, std::size_t root,
                           const std::function<bool(const Symbol&)>& eliminable);
// Assigns the symbols removed by the substitutions, in reverse order; every
// other symbol of the trace must already have a value.
void back_substitute(const Reduction& red, const std::vector<Equation>& eqs, Interpretation& in);

enum class BlockMode : std::uint8_t {
  Commutator,  // block u^-1 u^beta with a parameter u
  Free,        // block is a fresh parameter V constrained to [S, beta]
};

// Condition block for an orbit Delta of g_slot.
struct ConditionBlock {
  std::size_t slot = 0;
  std::vector<std::size_t> cycle;  // k_Delta, ^g k_Delta, ...
  GammaExponent beta;              // g^{n(Delta)}(k_Delta)
  Symbol parameter;                // u_slot(Delta) or V_slot(Delta)
  GammaWord replacement;           // expression substituted for x_slot(k_Delta)
};

// (F_s): kappa(s) = x_1(s) ... x_m(s), with the conditions x_i in [N, g_i].
struct EquationSystem {
  TablePtr S;
  std::size_t n = 0;  // copies
  std::size_t m = 0;  // actors
  std::vector<Actor> actors;
  NElem kappa;
  std::vector<Equation> equations;
  std::vector<ConditionBlock> conditions;
  bool eliminated = false;
  BlockMode mode = BlockMode::Commutator;

  Symbol x(std::size_t slot, std::size_t s) const {
    return {SymbolKind::Variable, static_cast<int>(slot * n + s + 1)};
  }
  int colour(std::size_t slot) const { return static_cast<int>(slot) + 1; }
  Symbol kappa_symbol(std::size_t s) const { return {SymbolKind::Parameter, static_cast<int>(s + 1)}; }
  int generator(std::size_t slot, std::size_t s) const { return static_cast<int>(slot * n + s + 1); }
  // g^j(k) as a Gamma-exponent.
  GammaExponent power_component(std::size_t slot, std::size_t k, std::size_t j) const;
  // Interpretation with every generator and kappa(s) assigned.
  Interpretation interpretation() const;
  std::size_t cycle_sum() const;
};

// Throws InputError when the actors are not transitive on the copies.
EquationSystem build_system(const SemisimpleAction& act, const std::vector<std::size_t>& g, const NElem& kappa);
// Throws PreconditionError on a system that was already eliminated.
EquationSystem eliminate_H(const EquationSystem& sys, BlockMode mode = BlockMode::Commutator);

struct SingleEquation {
  Reduction reduction;
  std::size_t support = 0;  // |sup(hat U)|
  std::vector<int> colour_type;
};
// Reduces an eliminated system to kappa(root) = U, checking balance, the
// support count m n - sum c(g_i) - (n-1) and tau(hat U) <= L_n.
SingleEquation reduce_to_single(const EquationSystem& sys, std::size_t root = 0);

// After every variable x_i(s) with s != k_Delta and every block parameter has a
// value: assigns x_i(k_Delta) and rebuilds u_1..u_m with x_i = [u_i, g_i]
// (recursion along each cycle). In Free mode the u for a block value is found
// by search over S.
std::vector<NElem> recover_commutator_solution(const EquationSystem& sys, Interpretation& in);

// ---------------------------------------------------------------------------
// Product sets with witnesses.

// witness[e] >= 0 marks e as a member and stores caller data, else -1.
struct WitnessSet {
  std::vector<std::int64_t> witness;
  std::size_t size() const;
};

// Layers L_0 = {1}, L_j = L_{j-1} F_j with back-pointers.
class ProductSearch {
 public:
  ProductSearch(const TablePtr& s, std::vector<WitnessSet> factors);
  std::size_t length() const { return factors_.size(); }
  std::size_t reached(std::size_t layer) const;
  // f_1..f_t with f_j in F_j and f_1...f_t = target, or nothing.
  std::optional<std::vector<ElemId>> factorize(ElemId target) const;
  const WitnessSet& factor(std::size_t j) const { return factors_[j]; }

 private:
  TablePtr s_;
  std::vector<WitnessSet> factors_;
  std::vector<std::vector<std::int64_t>> prev_;  // per layer: predecessor in previous layer or -1
};

// ---------------------------------------------------------------------------
// Twisted commutators in S.

// T_{a,b}(S,S) with witness x*|S|+y.
WitnessSet twisted_set(const Automorphism& a, const Automorphism& b);
// [S, g] = {s^-1 s^g} with witness s.
WitnessSet commutator_set(const Automorphism& g);

struct TwistedWidth {
  bool covered = false;
  std::size_t t = 0;               // minimal prefix length when covered
  double reached_fraction = 0.0;   // of S after all factors
  std::vector<std::size_t> layer_sizes;
};
// Requires S perfect (PreconditionError otherwise).
TwistedWidth twisted_width(const TablePtr& s, const std::vector<std::pair<Automorphism, Automorphism>>& pairs);

// D such that any D twisted-commutator sets T_{a,b}(S,S), a, b in the given
// automorphism group, multiply to S: 1 when every set is S, 2 when every set
// has more than |S|/2 elements, 0 when neither certificate holds.
struct TwistedCertificate {
  std::size_t D = 0;
  std::size_t min_size = 0;
  std::size_t pairs_checked = 0;
};
TwistedCertificate certify_twisted_width(const TablePtr& s, const std::vector<Automorphism>& group);
// Closure of a set of automorphisms under composition.
std::vector<Automorphism> automorphism_closure(const TablePtr& s, const std::vector<Automorphism>& gens);

// ---------------------------------------------------------------------------
// Commutator equations: prod [u_i, g_i] = kappa.

struct CommutatorSolverReport {
  std::size_t cycle_sum = 0;
  std::size_t bound = 0;  // (m-2)n - 2D
  std::size_t D = 0;
  std::size_t support = 0;
  std::size_t fallback_choices = 0;
  std::size_t substitutions = 0;
};

class CommutatorSolver {
 public:
  // D = 0 asks for a certificate over the group generated by the component
  // automorphisms. Throws PreconditionError when the cycle count is too large.
  CommutatorSolver(const SemisimpleAction& act, std::vector<std::size_t> g, std::size_t D = 0);
  // Verified solution u with prod [u_i, g_i] = kappa; throws on failure.
  std::vector<NElem> solve(const NElem& kappa) const;
  const CommutatorSolverReport& report() const { return report_; }
  const EquationSystem& system() const { return sys_; }

 private:
  SemisimpleAction act_;
  std::vector<std::size_t> g_;
  EquationSystem sys_;
  SingleEquation single_;
  KExtraction extraction_;
  std::optional<ProductSearch> search_;
  CommutatorSolverReport report_;
};

std::vector<NElem> solve_commutator_equation(const SemisimpleAction& act, const std::vector<std::size_t>& g,
                                             const NElem& kappa, std::size_t D = 0);

// ---------------------------------------------------------------------------
// Hall matching.

struct MatchingResult {
  bool perfect = false;
  std::vector<int> assignment;        // woman -> man, -1 if unmatched
  std::vector<std::size_t> deficient; // women W with |N(W)| < |W| when not perfect
};
// knows[w] lists the men woman w knows.
MatchingResult hall_matching(std::size_t men, const std::vector<std::vector<std::size_t>>& knows);

// ---------------------------------------------------------------------------
// Power maps.

struct EffectiveConstants {
  std::size_t D = 1;
  std::size_t M = 1;
  std::size_t Dbar() const { return 4 + 2 * D; }
  std::size_t z(std::size_t q) const { return M * Dbar() * (q + Dbar()); }
};

struct OrbitInfo {
  std::vector<std::size_t> members;
  std::size_t lambda = 0;
  bool type_one = false;
  std::optional<std::size_t> i_omega;
};

struct OrbitData {
  std::size_t r = 0, m = 0;
  std::vector<std::vector<std::size_t>> fix_star;  // per copy: slots j with k_j^q fixing it
  std::vector<OrbitInfo> orbits;                   // orbits of <k_j^q>
};
// ks are the actors k_1..k_m; Dbar decides the type.
OrbitData orbit_data(const std::vector<Actor>& ks, std::size_t q, std::size_t Dbar);

struct IndependentChoice {
  std::size_t orbit = 0;             // index into OrbitData::orbits
  std::pair<std::size_t, std::size_t> interval;  // J_Omega = [first, last]
  std::vector<std::size_t> slots;    // I_Omega
};
// Throws PreconditionError when m < z(q), InvariantError when Hall fails.
std::vector<IndependentChoice> select_independent(const OrbitData& od, const std::vector<Actor>& ks, std::size_t q,
                                                  const EffectiveConstants& c);
// Definition check of independence for pairs (orbit, slot).
bool is_independent(const OrbitData& od, const std::vector<Actor>& ks,
                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

struct PowerCover {
  bool found = false;
  std::vector<ElemId> twists;  // x_j, the inner part of alpha_j
  std::size_t attempts = 0;
  std::size_t reached = 0;     // best product-set size seen
};
// Searches x_1..x_M in S with S = prod [S, (inner(x_j) beta_j)^{q_j}]; greedy,
// then random, then exhaustive while the budget allows.
PowerCover power_twist_cover(const TablePtr& s, const std::vector<Automorphism>& betas,
                             const std::vector<std::size_t>& qs, std::size_t budget, std::uint64_t seed = 1);
// Smallest M for which the cover with every beta = id exists (0 if none up to max_m).
std::size_t empirical_M(const TablePtr& s, std::size_t q, std::size_t max_m = 6, std::size_t budget = 200000);

struct PowerSolverReport {
  std::size_t m = 0, q = 0, z = 0;
  EffectiveConstants constants;
  std::size_t type_one = 0, type_two = 0;
  std::vector<IndependentChoice> choices;
};

// psi(a) with prod (a_i h_i)^q = psi(a) prod h_i^q, where h_i = actors[h[i]].
class PowerSolver {
 public:
  PowerSolver(const SemisimpleAction& act, std::vector<std::size_t> h, std::size_t q, EffectiveConstants c,
              bool enforce_z = true, std::uint64_t seed = 1);
  NElem psi(const std::vector<NElem>& a) const;
  // Verified a with psi(a) = kappa; throws on failure.
  std::vector<NElem> solve(const NElem& kappa) const;
  const PowerSolverReport& report() const { return report_; }

 private:
  struct OrbitSolver;
  std::vector<NElem> solve_commutators(const NElem& target) const;

  SemisimpleAction act_;
  std::vector<GElem> h_;
  std::size_t q_ = 1;
  std::vector<GElem> tau_xh_;     // tau_i(xh)
  std::vector<NElem> x_;          // recursion output
  std::vector<Actor> g_;          // actions of (y_j k_j)^q
  NElem psi_x_;
  std::vector<std::shared_ptr<OrbitSolver>> orbit_solvers_;
  PowerSolverReport report_;
};

std::vector<NElem> solve_power_equation(const SemisimpleAction& act, const std::vector<std::size_t>& h,
                                        std::size_t q, const NElem& kappa, const EffectiveConstants& c);

// Exhaustive preimage of psi for tiny instances (|N|^m bounded by limit).
std::optional<std::vector<NElem>> brute_force_power_preimage(const SemisimpleAction& act,
                                                              const std::vector<std::size_t>& h, std::size_t q,
                                                              const NElem& kappa, std::uint64_t limit = 10'000'000);

// ---------------------------------------------------------------------------
// Twisted systems: prod T_{alpha_i, beta_i}(x_i, y_i) = kappa.

struct TwistedBlockCertificate {
  std::size_t pair = 0;
  std::vector<std::size_t> orbit;
  bool balanced = false;
  bool class_two_ok = false;       // theta(hat U) = [xi, eta]^{n_Delta}
  bool parameters_ok = false;      // multiplicities of kappa_i(s) in V
  std::size_t support = 0;
};

struct TwistedSolution {
  std::vector<NElem> x, y;
};

class TwistedSystemSolver {
 public:
  // pairs[i] = (alpha_i, beta_i) acting on the same S^r. D = 0 certifies
  // the twisted width over the component automorphism group.
  TwistedSystemSolver(TablePtr s, std::size_t r, std::vector<std::pair<Actor, Actor>> pairs, std::size_t D = 0);
  TwistedSolution solve(const NElem& kappa) const;
  const std::vector<TwistedBlockCertificate>& certificates() const { return certificates_; }
  std::size_t width() const { return D_; }

 private:
  struct Component;
  TablePtr s_;
  std::size_t r_ = 0;
  std::vector<std::pair<Actor, Actor>> pairs_;
  std::size_t D_ = 0;
  std::vector<std::shared_ptr<Component>> components_;
  std::vector<TwistedBlockCertificate> certificates_;
};

TwistedSolution solve_twisted_system(const TablePtr& s, std::size_t r,
                                     const std::vector<std::pair<Actor, Actor>>& pairs, const NElem& kappa);

// Class-two evaluation of a word in the x/y variables of a twisted system:
// variables with odd id map to xi, even id to eta. Returns (a, b, c) with
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
std::array<long long, 3> class_two_value(const GammaWord& hat_word);

}  // namespace widthlab

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "widthlab/element_table.hpp"

namespace widthlab {

// Abstract word in variables x1, x2, ...
//   word := term+ ; term := atom ('^' int)? ;
//   atom := var | '[' word ',' word ']' | '(' word ')'
// Juxtaposition is product; [u,v] = u^-1 v^-1 u v.
class Word {
 public:
  enum class Kind { Var, Product, Power, Commutator };
  struct Node {
    Kind kind = Kind::Var;
    std::size_t var = 0;
    long long exponent = 1;
    std::vector<std::shared_ptr<const Node>> children;
  };
  using NodePtr = std::shared_ptr<const Node>;

  static Word parse(std::string_view text);
  static Word var(std::size_t i);
  static Word product(const std::vector<Word>& factors);
  static Word power(const Word& w, long long n);
  static Word commutator(const Word& u, const Word& v);

  std::string to_string() const;
  // Distinct variable indices, ascending.
  const std::vector<std::size_t>& variables() const { return vars_; }
  // values[k] is assigned to variables()[k].
  ElemId evaluate(const ElementTable& table, const std::vector<ElemId>& values) const;
  const NodePtr& root() const { return root_; }
  friend bool operator==(const Word& a, const Word& b);

 private:
  explicit Word(NodePtr root);
  void compile();
  struct Op {
    enum Code : std::uint8_t { Push, Mul, Pow, Comm } code;
    long long arg;
  };
  NodePtr root_;
  std::vector<std::size_t> vars_;
  std::vector<Op> program_;
};

// Iterated commutator [[...[x1,x2],...],xk].
Word gamma_word(std::size_t k);

struct ValueSetOptions {
  std::uint64_t budget_evals = 100'000'000;
  // When set, evaluate this many random tuples instead of all of them.
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
};

struct ValueSet {
  ElementSet set;  // w-values, their inverses and the identity
  bool sampled = false;
  std::uint64_t evaluations = 0;
};

ValueSet value_set(const TablePtr& table, const Word& w, const ValueSetOptions& opts = {});
ElementSet verbal_subgroup(const TablePtr& table, const Word& w, const ValueSetOptions& opts = {});

struct WidthResult {
  std::size_t width = 0;
  // |X^{*n}| for n = 1..width (empty when width is 0).
  std::vector<std::size_t> frontiers;
};

// Least n with X^{*n} = target. X must contain the identity and generate target.
WidthResult width(const ElementSet& x, const ElementSet& target, unsigned jobs = 1);
// Sizes of X^{*1}, ..., X^{*steps} (stops early once the set stops growing).
std::vector<std::size_t> power_set_sizes(const ElementSet& x, std::size_t steps);
ElementSet power_set(const ElementSet& x, std::size_t n);

struct WordWidth {
  WidthResult width;
  ValueSet values;
  std::size_t verbal_order = 0;
};
WordWidth word_width(const TablePtr& table, const Word& w, const ValueSetOptions& opts = {}, unsigned jobs = 1);

// If 1 in X, <X> = G and |G| <= r|X| then G = X^{*2r}. Returns the least n
// with X^{*n} = G (throws PreconditionError when a hypothesis fails).
struct HamidouneResult {
  std::size_t steps = 0;
  std::size_t bound = 0;
  bool holds = false;
};
HamidouneResult hamidoune_check(const ElementSet& x, std::size_t r);

// tau_j(g, v) = v_j [g_{j-1}, v_{j-1}] ... [g_1, v_1], j = 1..m.
std::vector<ElemId> tau_chain(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v);
// Xi(v) = prod_j [v_j, g_j].
ElemId xi(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v);
// Xi'_v(x) = prod_j [x_j, g_j]^{tau_j}.
ElemId xi_derivative(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v,
                     const std::vector<ElemId>& x);
// Xi(x.v) == Xi'_v(x) Xi(v), with (x.v)_j = x_j v_j.
bool derivative_identity_holds(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v,
                               const std::vector<ElemId>& x);
// <g_j^{tau_j(v)}>^{g_1...g_m} == <g_j^{v_j g_j ... g_m}>
bool twogensets_check(const TablePtr& table, const std::vector<ElemId>& g, const std::vector<ElemId>& v);
// [H,G] == [H,x_1]...[H,x_m][H,_n G] where [H,x] = {[h,x] : h in H}; requires H
// normal and G = G'<x_1..x_m>.
bool nilp_comm_check(const ElementSet& h, const std::vector<ElemId>& x, std::size_t n);

using Rational = boost::rational<long long>;

struct ConstantsInput {
  long long D = 1;
  long long C0 = 1;
  long long M_of_q = 1;
  Rational mu_of_q{1, 2};
  Rational epsilon_of_c{1, 2};
  long long d = 2;
  long long q = 2;
};

struct DerivedConstants {
  long long k_dq = 0;   // k(d,q)
  long long h1 = 0;     // 3 k(d,q)
  long long Dbar = 0;   // 4 + 2D
  long long z_q = 0;    // M(q) Dbar (q + Dbar)
  long long k_d = 0;    // k(d)
  long long h2 = 0;     // 3 k(d)
  long long k_prime = 0;  // k'(d,c)
  long long h3 = 0;     // 3 k'(d,c)
};

DerivedConstants compute_constants(const ConstantsInput& c);
long long ceil_rational(const Rational& r);
Rational parse_rational(std::string_view text);

}  // namespace widthlab

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "widthlab/permutation.hpp"

namespace widthlab {

// A permutation group given by generators. The identity need not appear.
struct Group {
  std::string name;
  std::size_t degree = 0;
  std::vector<Permutation> generators;
};

// Parses Sym(n), Alt(n), Cyclic(n), Dihedral(n), SL(2,q), Heisenberg(p),
// Direct(spec, ...), FromGenerators(degree; cycles, ...). Whitespace is ignored.
Group parse_group(std::string_view spec);

Group make_direct(const std::vector<Group>& factors);

// Small prime-power field GF(q) with elements 0..q-1 (base-p coefficient vectors).
class FiniteField {
 public:
  explicit FiniteField(unsigned q);
  unsigned size() const { return q_; }
  unsigned characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
  unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }
  unsigned neg(unsigned a) const;
  unsigned inv(unsigned a) const;
  // Additive basis over the prime field: 1, t, t^2, ...
  std::vector<unsigned> prime_basis() const;

 private:
  unsigned q_, p_, k_;
  std::vector<unsigned> add_, mul_;
};

}  // namespace widthlab

#pragma once

#include <span>
#include <vector>

#include "widthlab/element_table.hpp"

namespace widthlab {

// Automorphism of an enumerated group stored as the image of every element.
// Acts on the right: x^(ab) = (x^a)^b, so compose(a, b) applies a first.
class Automorphism {
 public:
  Automorphism() = default;
  static Automorphism identity(const TablePtr& table);
  // x -> g^-1 x g
  static Automorphism inner(const TablePtr& table, ElemId g);
  // Conjugation by a permutation normalizing the group (e.g. from a larger ambient group).
  static Automorphism from_conjugation(const TablePtr& table, const Permutation& c);
  // Extends generator images multiplicatively; throws InputError if the map is
  // not a well-defined bijective homomorphism.
  static Automorphism from_generator_images(const TablePtr& table, std::span<const ElemId> images);

  const TablePtr& table() const { return table_; }
  ElemId operator()(ElemId x) const { return images_[x]; }
  const std::vector<ElemId>& images() const { return images_; }
  bool is_identity() const;
  Automorphism inverse() const;
  Automorphism pow(long long n) const;
  friend Automorphism compose(const Automorphism& first, const Automorphism& second);
  friend Automorphism operator*(const Automorphism& first, const Automorphism& second) {
    return compose(first, second);
  }
  friend bool operator==(const Automorphism& a, const Automorphism& b) { return a.images_ == b.images_; }

 private:
  TablePtr table_;
  std::vector<ElemId> images_;
};

// Automorphism of the subgroup N of an ambient table induced by conjugation
// with c. N is re-enumerated as its own table from its greedy generators.
struct InducedAutomorphism {
  TablePtr subgroup_table;
  Automorphism automorphism;
};
InducedAutomorphism automorphism_from_ambient(const TablePtr& ambient, const ElementSet& n, const Permutation& c);

// Re-enumerates a subgroup as a group of its own.
TablePtr subgroup_table(const ElementSet& h, const std::string& name = "subgroup");

// Every automorphism of a small group, identity first. Candidate generator
// images are filtered by element order; throws CapacityError beyond max_candidates.
std::vector<Automorphism> automorphism_group(const TablePtr& table, std::size_t max_candidates = 10'000'000);

// True when the automorphism is conjugation by an element of the group.
bool is_inner(const Automorphism& a);

// Image of a set under an automorphism.
ElementSet apply(const Automorphism& a, const ElementSet& s);

}  // namespace widthlab

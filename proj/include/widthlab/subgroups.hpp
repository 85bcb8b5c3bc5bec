#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "widthlab/element_table.hpp"

namespace widthlab {

// Incrementally grown subgroup together with the generators added so far.
class SubgroupBuilder {
 public:
  explicit SubgroupBuilder(TablePtr table);
  // Adds g and closes; returns false if g was already in the subgroup.
  bool add(ElemId g);
  const ElementSet& set() const { return set_; }
  const std::vector<ElemId>& generators() const { return gens_; }
  std::size_t size() const { return elems_.size(); }
  const std::vector<ElemId>& elements() const { return elems_; }

 private:
  TablePtr table_;
  ElementSet set_;
  std::vector<ElemId> elems_;
  std::vector<ElemId> gens_;
};

enum class ClosureMode { Generated, NormalClosure };

ElementSet subgroup(const TablePtr& table, std::span<const ElemId> seeds, ClosureMode mode = ClosureMode::Generated);
// Normal closure of seeds under conjugation by the given conjugators.
ElementSet normal_closure_in(const TablePtr& table, std::span<const ElemId> seeds, std::span<const ElemId> conjugators);
// Greedy generating set of a subgroup, taking smallest ids first.
// Throws InputError if the set is not a subgroup.
std::vector<ElemId> generators_of(const ElementSet& h);
bool is_subgroup(const ElementSet& h);
bool is_normal(const ElementSet& h);
// [H,K] = <[h,k] : h in H, k in K>.
ElementSet bracket(const ElementSet& h, const ElementSet& k);
// [H, _n K] = [...[[H,K],K],...,K] with n brackets.
ElementSet iterated_bracket(const ElementSet& h, const ElementSet& k, std::size_t n);
// Intersection of the descending chain [H,_n K].
ElementSet omega_limit(const ElementSet& h, const ElementSet& k);
ElementSet derived_subgroup(const ElementSet& h);
bool is_soluble(const ElementSet& h);
ElementSet centre(const TablePtr& table);
ElementSet centralizer(const ElementSet& h, ElemId y);

// Orbits of the group under conjugation, smallest id first in each class.
std::vector<std::vector<ElemId>> conjugacy_classes(const TablePtr& table);

struct NormalSubgroup {
  ElementSet set;
  std::vector<ElemId> generators;
};
// All normal subgroups, sorted by order then lexicographically by element ids.
std::vector<NormalSubgroup> normal_subgroups(const TablePtr& table, std::size_t lattice_limit = 10'000);

enum class QmnKind { Soluble, QuasiSemisimple };

struct QmnInfo {
  ElementSet n;
  ElementSet z;  // unique maximal normal subgroup of G properly inside N
  QmnKind kind = QmnKind::Soluble;
  std::size_t prime = 0;         // soluble: N/Z is elementary abelian of order prime^rank
  std::size_t rank = 0;
  std::size_t simple_order = 0;  // quasi-semisimple: N/Z = T^factors with |T| = simple_order
  std::size_t factors = 0;
};

// Quasi-minimal normal subgroup of the whole group inside the normal subgroup h:
// N = [N,G] > 1 minimal. Ties broken by order, then by canonical generators.
std::optional<QmnInfo> find_qmn(const ElementSet& h);

// Number of simple factors of the chief factor N/Z (Z < N normal, N/Z non-abelian),
// and the order of one factor.
std::pair<std::size_t, std::size_t> chief_factor_shape(const ElementSet& n, const ElementSet& z);

struct AcceptableResult {
  bool acceptable = false;
  std::string reason;
  std::optional<std::pair<ElementSet, ElementSet>> witness;  // (Z, N)
};
AcceptableResult is_acceptable(const ElementSet& h);

struct SubgroupLattice {
  std::vector<ElementSet> subgroups;  // sorted by order
};
SubgroupLattice all_subgroups(const TablePtr& table, std::size_t limit = 100'000);
std::vector<ElementSet> maximal_subgroups(const TablePtr& table);

struct MuResult {
  double value = 0;
  std::size_t index = 0;        // |G:M| attaining the minimum
  std::size_t group_order = 0;
};
// min over maximal M of log|G:M| / log|G|.
MuResult mu(const TablePtr& table);

// Minimal number of generators, searched exhaustively up to max_d.
std::size_t min_generators(const TablePtr& table, std::size_t max_d = 4);

}  // namespace widthlab

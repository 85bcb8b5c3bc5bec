#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "widthlab/group_spec.hpp"
#include "widthlab/permutation.hpp"

namespace widthlab {

using ElemId = std::uint32_t;

// Enumerated permutation group. Ids follow breadth-first order from the
// identity (id 0), expanding each element by generators in index order.
// Immutable after construction and safe to share across threads.
class ElementTable {
 public:
  static constexpr std::size_t kDefaultLimit = 2'000'000;
  // Groups of at most this order get a full multiplication table.
  static constexpr std::size_t kFullTableOrder = 2048;

  static std::shared_ptr<const ElementTable> enumerate(const Group& group,
                                                       std::size_t limit = kDefaultLimit);

  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }
  std::size_t degree() const { return degree_; }
  std::size_t num_generators() const { return gen_ids_.size(); }
  ElemId generator(std::size_t i) const { return gen_ids_[i]; }
  const std::vector<ElemId>& generator_ids() const { return gen_ids_; }
  const Group& group() const { return group_; }

  static constexpr ElemId identity() { return 0; }
  std::span<const Point> images(ElemId a) const {
    return {data_.data() + static_cast<std::size_t>(a) * degree_, degree_};
  }
  Permutation permutation(ElemId a) const;
  std::optional<ElemId> find(std::span<const Point> images) const;
  std::optional<ElemId> find(const Permutation& p) const;
  // Throws InputError if p is not an element.
  ElemId id_of(const Permutation& p) const;

  ElemId mul(ElemId a, ElemId b) const;
  ElemId inv(ElemId a) const { return inverse_[a]; }
  ElemId mul_gen(ElemId a, std::size_t g) const { return gen_mul_[static_cast<std::size_t>(a) * gen_ids_.size() + g]; }
  // x^y = y^-1 x y
  ElemId conj(ElemId x, ElemId y) const { return mul(inv(y), mul(x, y)); }
  // [x,y] = x^-1 y^-1 x y
  ElemId comm(ElemId x, ElemId y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }
  ElemId pow(ElemId x, long long n) const;
  std::size_t element_order(ElemId x) const;

  // Breadth-first tree: element = parent * generator(parent_generator).
  ElemId parent(ElemId a) const { return parent_[a]; }
  std::uint32_t parent_generator(ElemId a) const { return parent_gen_[a]; }

  // Serialization used by the element-table cache.
  void save(std::ostream& out) const;
  static std::shared_ptr<const ElementTable> load(std::istream& in, const Group& group);

 private:
  ElementTable() = default;
  void build_index();
  void build_derived_tables();
  std::size_t slot_for(std::span<const Point> images) const;

  Group group_;
  std::string name_;
  std::size_t degree_ = 0;
  std::size_t order_ = 0;
  std::vector<Point> data_;
  std::vector<std::uint32_t> slots_;  // open addressing; 0 = empty, else id + 1
  std::vector<ElemId> gen_ids_;
  std::vector<ElemId> gen_mul_;
  std::vector<ElemId> inverse_;
  std::vector<ElemId> parent_;
  std::vector<std::uint32_t> parent_gen_;
  std::vector<ElemId> full_;  // order*order products when order <= kFullTableOrder
};

using TablePtr = std::shared_ptr<const ElementTable>;

// Bitset over the ids of one ElementTable.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(TablePtr table);
  static ElementSet full(TablePtr table);
  static ElementSet trivial(TablePtr table);
  static ElementSet of(TablePtr table, std::span<const ElemId> ids);

  const TablePtr& table() const { return table_; }
  bool contains(ElemId a) const { return (bits_[a >> 6] >> (a & 63)) & 1u; }
  // Returns true when a was not present before.
  bool insert(ElemId a) {
    auto& w = bits_[a >> 6];
    std::uint64_t m = std::uint64_t{1} << (a & 63);
    if (w & m) return false;
    w |= m;
    return true;
  }
  void erase(ElemId a) { bits_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }
  std::size_t size() const;
  bool empty() const;
  std::vector<ElemId> elements() const;
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t x = bits_[w];
      while (x) {
        int b = __builtin_ctzll(x);
        f(static_cast<ElemId>(w * 64 + static_cast<std::size_t>(b)));
        x &= x - 1;
      }
    }
  }
  bool subset_of(const ElementSet& o) const;
  ElementSet& operator|=(const ElementSet& o);
  ElementSet& operator&=(const ElementSet& o);
  ElementSet& operator-=(const ElementSet& o);
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }
  friend bool operator==(const ElementSet& a, const ElementSet& b) { return a.bits_ == b.bits_; }
  std::size_t hash() const;
  const std::vector<std::uint64_t>& words() const { return bits_; }

 private:
  TablePtr table_;
  std::vector<std::uint64_t> bits_;
};

// {x*y : x in X, y in Y}
ElementSet product_set(const ElementSet& x, const ElementSet& y);
ElementSet inverse_set(const ElementSet& x);

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace widthlab

#include "widthlab/element_table.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "widthlab/error.hpp"

namespace widthlab {

namespace {

std::uint64_t hash_points(std::span<const Point> pts) {
  std::uint64_t h = 1469598103934665603ull;
  for (Point p : pts) {
    h ^= p;
    h *= 1099511628211ull;
  }
  return h ^ (h >> 29);
}

}  // namespace

std::size_t ElementTable::slot_for(std::span<const Point> pts) const {
  std::size_t mask = slots_.size() - 1;
  std::size_t s = hash_points(pts) & mask;
  for (;;) {
    std::uint32_t v = slots_[s];
    if (v == 0) return s;
    if (std::memcmp(data_.data() + static_cast<std::size_t>(v - 1) * degree_, pts.data(), degree_ * sizeof(Point)) == 0)
      return s;
    s = (s + 1) & mask;
  }
}

std::optional<ElemId> ElementTable::find(std::span<const Point> pts) const {
  if (pts.size() != degree_) return std::nullopt;
  std::uint32_t v = slots_[slot_for(pts)];
  if (v == 0) return std::nullopt;
  return v - 1;
}

std::optional<ElemId> ElementTable::find(const Permutation& p) const { return find(p.images()); }

ElemId ElementTable::id_of(const Permutation& p) const {
  if (p.degree() != degree_)
    throw InputError("permutation of degree " + std::to_string(p.degree()) + " used in group of degree " +
                     std::to_string(degree_));
  auto id = find(p);
  if (!id) throw InputError("permutation " + p.to_cycles() + " is not an element of " + name_);
  return *id;
}

Permutation ElementTable::permutation(ElemId a) const {
  auto im = images(a);
  return Permutation(std::vector<Point>(im.begin(), im.end()));
}

std::shared_ptr<const ElementTable> ElementTable::enumerate(const Group& group, std::size_t limit) {
  std::shared_ptr<ElementTable> t(new ElementTable());
  t->group_ = group;
  t->name_ = group.name;
  t->degree_ = group.degree;
  for (const auto& g : group.generators)
    if (g.degree() != group.degree) throw InputError("generator degree mismatch in " + group.name);
  const std::size_t deg = t->degree_;
  const std::size_t ngen = group.generators.size();
  t->slots_.assign(1024, 0);
  auto insert = [&](std::span<const Point> pts, ElemId parent, std::uint32_t gen) -> std::pair<ElemId, bool> {
    if ((t->order_ + 1) * 2 > t->slots_.size()) {
      t->slots_.assign(t->slots_.size() * 2, 0);
      for (std::size_t i = 0; i < t->order_; ++i)
        t->slots_[t->slot_for(t->images(static_cast<ElemId>(i)))] = static_cast<std::uint32_t>(i + 1);
    }
    std::size_t s = t->slot_for(pts);
    if (t->slots_[s] != 0) return {t->slots_[s] - 1, false};
    if (t->order_ >= limit)
      throw CapacityError("group " + group.name + " has more than " + std::to_string(limit) + " elements");
    // pts may alias data_; copy before growing.
    std::vector<Point> tmp(pts.begin(), pts.end());
    t->data_.insert(t->data_.end(), tmp.begin(), tmp.end());
    t->parent_.push_back(parent);
    t->parent_gen_.push_back(gen);
    t->slots_[s] = static_cast<std::uint32_t>(t->order_ + 1);
    return {static_cast<ElemId>(t->order_++), true};
  };
  auto id = Permutation::identity(deg);
  insert(id.images(), 0, 0);
  std::vector<Point> buf(deg);
  for (std::size_t cur = 0; cur < t->order_; ++cur) {
    for (std::size_t g = 0; g < ngen; ++g) {
      const Point* a = t->data_.data() + cur * deg;
      auto gi = group.generators[g].images();
      for (std::size_t i = 0; i < deg; ++i) buf[i] = gi[a[i]];
      auto [nid, fresh] = insert(buf, static_cast<ElemId>(cur), static_cast<std::uint32_t>(g));
      t->gen_mul_.push_back(nid);
      (void)fresh;
    }
  }
  for (const auto& g : group.generators) t->gen_ids_.push_back(*t->find(g));
  t->build_derived_tables();
  return t;
}

void ElementTable::build_derived_tables() {
  const std::size_t deg = degree_;
  inverse_.assign(order_, 0);
  std::vector<Point> buf(deg);
  for (std::size_t a = 0; a < order_; ++a) {
    auto im = images(static_cast<ElemId>(a));
    for (std::size_t i = 0; i < deg; ++i) buf[im[i]] = static_cast<Point>(i);
    inverse_[a] = *find(buf);
  }
  full_.clear();
  if (order_ <= kFullTableOrder) {
    full_.resize(order_ * order_);
    for (std::size_t a = 0; a < order_; ++a) {
      auto ia = images(static_cast<ElemId>(a));
      for (std::size_t b = 0; b < order_; ++b) {
        auto ib = images(static_cast<ElemId>(b));
        for (std::size_t i = 0; i < deg; ++i) buf[i] = ib[ia[i]];
        full_[a * order_ + b] = *find(buf);
      }
    }
  }
}

ElemId ElementTable::mul(ElemId a, ElemId b) const {
  if (!full_.empty()) return full_[static_cast<std::size_t>(a) * order_ + b];
  thread_local std::vector<Point> buf;
  buf.resize(degree_);
  const Point* ia = data_.data() + static_cast<std::size_t>(a) * degree_;
  const Point* ib = data_.data() + static_cast<std::size_t>(b) * degree_;
  for (std::size_t i = 0; i < degree_; ++i) buf[i] = ib[ia[i]];
  return slots_[slot_for(buf)] - 1;
}

ElemId ElementTable::pow(ElemId x, long long n) const {
  ElemId base = n < 0 ? inv(x) : x;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  ElemId r = identity();
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::size_t ElementTable::element_order(ElemId x) const {
  std::size_t n = 1;
  for (ElemId y = x; y != identity(); y = mul(y, x)) ++n;
  return n;
}

void ElementTable::save(std::ostream& out) const {
  out << "widthlab-element-table 1\n" << name_ << "\n" << degree_ << " " << order_ << "\n";
  for (std::size_t a = 0; a < order_; ++a) {
    out << parent_[a] << " " << parent_gen_[a];
    for (Point p : images(static_cast<ElemId>(a))) out << " " << p;
    out << "\n";
  }
}

std::shared_ptr<const ElementTable> ElementTable::load(std::istream& in, const Group& group) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "widthlab-element-table" || version != 1)
    throw InputError("not an element-table cache file");
  std::shared_ptr<ElementTable> t(new ElementTable());
  in >> std::ws;
  std::getline(in, t->name_);
  if (!(in >> t->degree_ >> t->order_) || t->degree_ != group.degree)
    throw InputError("element-table cache header mismatch");
  t->group_ = group;
  t->data_.resize(t->degree_ * t->order_);
  t->parent_.resize(t->order_);
  t->parent_gen_.resize(t->order_);
  for (std::size_t a = 0; a < t->order_; ++a) {
    in >> t->parent_[a] >> t->parent_gen_[a];
    for (std::size_t i = 0; i < t->degree_; ++i) in >> t->data_[a * t->degree_ + i];
  }
  if (!in) throw InputError("truncated element-table cache file");
  t->build_index();
  const std::size_t ngen = group.generators.size();
  for (const auto& g : group.generators) {
    auto id = t->find(g);
    if (!id) throw InputError("element-table cache does not match group generators");
    t->gen_ids_.push_back(*id);
  }
  std::vector<Point> buf(t->degree_);
  t->gen_mul_.resize(t->order_ * ngen);
  for (std::size_t a = 0; a < t->order_; ++a)
    for (std::size_t g = 0; g < ngen; ++g) {
      auto ia = t->images(static_cast<ElemId>(a));
      auto gi = group.generators[g].images();
      for (std::size_t i = 0; i < t->degree_; ++i) buf[i] = gi[ia[i]];
      auto id = t->find(buf);
      if (!id) throw InputError("element-table cache is not closed under generators");
      t->gen_mul_[a * ngen + g] = *id;
    }
  t->build_derived_tables();
  return t;
}

void ElementTable::build_index() {
  std::size_t cap = 1024;
  while (cap < order_ * 2 + 2) cap *= 2;
  slots_.assign(cap, 0);
  for (std::size_t i = 0; i < order_; ++i) {
    std::size_t s = slot_for(images(static_cast<ElemId>(i)));
    if (slots_[s] != 0) throw InputError("duplicate element in element-table cache");
    slots_[s] = static_cast<std::uint32_t>(i + 1);
  }
}

ElementSet::ElementSet(TablePtr table) : table_(std::move(table)), bits_((table_->order() + 63) / 64, 0) {}

ElementSet ElementSet::full(TablePtr table) {
  ElementSet s(std::move(table));
  for (std::size_t a = 0; a < s.table_->order(); ++a) s.insert(static_cast<ElemId>(a));
  return s;
}

ElementSet ElementSet::trivial(TablePtr table) {
  ElementSet s(std::move(table));
  s.insert(ElementTable::identity());
  return s;
}

ElementSet ElementSet::of(TablePtr table, std::span<const ElemId> ids) {
  ElementSet s(std::move(table));
  for (ElemId a : ids) s.insert(a);
  return s;
}

std::size_t ElementSet::size() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool ElementSet::empty() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

std::vector<ElemId> ElementSet::elements() const {
  std::vector<ElemId> out;
  for_each([&](ElemId a) { out.push_back(a); });
  return out;
}

bool ElementSet::subset_of(const ElementSet& o) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

ElementSet& ElementSet::operator|=(const ElementSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}
ElementSet& ElementSet::operator&=(const ElementSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}
ElementSet& ElementSet::operator-=(const ElementSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
  return *this;
}

std::size_t ElementSet::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (auto w : bits_) h = (h ^ w) * 0xff51afd7ed558ccdull + (h >> 31);
  return static_cast<std::size_t>(h);
}

ElementSet product_set(const ElementSet& x, const ElementSet& y) {
  const auto& t = *x.table();
  ElementSet out(x.table());
  auto ys = y.elements();
  x.for_each([&](ElemId a) {
    for (ElemId b : ys) out.insert(t.mul(a, b));
  });
  return out;
}

ElementSet inverse_set(const ElementSet& x) {
  ElementSet out(x.table());
  x.for_each([&](ElemId a) { out.insert(x.table()->inv(a)); });
  return out;
}

}  // namespace widthlab

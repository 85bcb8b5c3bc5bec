#include "widthlab/automorphism.hpp"

#include "widthlab/error.hpp"
#include "widthlab/subgroups.hpp"

namespace widthlab {

Automorphism Automorphism::identity(const TablePtr& table) {
  Automorphism a;
  a.table_ = table;
  a.images_.resize(table->order());
  for (std::size_t i = 0; i < table->order(); ++i) a.images_[i] = static_cast<ElemId>(i);
  return a;
}

Automorphism Automorphism::inner(const TablePtr& table, ElemId g) {
  Automorphism a;
  a.table_ = table;
  a.images_.resize(table->order());
  for (std::size_t i = 0; i < table->order(); ++i) a.images_[i] = table->conj(static_cast<ElemId>(i), g);
  return a;
}

Automorphism Automorphism::from_conjugation(const TablePtr& table, const Permutation& c) {
  if (c.degree() != table->degree()) throw InputError("conjugator degree does not match group degree");
  Automorphism a;
  a.table_ = table;
  a.images_.resize(table->order());
  Permutation ci = c.inverse();
  for (std::size_t i = 0; i < table->order(); ++i) {
    auto id = table->find(ci * table->permutation(static_cast<ElemId>(i)) * c);
    if (!id) throw InputError("conjugator " + c.to_cycles() + " does not normalize " + table->name());
    a.images_[i] = *id;
  }
  return a;
}

Automorphism Automorphism::from_generator_images(const TablePtr& table, std::span<const ElemId> images) {
  const auto& t = *table;
  if (images.size() != t.num_generators())
    throw InputError("expected " + std::to_string(t.num_generators()) + " generator images");
  Automorphism a;
  a.table_ = table;
  a.images_.resize(t.order());
  a.images_[0] = ElementTable::identity();
  for (std::size_t i = 1; i < t.order(); ++i) {
    ElemId x = static_cast<ElemId>(i);
    a.images_[i] = t.mul(a.images_[t.parent(x)], images[t.parent_generator(x)]);
  }
  for (std::size_t i = 0; i < t.order(); ++i)
    for (std::size_t g = 0; g < t.num_generators(); ++g)
      if (a.images_[t.mul_gen(static_cast<ElemId>(i), g)] != t.mul(a.images_[i], images[g]))
        throw InputError("generator images do not define a homomorphism");
  std::vector<bool> hit(t.order(), false);
  for (ElemId y : a.images_) {
    if (hit[y]) throw InputError("generator images do not define a bijection");
    hit[y] = true;
  }
  return a;
}

bool Automorphism::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Automorphism Automorphism::inverse() const {
  Automorphism r;
  r.table_ = table_;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<ElemId>(i);
  return r;
}

Automorphism compose(const Automorphism& first, const Automorphism& second) {
  Automorphism r;
  r.table_ = first.table_;
  r.images_.resize(first.images_.size());
  for (std::size_t i = 0; i < first.images_.size(); ++i) r.images_[i] = second.images_[first.images_[i]];
  return r;
}

Automorphism Automorphism::pow(long long n) const {
  Automorphism base = n < 0 ? inverse() : *this;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  Automorphism r = identity(table_);
  while (e) {
    if (e & 1) r = compose(r, base);
    base = compose(base, base);
    e >>= 1;
  }
  return r;
}

TablePtr subgroup_table(const ElementSet& h, const std::string& name) {
  const auto& t = *h.table();
  Group g{name, t.degree(), {}};
  for (ElemId x : generators_of(h)) g.generators.push_back(t.permutation(x));
  return ElementTable::enumerate(g);
}

InducedAutomorphism automorphism_from_ambient(const TablePtr& ambient, const ElementSet& n, const Permutation& c) {
  if (!is_subgroup(n)) throw InputError("N is not a subgroup of the ambient group");
  auto sub = subgroup_table(n, ambient->name() + "-subgroup");
  return {sub, Automorphism::from_conjugation(sub, c)};
}

std::vector<Automorphism> automorphism_group(const TablePtr& table, std::size_t max_candidates) {
  const auto& t = *table;
  std::vector<std::vector<ElemId>> cand(t.num_generators());
  std::size_t total = 1;
  for (std::size_t g = 0; g < t.num_generators(); ++g) {
    std::size_t ord = t.element_order(t.generator(g));
    for (std::size_t x = 0; x < t.order(); ++x)
      if (t.element_order(static_cast<ElemId>(x)) == ord) cand[g].push_back(static_cast<ElemId>(x));
    total *= cand[g].size();
    if (total > max_candidates) throw CapacityError("automorphism search space too large");
  }
  std::vector<Automorphism> out;
  out.push_back(Automorphism::identity(table));
  std::vector<std::size_t> odo(cand.size(), 0);
  std::vector<ElemId> imgs(cand.size());
  for (std::size_t step = 0; step < total; ++step) {
    for (std::size_t g = 0; g < cand.size(); ++g) imgs[g] = cand[g][odo[g]];
    try {
      auto a = Automorphism::from_generator_images(table, imgs);
      if (!a.is_identity()) out.push_back(std::move(a));
    } catch (const InputError&) {
    }
    for (std::size_t g = 0; g < odo.size(); ++g) {
      if (++odo[g] < cand[g].size()) break;
      odo[g] = 0;
    }
  }
  return out;
}

bool is_inner(const Automorphism& a) {
  const auto& t = *a.table();
  for (std::size_t g = 0; g < t.order(); ++g) {
    bool ok = true;
    for (ElemId x : t.generator_ids())
      if (t.conj(x, static_cast<ElemId>(g)) != a(x)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

ElementSet apply(const Automorphism& a, const ElementSet& s) {
  ElementSet out(s.table());
  s.for_each([&](ElemId x) { out.insert(a(x)); });
  return out;
}

}  // namespace widthlab

#include "widthlab/subgroups.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "widthlab/error.hpp"

namespace widthlab {

SubgroupBuilder::SubgroupBuilder(TablePtr table) : table_(std::move(table)), set_(ElementSet::trivial(table_)) {
  elems_.push_back(ElementTable::identity());
}

bool SubgroupBuilder::add(ElemId g) {
  if (set_.contains(g)) return false;
  gens_.push_back(g);
  const auto& t = *table_;
  // New elements are products of existing ones with generators; a full pass
  // over the growing list closes the set.
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    ElemId x = elems_[i];
    for (ElemId s : gens_) {
      ElemId y = t.mul(x, s);
      if (set_.insert(y)) elems_.push_back(y);
    }
  }
  return true;
}

ElementSet normal_closure_in(const TablePtr& table, std::span<const ElemId> seeds, std::span<const ElemId> conjugators) {
  SubgroupBuilder b(table);
  for (ElemId s : seeds) b.add(s);
  for (std::size_t i = 0; i < b.generators().size(); ++i) {
    ElemId g = b.generators()[i];
    for (ElemId c : conjugators) b.add(table->conj(g, c));
  }
  return b.set();
}

ElementSet subgroup(const TablePtr& table, std::span<const ElemId> seeds, ClosureMode mode) {
  if (mode == ClosureMode::NormalClosure) return normal_closure_in(table, seeds, table->generator_ids());
  SubgroupBuilder b(table);
  for (ElemId s : seeds) b.add(s);
  return b.set();
}

std::vector<ElemId> generators_of(const ElementSet& h) {
  SubgroupBuilder b(h.table());
  bool ok = true;
  h.for_each([&](ElemId a) {
    if (!ok || b.set().contains(a)) return;
    b.add(a);
    if (b.size() > h.size()) ok = false;
  });
  if (!ok || !(b.set() == h)) throw InputError("element set is not a subgroup");
  return b.generators();
}

bool is_subgroup(const ElementSet& h) {
  if (!h.contains(ElementTable::identity())) return false;
  try {
    generators_of(h);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

bool is_normal(const ElementSet& h) {
  const auto& t = *h.table();
  for (ElemId g : generators_of(h))
    for (ElemId c : t.generator_ids())
      if (!h.contains(t.conj(g, c))) return false;
  return true;
}

ElementSet bracket(const ElementSet& h, const ElementSet& k) {
  const auto& table = h.table();
  auto gh = generators_of(h);
  auto gk = generators_of(k);
  std::vector<ElemId> seeds;
  for (ElemId a : gh)
    for (ElemId b : gk) seeds.push_back(table->comm(a, b));
  std::vector<ElemId> conj = gh;
  conj.insert(conj.end(), gk.begin(), gk.end());
  return normal_closure_in(table, seeds, conj);
}

ElementSet iterated_bracket(const ElementSet& h, const ElementSet& k, std::size_t n) {
  ElementSet cur = h;
  for (std::size_t i = 0; i < n; ++i) cur = bracket(cur, k);
  return cur;
}

ElementSet omega_limit(const ElementSet& h, const ElementSet& k) {
  ElementSet cur = h;
  for (;;) {
    ElementSet next = bracket(cur, k);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

ElementSet derived_subgroup(const ElementSet& h) { return bracket(h, h); }

bool is_soluble(const ElementSet& h) {
  ElementSet cur = h;
  while (cur.size() > 1) {
    ElementSet next = derived_subgroup(cur);
    if (next == cur) return false;
    cur = std::move(next);
  }
  return true;
}

ElementSet centralizer(const ElementSet& h, ElemId y) {
  const auto& t = *h.table();
  ElementSet out(h.table());
  h.for_each([&](ElemId a) {
    if (t.mul(a, y) == t.mul(y, a)) out.insert(a);
  });
  return out;
}

ElementSet centre(const TablePtr& table) {
  ElementSet out(table);
  for (std::size_t a = 0; a < table->order(); ++a) {
    bool central = true;
    for (ElemId g : table->generator_ids())
      if (table->mul(static_cast<ElemId>(a), g) != table->mul(g, static_cast<ElemId>(a))) {
        central = false;
        break;
      }
    if (central) out.insert(static_cast<ElemId>(a));
  }
  return out;
}

std::vector<std::vector<ElemId>> conjugacy_classes(const TablePtr& table) {
  std::vector<std::vector<ElemId>> out;
  ElementSet seen(table);
  for (std::size_t a = 0; a < table->order(); ++a) {
    if (seen.contains(static_cast<ElemId>(a))) continue;
    std::vector<ElemId> cls{static_cast<ElemId>(a)};
    seen.insert(static_cast<ElemId>(a));
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (ElemId g : table->generator_ids()) {
        ElemId c = table->conj(cls[i], g);
        if (seen.insert(c)) cls.push_back(c);
      }
    std::sort(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  return out;
}

namespace {

bool lex_less(const ElementSet& a, const ElementSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto ea = a.elements(), eb = b.elements();
  return ea < eb;
}

}  // namespace

std::vector<NormalSubgroup> normal_subgroups(const TablePtr& table, std::size_t lattice_limit) {
  std::vector<NormalSubgroup> out;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index;
  auto lookup_or_add = [&](NormalSubgroup ns) -> bool {
    auto& bucket = index[ns.set.hash()];
    for (std::size_t i : bucket)
      if (out[i].set == ns.set) return false;
    if (out.size() >= lattice_limit)
      throw CapacityError("normal subgroup lattice exceeds " + std::to_string(lattice_limit) + " members");
    bucket.push_back(out.size());
    out.push_back(std::move(ns));
    return true;
  };
  lookup_or_add({ElementSet::trivial(table), {}});
  std::vector<NormalSubgroup> closures;
  for (const auto& cls : conjugacy_classes(table)) {
    if (cls.front() == ElementTable::identity()) continue;
    std::vector<ElemId> seed{cls.front()};
    auto set = normal_closure_in(table, seed, table->generator_ids());
    NormalSubgroup ns{set, generators_of(set)};
    if (lookup_or_add(ns)) closures.push_back(std::move(ns));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& c : closures) {
      if (c.set.subset_of(out[i].set)) continue;
      SubgroupBuilder b(table);
      for (ElemId g : out[i].generators) b.add(g);
      for (ElemId g : c.generators) b.add(g);
      lookup_or_add({b.set(), b.generators()});
    }
  }
  std::sort(out.begin(), out.end(), [](const NormalSubgroup& a, const NormalSubgroup& b) { return lex_less(a.set, b.set); });
  return out;
}

std::pair<std::size_t, std::size_t> chief_factor_shape(const ElementSet& n, const ElementSet& z) {
  const auto& table = n.table();
  auto gn = generators_of(n);
  auto gz = generators_of(z);
  std::size_t best = n.size();
  ElementSet seen = z;
  n.for_each([&](ElemId x) {
    if (seen.contains(x)) return;
    // Mark the N-class of x.
    std::vector<ElemId> cls{x};
    seen.insert(x);
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (ElemId g : gn) {
        ElemId c = table->conj(cls[i], g);
        if (seen.insert(c)) cls.push_back(c);
      }
    std::vector<ElemId> seeds = gz;
    seeds.push_back(x);
    best = std::min(best, normal_closure_in(table, seeds, gn).size());
  });
  std::size_t zsz = z.size();
  std::size_t t = best / zsz;
  std::size_t quotient = n.size() / zsz;
  std::size_t factors = 0;
  std::size_t acc = 1;
  while (acc < quotient) {
    acc *= t;
    ++factors;
  }
  if (t < 2 || acc != quotient) throw InvariantError("section is not a power of one simple group");
  return {factors, t};
}

std::optional<QmnInfo> find_qmn(const ElementSet& h) {
  const auto& table = h.table();
  if (!is_normal(h)) throw PreconditionError("subgroup is not normal");
  auto ns = normal_subgroups(table);
  ElementSet whole = ElementSet::full(table);
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& n = ns[i].set;
    if (n.size() == 1 || !n.subset_of(h)) continue;
    if (bracket(n, whole) == n) cand.push_back(i);
  }
  std::optional<std::size_t> best;
  std::vector<ElemId> best_gens;
  for (std::size_t i : cand) {
    bool minimal = true;
    for (std::size_t j : cand)
      if (j != i && ns[j].set.size() < ns[i].set.size() && ns[j].set.subset_of(ns[i].set)) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    auto gens = generators_of(ns[i].set);
    if (!best || ns[i].set.size() < ns[*best].set.size() ||
        (ns[i].set.size() == ns[*best].set.size() && gens < best_gens)) {
      best = i;
      best_gens = gens;
    }
  }
  if (!best) return std::nullopt;
  QmnInfo info;
  info.n = ns[*best].set;
  SubgroupBuilder zb(table);
  for (const auto& m : ns)
    if (m.set.size() < info.n.size() && m.set.subset_of(info.n))
      for (ElemId g : m.generators) zb.add(g);
  info.z = zb.set();
  if (info.z == info.n) throw InvariantError("quasi-minimal normal subgroup has no unique maximal normal subgroup");
  std::size_t quotient = info.n.size() / info.z.size();
  if (is_soluble(info.n)) {
    info.kind = QmnKind::Soluble;
    std::size_t p = 2;
    while (quotient % p) ++p;
    info.prime = p;
    std::size_t r = 0, q = quotient;
    while (q % p == 0) {
      q /= p;
      ++r;
    }
    if (q != 1) throw InvariantError("soluble quasi-minimal section is not a p-group");
    info.rank = r;
  } else {
    info.kind = QmnKind::QuasiSemisimple;
    auto [f, t] = chief_factor_shape(info.n, info.z);
    info.factors = f;
    info.simple_order = t;
  }
  return info;
}

AcceptableResult is_acceptable(const ElementSet& h) {
  const auto& table = h.table();
  AcceptableResult res;
  if (!is_normal(h)) throw PreconditionError("subgroup is not normal");
  ElementSet whole = ElementSet::full(table);
  if (!(bracket(h, whole) == h)) {
    res.reason = "H differs from [H,G]";
    return res;
  }
  auto ns = normal_subgroups(table);
  std::vector<const NormalSubgroup*> inside;
  for (const auto& m : ns)
    if (m.set.subset_of(h)) inside.push_back(&m);
  for (const auto* n : inside) {
    for (const auto* z : inside) {
      if (z->set.size() >= n->set.size() || !z->set.subset_of(n->set)) continue;
      bool covering = true;
      for (const auto* m : inside)
        if (m->set.size() > z->set.size() && m->set.size() < n->set.size() && z->set.subset_of(m->set) &&
            m->set.subset_of(n->set)) {
          covering = false;
          break;
        }
      if (!covering) continue;
      if (derived_subgroup(n->set).subset_of(z->set)) continue;
      auto [factors, t] = chief_factor_shape(n->set, z->set);
      if (factors <= 2) {
        res.reason = factors == 1 ? "normal section is a non-abelian simple group"
                                  : "normal section is a direct square of a non-abelian simple group";
        res.witness = std::make_pair(z->set, n->set);
        return res;
      }
    }
  }
  res.acceptable = true;
  return res;
}

SubgroupLattice all_subgroups(const TablePtr& table, std::size_t limit) {
  struct Entry {
    ElementSet set;
    std::vector<ElemId> gens;
  };
  std::vector<Entry> subs;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index;
  auto add = [&](Entry e) {
    auto& bucket = index[e.set.hash()];
    for (std::size_t i : bucket)
      if (subs[i].set == e.set) return;
    if (subs.size() >= limit) throw CapacityError("subgroup lattice exceeds " + std::to_string(limit) + " members");
    bucket.push_back(subs.size());
    subs.push_back(std::move(e));
  };
  add({ElementSet::trivial(table), {}});
  std::vector<ElemId> cyclic_gens;
  {
    ElementSet covered(table);
    for (std::size_t a = 1; a < table->order(); ++a) {
      ElemId x = static_cast<ElemId>(a);
      if (covered.contains(x)) continue;
      SubgroupBuilder b(table);
      b.add(x);
      // Every generator of <x> gives the same cyclic subgroup.
      for (ElemId y : b.elements())
        if (subgroup(table, std::span<const ElemId>(&y, 1)) == b.set()) covered.insert(y);
      cyclic_gens.push_back(x);
      add({b.set(), {x}});
    }
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (ElemId c : cyclic_gens) {
      if (subs[i].set.contains(c)) continue;
      SubgroupBuilder b(table);
      for (ElemId g : subs[i].gens) b.add(g);
      b.add(c);
      add({b.set(), b.generators()});
    }
  }
  SubgroupLattice lat;
  for (auto& e : subs) lat.subgroups.push_back(std::move(e.set));
  std::sort(lat.subgroups.begin(), lat.subgroups.end(), lex_less);
  return lat;
}

std::vector<ElementSet> maximal_subgroups(const TablePtr& table) {
  auto lat = all_subgroups(table);
  std::vector<ElementSet> proper;
  for (auto& s : lat.subgroups)
    if (s.size() < table->order()) proper.push_back(s);
  std::vector<ElementSet> out;
  for (std::size_t i = 0; i < proper.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = i + 1; j < proper.size(); ++j)
      if (proper[j].size() > proper[i].size() && proper[i].subset_of(proper[j])) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(proper[i]);
  }
  return out;
}

MuResult mu(const TablePtr& table) {
  if (table->order() < 2) throw PreconditionError("trivial group has no maximal subgroups");
  MuResult r;
  r.group_order = table->order();
  double best = 2.0;
  for (const auto& m : maximal_subgroups(table)) {
    std::size_t idx = table->order() / m.size();
    double v = std::log(static_cast<double>(idx)) / std::log(static_cast<double>(table->order()));
    if (v < best) {
      best = v;
      r.index = idx;
    }
  }
  r.value = best;
  return r;
}

std::size_t min_generators(const TablePtr& table, std::size_t max_d) {
  const std::size_t n = table->order();
  if (n == 1) return 0;
  for (std::size_t a = 0; a < n; ++a)
    if (table->element_order(static_cast<ElemId>(a)) == n) return 1;
  auto classes = conjugacy_classes(table);
  // Search tuples whose first entry is a class representative.
  for (std::size_t d = 2; d <= max_d; ++d) {
    std::vector<ElemId> tuple(d, 0);
    std::function<bool(std::size_t, SubgroupBuilder&)> rec = [&](std::size_t pos, SubgroupBuilder& b) -> bool {
      if (b.size() == n) return true;
      if (pos == d) return false;
      if (pos == 0) {
        for (const auto& cls : classes) {
          SubgroupBuilder nb(table);
          nb.add(cls.front());
          if (rec(1, nb)) return true;
        }
        return false;
      }
      for (std::size_t x = 1; x < n; ++x) {
        if (b.set().contains(static_cast<ElemId>(x))) continue;
        SubgroupBuilder nb = b;
        nb.add(static_cast<ElemId>(x));
        if (rec(pos + 1, nb)) return true;
      }
      return false;
    };
    SubgroupBuilder start(table);
    if (rec(0, start)) return d;
  }
  throw CapacityError("group needs more than " + std::to_string(max_d) + " generators");
}

}  // namespace widthlab

#include "widthlab/soluble.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "widthlab/error.hpp"
#include "widthlab/semisimple.hpp"

namespace widthlab {

namespace {

using Powers = std::vector<std::pair<BigInt, Rational>>;

// prod lhs >= prod rhs, exponents rational, bases >= 1.
bool powers_geq(const Powers& lhs, const Powers& rhs) {
  long long den = 1;
  for (const auto* side : {&lhs, &rhs})
    for (const auto& [b, e] : *side) den = std::lcm(den, e.denominator());
  BigInt l = 1, r = 1;
  auto place = [&](const BigInt& base, const Rational& e, bool left) {
    long long k = e.numerator() * (den / e.denominator());
    if (k == 0) return;
    bool to_left = (k > 0) == left;
    BigInt v = big_pow(base, static_cast<std::uint64_t>(k > 0 ? k : -k));
    (to_left ? l : r) *= v;
  };
  for (const auto& [b, e] : lhs) place(b, e, true);
  for (const auto& [b, e] : rhs) place(b, e, false);
  return l >= r;
}

std::uint64_t checked_power(std::uint64_t base, std::size_t e, std::uint64_t limit, const char* what) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && v > limit / base) throw CapacityError(std::string(what) + " exceeds the enumeration limit");
    v *= base;
  }
  if (v > limit) throw CapacityError(std::string(what) + " exceeds the enumeration limit");
  return v;
}

unsigned mod_inverse(unsigned a, unsigned p) {
  unsigned r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = static_cast<unsigned>((static_cast<std::uint64_t>(r) * b) % p);
    b = static_cast<unsigned>((static_cast<std::uint64_t>(b) * b) % p);
    e >>= 1;
  }
  return r;
}

bool is_prime_number(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

bool generates_with(const ElementSet& k, const std::vector<ElemId>& x) {
  const auto& t = k.table();
  std::vector<ElemId> seeds = generators_of(k);
  seeds.insert(seeds.end(), x.begin(), x.end());
  return subgroup(t, seeds).size() == t->order();
}

bool central_in_group(const ElementSet& z) {
  const auto& t = *z.table();
  bool ok = true;
  z.for_each([&](ElemId a) {
    for (ElemId g : t.generator_ids())
      if (t.mul(a, g) != t.mul(g, a)) ok = false;
  });
  return ok;
}

std::size_t rank_rows(std::vector<std::vector<unsigned>> rows, unsigned p) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    unsigned inv = mod_inverse(rows[rank][c], p);
    for (auto& v : rows[rank]) v = static_cast<unsigned>((static_cast<std::uint64_t>(v) * inv) % p);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c] != 0) {
        unsigned f = rows[r][c];
        for (std::size_t k = 0; k < cols; ++k)
          rows[r][k] = static_cast<unsigned>((rows[r][k] + static_cast<std::uint64_t>(p - f) * rows[rank][k]) % p);
      }
    ++rank;
  }
  return rank;
}

}  // namespace

BigInt big_pow(const BigInt& base, std::uint64_t e) {
  BigInt r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

bool power_geq(const BigInt& a, const Rational& x, const BigInt& b, const Rational& y) {
  return powers_geq({{a, x}}, {{b, y}});
}

// ---------------------------------------------------------------------------

FpMatrix FpMatrix::identity(unsigned prime, std::size_t dim) {
  FpMatrix m(prime, dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_rows(unsigned prime, const std::vector<std::vector<int>>& rows) {
  if (!is_prime_number(prime)) throw InputError("matrix field size must be prime");
  FpMatrix m(prime, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InputError("matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      long long v = rows[i][j] % static_cast<int>(prime);
      m.at(i, j) = static_cast<unsigned>(v < 0 ? v + prime : v);
    }
  }
  return m;
}

FpMatrix operator*(const FpMatrix& x, const FpMatrix& y) {
  if (x.n != y.n || x.p != y.p) throw InputError("matrix shapes differ");
  FpMatrix r(x.p, x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k)
      if (x.at(i, k))
        for (std::size_t j = 0; j < x.n; ++j) r.at(i, j) = (r.at(i, j) + x.at(i, k) * y.at(k, j)) % x.p;
  return r;
}

std::size_t FpMatrix::rank() const {
  std::vector<std::vector<unsigned>> rows(n, std::vector<unsigned>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = at(i, j);
  return rank_rows(std::move(rows), p);
}

std::size_t FpMatrix::fixed_dimension() const {
  FpMatrix d = *this;
  for (std::size_t i = 0; i < n; ++i) d.at(i, i) = (d.at(i, i) + p - 1) % p;
  return n - d.rank();
}

// ---------------------------------------------------------------------------

FpModuleView::FpModuleView(const ElementSet& n, const ElementSet& z) : n_(n), z_(z) {
  const auto& t = *n.table();
  if (!z.subset_of(n)) throw PreconditionError("Z is not contained in N");
  if (!is_subgroup(n) || !is_subgroup(z)) throw PreconditionError("N and Z must be subgroups");
  std::uint64_t index = n.size() / z.size();
  auto primes = prime_divisors(index);
  if (index < 2 || primes.size() != 1) throw PreconditionError("|N/Z| is not a nontrivial prime power");
  p_ = static_cast<unsigned>(primes.front());
  auto n_elems = n.elements();
  auto z_elems = z.elements();
  for (ElemId a : n_elems) {
    if (!z.contains(t.pow(a, p_))) throw PreconditionError("N/Z does not have exponent p");
    for (ElemId c : z_elems)
      if (!z.contains(t.conj(c, a))) throw PreconditionError("Z is not normal in N");
    for (ElemId b : n_elems)
      if (!z.contains(t.comm(a, b))) throw PreconditionError("N/Z is not abelian");
  }
  SubgroupBuilder sb(n.table());
  for (ElemId c : generators_of(z)) sb.add(c);
  for (ElemId a : n_elems)
    if (!sb.set().contains(a)) {
      basis_.push_back(a);
      sb.add(a);
    }
  size_ = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) size_ *= p_;
  coord_.assign(t.order(), 0);
  reps_.assign(size_, ElementTable::identity());
  for (std::uint64_t v = 0; v < size_; ++v) {
    ElemId r = ElementTable::identity();
    auto c = unpack(v);
    for (std::size_t i = 0; i < basis_.size(); ++i) r = t.mul(r, t.pow(basis_[i], c[i]));
    reps_[v] = r;
    for (ElemId zz : z_elems) coord_[t.mul(r, zz)] = v;
  }
}

std::uint64_t FpModuleView::coords(ElemId x) const {
  if (!n_.contains(x)) throw InputError("element is not in N");
  return coord_[x];
}

std::vector<unsigned> FpModuleView::unpack(std::uint64_t v) const {
  std::vector<unsigned> c(basis_.size());
  for (auto& x : c) {
    x = static_cast<unsigned>(v % p_);
    v /= p_;
  }
  return c;
}

std::uint64_t FpModuleView::pack(const std::vector<unsigned>& c) const {
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i] % p_;
  return v;
}

std::uint64_t FpModuleView::add(std::uint64_t u, std::uint64_t v) const {
  return coord_[table()->mul(reps_[u], reps_[v])];
}

FpMatrix FpModuleView::action(ElemId g) const {
  const auto& t = *table();
  FpMatrix m(p_, dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    ElemId img = t.conj(basis_[i], g);
    if (!n_.contains(img)) throw PreconditionError("element does not normalise N");
    auto c = unpack(coord_[img]);
    for (std::size_t j = 0; j < dim(); ++j) m.at(i, j) = c[j];
  }
  return m;
}

bool FpModuleView::consistent(const std::vector<ElemId>& gs) const {
  const auto& t = *table();
  for (ElemId g : gs) {
    FpMatrix a = action(g);
    if (!a.invertible()) return false;
    for (std::uint64_t v = 0; v < size_; ++v) {
      auto c = unpack(v);
      std::vector<unsigned> img(dim(), 0);
      for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) img[j] = (img[j] + c[i] * a.at(i, j)) % p_;
      ElemId conj = t.conj(reps_[v], g);
      if (!n_.contains(conj) || coord_[conj] != pack(img)) return false;
    }
  }
  return true;
}

bool FpModuleView::irreducible(const std::vector<ElemId>& gs) const {
  std::vector<FpMatrix> mats;
  for (ElemId g : gs) mats.push_back(action(g));
  for (std::uint64_t v = 1; v < size_; ++v) {
    // Submodule generated by v.
    std::vector<std::vector<unsigned>> span{unpack(v)};
    std::size_t rank = 1;
    bool grew = true;
    while (grew && rank < dim()) {
      grew = false;
      auto current = span;
      for (const auto& row : current)
        for (const auto& a : mats) {
          std::vector<unsigned> img(dim(), 0);
          for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j) img[j] = (img[j] + row[i] * a.at(i, j)) % p_;
          span.push_back(img);
          std::size_t r = rank_rows(span, p_);
          if (r > rank) {
            rank = r;
            grew = true;
          } else {
            span.pop_back();
          }
        }
    }
    if (rank < dim()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

FixedPropertyResult fixed_point_property(const std::vector<Permutation>& action_generators,
                                         const std::vector<Permutation>& y, std::size_t k, const Rational& eps) {
  if (action_generators.empty()) throw InputError("no action generators");
  const std::size_t n = action_generators.front().degree();
  for (const auto& g : action_generators)
    if (g.degree() != n) throw InputError("action generators have different degrees");
  for (const auto& g : y)
    if (g.degree() != n) throw InputError("tuple element has the wrong degree");
  if (n < 2) throw InputError("the action needs at least two points");
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& g : action_generators) {
      std::size_t q = g(queue[h]);
      if (!seen[q]) {
        seen[q] = 1;
        queue.push_back(q);
      }
    }
  if (queue.size() != n) throw InputError("the action is not transitive");
  FixedPropertyResult r;
  r.n = n;
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::size_t moved = y[i].support_size();
    r.measure.push_back(moved);
    if (static_cast<long long>(moved) * eps.denominator() >= eps.numerator() * static_cast<long long>(n))
      r.witnesses.push_back(i);
  }
  r.holds = r.witnesses.size() >= k;
  return r;
}

FixedPropertyResult fixed_space_property(const std::vector<FpMatrix>& y, std::size_t k, const Rational& eps) {
  FixedPropertyResult r;
  if (y.empty()) {
    r.holds = k == 0;
    return r;
  }
  r.n = y.front().n;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i].n != r.n || y[i].p != y.front().p) throw InputError("matrices differ in size or field");
    if (!y[i].invertible()) throw InputError("matrix is not invertible");
    std::size_t codim = r.n - y[i].fixed_dimension();
    r.measure.push_back(codim);
    if (static_cast<long long>(codim) * eps.denominator() >= eps.numerator() * static_cast<long long>(r.n))
      r.witnesses.push_back(i);
  }
  r.holds = r.witnesses.size() >= k;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Minimal normal subgroups of N strictly above Z (the simple factors of N/Z),
// as sets, and their permutation by conjugation.
std::vector<ElementSet> chief_components(const ElementSet& n, const ElementSet& z) {
  const auto& t = n.table();
  auto n_elems = n.elements();
  auto z_gens = generators_of(z);
  std::vector<ElementSet> found;
  std::size_t best = n.size() + 1;
  std::vector<ElementSet> cands;
  n.for_each([&](ElemId a) {
    if (z.contains(a)) return;
    for (const auto& c : cands)
      if (c.contains(a)) return;
    std::vector<ElemId> seeds = z_gens;
    seeds.push_back(a);
    cands.push_back(normal_closure_in(t, seeds, n_elems));
  });
  for (const auto& c : cands) best = std::min(best, c.size());
  std::vector<ElementSet> out;
  for (const auto& c : cands)
    if (c.size() == best && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

}  // namespace

NongeneratingReport count_nongenerating(const QmnInfo& qmn, const std::vector<ElemId>& y,
                                        const NongeneratingConstants& c, std::uint64_t limit) {
  const TablePtr& t = qmn.n.table();
  const std::size_t m = y.size();
  NongeneratingReport rep;
  if (!generates_with(qmn.n, y)) throw PreconditionError("G is not generated by y together with N");
  rep.total = checked_power(qmn.n.size(), m, limit, "|N|^m");
  rep.d = c.d ? c.d : min_generators(t);
  rep.soluble = qmn.kind == QmnKind::Soluble;

  // Maximal subgroups supplementing N; only these can contain <y^a>.
  std::vector<ElementSet> sups;
  for (auto& mx : maximal_subgroups(t)) {
    std::uint64_t meet = (mx & qmn.n).size();
    if (mx.size() * qmn.n.size() / meet == t->order()) sups.push_back(std::move(mx));
  }
  rep.maximal_supplements = sups.size();
  const std::size_t words = (sups.size() + 63) / 64;
  using Mask = std::vector<std::uint64_t>;
  std::map<Mask, std::uint64_t> state;
  state[Mask(words, ~std::uint64_t{0})] = 1;
  auto n_elems = qmn.n.elements();
  for (ElemId yi : y) {
    std::map<Mask, std::uint64_t> per;
    for (ElemId a : n_elems) {
      ElemId c2 = t->conj(yi, a);
      Mask mk(words, 0);
      for (std::size_t s = 0; s < sups.size(); ++s)
        if (sups[s].contains(c2)) mk[s / 64] |= std::uint64_t{1} << (s % 64);
      ++per[mk];
    }
    std::map<Mask, std::uint64_t> next;
    for (const auto& [sm, sc] : state)
      for (const auto& [pm, pc] : per) {
        Mask r(words);
        for (std::size_t w = 0; w < words; ++w) r[w] = sm[w] & pm[w];
        next[r] += sc * pc;
      }
    state = std::move(next);
  }
  for (const auto& [mk, cnt] : state)
    if (std::any_of(mk.begin(), mk.end(), [](std::uint64_t w) { return w != 0; })) rep.count += cnt;

  const Rational keps = Rational(static_cast<long long>(c.k)) * c.eps;
  if (rep.soluble) {
    FpModuleView view(qmn.n, qmn.z);
    std::vector<FpMatrix> mats;
    for (ElemId yi : y) mats.push_back(view.action(yi));
    auto prop = fixed_space_property(mats, c.k, c.eps);
    rep.k_on_quotient = prop.witnesses.size();
    rep.property_on_quotient = prop.holds;
    rep.exponent = Rational(static_cast<long long>(rep.d)) - keps;
  } else {
    auto comps = chief_components(qmn.n, qmn.z);
    std::size_t n = comps.size();
    for (ElemId yi : y) {
      std::size_t moved = 0;
      for (const auto& comp : comps) {
        ElementSet img(t);
        comp.for_each([&](ElemId a) { img.insert(t->conj(a, yi)); });
        if (!(img == comp)) ++moved;
      }
      if (n >= 2 && static_cast<long long>(moved) * c.eps.denominator() >= c.eps.numerator() * static_cast<long long>(n))
        ++rep.k_on_quotient;
    }
    rep.property_on_quotient = rep.k_on_quotient >= c.k;
    const Rational half = keps / 2;
    Rational s1 = c.mu_prime * (half - Rational(static_cast<long long>(rep.d)) - 1);
    Rational s2 = c.mu_prime * (half - c.C0);
    rep.exponent = Rational(1) - std::min(s1, s2);
    rep.strict_ok = rep.count < rep.total;
  }
  if (!rep.property_on_quotient)
    throw PreconditionError("y has only " + std::to_string(rep.k_on_quotient) + " qualifying entries on N/Z, k = " +
                            std::to_string(c.k));
  const BigInt quotient = qmn.n.size() / qmn.z.size();
  rep.pass = rep.strict_ok &&
             (rep.count == 0 || powers_geq({{BigInt(qmn.n.size()), Rational(static_cast<long long>(m))}, {quotient, rep.exponent}},
                                           {{BigInt(rep.count), Rational(1)}}));
  return rep;
}

// ---------------------------------------------------------------------------

bool is_maximal_subgroup(const ElementSet& m) {
  const auto& t = m.table();
  if (!is_subgroup(m) || m.size() == t->order()) return false;
  auto gens = generators_of(m);
  for (ElemId g = 0; g < t->order(); ++g) {
    if (m.contains(g)) continue;
    SubgroupBuilder sb(t);
    for (ElemId x : gens) sb.add(x);
    sb.add(g);
    if (sb.size() != t->order()) return false;
  }
  return true;
}

VIdentityReport v_identity_check(const ElementSet& m, const ElementSet& n, ElemId y) {
  const auto& t = *m.table();
  if (!is_maximal_subgroup(m)) throw InputError("M is not a maximal subgroup");
  if (!is_normal(n)) throw InputError("N is not normal");
  ElementSet d = m & n;
  if (m.size() * n.size() / d.size() != t.order()) throw InputError("M does not supplement N");
  VIdentityReport r;
  auto n_elems = n.elements();
  for (ElemId a : n_elems)
    if (m.contains(t.conj(y, a))) ++r.direct;
  std::uint64_t cn = 0;
  for (ElemId a : n_elems)
    if (t.mul(a, y) == t.mul(y, a)) ++cn;
  for (ElemId b : n_elems) {
    ElemId yb = t.conj(y, b);
    if (!m.contains(yb)) continue;
    ElementSet brk(m.table());
    for (ElemId a : n_elems) brk.insert(t.comm(yb, a));
    r.formula.push_back(cn * (brk & d).size());
  }
  r.agree = r.formula.empty() ? r.direct == 0
                              : std::all_of(r.formula.begin(), r.formula.end(), [&](std::uint64_t v) { return v == r.direct; });
  return r;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kSubdirectLimit = 5'000'000;

struct Power {
  TablePtr a;
  std::size_t t = 0;
  std::uint64_t order = 0;
  std::uint64_t index(const NElem& x) const {
    std::uint64_t v = 0;
    for (std::size_t i = t; i-- > 0;) v = v * a->order() + x[i];
    return v;
  }
};

SubdirectReport subdirect_common(const TablePtr& a, const std::vector<std::size_t>& sigma,
                                 const std::vector<Automorphism>& comps, const std::function<bool(const NElem&)>& in_u,
                                 std::uint64_t u_order) {
  const std::size_t t = sigma.size();
  if (comps.size() != t) throw InputError("one component automorphism per factor is needed");
  Actor g(sigma, comps);
  Power pw{a, t, checked_power(a->order(), t, kSubdirectLimit, "|A|^t")};
  SubdirectReport r;
  r.t = t;
  r.v_order = pw.order;
  r.u_order = u_order;
  for (std::size_t i = 0; i < t; ++i)
    if (sigma[i] != i) ++r.moved;
  std::unordered_set<std::uint64_t> meet;
  for (std::uint64_t idx = 0; idx < pw.order; ++idx) {
    NElem v = n_from_index(*a, t, idx);
    NElem vg = g.apply(v);
    if (vg == v) ++r.centralizer;
    // [g, v] = (v^-1)^g v
    NElem c = n_mul(*a, g.apply(n_inv(*a, v)), v);
    if (in_u(c)) meet.insert(pw.index(c));
  }
  r.bracket_meet = meet.size();
  r.lhs = r.centralizer * r.bracket_meet;
  // |V| |V:U|^{-moved/(2t)} >= lhs
  const Rational e(-static_cast<long long>(r.moved), 2 * static_cast<long long>(t));
  r.pass = powers_geq({{BigInt(r.v_order), Rational(1)}, {BigInt(r.v_order / r.u_order), e}}, {{BigInt(r.lhs), Rational(1)}});
  return r;
}

}  // namespace

SubdirectReport subdirect_product_check(const TablePtr& a, const std::vector<std::size_t>& sigma,
                                        const std::vector<Automorphism>& comps, const std::vector<ElementSet>& b) {
  const std::size_t t = sigma.size();
  if (t < 2) throw InputError("need at least two factors");
  if (b.size() != t) throw InputError("one subgroup per factor is needed");
  for (const auto& bi : b) {
    if (!is_subgroup(bi)) throw InputError("B_i is not a subgroup");
    if (bi.size() == a->order()) throw InputError("B_i must be a proper subgroup");
    if (bi.size() != b.front().size()) throw InputError("the B_i differ in order");
  }
  // U^g = U: coordinate i of x^g is comp_i(x(sigma(i))).
  for (std::size_t i = 0; i < t; ++i) {
    ElementSet img(a);
    b[sigma[i]].for_each([&](ElemId x) { img.insert(comps[i](x)); });
    if (!(img == b[i])) throw InputError("U is not invariant under g");
  }
  std::uint64_t u_order = 1;
  for (const auto& bi : b) u_order *= bi.size();
  return subdirect_common(
      a, sigma, comps,
      [&](const NElem& x) {
        for (std::size_t i = 0; i < t; ++i)
          if (!b[i].contains(x[i])) return false;
        return true;
      },
      u_order);
}

SubdirectReport subdirect_diagonal_check(const TablePtr& a, const std::vector<std::size_t>& sigma,
                                         const std::vector<Automorphism>& comps) {
  const std::size_t t = sigma.size();
  if (t < 3) throw InputError("the diagonal case needs at least three factors");
  for (const auto& c : comps)
    if (!(c == comps.front())) throw InputError("the diagonal is not invariant under g");
  return subdirect_common(
      a, sigma, comps,
      [](const NElem& x) { return std::all_of(x.begin(), x.end(), [&](ElemId e) { return e == x.front(); }); },
      a->order());
}

// ---------------------------------------------------------------------------

FibreReport FibreAnalysis::report(std::size_t i, ElemId kappa) const {
  FibreReport r;
  r.map = i;
  r.histogram = histograms.at(i);
  auto it = decompositions.find(kappa);
  if (it != decompositions.end()) r.target = it->second[i];
  auto h = r.histogram.find(r.target);
  r.fibre = h == r.histogram.end() ? 0 : h->second;
  r.bound_numerator = bound_numerator;
  r.bound_denominator = bound_denominator;
  r.pass = it != decompositions.end() && BigInt(r.fibre) * bound_denominator >= bound_numerator;
  return r;
}

FibreAnalysis phi_fibres(const ElementSet& n, const ElementSet& z, const std::vector<std::vector<ElemId>>& x,
                         std::size_t d, std::uint64_t limit) {
  const TablePtr& tp = n.table();
  const auto& t = *tp;
  if (x.size() != 3) throw InputError("three tuples are needed");
  const std::size_t m = x.front().size();
  for (const auto& xi : x)
    if (xi.size() != m || m == 0) throw InputError("the tuples must have the same positive length");
  if (!is_normal(n) || !is_normal(z)) throw PreconditionError("N and Z must be normal in G");
  if (!is_soluble(n)) throw PreconditionError("N is not soluble");
  if (!(bracket(n, ElementSet::full(tp)) == n)) throw PreconditionError("N != [N, G]");
  FpModuleView view(n, z);
  if (!central_in_group(z)) throw PreconditionError("[Z, G] != 1");
  ElementSet nd = derived_subgroup(n);
  const bool abelian = nd.size() == 1;
  ElementSet k = abelian ? n : nd;
  for (std::size_t i = 0; i < 3; ++i)
    if (!generates_with(k, x[i])) throw PreconditionError("K<x_i1..x_im> != G for tuple " + std::to_string(i + 1));
  checked_power(n.size(), m, limit, "|N|^m");

  FibreAnalysis fa;
  fa.m = m;
  fa.d = d ? d : min_generators(tp);
  fa.fibre_case = abelian ? FibreCase::Abelian : nd.size() == 2 ? FibreCase::CommutatorOrderTwo : FibreCase::BruteForce;
  fa.k_elements = k.elements();
  fa.bound_numerator = big_pow(BigInt(n.size()), m);
  fa.bound_denominator = big_pow(BigInt(view.size()), fa.d + 1);

  auto n_elems = n.elements();
  auto z_elems = z.elements();
  fa.coset_granular = true;
  for (const auto& xi : x)
    for (ElemId xj : xi)
      for (ElemId a : n_elems)
        for (ElemId zz : z_elems)
          if (t.comm(t.mul(a, zz), xj) != t.comm(a, xj)) fa.coset_granular = false;

  const BigInt zm = big_pow(BigInt(z.size()), m);
  for (const auto& xi : x) {
    std::vector<std::uint64_t> h(t.order(), 0);
    h[ElementTable::identity()] = 1;
    for (ElemId xj : xi) {
      std::vector<std::uint64_t> cj(t.order(), 0);
      for (ElemId a : n_elems) ++cj[t.comm(a, xj)];
      std::vector<std::uint64_t> next(t.order(), 0);
      for (ElemId u : n_elems)
        if (h[u])
          for (ElemId v : n_elems)
            if (cj[v]) next[t.mul(u, v)] += h[u] * cj[v];
      h = std::move(next);
    }
    std::map<ElemId, std::uint64_t> hist;
    std::uint64_t total = 0;
    for (ElemId e : n_elems)
      if (h[e]) {
        hist[e] = h[e];
        total += h[e];
        if (BigInt(h[e]) % zm != 0) fa.coset_granular = false;
      }
    if (BigInt(total) != fa.bound_numerator) throw InvariantError("fibre histogram does not sum to |N|^m");
    fa.histograms.push_back(std::move(hist));
  }
  auto ok = [&](std::size_t i, ElemId e) {
    auto it = fa.histograms[i].find(e);
    return it != fa.histograms[i].end() && BigInt(it->second) * fa.bound_denominator >= fa.bound_numerator;
  };
  const ElemId one = ElementTable::identity();
  for (ElemId kappa : fa.k_elements) {
    if (ok(0, kappa) && ok(1, one) && ok(2, one)) {
      fa.decompositions[kappa] = {kappa, one, one};
      continue;
    }
    bool found = false;
    for (ElemId k1 : n_elems) {
      if (!ok(0, k1)) continue;
      for (ElemId k2 : n_elems) {
        if (!ok(1, k2)) continue;
        ElemId k3 = t.mul(t.inv(k2), t.mul(t.inv(k1), kappa));
        if (ok(2, k3)) {
          fa.decompositions[kappa] = {k1, k2, k3};
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) fa.failures.push_back(kappa);
  }
  fa.pass = fa.failures.empty() && fa.coset_granular;
  return fa;
}

// ---------------------------------------------------------------------------

BilinearReport bilinear_extract(const ElementSet& n, const ElementSet& z, const std::vector<ElemId>& x) {
  const TablePtr& tp = n.table();
  const auto& t = *tp;
  FpModuleView view(n, z);
  if (view.p() != 2) throw PreconditionError("the bilinear form needs p = 2");
  ElementSet nd = derived_subgroup(n);
  if (nd.size() != 2) throw PreconditionError("|N'| must be 2");
  if (!central_in_group(z)) throw PreconditionError("[Z, G] != 1");
  const std::size_t m = x.size();
  if (m == 0) throw InputError("empty tuple");
  const std::uint64_t q = view.size();
  const std::uint64_t total = checked_power(q, m, 1u << 20, "|N/Z|^m");
  auto unpack = [&](std::uint64_t u) {
    std::vector<std::uint64_t> c(m);
    for (auto& v : c) {
      v = u % q;
      u /= q;
    }
    return c;
  };
  auto add = [&](std::uint64_t u, std::uint64_t v) {
    auto a = unpack(u), b = unpack(v);
    std::uint64_t r = 0;
    for (std::size_t j = m; j-- > 0;) r = r * q + view.add(a[j], b[j]);
    return r;
  };
  auto phi = [&](std::uint64_t u) {
    auto c = unpack(u);
    ElemId r = ElementTable::identity();
    for (std::size_t j = 0; j < m; ++j) r = t.mul(r, t.comm(view.representative(c[j]), x[j]));
    return r;
  };
  auto bit = [&](ElemId e) -> unsigned { return e == ElementTable::identity() ? 0u : 1u; };
  std::vector<std::uint64_t> v;
  for (std::uint64_t u = 0; u < total; ++u)
    if (nd.contains(phi(u))) v.push_back(u);
  BilinearReport r;
  r.v_size = v.size();
  while ((std::uint64_t{1} << r.dim_v) < r.v_size) ++r.dim_v;
  if ((std::uint64_t{1} << r.dim_v) != r.v_size) throw InvariantError("V is not a subspace");
  // Cross terms for j < l: [[u_j,x_j],[v_l,x_l]] (swapped = false), or
  // [[v_j,x_j],[u_l,x_l]], which is what expanding
  // [a_j b_j, x_j] = [a_j,x_j][[a_j,x_j],b_j][b_j,x_j] left to right gives.
  auto formula = [&](std::uint64_t u, std::uint64_t w, bool swapped) {
    auto a = unpack(u), b = unpack(w);
    ElemId res = ElementTable::identity();
    for (std::size_t j = 0; j < m; ++j) {
      ElemId uj = t.comm(view.representative(a[j]), x[j]);
      ElemId vj = t.comm(view.representative(b[j]), x[j]);
      res = t.mul(res, t.comm(uj, view.representative(b[j])));
      for (std::size_t l = j + 1; l < m; ++l) {
        ElemId ul = t.comm(view.representative(a[l]), x[l]);
        ElemId vl = t.comm(view.representative(b[l]), x[l]);
        res = t.mul(res, swapped ? t.comm(vj, ul) : t.comm(uj, vl));
      }
    }
    return res;
  };
  auto diagonal = [&](std::uint64_t u, std::uint64_t w) {
    auto a = unpack(u), b = unpack(w);
    ElemId res = ElementTable::identity();
    for (std::size_t j = 0; j < m; ++j)
      res = t.mul(res, t.comm(t.comm(view.representative(a[j]), x[j]), t.comm(view.representative(b[j]), x[j])));
    return res;
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, unsigned> bvals;
  r.formula_matches_polarization = true;
  r.displayed_defect_is_diagonal = true;
  for (std::uint64_t u : v)
    for (std::uint64_t w : v) {
      ElemId f = formula(u, w, true);
      ElemId shown = formula(u, w, false);
      if (!nd.contains(f) || !nd.contains(shown)) r.formula_matches_polarization = false;
      unsigned pol = bit(phi(add(u, w))) ^ bit(phi(u)) ^ bit(phi(w));
      if (bit(f) != pol) r.formula_matches_polarization = false;
      if (bit(shown) != pol) ++r.displayed_mismatches;
      if ((bit(shown) ^ bit(f)) != bit(diagonal(u, w))) r.displayed_defect_is_diagonal = false;
      bvals[{u, w}] = pol;
    }
  r.bilinear = true;
  const bool full = r.v_size * r.v_size * r.v_size <= 20'000'000;
  // Basis of V by greedy span.
  std::vector<std::uint64_t> basis;
  {
    std::set<std::uint64_t> span{0};
    for (std::uint64_t u : v)
      if (!span.count(u)) {
        basis.push_back(u);
        std::set<std::uint64_t> next = span;
        for (std::uint64_t s : span) next.insert(add(s, u));
        span = std::move(next);
      }
  }
  const auto& outer = full ? v : basis;
  for (std::uint64_t u : outer)
    for (std::uint64_t u2 : outer)
      for (std::uint64_t w : v) {
        std::uint64_t s = add(u, u2);
        if (bvals.at({s, w}) != (bvals.at({u, w}) ^ bvals.at({u2, w}))) r.bilinear = false;
        if (bvals.at({w, s}) != (bvals.at({w, u}) ^ bvals.at({w, u2}))) r.bilinear = false;
      }
  for (std::uint64_t u : v)
    for (std::uint64_t w : v)
      if (bvals.at({u, w}) != bvals.at({w, u})) r.bilinear = false;
  r.quadratic = r.formula_matches_polarization && r.bilinear && bit(phi(0)) == 0;
  std::uint64_t zeros = 0, ones = 0;
  for (std::uint64_t u : v) (bit(phi(u)) ? ones : zeros)++;
  r.min_fibre = ones == 0 ? zeros : std::min(zeros, ones);
  r.fibre_bound = 4 * r.min_fibre >= r.v_size;
  for (std::uint64_t a : basis) {
    std::vector<unsigned> row;
    for (std::uint64_t b : basis) row.push_back(bvals.at({a, b}));
    r.gram.push_back(std::move(row));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void check_psi_hypotheses(const TablePtr& a, const std::vector<RelationTerm>& relation) {
  std::multiset<std::vector<ElemId>> plus, minus;
  for (const auto& term : relation) {
    if (term.sign != 1 && term.sign != -1) throw InputError("relation signs must be +1 or -1");
    if (term.g.table() != a) throw InputError("relation automorphism acts on another group");
    (term.sign > 0 ? plus : minus).insert(term.g.images());
  }
  if (plus != minus) throw InputError("the relation does not sum to zero in the group ring");
  ElementSet ad = derived_subgroup(ElementSet::full(a));
  ElementSet z = centre(a);
  if (!ad.subset_of(z)) throw PreconditionError("A' is not central in A");
  bool fixed = true;
  ad.for_each([&](ElemId c) {
    for (const auto& term : relation)
      if (term.g(c) != c) fixed = false;
  });
  if (!fixed) throw PreconditionError("the acting automorphisms do not centralise A'");
}

ElemId psi_value(const ElementTable& t, const std::vector<RelationTerm>& relation, ElemId a) {
  ElemId r = ElementTable::identity();
  for (const auto& term : relation) {
    ElemId v = term.g(a);
    r = t.mul(r, term.sign > 0 ? v : t.inv(v));
  }
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> psi_pairs(const std::vector<RelationTerm>& relation) {
  const std::size_t n = relation.size();
  std::vector<char> used(n, 0);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::size_t j = i + 1;
    while (j < n && (used[j] || relation[j].sign == relation[i].sign || !(relation[j].g == relation[i].g))) ++j;
    if (j == n) throw InvariantError("unpaired relation term");
    used[i] = used[j] = 1;
    if (relation[i].sign > 0) {
      order.push_back(i);
      order.push_back(j);
    } else {
      order.push_back(j);
      order.push_back(i);
    }
  }
  std::vector<std::size_t> pos(n);
  for (std::size_t p = 0; p < n; ++p) pos[order[p]] = p;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pos[i] > pos[j]) {
        if (relation[i].sign * relation[j].sign > 0)
          pairs.push_back({i, j});
        else
          pairs.push_back({j, i});
      }
  return pairs;
}

}  // namespace

PsiWitness psi_identity_check(const TablePtr& a, const std::vector<RelationTerm>& relation) {
  check_psi_hypotheses(a, relation);
  const auto& t = *a;
  PsiWitness w;
  w.pairs = psi_pairs(relation);
  w.holds = true;
  for (ElemId x = 0; x < t.order(); ++x) {
    ElemId rhs = ElementTable::identity();
    for (auto [h, k] : w.pairs) rhs = t.mul(rhs, t.comm(relation[h].g(x), relation[k].g(x)));
    if (psi_value(t, relation, x) != rhs) w.holds = false;
    ++w.checked;
  }
  return w;
}

bool psi_scalar_check(const TablePtr& a, const std::vector<RelationTerm>& relation) {
  check_psi_hypotheses(a, relation);
  const auto& t = *a;
  auto z = centre(a).elements();
  std::size_t exponent = 1;
  for (ElemId x = 0; x < t.order(); ++x) exponent = std::lcm(exponent, t.element_order(x));
  for (ElemId c = 0; c < t.order(); ++c) {
    ElemId pc = psi_value(t, relation, c);
    for (std::size_t mu = 0; mu < exponent; ++mu) {
      ElemId target = t.pow(pc, static_cast<long long>(mu * mu));
      for (ElemId zz : z)
        if (psi_value(t, relation, t.mul(t.pow(c, static_cast<long long>(mu)), zz)) != target) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::size_t distinct_prime_divisors(std::uint64_t q) { return q <= 1 ? 0 : prime_divisors(q).size(); }

QGeneration abelian_q_generation(const ElementSet& h, const std::vector<ElemId>& x, std::uint64_t q, std::size_t r) {
  const TablePtr& tp = h.table();
  const auto& t = *tp;
  if (q == 0) throw InputError("q must be positive");
  auto elems = h.elements();
  for (ElemId a : elems)
    for (ElemId b : elems)
      if (t.mul(a, b) != t.mul(b, a)) throw InputError("H is not abelian");
  for (ElemId a : x)
    if (!h.contains(a)) throw InputError("X is not contained in H");
  if (subgroup(tp, x).size() != h.size()) throw InputError("X does not generate H");
  const std::uint64_t order = h.size();
  QGeneration out;

  // Burnside basis of the Sylow p-subgroup from the projections of candidates.
  auto sylow_basis = [&](std::uint64_t p, const std::vector<ElemId>& cands, bool project, std::vector<ElemId>* chosen) {
    std::uint64_t pp = 1;
    while (order % (pp * p) == 0) pp *= p;
    std::uint64_t rest = order / pp;
    // e = 1 mod pp, 0 mod rest
    std::uint64_t e = 0;
    for (std::uint64_t k = 0; k < pp; ++k)
      if ((k * rest) % pp == 1 % pp) {
        e = k * rest;
        break;
      }
    std::vector<ElemId> frattini_seeds;
    for (ElemId a : elems)
      if (t.pow(a, static_cast<long long>(pp)) == ElementTable::identity()) frattini_seeds.push_back(t.pow(a, static_cast<long long>(p)));
    SubgroupBuilder sb(tp);
    for (ElemId f : frattini_seeds) sb.add(f);
    std::vector<ElemId> basis;
    for (ElemId c : cands) {
      ElemId pc = project ? t.pow(c, static_cast<long long>(e)) : c;
      if (t.pow(pc, static_cast<long long>(pp)) != ElementTable::identity()) continue;
      if (!sb.set().contains(pc)) {
        sb.add(pc);
        basis.push_back(pc);
        if (chosen) chosen->push_back(c);
      }
    }
    return basis;
  };

  for (std::uint64_t p : prime_divisors(q)) {
    if (order % p) continue;
    std::vector<ElemId> chosen;
    sylow_basis(p, x, true, &chosen);
    if (chosen.size() > r) throw PreconditionError("H is not r-generated");
    for (ElemId c : chosen)
      if (std::find(out.x.begin(), out.x.end(), c) == out.x.end()) out.x.push_back(c);
  }
  // q'-part Q: generators g_k = prod over primes l not dividing q of the k-th basis element.
  std::vector<ElemId> g(r, ElementTable::identity());
  std::uint64_t exp_q = 1;
  for (std::uint64_t l : prime_divisors(order)) {
    if (q % l == 0) continue;
    auto basis = sylow_basis(l, elems, false, nullptr);
    if (basis.size() > r) throw PreconditionError("H is not r-generated");
    for (std::size_t k = 0; k < basis.size(); ++k) {
      g[k] = t.mul(g[k], basis[k]);
      exp_q = std::lcm(exp_q, static_cast<std::uint64_t>(t.element_order(basis[k])));
    }
  }
  std::uint64_t qinv = 0;
  for (std::uint64_t s = 0; s < exp_q; ++s)
    if ((s * (q % exp_q)) % exp_q == 1 % exp_q) {
      qinv = s;
      break;
    }
  for (ElemId gk : g) out.y.push_back(t.pow(gk, static_cast<long long>(qinv)));
  std::vector<ElemId> seeds;
  for (ElemId y : out.y) seeds.push_back(t.pow(y, static_cast<long long>(q % order)));
  seeds.insert(seeds.end(), out.x.begin(), out.x.end());
  out.verified = subgroup(tp, seeds).size() == h.size() && out.x.size() <= r * distinct_prime_divisors(q);
  return out;
}

// ---------------------------------------------------------------------------

Group holomorph_subgroup(const TablePtr& n, const std::vector<Automorphism>& autos, const std::string& name) {
  const auto& t = *n;
  if (t.order() > 65535) throw CapacityError("N is too large for a permutation on its elements");
  Group g{name, t.order(), {}};
  for (ElemId gen : t.generator_ids()) {
    std::vector<Point> im(t.order());
    for (ElemId a = 0; a < t.order(); ++a) im[a] = static_cast<Point>(t.mul(a, gen));
    g.generators.emplace_back(std::move(im));
  }
  for (const auto& alpha : autos) {
    std::vector<Point> im(t.order());
    for (ElemId a = 0; a < t.order(); ++a) im[a] = static_cast<Point>(alpha(a));
    g.generators.emplace_back(std::move(im));
  }
  return g;
}

namespace {

// Elements of the holomorph coming from right multiplication by N.
ElementSet regular_part(const TablePtr& g, const TablePtr& n) {
  std::vector<ElemId> ids;
  for (std::size_t i = 0; i < n->num_generators(); ++i) ids.push_back(g->generator(i));
  return subgroup(g, ids);
}

std::vector<ElemId> generating_tuple(const ElementSet& k, std::size_t m, std::mt19937_64& rng) {
  const auto& t = *k.table();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<ElemId> x(m);
    for (auto& e : x) e = static_cast<ElemId>(rng() % t.order());
    if (generates_with(k, x)) return x;
  }
  throw InvariantError("no generating tuple found");
}

SolubleInstance make_instance(const std::string& name, const TablePtr& g, std::size_t m, std::size_t my,
                              std::uint64_t seed, std::optional<ElementSet> expected_n = std::nullopt) {
  auto q = find_qmn(ElementSet::full(g));
  if (!q) throw InvariantError(name + ": no quasi-minimal normal subgroup");
  if (expected_n && !(q->n == *expected_n)) throw InvariantError(name + ": unexpected quasi-minimal normal subgroup");
  SolubleInstance inst{name, g, q->n, q->z, {}, {}};
  ElementSet nd = derived_subgroup(q->n);
  ElementSet k = nd.size() == 1 ? q->n : nd;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 3; ++i) inst.x.push_back(generating_tuple(k, m, rng));
  inst.y = generating_tuple(q->n, my, rng);
  return inst;
}

// Automorphisms alpha, beta of N generating a copy of Q8 that fixes Z(N) pointwise.
std::vector<Automorphism> quaternion_action(const TablePtr& n) {
  auto auts = automorphism_group(n);
  auto z = centre(n).elements();
  std::vector<Automorphism> cands;
  for (const auto& a : auts) {
    bool fixes = std::all_of(z.begin(), z.end(), [&](ElemId c) { return a(c) == c; });
    if (!fixes) continue;
    Automorphism a2 = a * a;
    if (a2.is_identity() || !(a2 * a2).is_identity()) continue;
    cands.push_back(a);
  }
  for (const auto& a : cands)
    for (const auto& b : cands) {
      if (!(a * a == b * b)) continue;
      if (!(b.inverse() * a * b == a.inverse())) continue;
      if (automorphism_closure(n, {a, b}).size() == 8) return {a, b};
    }
  throw InvariantError("no quaternion group of automorphisms found");
}

}  // namespace

std::vector<SolubleInstance> builtin_soluble_instances() {
  std::vector<SolubleInstance> out;
  out.push_back(make_instance("Alt(4) on V", ElementTable::enumerate(parse_group("Alt(4)")), 3, 2, 11));
  out.push_back(make_instance("SL(2,3) on Q8", ElementTable::enumerate(parse_group("SL(2,3)")), 3, 2, 12));
  out.push_back(make_instance("Sym(3) on C3", ElementTable::enumerate(parse_group("Sym(3)")), 3, 2, 13));
  out.push_back(make_instance("Sym(4) on V", ElementTable::enumerate(parse_group("Sym(4)")), 3, 3, 14));
  out.push_back(make_instance("Sym(3) wr 2 on C3^2",
                              ElementTable::enumerate(parse_group("FromGenerators(6; (0 1 2), (0 1), (0 3)(1 4)(2 5))")),
                              3, 3, 15));
  {
    auto heis = ElementTable::enumerate(parse_group("Heisenberg(3)"));
    auto g = ElementTable::enumerate(holomorph_subgroup(heis, quaternion_action(heis), "Heisenberg(3):Q8"));
    out.push_back(make_instance("Heisenberg(3):Q8", g, 3, 3, 16, regular_part(g, heis)));
  }
  return out;
}

SolubleInstance extraspecial_instance() {
  // (v, c)(w, d) = (v + w, c + d + beta(v, w)) on F_2^4 x F_2, with
  // beta(v, v) = v1 v2 + v3 v4 + v3 + v4 elliptic.
  auto beta = [](unsigned v, unsigned w) {
    auto b = [](unsigned x, int i) { return (x >> i) & 1u; };
    return (b(v, 0) & b(w, 1)) ^ (b(v, 2) & b(w, 3)) ^ (b(v, 2) & b(w, 2)) ^ (b(v, 3) & b(w, 3));
  };
  auto encode = [](unsigned v, unsigned c) { return v | (c << 4); };
  auto mul = [&](unsigned x, unsigned y) {
    unsigned v = x & 15u, c = x >> 4, w = y & 15u, d = y >> 4;
    return encode(v ^ w, c ^ d ^ beta(v, w));
  };
  Group ng{"2^(1+4)-", 32, {}};
  for (unsigned i = 0; i < 4; ++i) {
    std::vector<Point> im(32);
    for (unsigned a = 0; a < 32; ++a) im[a] = static_cast<Point>(mul(a, encode(1u << i, 0)));
    ng.generators.emplace_back(std::move(im));
  }
  auto nt = ElementTable::enumerate(ng);
  // Linear map of order 5 preserving q(v) = beta(v, v); rows are images of e_i.
  auto apply = [](const std::array<unsigned, 4>& rows, unsigned v) {
    unsigned r = 0;
    for (int i = 0; i < 4; ++i)
      if ((v >> i) & 1u) r ^= rows[static_cast<std::size_t>(i)];
    return r;
  };
  std::optional<std::array<unsigned, 4>> found;
  for (unsigned code = 0; code < (1u << 16) && !found; ++code) {
    std::array<unsigned, 4> rows{code & 15u, (code >> 4) & 15u, (code >> 8) & 15u, (code >> 12) & 15u};
    bool preserves = true;
    for (unsigned v = 0; v < 16 && preserves; ++v)
      if (beta(apply(rows, v), apply(rows, v)) != beta(v, v)) preserves = false;
    if (!preserves) continue;
    bool order5 = true;
    for (unsigned v = 1; v < 16; ++v) {
      unsigned w = v;
      for (int k = 0; k < 5; ++k) w = apply(rows, w);
      if (w != v || apply(rows, v) == v) order5 = false;
    }
    if (order5) found = rows;
  }
  if (!found) throw InvariantError("no isometry of order 5");
  const auto rows = *found;
  // lambda(v) = sum_{i<j} delta(e_i, e_j) v_i v_j with delta(v,w) = beta(vA, wA) + beta(v, w).
  auto delta = [&](unsigned v, unsigned w) { return beta(apply(rows, v), apply(rows, w)) ^ beta(v, w); };
  auto lambda = [&](unsigned v) {
    unsigned r = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (((v >> i) & 1u) && ((v >> j) & 1u)) r ^= delta(1u << i, 1u << j);
    return r;
  };
  // Element ids of the table are found through the regular permutation images.
  auto id_of_code = [&](unsigned x) {
    std::vector<Point> im(32);
    for (unsigned a = 0; a < 32; ++a) im[a] = static_cast<Point>(mul(a, x));
    return nt->id_of(Permutation(std::move(im)));
  };
  std::vector<ElemId> images;
  for (unsigned i = 0; i < 4; ++i) {
    unsigned v = 1u << i;
    images.push_back(id_of_code(encode(apply(rows, v), lambda(v))));
  }
  Automorphism phi = Automorphism::from_generator_images(nt, images);
  if (!phi.pow(5).is_identity()) phi = phi.pow(6);
  if (!phi.pow(5).is_identity() || phi.is_identity()) throw InvariantError("automorphism of order 5 not found");
  auto g = ElementTable::enumerate(holomorph_subgroup(nt, {phi}, "2^(1+4)-:5"));
  return make_instance("2^(1+4)-:5", g, 2, 2, 17, regular_part(g, nt));
}

}  // namespace widthlab

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "widthlab/error.hpp"
#include "widthlab/semisimple.hpp"
#include "widthlab/subgroups.hpp"

namespace widthlab {

NElem n_identity(std::size_t r) { return NElem(r, ElementTable::identity()); }

NElem n_mul(const ElementTable& s, const NElem& a, const NElem& b) {
  NElem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s.mul(a[i], b[i]);
  return c;
}

NElem n_inv(const ElementTable& s, const NElem& a) {
  NElem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s.inv(a[i]);
  return c;
}

NElem n_random(const ElementTable& s, std::size_t r, std::mt19937_64& rng) {
  NElem c(r);
  for (auto& x : c) x = static_cast<ElemId>(rng() % s.order());
  return c;
}

NElem n_from_index(const ElementTable& s, std::size_t r, std::uint64_t index) {
  NElem c(r);
  for (std::size_t i = 0; i < r; ++i) {
    c[i] = static_cast<ElemId>(index % s.order());
    index /= s.order();
  }
  return c;
}

// ---------------------------------------------------------------------------

Actor::Actor(std::vector<std::size_t> sigma, std::vector<Automorphism> comps)
    : sigma_(std::move(sigma)), comps_(std::move(comps)) {
  if (sigma_.empty()) throw InputError("actor on zero copies");
  if (sigma_.size() != comps_.size()) throw InputError("actor needs one component automorphism per copy");
  std::vector<char> seen(sigma_.size(), 0);
  for (std::size_t v : sigma_) {
    if (v >= sigma_.size() || seen[v]) throw InputError("actor permutation is not a bijection of the copies");
    seen[v] = 1;
  }
  for (const auto& c : comps_)
    if (c.table() != comps_.front().table() || !c.table()) throw InputError("actor components act on different groups");
}

Actor Actor::identity(const TablePtr& s, std::size_t r) {
  std::vector<std::size_t> sigma(r);
  std::iota(sigma.begin(), sigma.end(), 0);
  return Actor(std::move(sigma), std::vector<Automorphism>(r, Automorphism::identity(s)));
}

Actor Actor::inner(const TablePtr& s, const NElem& n) {
  std::vector<std::size_t> sigma(n.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<Automorphism> comps;
  for (ElemId e : n) comps.push_back(Automorphism::inner(s, e));
  return Actor(std::move(sigma), std::move(comps));
}

NElem Actor::apply(const NElem& x) const {
  NElem y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = comps_[i](x[sigma_[i]]);
  return y;
}

Actor compose(const Actor& a, const Actor& b) {
  // (x^a)^b(i) = x^a(sb(i))^{b(i)} = x(sa(sb(i)))^{a(sb(i)) b(i)}
  std::size_t r = a.copies();
  std::vector<std::size_t> sigma(r);
  std::vector<Automorphism> comps;
  comps.reserve(r);
  for (std::size_t i = 0; i < r; ++i) {
    sigma[i] = a.sigma_[b.sigma_[i]];
    comps.push_back(compose(a.comps_[b.sigma_[i]], b.comps_[i]));
  }
  return Actor(std::move(sigma), std::move(comps));
}

Actor Actor::inverse() const {
  std::size_t r = copies();
  std::vector<std::size_t> sigma(r);
  for (std::size_t i = 0; i < r; ++i) sigma[sigma_[i]] = i;
  std::vector<Automorphism> comps;
  comps.reserve(r);
  for (std::size_t i = 0; i < r; ++i) comps.push_back(comps_[sigma[i]].inverse());
  return Actor(std::move(sigma), std::move(comps));
}

Actor Actor::pow(long long k) const {
  Actor base = k < 0 ? inverse() : *this;
  unsigned long long e = static_cast<unsigned long long>(k < 0 ? -k : k);
  Actor result = identity(table(), copies());
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool operator==(const Actor& a, const Actor& b) { return a.sigma_ == b.sigma_ && a.comps_ == b.comps_; }

std::vector<std::vector<std::size_t>> Actor::cycles() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<char> seen(copies(), 0);
  for (std::size_t k = 0; k < copies(); ++k) {
    if (seen[k]) continue;
    std::vector<std::size_t> c;
    for (std::size_t p = k; !seen[p]; p = sigma_[p]) {
      seen[p] = 1;
      c.push_back(p);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Actor Actor::restrict_to(const std::vector<std::size_t>& copies_list) const {
  std::map<std::size_t, std::size_t> index;
  for (std::size_t i = 0; i < copies_list.size(); ++i) index[copies_list[i]] = i;
  std::vector<std::size_t> sigma;
  std::vector<Automorphism> comps;
  for (std::size_t c : copies_list) {
    auto it = index.find(sigma_[c]);
    if (it == index.end()) throw InputError("restriction to a set of copies that is not invariant");
    sigma.push_back(it->second);
    comps.push_back(comps_[c]);
  }
  return Actor(std::move(sigma), std::move(comps));
}

// ---------------------------------------------------------------------------

GElem g_mul(const GElem& a, const GElem& b) {
  const auto& s = *a.phi.table();
  return {n_mul(s, a.n, a.phi.inverse().apply(b.n)), a.phi * b.phi};
}

GElem g_inv(const GElem& a) {
  // (n, phi)^-1 = (phi^-1 n^-1 phi ... ) = ((n^-1)^{phi}, phi^-1)
  const auto& s = *a.phi.table();
  return {a.phi.apply(n_inv(s, a.n)), a.phi.inverse()};
}

GElem g_pow(const GElem& a, long long k) {
  GElem base = k < 0 ? g_inv(a) : a;
  unsigned long long e = static_cast<unsigned long long>(k < 0 ? -k : k);
  GElem result{n_identity(a.n.size()), Actor::identity(a.phi.table(), a.n.size())};
  while (e) {
    if (e & 1) result = g_mul(result, base);
    e >>= 1;
    if (e) base = g_mul(base, base);
  }
  return result;
}

GElem g_conj(const GElem& x, const GElem& y) { return g_mul(g_inv(y), g_mul(x, y)); }

GElem g_from_n(const TablePtr& s, const NElem& n) { return {n, Actor::identity(s, n.size())}; }

GElem g_from_actor(const Actor& a) { return {n_identity(a.copies()), a}; }

Actor g_action(const GElem& g) { return Actor::inner(g.phi.table(), g.n) * g.phi; }

bool g_is_pure(const GElem& g) { return g.phi == Actor::identity(g.phi.table(), g.phi.copies()); }

// ---------------------------------------------------------------------------

NElem SemisimpleAction::commutator(const NElem& u, const Actor& g) const { return mul(inv(u), g.apply(u)); }

std::uint64_t SemisimpleAction::order() const {
  std::uint64_t o = 1;
  for (std::size_t i = 0; i < r; ++i) o *= S->order();
  return o;
}

void SemisimpleAction::validate() const {
  if (!S) throw InputError("semisimple action without a group");
  if (r == 0) throw InputError("semisimple action on zero copies");
  for (const auto& a : actors) {
    if (a.copies() != r) throw InputError("actor acts on the wrong number of copies");
    if (a.table() != S) throw InputError("actor components act on a different group");
  }
}

std::vector<std::vector<std::size_t>> copy_orbits(std::size_t r, const std::vector<const Actor*>& actors) {
  std::vector<std::size_t> parent(r);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Actor* a : actors)
    for (std::size_t i = 0; i < r; ++i) parent[find(i)] = find(a->sigma()[i]);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < r; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Reduction reduce_equations(const std::vector<Equation>& eqs, std::size_t root,
                           const std::function<bool(const Symbol&)>& eliminable) {
  if (root >= eqs.size()) throw InputError("root equation out of range");
  // Occurrences of eliminable symbols: (equation, sign).
  std::map<Symbol, std::vector<std::pair<std::size_t, int>>> occ;
  for (std::size_t e = 0; e < eqs.size(); ++e)
    for (const auto& l : eqs[e].rhs.letters())
      if (eliminable(l.symbol)) occ[l.symbol].push_back({e, l.sign});
  for (const auto& [s, list] : occ)
    if (list.size() != 2 || list[0].second == list[1].second)
      throw PreconditionError("symbol " + s.name() + " does not occur exactly once with each sign");

  Reduction red;
  red.root = root;
  GammaWord cur = eqs[root].rhs;
  std::set<std::size_t> alive;
  for (std::size_t e = 0; e < eqs.size(); ++e)
    if (e != root) alive.insert(e);
  while (!alive.empty()) {
    std::optional<std::pair<std::size_t, Symbol>> best;
    for (const auto& l : cur.letters()) {
      if (!eliminable(l.symbol)) continue;
      const auto& list = occ.at(l.symbol);
      for (const auto& [e, sign] : list) {
        if (!alive.count(e)) continue;
        std::pair<std::size_t, Symbol> cand{e, l.symbol};
        if (!best || cand < *best) best = cand;
      }
    }
    if (!best) throw InvariantError("linkage graph of the equation system is disconnected");
    auto [l, sym] = *best;
    const auto& ul = eqs[l].rhs.letters();
    std::size_t pl = 0;
    while (ul[pl].symbol != sym) ++pl;
    const GammaLetter& lt = ul[pl];
    auto& cl = cur.letters();
    std::size_t p = 0;
    while (cl[p].symbol != sym) ++p;
    const GammaLetter target = cl[p];
    if (target.sign != -lt.sign) throw InvariantError("substitution partner has the same sign");
    Substitution sub;
    sub.equation = l;
    sub.symbol = sym;
    sub.sign = lt.sign;
    sub.exponent = lt.exponent;
    sub.left = eqs[l].rhs.slice(0, pl);
    sub.right = eqs[l].rhs.slice(pl + 1, ul.size());
    // x^e in cur becomes (R lhs(l)^-1 L)^{f^-1 e}
    GammaWord repl = (sub.right * GammaWord::letter({eqs[l].lhs, -1, {}, 0}) * sub.left).act(lt.exponent.inverse() * target.exponent);
    cur = cur.slice(0, p) * repl * cur.slice(p + 1, cur.size());
    red.trace.push_back(std::move(sub));
    alive.erase(l);
  }
  red.word = std::move(cur);
  return red;
}

void back_substitute(const Reduction& red, const std::vector<Equation>& eqs, Interpretation& in) {
  const auto& t = *in.table();
  for (auto it = red.trace.rbegin(); it != red.trace.rend(); ++it) {
    ElemId m = in.get(eqs[it->equation].lhs);
    ElemId inner = t.mul(t.mul(t.inv(in.evaluate(it->left)), m), t.inv(in.evaluate(it->right)));
    if (it->sign < 0) inner = t.inv(inner);
    in.set(it->symbol, in.apply_inverse(it->exponent, inner));
  }
}

// ---------------------------------------------------------------------------

GammaExponent EquationSystem::power_component(std::size_t slot, std::size_t k, std::size_t j) const {
  std::vector<std::size_t> pos;
  std::size_t p = k;
  for (std::size_t t = 0; t < j; ++t) {
    pos.push_back(p);
    p = actors[slot].sigma()[p];
  }
  std::vector<int> letters;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) letters.push_back(generator(slot, *it));
  return GammaExponent::from_letters(letters);
}

Interpretation EquationSystem::interpretation() const {
  Interpretation in(S);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t s = 0; s < n; ++s) in.set_generator(generator(i, s), actors[i].comp(s));
  for (std::size_t s = 0; s < kappa.size(); ++s) in.set(kappa_symbol(s), kappa[s]);
  return in;
}

std::size_t EquationSystem::cycle_sum() const {
  std::size_t c = 0;
  for (const auto& a : actors) c += a.cycle_count();
  return c;
}

EquationSystem build_system(const SemisimpleAction& act, const std::vector<std::size_t>& g, const NElem& kappa) {
  act.validate();
  if (g.empty()) throw InputError("need at least one actor");
  EquationSystem sys;
  sys.S = act.S;
  sys.n = act.r;
  sys.m = g.size();
  for (std::size_t id : g) {
    if (id >= act.actors.size()) throw InputError("actor id " + std::to_string(id) + " out of range");
    sys.actors.push_back(act.actors[id]);
  }
  if (!kappa.empty() && kappa.size() != act.r) throw InputError("kappa has the wrong number of coordinates");
  sys.kappa = kappa;
  std::vector<const Actor*> ptrs;
  for (const auto& a : sys.actors) ptrs.push_back(&a);
  if (copy_orbits(sys.n, ptrs).size() != 1)
    throw InputError("actors are not transitive on the copies; split into orbit blocks first");
  for (std::size_t s = 0; s < sys.n; ++s) {
    GammaWord rhs;
    for (std::size_t i = 0; i < sys.m; ++i)
      rhs *= GammaWord::letter({sys.x(i, s), 1, {}, sys.colour(i)});
    sys.equations.push_back({sys.kappa_symbol(s), std::move(rhs)});
  }
  return sys;
}

EquationSystem eliminate_H(const EquationSystem& in_sys, BlockMode mode) {
  if (in_sys.eliminated) throw PreconditionError("conditions were already eliminated");
  EquationSystem sys = in_sys;
  sys.mode = mode;
  for (std::size_t i = 0; i < sys.m; ++i) {
    for (const auto& cyc : sys.actors[i].cycles()) {
      ConditionBlock b;
      b.slot = i;
      b.cycle = cyc;
      const std::size_t k = cyc.front();
      b.beta = sys.power_component(i, k, cyc.size());
      b.parameter = {SymbolKind::Parameter, static_cast<int>(sys.n + 1 + sys.conditions.size())};
      if (mode == BlockMode::Commutator) {
        b.replacement *= GammaWord::letter({b.parameter, -1, {}, 0});
        b.replacement *= GammaWord::letter({b.parameter, 1, b.beta, 0});
      } else {
        b.replacement *= GammaWord::letter({b.parameter, 1, {}, 0});
      }
      for (std::size_t j = cyc.size() - 1; j >= 1; --j)
        b.replacement *= GammaWord::letter({sys.x(i, cyc[j]), -1, sys.power_component(i, k, j), sys.colour(i)});
      auto& rhs = sys.equations[k].rhs;
      std::size_t p = 0;
      while (p < rhs.size() && rhs.letters()[p].symbol != sys.x(i, k)) ++p;
      if (p == rhs.size()) throw InvariantError("variable " + sys.x(i, k).name() + " missing from its equation");
      rhs = rhs.slice(0, p) * b.replacement * rhs.slice(p + 1, rhs.size());
      sys.conditions.push_back(std::move(b));
    }
  }
  sys.eliminated = true;
  return sys;
}

SingleEquation reduce_to_single(const EquationSystem& sys, std::size_t root) {
  if (!sys.eliminated) throw PreconditionError("eliminate the conditions before reducing");
  SingleEquation out;
  out.reduction = reduce_equations(sys.equations, root, [](const Symbol& s) { return s.kind == SymbolKind::Variable; });
  GammaWord h = hat(out.reduction.word);
  if (!is_balanced(h)) throw InvariantError("reduced word is not balanced");
  out.support = h.variable_support().size();
  std::size_t expected = sys.m * sys.n - sys.cycle_sum() - (sys.n - 1);
  if (out.support != expected)
    throw InvariantError("support count " + std::to_string(out.support) + " differs from m n - sum c - (n-1) = " +
                         std::to_string(expected));
  out.colour_type = colour_type(h);
  if (!leq_Ln(out.colour_type, static_cast<int>(sys.m), static_cast<int>(sys.n)))
    throw InvariantError("colour type of the reduced word is not below L_n");
  return out;
}

std::vector<NElem> recover_commutator_solution(const EquationSystem& sys, Interpretation& in) {
  const auto& t = *sys.S;
  std::vector<NElem> u(sys.m, n_identity(sys.n));
  for (const auto& b : sys.conditions) {
    ElemId block = in.get(b.parameter);
    ElemId u0 = block;
    if (sys.mode == BlockMode::Free) {
      Automorphism beta = in.automorphism(b.beta);
      bool found = false;
      for (ElemId s = 0; s < t.order() && !found; ++s)
        if (t.mul(t.inv(s), beta(s)) == block) {
          u0 = s;
          found = true;
        }
      if (!found) throw InvariantError("block value is not in [S, beta]");
    }
    in.set(sys.x(b.slot, b.cycle.front()), in.evaluate(b.replacement));
    const Actor& g = sys.actors[b.slot];
    u[b.slot][b.cycle.front()] = u0;
    for (std::size_t j = 0; j + 1 < b.cycle.size(); ++j) {
      std::size_t p = b.cycle[j];
      ElemId val = t.mul(u[b.slot][p], in.get(sys.x(b.slot, p)));
      u[b.slot][b.cycle[j + 1]] = g.comp(p).inverse()(val);
    }
  }
  // Every x_i must equal [u_i, g_i].
  for (std::size_t i = 0; i < sys.m; ++i) {
    NElem c = n_mul(t, n_inv(t, u[i]), sys.actors[i].apply(u[i]));
    for (std::size_t s = 0; s < sys.n; ++s)
      if (c[s] != in.get(sys.x(i, s))) throw InvariantError("recovered u does not reproduce x");
  }
  return u;
}

// ---------------------------------------------------------------------------

std::size_t WitnessSet::size() const {
  return static_cast<std::size_t>(std::count_if(witness.begin(), witness.end(), [](std::int64_t w) { return w >= 0; }));
}

ProductSearch::ProductSearch(const TablePtr& s, std::vector<WitnessSet> factors) : s_(s), factors_(std::move(factors)) {
  const std::size_t order = s_->order();
  std::vector<std::int64_t> layer(order, -1);
  layer[ElementTable::identity()] = ElementTable::identity();
  prev_.push_back(layer);
  for (const auto& f : factors_) {
    std::vector<ElemId> members;
    for (ElemId e = 0; e < order; ++e)
      if (f.witness[e] >= 0) members.push_back(e);
    std::vector<std::int64_t> next(order, -1);
    const auto& cur = prev_.back();
    for (ElemId a = 0; a < order; ++a) {
      if (cur[a] < 0) continue;
      for (ElemId b : members) {
        ElemId c = s_->mul(a, b);
        if (next[c] < 0) next[c] = a;
      }
    }
    prev_.push_back(std::move(next));
  }
}

std::size_t ProductSearch::reached(std::size_t layer) const {
  const auto& l = prev_.at(layer);
  return static_cast<std::size_t>(std::count_if(l.begin(), l.end(), [](std::int64_t v) { return v >= 0; }));
}

std::optional<std::vector<ElemId>> ProductSearch::factorize(ElemId target) const {
  if (prev_.back()[target] < 0) return std::nullopt;
  std::vector<ElemId> out(factors_.size());
  ElemId cur = target;
  for (std::size_t j = factors_.size(); j >= 1; --j) {
    ElemId p = static_cast<ElemId>(prev_[j][cur]);
    out[j - 1] = s_->mul(s_->inv(p), cur);
    cur = p;
  }
  return out;
}

WitnessSet twisted_set(const Automorphism& a, const Automorphism& b) {
  const auto& t = *a.table();
  const std::size_t order = t.order();
  WitnessSet w{std::vector<std::int64_t>(order, -1)};
  for (ElemId x = 0; x < order; ++x) {
    ElemId left = t.inv(x);
    ElemId xa = a(x);
    for (ElemId y = 0; y < order; ++y) {
      ElemId v = t.mul(t.mul(left, t.inv(y)), t.mul(xa, b(y)));
      if (w.witness[v] < 0) w.witness[v] = static_cast<std::int64_t>(x) * static_cast<std::int64_t>(order) + y;
    }
  }
  return w;
}

WitnessSet commutator_set(const Automorphism& g) {
  const auto& t = *g.table();
  WitnessSet w{std::vector<std::int64_t>(t.order(), -1)};
  for (ElemId s = 0; s < t.order(); ++s) {
    ElemId v = t.mul(t.inv(s), g(s));
    if (w.witness[v] < 0) w.witness[v] = s;
  }
  return w;
}

namespace {
void require_perfect(const TablePtr& s) {
  if (derived_subgroup(ElementSet::full(s)).size() != s->order())
    throw PreconditionError(s->name() + " is not perfect");
}
}  // namespace

TwistedWidth twisted_width(const TablePtr& s, const std::vector<std::pair<Automorphism, Automorphism>>& pairs) {
  require_perfect(s);
  TwistedWidth out;
  std::vector<WitnessSet> sets;
  for (const auto& [a, b] : pairs) sets.push_back(twisted_set(a, b));
  ProductSearch ps(s, std::move(sets));
  for (std::size_t j = 0; j <= pairs.size(); ++j) {
    out.layer_sizes.push_back(ps.reached(j));
    if (!out.covered && ps.reached(j) == s->order()) {
      out.covered = true;
      out.t = j;
    }
  }
  out.reached_fraction = static_cast<double>(out.layer_sizes.back()) / static_cast<double>(s->order());
  return out;
}

std::vector<Automorphism> automorphism_closure(const TablePtr& s, const std::vector<Automorphism>& gens) {
  std::vector<Automorphism> out{Automorphism::identity(s)};
  std::set<std::vector<ElemId>> seen{out.front().images()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      Automorphism c = out[i] * g;
      if (seen.insert(c.images()).second) out.push_back(std::move(c));
    }
  return out;
}

TwistedCertificate certify_twisted_width(const TablePtr& s, const std::vector<Automorphism>& group) {
  require_perfect(s);
  TwistedCertificate c;
  const auto& t = *s;
  const std::size_t order = t.order();
  c.min_size = order;
  std::vector<char> hit(order);
  for (const auto& a : group)
    for (const auto& b : group) {
      std::fill(hit.begin(), hit.end(), 0);
      std::size_t size = 0;
      for (ElemId x = 0; x < order && size < order; ++x) {
        ElemId xi = t.inv(x), xa = a(x);
        for (ElemId y = 0; y < order; ++y) {
          ElemId v = t.mul(t.mul(xi, t.inv(y)), t.mul(xa, b(y)));
          if (!hit[v]) {
            hit[v] = 1;
            ++size;
          }
        }
      }
      c.min_size = std::min(c.min_size, size);
      ++c.pairs_checked;
    }
  if (c.min_size == order)
    c.D = 1;
  else if (2 * c.min_size > order)
    c.D = 2;
  return c;
}

// ---------------------------------------------------------------------------

MatchingResult hall_matching(std::size_t men, const std::vector<std::vector<std::size_t>>& knows) {
  const std::size_t women = knows.size();
  MatchingResult res;
  res.assignment.assign(women, -1);
  std::vector<int> husband_of(men, -1);  // man -> woman
  for (const auto& k : knows)
    for (std::size_t m : k)
      if (m >= men) throw InputError("matching adjacency refers to an unknown man");
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t w) -> bool {
    for (std::size_t m : knows[w]) {
      if (visited[m]) continue;
      visited[m] = 1;
      if (husband_of[m] < 0 || augment(static_cast<std::size_t>(husband_of[m]))) {
        husband_of[m] = static_cast<int>(w);
        res.assignment[w] = static_cast<int>(m);
        return true;
      }
    }
    return false;
  };
  std::optional<std::size_t> unmatched;
  for (std::size_t w = 0; w < women; ++w) {
    visited.assign(men, 0);
    if (!augment(w) && !unmatched) unmatched = w;
  }
  res.perfect = !unmatched;
  if (unmatched) {
    // Women reachable from an unmatched woman by alternating paths form a deficient set.
    std::vector<char> wseen(women, 0), mseen(men, 0);
    std::vector<std::size_t> queue{*unmatched};
    wseen[*unmatched] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (std::size_t m : knows[queue[qi]]) {
        if (mseen[m]) continue;
        mseen[m] = 1;
        int w2 = husband_of[m];
        if (w2 >= 0 && !wseen[static_cast<std::size_t>(w2)]) {
          wseen[static_cast<std::size_t>(w2)] = 1;
          queue.push_back(static_cast<std::size_t>(w2));
        }
      }
    for (std::size_t w = 0; w < women; ++w)
      if (wseen[w]) res.deficient.push_back(w);
  }
  return res;
}

std::array<long long, 3> class_two_value(const GammaWord& w) {
  std::array<long long, 3> v{0, 0, 0};
  auto mul = [](const std::array<long long, 3>& a, const std::array<long long, 3>& b) {
    return std::array<long long, 3>{a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]};
  };
  for (const auto& l : w.letters()) {
    if (l.symbol.kind != SymbolKind::Variable) continue;
    std::array<long long, 3> g = l.symbol.id % 2 ? std::array<long long, 3>{1, 0, 0} : std::array<long long, 3>{0, 1, 0};
    if (l.sign < 0) g = {-g[0], -g[1], -g[2] + g[0] * g[1]};
    v = mul(v, g);
  }
  return v;
}

}  // namespace widthlab

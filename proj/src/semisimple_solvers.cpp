#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "widthlab/error.hpp"
#include "widthlab/semisimple.hpp"
#include "widthlab/subgroups.hpp"

namespace widthlab {

namespace {

std::vector<Automorphism> component_generators(const std::vector<Actor>& actors) {
  std::vector<Automorphism> gens;
  std::set<std::vector<ElemId>> seen;
  for (const auto& a : actors)
    for (std::size_t i = 0; i < a.copies(); ++i)
      if (seen.insert(a.comp(i).images()).second) gens.push_back(a.comp(i));
  return gens;
}

std::size_t certified_width(const TablePtr& s, const std::vector<Actor>& actors) {
  auto cert = certify_twisted_width(s, automorphism_closure(s, component_generators(actors)));
  if (cert.D == 0)
    throw PreconditionError("twisted width of " + s->name() + " is not certified for these automorphisms (smallest set has " +
                            std::to_string(cert.min_size) + " elements); supply D explicitly");
  return cert.D;
}

NElem restrict_elem(const NElem& x, const std::vector<std::size_t>& copies) {
  NElem y;
  for (std::size_t c : copies) y.push_back(x[c]);
  return y;
}

}  // namespace

// ---------------------------------------------------------------------------

CommutatorSolver::CommutatorSolver(const SemisimpleAction& act, std::vector<std::size_t> g, std::size_t D)
    : act_(act), g_(std::move(g)) {
  act_.validate();
  sys_ = build_system(act_, g_, {});
  if (D == 0) D = certified_width(act_.S, sys_.actors);
  report_.D = D;
  report_.cycle_sum = sys_.cycle_sum();
  const long long bound = static_cast<long long>((sys_.m - std::min<std::size_t>(sys_.m, 2)) * sys_.n) -
                          static_cast<long long>(2 * D) - (sys_.m < 2 ? 1LL << 40 : 0);
  report_.bound = bound < 0 ? 0 : static_cast<std::size_t>(bound);
  if (sys_.n < 2) throw PreconditionError("commutator solver needs at least two copies");
  if (bound < 0 || static_cast<long long>(report_.cycle_sum) > bound)
    throw PreconditionError("sum of cycle counts " + std::to_string(report_.cycle_sum) + " exceeds (m-2)n - 2D = " +
                            std::to_string(bound));
  sys_ = eliminate_H(sys_, BlockMode::Commutator);
  single_ = reduce_to_single(sys_, 0);
  report_.support = single_.support;
  report_.substitutions = single_.reduction.trace.size();
  extraction_ = extract_k_twisted(single_.reduction.word, static_cast<int>(sys_.m), static_cast<int>(sys_.n), D);
  report_.fallback_choices = extraction_.fallback_choices;
  Interpretation in = sys_.interpretation();
  std::vector<WitnessSet> sets;
  for (const auto& st : extraction_.steps) sets.push_back(twisted_set(in.automorphism(st.a), in.automorphism(st.b)));
  search_.emplace(act_.S, std::move(sets));
}

std::vector<NElem> CommutatorSolver::solve(const NElem& kappa) const {
  if (kappa.size() != sys_.n) throw InputError("kappa has the wrong number of coordinates");
  const auto& t = *act_.S;
  Interpretation in = sys_.interpretation();
  for (std::size_t s = 0; s < sys_.n; ++s) in.set(sys_.kappa_symbol(s), kappa[s]);
  std::set<Symbol> replaced;
  for (const auto& st : extraction_.certificate.steps) replaced.insert(st.symbol);
  for (const auto& sym : extraction_.certificate.basis)
    if (!replaced.count(sym) && !in.has(sym)) in.set(sym, ElementTable::identity());
  ElemId mu = in.evaluate(extraction_.rest);
  ElemId target = t.mul(kappa[0], t.inv(mu));
  auto f = search_->factorize(target);
  if (!f) throw InvariantError("twisted-commutator product does not reach the residual target");
  std::map<std::string, ElemId> members;
  for (std::size_t j = 0; j < f->size(); ++j) {
    std::int64_t w = search_->factor(j).witness[(*f)[j]];
    members["xi" + std::to_string(j + 1)] = static_cast<ElemId>(w / static_cast<std::int64_t>(t.order()));
    members["eta" + std::to_string(j + 1)] = static_cast<ElemId>(w % static_cast<std::int64_t>(t.order()));
  }
  solve_certificate(extraction_.certificate, members, in);
  if (in.evaluate(single_.reduction.word) != kappa[0]) throw InvariantError("reduced equation not satisfied");
  back_substitute(single_.reduction, sys_.equations, in);
  std::vector<NElem> u = recover_commutator_solution(sys_, in);
  NElem prod = act_.identity();
  for (std::size_t i = 0; i < u.size(); ++i) prod = act_.mul(prod, act_.commutator(u[i], sys_.actors[i]));
  if (prod != kappa) throw InvariantError("commutator solution failed direct verification");
  return u;
}

std::vector<NElem> solve_commutator_equation(const SemisimpleAction& act, const std::vector<std::size_t>& g,
                                             const NElem& kappa, std::size_t D) {
  return CommutatorSolver(act, g, D).solve(kappa);
}

// ---------------------------------------------------------------------------

OrbitData orbit_data(const std::vector<Actor>& ks, std::size_t q, std::size_t Dbar) {
  if (ks.empty()) throw InputError("no actors");
  OrbitData od;
  od.r = ks.front().copies();
  od.m = ks.size();
  std::vector<Actor> kq;
  for (const auto& k : ks) kq.push_back(k.pow(static_cast<long long>(q)));
  od.fix_star.assign(od.r, {});
  for (std::size_t j = 0; j < od.m; ++j)
    for (std::size_t i = 0; i < od.r; ++i)
      if (kq[j].fixes(i)) od.fix_star[i].push_back(j);
  std::vector<const Actor*> ptrs;
  for (const auto& a : kq) ptrs.push_back(&a);
  for (auto& members : copy_orbits(od.r, ptrs)) {
    OrbitInfo info;
    info.members = members;
    std::size_t fixed = 0;
    for (std::size_t i : members) fixed += od.fix_star[i].size();
    info.lambda = od.m * members.size() - fixed;
    info.type_one = info.lambda < Dbar * members.size();
    if (info.type_one) {
      for (std::size_t i : members)
        if (od.fix_star[i].size() + Dbar > od.m) {
          info.i_omega = i;
          break;
        }
      if (!info.i_omega) throw InvariantError("type I orbit without a copy fixed by more than m - Dbar actors");
    }
    od.orbits.push_back(std::move(info));
  }
  return od;
}

bool is_independent(const OrbitData& od, const std::vector<Actor>& ks,
                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      auto [oa, ja] = pairs[a];
      auto [ob, jb] = pairs[b];
      if (ja != jb) continue;
      const auto& ia = od.orbits[oa].i_omega;
      const auto& ib = od.orbits[ob].i_omega;
      if (!ia || !ib) return false;
      // Distinct cycles of k_j?
      const auto& sigma = ks[ja].sigma();
      bool same = false;
      std::size_t p = *ia;
      do {
        if (p == *ib) same = true;
        p = sigma[p];
      } while (p != *ia && !same);
      if (same) return false;
    }
  return true;
}

std::vector<IndependentChoice> select_independent(const OrbitData& od, const std::vector<Actor>& ks, std::size_t q,
                                                  const EffectiveConstants& c) {
  const std::size_t m = od.m, M = c.M, Dbar = c.Dbar();
  if (m < c.z(q))
    throw PreconditionError("m = " + std::to_string(m) + " is below z(q) = " + std::to_string(c.z(q)));
  std::vector<std::size_t> type_one;
  for (std::size_t o = 0; o < od.orbits.size(); ++o)
    if (od.orbits[o].type_one) type_one.push_back(o);
  if (type_one.empty()) return {};
  // Partition 1..m into M*Dbar intervals of length at least q + Dbar.
  const std::size_t parts = M * Dbar;
  const std::size_t len = m / parts;
  std::vector<std::set<std::size_t>> chosen(od.orbits.size());
  for (std::size_t p = 0; p < parts; ++p) {
    std::size_t lo = p * len, hi = p + 1 == parts ? m : (p + 1) * len;
    // Men: (cycle, j) with j in the interval and cycle length dividing q.
    std::vector<std::pair<std::size_t, std::size_t>> men;  // (j, cycle index)
    std::vector<std::vector<std::size_t>> men_cycles;
    for (std::size_t j = lo; j < hi; ++j) {
      auto cyc = ks[j].cycles();
      for (auto& cy : cyc)
        if (q % cy.size() == 0) {
          men.push_back({j, men_cycles.size()});
          men_cycles.push_back(cy);
        }
    }
    std::vector<std::vector<std::size_t>> knows(type_one.size());
    for (std::size_t w = 0; w < type_one.size(); ++w) {
      std::size_t io = *od.orbits[type_one[w]].i_omega;
      for (std::size_t mi = 0; mi < men.size(); ++mi) {
        const auto& cy = men_cycles[men[mi].second];
        if (std::find(cy.begin(), cy.end(), io) != cy.end()) knows[w].push_back(mi);
      }
    }
    auto match = hall_matching(men.size(), knows);
    if (!match.perfect)
      throw InvariantError("Hall condition fails on interval " + std::to_string(p) + " (deficient set of " +
                           std::to_string(match.deficient.size()) + " orbits)");
    for (std::size_t w = 0; w < type_one.size(); ++w)
      chosen[type_one[w]].insert(men[static_cast<std::size_t>(match.assignment[w])].first);
  }
  std::vector<IndependentChoice> out;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t o : type_one) {
    const auto& fs = od.fix_star[*od.orbits[o].i_omega];
    // Maximal intervals of fix*(i_Omega).
    bool done = false;
    for (std::size_t a = 0; a < fs.size() && !done;) {
      std::size_t b = a;
      while (b + 1 < fs.size() && fs[b + 1] == fs[b] + 1) ++b;
      std::vector<std::size_t> in_interval;
      for (std::size_t j : chosen[o])
        if (j >= fs[a] && j <= fs[b]) in_interval.push_back(j);
      if (in_interval.size() >= M) {
        IndependentChoice ch;
        ch.orbit = o;
        ch.interval = {fs[a], fs[b]};
        ch.slots.assign(in_interval.begin(), in_interval.begin() + static_cast<std::ptrdiff_t>(M));
        for (std::size_t j : ch.slots) pairs.push_back({o, j});
        out.push_back(std::move(ch));
        done = true;
      }
      a = b + 1;
    }
    if (!done) throw InvariantError("no interval of fix*(i_Omega) holds M chosen slots");
  }
  if (!is_independent(od, ks, pairs)) throw InvariantError("selected slots are not independent");
  return out;
}

// ---------------------------------------------------------------------------

PowerCover power_twist_cover(const TablePtr& s, const std::vector<Automorphism>& betas,
                             const std::vector<std::size_t>& qs, std::size_t budget, std::uint64_t seed) {
  if (betas.size() != qs.size()) throw InputError("need one exponent per automorphism");
  if (derived_subgroup(ElementSet::full(s)).size() != s->order()) throw PreconditionError(s->name() + " is not perfect");
  const std::size_t M = betas.size(), order = s->order();
  PowerCover out;
  if (M == 0) {
    out.found = order == 1;
    return out;
  }
  // sets[j][x]: members of [S, (inner(x) beta_j)^{q_j}].
  std::vector<std::vector<std::vector<ElemId>>> sets(M, std::vector<std::vector<ElemId>>(order));
  for (std::size_t j = 0; j < M; ++j)
    for (ElemId x = 0; x < order; ++x) {
      auto g = (Automorphism::inner(s, x) * betas[j]).pow(static_cast<long long>(qs[j]));
      auto w = commutator_set(g);
      for (ElemId e = 0; e < order; ++e)
        if (w.witness[e] >= 0) sets[j][x].push_back(e);
    }
  auto extend = [&](const std::vector<char>& cur, const std::vector<ElemId>& set) {
    std::vector<char> next(order, 0);
    for (ElemId a = 0; a < order; ++a)
      if (cur[a])
        for (ElemId b : set) next[s->mul(a, b)] = 1;
    return next;
  };
  auto count = [](const std::vector<char>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1)); };
  auto evaluate = [&](const std::vector<ElemId>& xs) {
    std::vector<char> cur(order, 0);
    cur[ElementTable::identity()] = 1;
    for (std::size_t j = 0; j < M; ++j) cur = extend(cur, sets[j][xs[j]]);
    ++out.attempts;
    return count(cur);
  };
  auto accept = [&](const std::vector<ElemId>& xs, std::size_t reached) {
    out.reached = std::max(out.reached, reached);
    if (reached == order) {
      out.found = true;
      out.twists = xs;
    }
    return out.found;
  };
  // Greedy.
  {
    std::vector<char> cur(order, 0);
    cur[ElementTable::identity()] = 1;
    std::vector<ElemId> xs;
    for (std::size_t j = 0; j < M; ++j) {
      std::size_t best = 0;
      ElemId bx = 0;
      std::vector<char> bnext;
      for (ElemId x = 0; x < order; ++x) {
        auto next = extend(cur, sets[j][x]);
        std::size_t c = count(next);
        if (c > best) {
          best = c;
          bx = x;
          bnext = std::move(next);
        }
      }
      xs.push_back(bx);
      cur = std::move(bnext);
    }
    ++out.attempts;
    if (accept(xs, count(cur))) return out;
  }
  // Random.
  std::mt19937_64 rng(seed);
  std::size_t random_tries = std::min<std::size_t>(budget, 2000);
  for (std::size_t t = 0; t < random_tries; ++t) {
    std::vector<ElemId> xs(M);
    for (auto& x : xs) x = static_cast<ElemId>(rng() % order);
    if (accept(xs, evaluate(xs))) return out;
  }
  // Exhaustive.
  long double total = 1;
  for (std::size_t j = 0; j < M; ++j) total *= static_cast<long double>(order);
  if (total <= static_cast<long double>(budget)) {
    std::vector<ElemId> xs(M, 0);
    while (true) {
      if (accept(xs, evaluate(xs))) return out;
      std::size_t j = 0;
      while (j < M && ++xs[j] == order) xs[j++] = 0;
      if (j == M) break;
    }
  }
  return out;
}

std::size_t empirical_M(const TablePtr& s, std::size_t q, std::size_t max_m, std::size_t budget) {
  for (std::size_t M = 1; M <= max_m; ++M) {
    std::vector<Automorphism> betas(M, Automorphism::identity(s));
    if (power_twist_cover(s, betas, std::vector<std::size_t>(M, q), budget).found) return M;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct PowerSolver::OrbitSolver {
  std::vector<std::size_t> members;
  bool type_one = false;
  std::optional<CommutatorSolver> commutator;
  // Type I data.
  EquationSystem sys;
  SingleEquation single;
  std::size_t root = 0;
  std::size_t block_begin = 0, block_end = 0;  // middle V letters in the reduced word
  std::vector<Symbol> middle;
  std::optional<ProductSearch> search;

  std::vector<NElem> solve(const NElem& target) const {
    if (!type_one) return commutator->solve(target);
    const auto& t = *sys.S;
    Interpretation in = sys.interpretation();
    for (std::size_t s = 0; s < sys.n; ++s) in.set(sys.kappa_symbol(s), target[s]);
    const GammaWord& U = single.reduction.word;
    for (const auto& l : U.letters())
      if (!in.has(l.symbol)) in.set(l.symbol, ElementTable::identity());
    ElemId a = in.evaluate(U.slice(0, block_begin));
    ElemId b = in.evaluate(U.slice(block_end, U.size()));
    ElemId star = t.mul(t.mul(t.inv(a), target[root]), t.inv(b));
    auto f = search->factorize(star);
    if (!f) throw InvariantError("middle product does not reach the target");
    for (std::size_t j = 0; j < middle.size(); ++j) in.set(middle[j], (*f)[j]);
    if (in.evaluate(U) != target[root]) throw InvariantError("reduced equation not satisfied");
    back_substitute(single.reduction, sys.equations, in);
    return recover_commutator_solution(sys, in);
  }
};

PowerSolver::PowerSolver(const SemisimpleAction& act, std::vector<std::size_t> h, std::size_t q, EffectiveConstants c,
                         bool enforce_z, std::uint64_t seed)
    : act_(act), q_(q) {
  act_.validate();
  if (q == 0) throw InputError("q must be positive");
  if (h.empty()) throw InputError("need at least one h");
  const TablePtr& S = act_.S;
  const std::size_t m = h.size(), r = act_.r;
  report_.m = m;
  report_.q = q;
  report_.z = c.z(q);
  report_.constants = c;
  if (enforce_z && m < report_.z)
    throw PreconditionError("m = " + std::to_string(m) + " is below z(q) = " + std::to_string(report_.z));
  for (std::size_t id : h) {
    if (id >= act_.actors.size()) throw InputError("actor id out of range");
    h_.push_back(g_from_actor(act_.actors[id]));
  }
  const GElem one = g_from_n(S, n_identity(r));
  std::vector<GElem> tau_h{one};
  for (std::size_t i = 0; i + 1 < m; ++i) tau_h.push_back(g_mul(g_inv(g_pow(h_[i], static_cast<long long>(q))), tau_h[i]));
  std::vector<GElem> k;
  std::vector<Actor> ks;
  for (std::size_t i = 0; i < m; ++i) {
    k.push_back(g_conj(g_inv(h_[i]), tau_h[i]));
    ks.push_back(g_action(k.back()));
  }
  OrbitData od = orbit_data(ks, q, c.Dbar());
  auto choices = select_independent(od, ks, q, c);
  report_.choices = choices;
  for (const auto& o : od.orbits) (o.type_one ? report_.type_one : report_.type_two)++;

  // Twists x_{Omega j} from the power-twist cover, placed in y_j.
  std::vector<NElem> y(m, n_identity(r));
  for (const auto& ch : choices) {
    std::size_t io = *od.orbits[ch.orbit].i_omega;
    std::vector<Automorphism> betas;
    std::vector<std::size_t> qs;
    for (std::size_t j : ch.slots) {
      std::size_t e = 1;
      for (std::size_t p = ks[j].sigma()[io]; p != io; p = ks[j].sigma()[p]) ++e;
      betas.push_back(ks[j].pow(static_cast<long long>(e)).comp(io));
      qs.push_back(q / e);
    }
    auto cover = power_twist_cover(S, betas, qs, 200000, seed + ch.orbit);
    if (!cover.found)
      throw InvariantError("no power-twist cover with " + std::to_string(ch.slots.size()) + " slots for the orbit of copy " +
                           std::to_string(io));
    for (std::size_t t = 0; t < ch.slots.size(); ++t) y[ch.slots[t]][io] = cover.twists[t];
  }

  // x_i^{h_i} = [h_i, xi_i^-1] y_i^{-tau_i^-1 xi_i^-1}
  tau_xh_.push_back(one);
  for (std::size_t i = 0; i < m; ++i) {
    GElem xi = g_mul(tau_xh_[i], g_inv(tau_h[i]));
    if (!g_is_pure(xi)) throw InvariantError("xi_i left N");
    GElem comm = g_mul(g_mul(g_inv(h_[i]), xi), g_mul(h_[i], g_inv(xi)));
    GElem cj = g_mul(g_inv(tau_h[i]), g_inv(xi));
    GElem yterm = g_conj(g_from_n(S, n_inv(*S, y[i])), cj);
    GElem xh = g_mul(comm, yterm);
    GElem xi_elem = g_conj(xh, g_inv(h_[i]));
    if (!g_is_pure(xi_elem)) throw InvariantError("x_i left N");
    x_.push_back(xi_elem.n);
    GElem xhi = g_mul(xi_elem, h_[i]);
    if (!(g_action(g_mul(g_from_n(S, y[i]), k[i])) == g_action(g_conj(g_inv(xhi), tau_xh_[i]))))
      throw InvariantError("y_i k_i does not act as (x_i h_i)^{-tau_i}");
    if (i + 1 < m) tau_xh_.push_back(g_mul(g_inv(g_pow(xhi, static_cast<long long>(q))), tau_xh_[i]));
  }
  for (std::size_t j = 0; j < m; ++j)
    g_.push_back(g_action(g_pow(g_mul(g_from_n(S, y[j]), k[j]), static_cast<long long>(q))));
  psi_x_ = psi(x_);

  std::map<std::size_t, const IndependentChoice*> choice_of;
  for (const auto& ch : choices) choice_of[ch.orbit] = &ch;
  for (std::size_t o = 0; o < od.orbits.size(); ++o) {
    auto os = std::make_shared<OrbitSolver>();
    os->members = od.orbits[o].members;
    os->type_one = od.orbits[o].type_one;
    SemisimpleAction sub{S, os->members.size(), {}};
    for (const auto& g : g_) sub.actors.push_back(g.restrict_to(os->members));
    std::vector<std::size_t> all(m);
    std::iota(all.begin(), all.end(), 0);
    if (!os->type_one) {
      os->commutator.emplace(sub, all, 0);
    } else {
      const IndependentChoice& ch = *choice_of.at(o);
      std::size_t io = *od.orbits[o].i_omega;
      os->root = static_cast<std::size_t>(std::find(os->members.begin(), os->members.end(), io) - os->members.begin());
      os->sys = eliminate_H(build_system(sub, all, {}), BlockMode::Free);
      os->single = reduce_to_single(os->sys, os->root);
      // V_j({root}) for j in J_Omega sit next to each other in the reduced word.
      std::map<std::size_t, Symbol> fixed_block;
      for (const auto& b : os->sys.conditions)
        if (b.cycle.size() == 1 && b.cycle.front() == os->root) fixed_block[b.slot] = b.parameter;
      std::vector<WitnessSet> sets;
      Interpretation in = os->sys.interpretation();
      for (std::size_t j = ch.interval.first; j <= ch.interval.second; ++j) {
        os->middle.push_back(fixed_block.at(j));
        sets.push_back(commutator_set(sub.actors[j].comp(os->root)));
      }
      const auto& L = os->single.reduction.word.letters();
      std::size_t p = 0;
      while (p < L.size() && L[p].symbol != os->middle.front()) ++p;
      if (p + os->middle.size() > L.size()) throw InvariantError("middle block missing from the reduced word");
      for (std::size_t t = 0; t < os->middle.size(); ++t)
        if (L[p + t].symbol != os->middle[t] || L[p + t].sign != 1 || !L[p + t].exponent.is_identity())
          throw InvariantError("middle block is not contiguous in the reduced word");
      os->block_begin = p;
      os->block_end = p + os->middle.size();
      os->search.emplace(S, std::move(sets));
      if (os->search->reached(os->middle.size()) != S->order())
        throw InvariantError("middle product [S, g_j], j in J, does not cover S");
    }
    orbit_solvers_.push_back(std::move(os));
  }
}

NElem PowerSolver::psi(const std::vector<NElem>& a) const {
  if (a.size() != h_.size()) throw InputError("psi needs one element per h");
  const TablePtr& S = act_.S;
  GElem prod = g_from_n(S, n_identity(act_.r));
  GElem hq = prod;
  for (std::size_t i = 0; i < a.size(); ++i) {
    prod = g_mul(prod, g_pow(g_mul(g_from_n(S, a[i]), h_[i]), static_cast<long long>(q_)));
    hq = g_mul(hq, g_pow(h_[i], static_cast<long long>(q_)));
  }
  GElem v = g_mul(prod, g_inv(hq));
  if (!g_is_pure(v)) throw InvariantError("psi left N");
  return v.n;
}

std::vector<NElem> PowerSolver::solve_commutators(const NElem& target) const {
  const std::size_t m = h_.size();
  std::vector<NElem> a(m, n_identity(act_.r));
  for (const auto& os : orbit_solvers_) {
    auto part = os->solve(restrict_elem(target, os->members));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < os->members.size(); ++t) a[j][os->members[t]] = part[j][t];
  }
  NElem prod = act_.identity();
  for (std::size_t j = 0; j < m; ++j) prod = act_.mul(prod, act_.commutator(a[j], g_[j]));
  if (prod != target) throw InvariantError("prod [a_j, (y_j k_j)^q] failed direct verification");
  return a;
}

std::vector<NElem> PowerSolver::solve(const NElem& kappa) const {
  if (kappa.size() != act_.r) throw InputError("kappa has the wrong number of coordinates");
  const TablePtr& S = act_.S;
  auto ap = solve_commutators(act_.mul(kappa, act_.inv(psi_x_)));
  std::vector<NElem> a;
  for (std::size_t i = 0; i < h_.size(); ++i) {
    GElem b = g_conj(g_from_n(S, ap[i]), g_inv(tau_xh_[i]));
    GElem hinv = g_inv(h_[i]);
    GElem comm = g_mul(g_mul(g_inv(b), g_inv(hinv)), g_mul(b, hinv));
    GElem ai = g_mul(g_conj(g_from_n(S, x_[i]), b), comm);
    if (!g_is_pure(ai)) throw InvariantError("a_i left N");
    a.push_back(ai.n);
  }
  if (psi(a) != kappa) throw InvariantError("power-map solution failed direct verification");
  return a;
}

std::vector<NElem> solve_power_equation(const SemisimpleAction& act, const std::vector<std::size_t>& h,
                                        std::size_t q, const NElem& kappa, const EffectiveConstants& c) {
  return PowerSolver(act, h, q, c).solve(kappa);
}

std::optional<std::vector<NElem>> brute_force_power_preimage(const SemisimpleAction& act,
                                                              const std::vector<std::size_t>& h, std::size_t q,
                                                              const NElem& kappa, std::uint64_t limit) {
  act.validate();
  long double total = 1;
  for (std::size_t i = 0; i < h.size(); ++i) total *= static_cast<long double>(act.order());
  if (total > static_cast<long double>(limit)) throw CapacityError("|N|^m exceeds the brute-force limit");
  const TablePtr& S = act.S;
  std::vector<GElem> hs;
  for (std::size_t id : h) hs.push_back(g_from_actor(act.actors.at(id)));
  GElem hq = g_from_n(S, act.identity());
  for (const auto& x : hs) hq = g_mul(hq, g_pow(x, static_cast<long long>(q)));
  GElem hq_inv = g_inv(hq);
  const std::uint64_t n_order = act.order();
  std::vector<std::uint64_t> idx(h.size(), 0);
  while (true) {
    std::vector<NElem> a;
    GElem prod = g_from_n(S, act.identity());
    for (std::size_t i = 0; i < h.size(); ++i) {
      a.push_back(n_from_index(*S, act.r, idx[i]));
      prod = g_mul(prod, g_pow(g_mul(g_from_n(S, a.back()), hs[i]), static_cast<long long>(q)));
    }
    if (g_mul(prod, hq_inv).n == kappa) return a;
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == n_order) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

struct TwistedSystemSolver::Component {
  std::vector<std::size_t> members;
  std::size_t n = 0, D = 0;
  std::vector<std::pair<Actor, Actor>> pairs;

  struct Block {
    std::size_t pair = 0;
    std::vector<std::size_t> orbit;  // sorted, orbit[0] = k_Delta
    std::vector<Equation> equations;
    Reduction local;
    TwistedExtraction extraction;
    Certificate certificate;
    Symbol X, Y;
    GammaWord expansion;  // T_{a,b}(X, Y) V_Delta
  };
  std::vector<Block> blocks;
  std::vector<Equation> global;
  Reduction reduction;
  struct Occurrence {
    std::size_t block = 0;
    std::size_t position = 0;
    GammaExponent gamma, a, b;
  };
  std::vector<Occurrence> occurrences;  // in order of position in the final word
  std::vector<WitnessSet> base_sets;    // per occurrence, T_{a,b}(S,S) with gamma already applied

  Symbol kappa(std::size_t s) const { return {SymbolKind::Parameter, static_cast<int>(s + 1)}; }
  Symbol kappa_i(std::size_t i, std::size_t s) const {
    return {SymbolKind::Parameter, static_cast<int>(n + 1 + i * n + s)};
  }
  Symbol x(std::size_t i, std::size_t s) const { return {SymbolKind::Variable, static_cast<int>(2 * (i * n + s) + 1)}; }
  Symbol y(std::size_t i, std::size_t s) const { return {SymbolKind::Variable, static_cast<int>(2 * (i * n + s) + 2)}; }
  int gen_alpha(std::size_t i, std::size_t s) const { return static_cast<int>(2 * (i * n + s) + 1); }
  int gen_beta(std::size_t i, std::size_t s) const { return static_cast<int>(2 * (i * n + s) + 2); }
  bool is_kappa_i(const Symbol& sym) const {
    return sym.kind == SymbolKind::Parameter && sym.id > static_cast<int>(n);
  }

  Interpretation interpretation(const TablePtr& S) const {
    Interpretation in(S);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t s = 0; s < n; ++s) {
        in.set_generator(gen_alpha(i, s), pairs[i].first.comp(s));
        in.set_generator(gen_beta(i, s), pairs[i].second.comp(s));
      }
    return in;
  }
};

TwistedSystemSolver::TwistedSystemSolver(TablePtr s, std::size_t r, std::vector<std::pair<Actor, Actor>> pairs,
                                         std::size_t D)
    : s_(std::move(s)), r_(r), pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw InputError("need at least one automorphism pair");
  std::vector<Actor> all;
  for (const auto& [a, b] : pairs_) {
    if (a.copies() != r_ || b.copies() != r_ || a.table() != s_ || b.table() != s_)
      throw InputError("automorphism pair does not act on S^r");
    all.push_back(a);
    all.push_back(b);
  }
  D_ = D ? D : certified_width(s_, all);
  if (pairs_.size() < D_)
    throw PreconditionError("twisted width needs " + std::to_string(D_) + " pairs, " + std::to_string(pairs_.size()) +
                            " supplied");
  std::vector<const Actor*> ptrs;
  for (const auto& a : all) ptrs.push_back(&a);
  for (const auto& members : copy_orbits(r_, ptrs)) {
    auto comp = std::make_shared<Component>();
    comp->members = members;
    comp->n = members.size();
    comp->D = D_;
    for (const auto& [a, b] : pairs_) comp->pairs.push_back({a.restrict_to(members), b.restrict_to(members)});
    const std::size_t n = comp->n;
    // Local systems E_Delta.
    for (std::size_t i = 0; i < comp->pairs.size(); ++i) {
      const Actor& al = comp->pairs[i].first;
      const Actor& be = comp->pairs[i].second;
      std::vector<const Actor*> gi{&al, &be};
      for (const auto& orbit : copy_orbits(n, gi)) {
        Component::Block blk;
        blk.pair = i;
        blk.orbit = orbit;
        for (std::size_t s : orbit) {
          GammaWord rhs;
          rhs *= GammaWord::letter({comp->x(i, s), -1, {}, 1});
          rhs *= GammaWord::letter({comp->y(i, s), -1, {}, 2});
          rhs *= GammaWord::letter({comp->x(i, al.sigma()[s]), 1, GammaExponent::generator(comp->gen_alpha(i, s)), 1});
          rhs *= GammaWord::letter({comp->y(i, be.sigma()[s]), 1, GammaExponent::generator(comp->gen_beta(i, s)), 2});
          blk.equations.push_back({comp->kappa_i(i, s), std::move(rhs)});
        }
        blk.local = reduce_equations(blk.equations, 0, [](const Symbol& sym) { return sym.kind == SymbolKind::Variable; });
        const GammaWord& U = blk.local.word;
        TwistedBlockCertificate cert;
        cert.pair = i;
        for (std::size_t s : orbit) cert.orbit.push_back(members[s]);
        GammaWord h = hat(U);
        cert.balanced = is_balanced(h);
        cert.support = h.variable_support().size();
        auto theta = class_two_value(h);
        cert.class_two_ok = theta[0] == 0 && theta[1] == 0 && theta[2] == static_cast<long long>(orbit.size());
        if (!cert.balanced || !cert.class_two_ok) throw InvariantError("local twisted word fails its certificate");
        std::size_t b_index = comp->blocks.size();
        blk.X = {SymbolKind::Variable, static_cast<int>(2 * pairs_.size() * n + 1 + 2 * b_index)};
        blk.Y = {SymbolKind::Variable, static_cast<int>(2 * pairs_.size() * n + 2 + 2 * b_index)};
        blk.extraction = extract_twisted(U, blk.X.name(), blk.Y.name());
        // Parameter multiplicities in V.
        std::map<Symbol, std::vector<int>> signs;
        bool other = false;
        for (const auto& l : blk.extraction.rest.letters())
          if (l.symbol.kind == SymbolKind::Parameter) {
            signs[l.symbol].push_back(l.sign);
            if (!comp->is_kappa_i(l.symbol)) other = true;
          }
        bool ok = !other && !signs.count(comp->kappa_i(i, orbit.front()));
        for (std::size_t t = 1; t < orbit.size(); ++t) {
          auto it = signs.find(comp->kappa_i(i, orbit[t]));
          ok = ok && it != signs.end() && it->second == std::vector<int>{-1};
        }
        ok = ok && signs.size() + 1 == orbit.size();
        cert.parameters_ok = ok;
        if (!ok) throw InvariantError("parameter multiplicities in V_Delta are wrong");
        certificates_.push_back(cert);
        blk.certificate.basis = U.symbols();
        blk.certificate.steps = blk.extraction.steps;
        replay_certificate(blk.certificate);
        blk.expansion = twisted_commutator(blk.extraction.a, blk.extraction.b, GammaWord::letter({blk.X, 1, {}, 1}),
                                           GammaWord::letter({blk.Y, 1, {}, 2})) *
                        blk.extraction.rest;
        comp->blocks.push_back(std::move(blk));
      }
    }
    // Global system F_s with kappa_i(k_Delta) replaced.
    for (std::size_t s = 0; s < n; ++s) {
      GammaWord rhs;
      for (std::size_t i = 0; i < comp->pairs.size(); ++i) rhs *= GammaWord::letter({comp->kappa_i(i, s), 1, {}, 0});
      comp->global.push_back({comp->kappa(s), std::move(rhs)});
    }
    for (const auto& blk : comp->blocks) {
      auto& rhs = comp->global[blk.orbit.front()].rhs;
      Symbol target = comp->kappa_i(blk.pair, blk.orbit.front());
      std::size_t p = 0;
      while (rhs.letters()[p].symbol != target) ++p;
      rhs = rhs.slice(0, p) * blk.expansion * rhs.slice(p + 1, rhs.size());
    }
    Component* cp = comp.get();
    comp->reduction = reduce_equations(comp->global, 0, [cp](const Symbol& sym) { return cp->is_kappa_i(sym); });
    // Locate the blocks T_Delta in the final word.
    const auto& L = comp->reduction.word.letters();
    std::map<Symbol, std::size_t> block_of;
    for (std::size_t b = 0; b < comp->blocks.size(); ++b) block_of[comp->blocks[b].X] = b;
    std::vector<std::size_t> seen(comp->blocks.size(), 0);
    std::vector<std::size_t> kappa_count(n, 0);
    for (std::size_t p = 0; p < L.size(); ++p) {
      if (L[p].symbol.kind == SymbolKind::Parameter && !comp->is_kappa_i(L[p].symbol)) {
        std::size_t s = static_cast<std::size_t>(L[p].symbol.id - 1);
        if (L[p].sign != -1 || s == 0) throw InvariantError("kappa(s) occurs with the wrong sign in the reduced word");
        ++kappa_count[s];
      }
      auto it = block_of.find(L[p].symbol);
      if (it == block_of.end()) continue;
      const auto& blk = comp->blocks[it->second];
      if (p + 3 >= L.size() || L[p].sign != -1 || L[p + 1].symbol != blk.Y || L[p + 1].sign != -1 ||
          L[p + 2].symbol != blk.X || L[p + 2].sign != 1 || L[p + 3].symbol != blk.Y || L[p + 3].sign != 1 ||
          L[p + 1].exponent != L[p].exponent)
        throw InvariantError("twisted block is not contiguous in the reduced word");
      Component::Occurrence occ;
      occ.block = it->second;
      occ.position = p;
      occ.gamma = L[p].exponent;
      occ.a = occ.gamma.inverse() * L[p + 2].exponent;
      occ.b = occ.gamma.inverse() * L[p + 3].exponent;
      comp->occurrences.push_back(occ);
      ++seen[it->second];
      p += 3;
    }
    for (std::size_t b = 0; b < seen.size(); ++b)
      if (seen[b] != 1) throw InvariantError("twisted block does not occur exactly once");
    for (std::size_t s = 1; s < n; ++s)
      if (kappa_count[s] != 1) throw InvariantError("kappa(s) does not occur exactly once");
    Interpretation in = comp->interpretation(s_);
    for (const auto& occ : comp->occurrences)
      comp->base_sets.push_back(twisted_set(in.automorphism(occ.a), in.automorphism(occ.b)));
    components_.push_back(std::move(comp));
  }
}

TwistedSolution TwistedSystemSolver::solve(const NElem& kappa) const {
  if (kappa.size() != r_) throw InputError("kappa has the wrong number of coordinates");
  const auto& t = *s_;
  TwistedSolution sol;
  sol.x.assign(pairs_.size(), n_identity(r_));
  sol.y.assign(pairs_.size(), n_identity(r_));
  for (const auto& comp : components_) {
    const std::size_t n = comp->n;
    Interpretation in = comp->interpretation(s_);
    for (std::size_t s = 0; s < n; ++s) in.set(comp->kappa(s), kappa[comp->members[s]]);
    const GammaWord& V = comp->reduction.word;
    std::set<Symbol> block_symbols;
    for (const auto& b : comp->blocks) {
      block_symbols.insert(b.X);
      block_symbols.insert(b.Y);
    }
    for (const auto& l : V.letters())
      if (!in.has(l.symbol) && !block_symbols.count(l.symbol)) in.set(l.symbol, ElementTable::identity());
    // V = c_0 B_1 c_1 ... B_t c_t.
    std::vector<ElemId> c;
    std::size_t prev = 0;
    for (const auto& occ : comp->occurrences) {
      c.push_back(in.evaluate(V.slice(prev, occ.position)));
      prev = occ.position + 4;
    }
    c.push_back(in.evaluate(V.slice(prev, V.size())));
    // prod_j P_{j-1} B_j P_{j-1}^-1 = c_0^-1 kappa(1) P_t^-1
    std::vector<WitnessSet> sets;
    std::vector<ElemId> prefix{ElementTable::identity()};
    for (std::size_t j = 0; j < comp->occurrences.size(); ++j) {
      ElemId P = prefix.back();
      WitnessSet w{std::vector<std::int64_t>(t.order(), -1)};
      for (ElemId e = 0; e < t.order(); ++e)
        if (comp->base_sets[j].witness[e] >= 0) w.witness[t.mul(t.mul(P, e), t.inv(P))] = comp->base_sets[j].witness[e];
      sets.push_back(std::move(w));
      prefix.push_back(t.mul(P, c[j + 1]));
    }
    ElemId target = t.mul(t.mul(t.inv(c[0]), kappa[comp->members[0]]), t.inv(prefix.back()));
    ProductSearch ps(s_, std::move(sets));
    auto f = ps.factorize(target);
    if (!f) throw InvariantError("product of twisted-commutator sets does not reach the target");
    for (std::size_t j = 0; j < comp->occurrences.size(); ++j) {
      const auto& occ = comp->occurrences[j];
      std::int64_t w = ps.factor(j).witness[(*f)[j]];
      ElemId xp = static_cast<ElemId>(w / static_cast<std::int64_t>(t.order()));
      ElemId yp = static_cast<ElemId>(w % static_cast<std::int64_t>(t.order()));
      const auto& blk = comp->blocks[occ.block];
      in.set(blk.X, in.apply_inverse(occ.gamma, xp));
      in.set(blk.Y, in.apply_inverse(occ.gamma, yp));
    }
    if (in.evaluate(V) != kappa[comp->members[0]]) throw InvariantError("reduced twisted equation not satisfied");
    back_substitute(comp->reduction, comp->global, in);
    for (const auto& blk : comp->blocks) {
      Symbol k0 = comp->kappa_i(blk.pair, blk.orbit.front());
      for (const auto& l : blk.expansion.letters())
        if (!in.has(l.symbol)) in.set(l.symbol, ElementTable::identity());
      in.set(k0, in.evaluate(blk.expansion));
    }
    for (const auto& blk : comp->blocks) {
      std::map<std::string, ElemId> members{{blk.X.name(), in.get(blk.X)}, {blk.Y.name(), in.get(blk.Y)}};
      solve_certificate(blk.certificate, members, in);
      back_substitute(blk.local, blk.equations, in);
      for (std::size_t s : blk.orbit) {
        sol.x[blk.pair][comp->members[s]] = in.get(comp->x(blk.pair, s));
        sol.y[blk.pair][comp->members[s]] = in.get(comp->y(blk.pair, s));
      }
    }
  }
  NElem prod = n_identity(r_);
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const NElem& x = sol.x[i];
    const NElem& y = sol.y[i];
    NElem T = n_mul(t, n_mul(t, n_inv(t, x), n_inv(t, y)), n_mul(t, pairs_[i].first.apply(x), pairs_[i].second.apply(y)));
    prod = n_mul(t, prod, T);
  }
  if (prod != kappa) throw InvariantError("twisted system solution failed direct verification");
  return sol;
}

TwistedSolution solve_twisted_system(const TablePtr& s, std::size_t r, const std::vector<std::pair<Actor, Actor>>& pairs,
                                     const NElem& kappa) {
  return TwistedSystemSolver(s, r, pairs).solve(kappa);
}

}  // namespace widthlab

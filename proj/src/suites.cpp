#include "widthlab/suites.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "widthlab/error.hpp"
#include "widthlab/gamma.hpp"
#include "widthlab/semisimple.hpp"
#include "widthlab/soluble.hpp"
#include "widthlab/subgroups.hpp"
#include "widthlab/words.hpp"

namespace widthlab {

namespace {

constexpr std::size_t kMaxRecordedFailures = 10;

class Recorder {
 public:
  struct Truncated {};

  Recorder(const std::string& name, const SuiteOptions& o, std::uint64_t trials) {
    r_.suite = name;
    r_.seed = o.seed;
    r_.trials = trials;
    if (o.time_budget_s > 0)
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(o.time_budget_s));
  }
  std::uint64_t checked() const { return r_.checked; }
  void check(bool ok, const std::function<std::string()>& what) {
    if (deadline_ && std::chrono::steady_clock::now() > *deadline_) {
      r_.truncated = true;
      throw Truncated{};
    }
    ++r_.checked;
    if (ok)
      ++r_.passed;
    else if (r_.failures.size() < kMaxRecordedFailures)
      r_.failures.push_back(what());
  }
  void metric(std::string key, MetricValue v) { r_.metrics.push_back({std::move(key), std::move(v)}); }
  SuiteResult finish() {
    r_.pass = r_.checked == r_.passed && !r_.truncated;
    return std::move(r_);
  }

 private:
  SuiteResult r_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

TablePtr table_of(const std::string& spec) {
  static std::mutex mu;
  static std::map<std::string, TablePtr> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(spec);
  if (it != memo.end()) return it->second;
  auto t = ElementTable::enumerate(parse_group(spec));
  memo.emplace(spec, t);
  return t;
}

ElemId random_elem(const ElementTable& t, std::mt19937_64& rng) { return static_cast<ElemId>(rng() % t.order()); }

std::vector<ElemId> random_tuple(const ElementTable& t, std::size_t m, std::mt19937_64& rng) {
  std::vector<ElemId> v(m);
  for (auto& e : v) e = random_elem(t, rng);
  return v;
}

std::string describe(const std::vector<ElemId>& v) {
  std::ostringstream o;
  o << "(";
  for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
  o << ")";
  return o.str();
}

std::vector<std::string> catalog_upto(std::size_t max_order) {
  std::vector<std::string> out;
  for (const auto& e : group_catalog())
    if (e.order <= max_order && e.order > 1) out.push_back(e.spec);
  return out;
}

// Stop randomized searches that keep rejecting candidates.
std::uint64_t attempt_cap(std::uint64_t trials) { return 200 * trials + 1000; }

// ---------------------------------------------------------------------------

void suite_hamidoune(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  auto specs = catalog_upto(720);
  for (std::uint64_t attempts = 0; rec.checked() < trials && attempts < attempt_cap(trials); ++attempts) {
    auto t = table_of(specs[rng() % specs.size()]);
    ElementSet x = ElementSet::trivial(t);
    std::size_t k = 1 + rng() % std::max<std::size_t>(1, t->order() / 3);
    for (std::size_t i = 0; i < k; ++i) x.insert(random_elem(*t, rng));
    auto xs = x.elements();
    if (subgroup(t, xs).size() != t->order()) continue;
    std::size_t r = (t->order() + x.size() - 1) / x.size();
    if (rng() % 4 == 0) r += rng() % 3;
    auto res = hamidoune_check(x, r);
    bool ok = res.holds && res.steps <= 2 * r && power_set(x, 2 * r).size() == t->order();
    rec.check(ok, [&] { return t->name() + " |X|=" + std::to_string(x.size()) + " r=" + std::to_string(r); });
  }
}

void suite_lemma_2_5(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  auto specs = catalog_upto(360);
  std::uint64_t rejected = 0;
  for (std::uint64_t attempts = 0; rec.checked() < trials && attempts < attempt_cap(trials); ++attempts) {
    auto t = table_of(specs[rng() % specs.size()]);
    auto normals = normal_subgroups(t);
    const auto& h = normals[rng() % normals.size()].set;
    std::vector<ElemId> x;
    if (rng() % 2) x = t->generator_ids();
    std::size_t extra = rng() % 3;
    for (std::size_t i = 0; i < extra; ++i) x.push_back(random_elem(*t, rng));
    if (x.empty()) x.push_back(random_elem(*t, rng));
    std::shuffle(x.begin(), x.end(), rng);
    std::size_t n = 1 + rng() % 3;
    try {
      bool ok = nilp_comm_check(h, x, n);
      rec.check(ok, [&] { return t->name() + " |H|=" + std::to_string(h.size()) + " x=" + describe(x); });
    } catch (const PreconditionError&) {
      ++rejected;
    }
  }
  rec.metric("rejected_instances", static_cast<long long>(rejected));
}

void suite_lemma_4_3(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  auto specs = catalog_upto(720);
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto t = table_of(specs[rng() % specs.size()]);
    std::size_t m = 1 + rng() % 5;
    auto g = random_tuple(*t, m, rng), v = random_tuple(*t, m, rng), x = random_tuple(*t, m, rng);
    auto tau = tau_chain(*t, g, v);
    // tau_j = v_j [g_{j-1}, v_{j-1}] ... [g_1, v_1], recomputed from the definition.
    bool chain_ok = tau.size() == m;
    for (std::size_t j = 0; j < m && chain_ok; ++j) {
      ElemId e = v[j];
      for (std::size_t l = j; l-- > 0;) e = t->mul(e, t->comm(g[l], v[l]));
      chain_ok = tau[j] == e;
    }
    bool ok = chain_ok && derivative_identity_holds(*t, g, v, x);
    rec.check(ok, [&] { return t->name() + " g=" + describe(g) + " v=" + describe(v) + " x=" + describe(x); });
  }
}

void suite_lemma_4_4(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  auto specs = catalog_upto(720);
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto t = table_of(specs[rng() % specs.size()]);
    std::size_t m = 1 + rng() % 4;
    auto g = random_tuple(*t, m, rng), v = random_tuple(*t, m, rng);
    rec.check(twogensets_check(t, g, v), [&] { return t->name() + " g=" + describe(g) + " v=" + describe(v); });
  }
}

// Every commutator is a product of three squares.
void suite_three_squares(const SuiteOptions&, std::uint64_t trials, Recorder& rec) {
  std::uint64_t groups = 0;
  for (const auto& e : group_catalog()) {
    if (groups >= trials) break;
    ++groups;
    auto t = table_of(e.spec);
    ElementSet squares = ElementSet::trivial(t);
    for (ElemId x = 0; x < t->order(); ++x) squares.insert(t->mul(x, x));
    ElementSet three = product_set(product_set(squares, squares), squares);
    // The commutator set is closed under conjugation, so class representatives x suffice.
    bool ok = true;
    for (const auto& cls : conjugacy_classes(t)) {
      ElemId x = cls.front();
      for (ElemId y : cls) {
        ElemId c = t->mul(t->inv(x), y);  // [x, g] with x^g = y
        if (!three.contains(c)) ok = false;
      }
    }
    rec.check(ok, [&] { return e.spec; });
  }
  rec.metric("groups", static_cast<long long>(groups));
}

void suite_lemma_3_2(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  const char* specs[] = {"Cyclic(12)",  "Direct(Cyclic(6),Cyclic(4))", "Direct(Cyclic(2),Cyclic(2),Cyclic(3))",
                         "Direct(Cyclic(9),Cyclic(3))", "Cyclic(30)", "Direct(Cyclic(10),Cyclic(15))",
                         "Direct(Cyclic(2),Cyclic(3))", "Direct(Cyclic(4),Cyclic(4),Cyclic(5))"};
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto t = table_of(specs[rng() % std::size(specs)]);
    auto h = ElementSet::full(t);
    std::vector<ElemId> x = t->generator_ids();
    std::size_t extra = rng() % 4;
    for (std::size_t j = 0; j < extra; ++j) x.push_back(random_elem(*t, rng));
    std::shuffle(x.begin(), x.end(), rng);
    std::uint64_t q = 1 + rng() % 60;
    std::size_t r = min_generators(t);
    auto g = abelian_q_generation(h, x, q, r);
    std::vector<ElemId> seeds = g.x;
    for (ElemId y : g.y) seeds.push_back(t->pow(y, static_cast<long long>(q)));
    bool subset = std::all_of(g.x.begin(), g.x.end(), [&](ElemId e) { return std::find(x.begin(), x.end(), e) != x.end(); });
    bool ok = g.verified && subset && g.y.size() <= r && g.x.size() <= r * distinct_prime_divisors(q) &&
              subgroup(t, seeds).size() == t->order();
    rec.check(ok, [&] { return t->name() + " q=" + std::to_string(q) + " X=" + describe(x); });
  }
}

// ---------------------------------------------------------------------------

void suite_lemma_5_3(const SuiteOptions&, std::uint64_t trials, Recorder& rec) {
  std::uint64_t groups = 0;
  for (const char* spec : {"Alt(5)", "Sym(4)", "Alt(4)"}) {
    if (groups >= trials) break;
    ++groups;
    auto t = table_of(spec);
    auto maxes = maximal_subgroups(t);
    std::vector<ElementSet> normals;
    for (const auto& ns : normal_subgroups(t))
      if (ns.set.size() > 1) normals.push_back(ns.set);
    std::uint64_t triples = 0;
    for (const auto& m : maxes)
      for (const auto& n : normals) {
        if (m.size() * n.size() / (m & n).size() != t->order()) continue;
        for (ElemId y = 0; y < t->order(); ++y) {
          auto r = v_identity_check(m, n, y);
          triples += std::max<std::size_t>(1, r.formula.size());
          rec.check(r.agree, [&] {
            return std::string(spec) + " |M|=" + std::to_string(m.size()) + " |N|=" + std::to_string(n.size()) +
                   " y=" + std::to_string(y);
          });
        }
      }
    rec.metric(std::string("triples_") + spec, static_cast<long long>(triples));
  }
}

// Subgroups B_i of one common order with comp_i(B_{sigma(i)}) = B_i, one seed per cycle.
std::optional<std::vector<ElementSet>> invariant_product(const TablePtr&, const std::vector<std::size_t>& sigma,
                                                         const std::vector<Automorphism>& comps,
                                                         const std::vector<ElementSet>& proper, std::mt19937_64& rng) {
  const std::size_t t = sigma.size();
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::size_t order = attempt == 7 ? 1 : proper[rng() % proper.size()].size();
    std::vector<const ElementSet*> candidates;
    for (const auto& s : proper)
      if (s.size() == order) candidates.push_back(&s);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::vector<std::optional<ElementSet>> b(t);
    bool ok = true;
    for (std::size_t start = 0; start < t && ok; ++start) {
      if (b[start]) continue;
      std::vector<std::size_t> cyc{start};
      while (sigma[cyc.back()] != start) cyc.push_back(sigma[cyc.back()]);
      bool done = false;
      for (const ElementSet* seed : candidates) {
        std::vector<ElementSet> vals(cyc.size());
        vals[0] = *seed;
        // B_{c_j} = comp_{c_j}(B_{c_{j+1}}), walking the cycle backwards from c_0.
        ElementSet cur = *seed;
        for (std::size_t j = cyc.size(); j-- > 1;) {
          cur = apply(comps[cyc[j]], cur);
          vals[j] = cur;
        }
        if (!(apply(comps[cyc[0]], cyc.size() > 1 ? vals[1] : vals[0]) == *seed)) continue;
        for (std::size_t j = 0; j < cyc.size(); ++j) b[cyc[j]] = vals[j];
        done = true;
        break;
      }
      ok = done;
    }
    if (!ok) continue;
    std::vector<ElementSet> out;
    for (auto& x : b) out.push_back(*x);
    return out;
  }
  return std::nullopt;
}

void suite_lemma_5_5(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  const char* specs[] = {"Alt(4)", "Sym(4)", "Alt(5)", "Sym(3)", "Dihedral(5)"};
  std::uint64_t product_cases = 0, diagonal_cases = 0;
  for (std::uint64_t attempts = 0; rec.checked() < trials && attempts < attempt_cap(trials); ++attempts) {
    const std::string spec = specs[rng() % std::size(specs)];
    auto a = table_of(spec);
    std::size_t t = 2 + rng() % (a->order() > 30 ? 2 : 3);
    std::vector<std::size_t> sigma(t);
    for (std::size_t i = 0; i < t; ++i) sigma[i] = i;
    std::shuffle(sigma.begin(), sigma.end(), rng);
    auto auts = automorphism_group(a);
    const bool diagonal = t >= 3 && rng() % 4 == 0;
    std::vector<Automorphism> comps;
    if (diagonal) {
      comps.assign(t, auts[rng() % auts.size()]);
    } else {
      for (std::size_t i = 0; i < t; ++i) comps.push_back(auts[rng() % auts.size()]);
    }
    SubdirectReport r;
    if (diagonal) {
      r = subdirect_diagonal_check(a, sigma, comps);
      ++diagonal_cases;
    } else {
      std::vector<ElementSet> proper;
      for (const auto& s : all_subgroups(a).subgroups)
        if (s.size() < a->order()) proper.push_back(s);
      auto b = invariant_product(a, sigma, comps, proper, rng);
      if (!b) continue;
      r = subdirect_product_check(a, sigma, comps, *b);
      ++product_cases;
    }
    rec.check(r.pass, [&] {
      return spec + " t=" + std::to_string(t) + " moved=" + std::to_string(r.moved) + " lhs=" + std::to_string(r.lhs);
    });
  }
  rec.metric("product_configurations", static_cast<long long>(product_cases));
  rec.metric("diagonal_configurations", static_cast<long long>(diagonal_cases));
}

void suite_prop_5_1(const SuiteOptions&, std::uint64_t trials, Recorder& rec) {
  std::uint64_t done = 0;
  for (const auto& inst : builtin_soluble_instances()) {
    if (done >= trials) break;
    ++done;
    auto q = find_qmn(ElementSet::full(inst.g));
    NongeneratingConstants c;
    auto probe = count_nongenerating(*q, inst.y, c);
    c.k = probe.k_on_quotient;
    auto rep = count_nongenerating(*q, inst.y, c);
    rec.check(rep.pass, [&] { return inst.name + " count=" + std::to_string(rep.count); });
    rec.metric(inst.name + ".count", static_cast<long long>(rep.count));
    rec.metric(inst.name + ".total", static_cast<long long>(rep.total));
    rec.metric(inst.name + ".k", static_cast<long long>(rep.k_on_quotient));
    std::ostringstream e;
    e << rep.exponent;
    rec.metric(inst.name + ".exponent", e.str());
  }
  if (done < trials) {
    auto t = table_of("Alt(5)");
    auto q = find_qmn(ElementSet::full(t));
    std::vector<ElemId> y{t->generator(0), t->generator(1)};
    auto rep = count_nongenerating(*q, y, NongeneratingConstants{});
    rec.check(rep.pass && rep.strict_ok, [&] { return std::string("Alt(5) count=") + std::to_string(rep.count); });
    rec.metric("Alt(5).count", static_cast<long long>(rep.count));
    rec.metric("Alt(5).total", static_cast<long long>(rep.total));
  }
}

void suite_prop_7_1(const SuiteOptions&, std::uint64_t trials, Recorder& rec) {
  auto all = builtin_soluble_instances();
  all.push_back(extraspecial_instance());
  std::uint64_t done = 0;
  for (const auto& inst : all) {
    if (done >= trials) break;
    ++done;
    auto fa = phi_fibres(inst.n, inst.z, inst.x);
    const char* kind = fa.fibre_case == FibreCase::Abelian ? "abelian"
                       : fa.fibre_case == FibreCase::CommutatorOrderTwo ? "commutator-order-two"
                                                                        : "brute-force";
    rec.metric(inst.name + ".case", std::string(kind));
    rec.metric(inst.name + ".kappas", static_cast<long long>(fa.k_elements.size()));
    bool all_bounds = true;
    for (const auto& [kappa, parts] : fa.decompositions)
      for (std::size_t i = 0; i < 3; ++i) all_bounds = all_bounds && fa.report(i, kappa).pass;
    rec.check(fa.pass && all_bounds && fa.decompositions.size() == fa.k_elements.size(),
              [&] { return inst.name + " failures=" + std::to_string(fa.failures.size()); });
    if (fa.fibre_case == FibreCase::CommutatorOrderTwo) {
      for (std::size_t i = 0; i < 3; ++i) {
        auto b = bilinear_extract(inst.n, inst.z, inst.x[i]);
        rec.check(b.formula_matches_polarization && b.displayed_defect_is_diagonal && b.bilinear && b.quadratic &&
                      b.fibre_bound,
                  [&] { return inst.name + " quadratic form of map " + std::to_string(i + 1); });
        if (i == 0) rec.metric(inst.name + ".dim_v", static_cast<long long>(b.dim_v));
        rec.metric(inst.name + ".map" + std::to_string(i + 1) + ".displayed_form_mismatches",
                   static_cast<long long>(b.displayed_mismatches));
      }
    }
  }
}

// ---------------------------------------------------------------------------

std::size_t count_parameter(const GammaWord& w, const Symbol& s) {
  std::size_t c = 0;
  for (const auto& l : w.letters())
    if (l.symbol == s) ++c;
  return c;
}

void suite_section_8(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  std::mt19937_64 rng(o.seed);
  std::uint64_t words = 0, fallbacks = 0;
  for (std::uint64_t attempts = 0; words < trials && attempts < attempt_cap(trials); ++attempts) {
    int m = 2 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    std::size_t k = 1 + rng() % 2;
    int lo = n + 2 * static_cast<int>(k);
    if (lo > m * n) continue;
    RandomWordSpec spec;
    spec.m = m;
    spec.n = n;
    spec.num_variables = lo + static_cast<int>(rng() % static_cast<unsigned>(m * n - lo + 1));
    spec.num_parameters = static_cast<int>(rng() % 3);
    spec.num_gamma = 2;
    auto v = random_balanced_word(rng, spec);
    if (!v) continue;
    ++words;
    auto r = extract_k_twisted(*v, m, n, k);
    fallbacks += r.fallback_choices;
    GammaWord prod;
    for (const auto& s : r.steps) prod *= twisted_commutator(s.a, s.b, s.xi, s.eta);
    bool identity = r.steps.size() == k && equals_in_F(*v, prod * r.rest);
    bool sup = hat(r.rest).variable_support().size() + 2 * k == hat(*v).variable_support().size();
    bool colour = is_balanced(hat(r.rest)) && leq_Ln(colour_type(hat(r.rest)), m, n);
    bool params = true;
    for (const auto& s : v->symbols())
      if (s.kind == SymbolKind::Parameter) params = params && count_parameter(*v, s) == count_parameter(r.rest, s);
    bool cert = true;
    try {
      auto family = replay_certificate(r.certificate);
      for (std::size_t j = 1; j <= k; ++j)
        cert = cert && equals_in_F(family.at("xi" + std::to_string(j)), r.steps[j - 1].xi) &&
               equals_in_F(family.at("eta" + std::to_string(j)), r.steps[j - 1].eta);
    } catch (const std::exception&) {
      cert = false;
    }
    const std::string text = v->to_string();
    rec.check(identity, [&] { return "identity: " + text; });
    rec.check(sup, [&] { return "support drop: " + text; });
    rec.check(colour, [&] { return "colour type: " + text; });
    rec.check(params, [&] { return "parameter multiplicity: " + text; });
    rec.check(cert, [&] { return "independence certificate: " + text; });
  }
  rec.metric("words", static_cast<long long>(words));
  rec.metric("fallback_decompositions", static_cast<long long>(fallbacks));

  // Concrete evaluation in Alt(5) with conjugation by Sym(5).
  auto t = table_of("Alt(5)");
  std::vector<Permutation> conj = {Permutation::from_cycles(5, "(0 1)"), Permutation::from_cycles(5, "(0 1 2 3 4)")};
  Interpretation base(t);
  for (std::size_t g = 0; g < conj.size(); ++g)
    base.set_generator(static_cast<int>(g + 1), Automorphism::from_conjugation(t, conj[g]));
  std::uint64_t concrete = 0;
  const std::uint64_t wanted = trials / 2;
  RandomWordSpec spec;
  spec.m = 2;
  spec.n = 4;
  spec.num_variables = 6;
  for (std::uint64_t attempts = 0; concrete < wanted && attempts < attempt_cap(wanted); ++attempts) {
    auto v = random_balanced_word(rng, spec);
    if (!v) continue;
    ++concrete;
    auto r = extract_k_twisted(*v, spec.m, spec.n, 1);
    Interpretation in = base;
    for (const auto& s : v->symbols()) in.set(s, random_elem(*t, rng));
    // Letter-by-letter evaluation on permutations.
    Permutation direct = Permutation::identity(5);
    for (const auto& l : v->letters()) {
      Permutation p = t->permutation(in.get(l.symbol));
      for (int g : l.exponent.letters()) {
        const Permutation& c = conj[static_cast<std::size_t>(std::abs(g) - 1)];
        p = g > 0 ? conjugate(p, c) : conjugate(p, c.inverse());
      }
      direct = direct * (l.sign > 0 ? p : p.inverse());
    }
    ElemId value = in.evaluate(*v);
    const auto& st = r.steps[0];
    ElemId xi = in.evaluate(st.xi), eta = in.evaluate(st.eta);
    ElemId tw = t->mul(t->mul(t->inv(xi), t->inv(eta)), t->mul(in.apply(st.a, xi), in.apply(st.b, eta)));
    Interpretation back = base;
    for (const auto& s : r.rest.symbols()) back.set(s, in.get(s));
    std::map<std::string, ElemId> members = {{"xi1", random_elem(*t, rng)}, {"eta1", random_elem(*t, rng)}};
    solve_certificate(r.certificate, members, back);
    bool ok = t->permutation(value) == direct && t->mul(tw, in.evaluate(r.rest)) == value &&
              back.evaluate(st.xi) == members["xi1"] && back.evaluate(st.eta) == members["eta1"];
    rec.check(ok, [&] { return "concrete evaluation: " + v->to_string(); });
  }
  rec.metric("concrete_evaluations", static_cast<long long>(concrete));
}

// ---------------------------------------------------------------------------

Actor permuting(const TablePtr& t, std::vector<std::size_t> sigma, const Automorphism& comp) {
  std::vector<Automorphism> comps(sigma.size(), comp);
  (void)t;
  return Actor(std::move(sigma), std::move(comps));
}

Automorphism conj_by(const TablePtr& t, const char* cycles) {
  return Automorphism::from_conjugation(t, Permutation::from_cycles(5, cycles));
}

void suite_prop_9_1(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  auto t = table_of("Alt(5)");
  auto id = Automorphism::identity(t);
  SemisimpleAction act{t, 2, {Actor::identity(t, 2), permuting(t, {1, 0}, id), permuting(t, {1, 0}, conj_by(t, "(0 1)"))}};
  std::vector<std::size_t> g{1, 1, 2, 1, 2, 1, 0};
  CommutatorSolver solver(act, g, 0);
  rec.metric("D", static_cast<long long>(solver.report().D));
  rec.metric("cycle_sum", static_cast<long long>(solver.report().cycle_sum));
  rec.metric("bound", static_cast<long long>(solver.report().bound));
  const std::uint64_t total = act.order();
  const bool exhaustive = trials >= total;
  rec.metric("exhaustive", exhaustive);
  std::mt19937_64 rng(o.seed);
  const std::uint64_t count = exhaustive ? total : trials;
  for (std::uint64_t i = 0; i < count; ++i) {
    NElem kappa = exhaustive ? n_from_index(*t, 2, i) : n_random(*t, 2, rng);
    bool ok = false;
    try {
      auto u = solver.solve(kappa);
      NElem prod = act.identity();
      for (std::size_t j = 0; j < g.size(); ++j) prod = act.mul(prod, act.commutator(u[j], act.actors[g[j]]));
      ok = prod == kappa;
    } catch (const std::exception&) {
      ok = false;
    }
    rec.check(ok, [&] { return "kappa=" + describe(kappa); });
  }
}

void suite_prop_10_2(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  auto t = table_of("Alt(5)");
  auto id = Automorphism::identity(t);
  struct Config {
    std::string name;
    SemisimpleAction act;
    std::size_t q;
    std::vector<std::size_t> pattern;
  };
  SemisimpleAction one{t, 1, {Actor::identity(t, 1), Actor({0}, {conj_by(t, "(0 1)")})}};
  SemisimpleAction two{t, 2, {Actor::identity(t, 2), permuting(t, {1, 0}, id), permuting(t, {1, 0}, conj_by(t, "(0 1)"))}};
  std::vector<Config> configs{{"r1-q2", one, 2, {0, 1}},
                              {"r1-q3", one, 3, {0, 1, 1}},
                              {"r2-q2", two, 2, {1, 0, 2}},
                              {"r2-q3", two, 3, {1, 2}},
                              {"r2-q3-mixed", two, 3, {1, 1, 0}}};
  std::mt19937_64 rng(o.seed);
  for (const auto& cfg : configs) {
    EffectiveConstants c;
    c.M = empirical_M(t, cfg.q);
    if (c.M == 0) {
      rec.check(false, [&] { return cfg.name + ": no power-twist cover"; });
      continue;
    }
    std::vector<std::size_t> h;
    for (std::size_t i = 0; i < c.z(cfg.q); ++i) h.push_back(cfg.pattern[i % cfg.pattern.size()]);
    PowerSolver solver(cfg.act, h, cfg.q, c, true, o.seed);
    rec.metric(cfg.name + ".M", static_cast<long long>(c.M));
    rec.metric(cfg.name + ".m", static_cast<long long>(h.size()));
    rec.metric(cfg.name + ".type_one", static_cast<long long>(solver.report().type_one));
    rec.metric(cfg.name + ".type_two", static_cast<long long>(solver.report().type_two));
    for (std::uint64_t i = 0; i < trials; ++i) {
      NElem kappa = n_random(*t, cfg.act.r, rng);
      bool ok = false;
      try {
        auto a = solver.solve(kappa);
        // prod (a_i h_i)^q = kappa prod h_i^q, evaluated in N x| Aut(N).
        GElem lhs = g_from_n(t, n_identity(cfg.act.r)), rhs = g_from_n(t, kappa);
        for (std::size_t j = 0; j < h.size(); ++j) {
          GElem hj = g_from_actor(cfg.act.actors[h[j]]);
          lhs = g_mul(lhs, g_pow(g_mul(g_from_n(t, a[j]), hj), static_cast<long long>(cfg.q)));
          rhs = g_mul(rhs, g_pow(hj, static_cast<long long>(cfg.q)));
        }
        ok = solver.psi(a) == kappa && lhs.n == rhs.n && g_action(lhs) == g_action(rhs);
      } catch (const std::exception&) {
        ok = false;
      }
      rec.check(ok, [&] { return cfg.name + " kappa=" + describe(kappa); });
    }
  }
}

// Brute-force perfect matching of all women by backtracking.
bool brute_perfect(const std::vector<std::uint32_t>& knows, std::size_t w, std::uint32_t used) {
  if (w == knows.size()) return true;
  for (std::uint32_t avail = knows[w] & ~used; avail; avail &= avail - 1) {
    std::uint32_t bit = avail & (~avail + 1);
    if (brute_perfect(knows, w + 1, used | bit)) return true;
  }
  return false;
}

// Every bipartite graph on at most max_vertices vertices, up to relabelling
// the women: neighbourhood masks are enumerated as non-decreasing sequences.
void suite_lemma_10_3(const SuiteOptions&, std::uint64_t trials, Recorder& rec) {
  const std::size_t max_vertices = std::min<std::uint64_t>(trials, 10);
  std::uint64_t graphs = 0, perfect = 0;
  for (std::size_t women = 1; women < max_vertices; ++women)
    for (std::size_t men = 1; women + men <= max_vertices; ++men) {
      const std::uint32_t masks = 1u << men;
      std::vector<std::uint32_t> seq(women, 0);
      std::vector<std::vector<std::size_t>> knows(women);
      while (true) {
        for (std::size_t w = 0; w < women; ++w) {
          knows[w].clear();
          for (std::size_t m = 0; m < men; ++m)
            if (seq[w] >> m & 1u) knows[w].push_back(m);
        }
        auto r = hall_matching(men, knows);
        bool expect = brute_perfect(seq, 0, 0);
        bool ok = r.perfect == expect;
        if (ok && r.perfect) {
          std::uint32_t used = 0;
          for (std::size_t w = 0; w < women && ok; ++w) {
            int m = r.assignment[w];
            ok = m >= 0 && (seq[w] >> m & 1u) && !(used >> m & 1u);
            if (ok) used |= 1u << m;
          }
        } else if (ok) {
          std::uint32_t nb = 0;
          for (std::size_t w : r.deficient) nb |= seq[w];
          ok = !r.deficient.empty() && static_cast<std::size_t>(std::popcount(nb)) < r.deficient.size();
        }
        ++graphs;
        if (expect) ++perfect;
        rec.check(ok, [&] {
          std::ostringstream s;
          s << women << "x" << men << " masks";
          for (auto x : seq) s << " " << x;
          return s.str();
        });
        std::size_t pos = women;
        while (pos > 0 && seq[pos - 1] == masks - 1) --pos;
        if (pos == 0) break;
        ++seq[pos - 1];
        for (std::size_t j = pos; j < women; ++j) seq[j] = seq[pos - 1];
      }
    }
  rec.metric("max_vertices", static_cast<long long>(max_vertices));
  rec.metric("graphs", static_cast<long long>(graphs));
  rec.metric("perfect", static_cast<long long>(perfect));
}

void suite_prop_11_1(const SuiteOptions& o, std::uint64_t trials, Recorder& rec) {
  auto t = table_of("Alt(5)");
  auto id = Automorphism::identity(t);
  auto odd = conj_by(t, "(0 1)");
  auto inner = conj_by(t, "(0 1 2)");
  std::vector<std::pair<Actor, Actor>> pairs{
      {permuting(t, {1, 0}, odd), Actor::identity(t, 2)},
      {Actor::identity(t, 2), permuting(t, {1, 0}, id)},
      {Actor({0, 1}, {odd, inner}), permuting(t, {1, 0}, odd)},
      {permuting(t, {0, 1}, inner), Actor({1, 0}, {id, odd})},
  };
  TwistedSystemSolver solver(t, 2, pairs);
  rec.metric("width", static_cast<long long>(solver.width()));
  for (const auto& c : solver.certificates())
    rec.check(c.balanced && c.class_two_ok && c.parameters_ok,
              [&] { return "block certificate for pair " + std::to_string(c.pair); });
  rec.metric("block_certificates", static_cast<long long>(solver.certificates().size()));
  std::mt19937_64 rng(o.seed);
  for (std::uint64_t i = 0; i < trials; ++i) {
    NElem kappa = n_random(*t, 2, rng);
    bool ok = false;
    try {
      auto sol = solver.solve(kappa);
      NElem prod = n_identity(2);
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        NElem tw = n_mul(*t, n_mul(*t, n_inv(*t, sol.x[j]), n_inv(*t, sol.y[j])),
                         n_mul(*t, pairs[j].first.apply(sol.x[j]), pairs[j].second.apply(sol.y[j])));
        prod = n_mul(*t, prod, tw);
      }
      ok = prod == kappa;
    } catch (const std::exception&) {
      ok = false;
    }
    rec.check(ok, [&] { return "kappa=" + describe(kappa); });
  }
}

using SuiteFn = void (*)(const SuiteOptions&, std::uint64_t, Recorder&);

struct Registered {
  std::string name;
  SuiteFn fn;
  std::uint64_t default_trials;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> r{
      {"lemma-2.2", suite_hamidoune, 1000},   {"lemma-2.5", suite_lemma_2_5, 200},
      {"lemma-3.2", suite_lemma_3_2, 200},    {"lemma-4.3", suite_lemma_4_3, 500},
      {"lemma-4.4", suite_lemma_4_4, 500},    {"lemma-5.3", suite_lemma_5_3, 3},
      {"lemma-5.5", suite_lemma_5_5, 200},    {"prop-5.1", suite_prop_5_1, 7},
      {"prop-7.1", suite_prop_7_1, 7},        {"section-8", suite_section_8, 1000},
      {"prop-9.1", suite_prop_9_1, 3600},     {"prop-10.2", suite_prop_10_2, 50},
      {"lemma-10.3", suite_lemma_10_3, 10},   {"prop-11.1", suite_prop_11_1, 100},
      {"three-squares", suite_three_squares, 1000},
  };
  return r;
}

}  // namespace

const std::vector<CatalogEntry>& group_catalog() {
  static const std::vector<CatalogEntry> cat = [] {
    std::vector<std::string> specs{
        "Cyclic(1)",  "Cyclic(2)",  "Cyclic(3)",   "Cyclic(4)",   "Cyclic(6)",  "Cyclic(12)", "Sym(3)",
        "Sym(4)",     "Sym(5)",     "Sym(6)",      "Sym(7)",      "Alt(4)",     "Alt(5)",     "Alt(6)",
        "Alt(7)",     "Dihedral(3)", "Dihedral(4)", "Dihedral(5)", "Dihedral(6)", "Dihedral(8)", "Dihedral(12)",
        "SL(2,3)",    "SL(2,4)",    "SL(2,5)",     "SL(2,7)",     "SL(2,8)",    "SL(2,9)",    "SL(2,11)",
        "SL(2,13)",   "Heisenberg(3)", "Heisenberg(5)", "Heisenberg(7)", "Direct(Sym(3),Sym(3))",
        "Direct(Alt(5),Cyclic(2))", "Direct(Sym(4),Cyclic(3))", "Direct(Dihedral(4),Cyclic(2))",
        "Direct(SL(2,5),Cyclic(3))", "Direct(Alt(5),Alt(5))", "Direct(Cyclic(2),Cyclic(2),Cyclic(2))",
        "FromGenerators(6; (0 1 2), (0 1), (0 3)(1 4)(2 5))"};
    std::vector<CatalogEntry> out;
    for (auto& s : specs) out.push_back({s, table_of(s)->order()});
    return out;
  }();
  return cat;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& r : registry()) n.push_back(r.name);
    return n;
  }();
  return names;
}

std::optional<std::string> canonical_suite(const std::string& name) {
  if (name == "hamidoune") return std::string("lemma-2.2");
  for (const auto& r : registry())
    if (r.name == name) return r.name;
  return std::nullopt;
}

std::uint64_t default_trials(const std::string& suite) {
  auto c = canonical_suite(suite);
  if (!c) throw InputError("unknown suite '" + suite + "'");
  for (const auto& r : registry())
    if (r.name == *c) return r.default_trials;
  return 0;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  auto c = canonical_suite(name);
  if (!c) throw InputError("unknown suite '" + name + "'");
  for (const auto& r : registry()) {
    if (r.name != *c) continue;
    const std::uint64_t trials = opts.trials.value_or(r.default_trials);
    if (trials == 0) {
      SuiteResult v;
      v.suite = r.name;
      v.seed = opts.seed;
      v.pass = true;
      v.vacuous = true;
      return v;
    }
    Recorder rec(r.name, opts, trials);
    try {
      r.fn(opts, trials, rec);
    } catch (const Recorder::Truncated&) {
    }
    return rec.finish();
  }
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace widthlab

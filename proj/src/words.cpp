#include "widthlab/words.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <thread>

#include "widthlab/error.hpp"
#include "widthlab/subgroups.hpp"

namespace widthlab {

namespace {

using Node = Word::Node;
using NodePtr = Word::NodePtr;
using Kind = Word::Kind;

class WordParser {
 public:
  explicit WordParser(std::string_view s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr w = parse_word();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("word syntax error at position " + std::to_string(pos_) + ": " + msg + " in '" +
                     std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_term_start() {
    skip();
    return pos_ < s_.size() && (s_[pos_] == 'x' || s_[pos_] == '[' || s_[pos_] == '(');
  }
  NodePtr parse_word() {
    std::vector<NodePtr> terms;
    while (at_term_start()) terms.push_back(parse_term());
    if (terms.empty()) fail("expected a term");
    if (terms.size() == 1) return terms.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->children = std::move(terms);
    return n;
  }
  NodePtr parse_term() {
    NodePtr a = parse_atom();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
      skip();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected exponent");
      long long e = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + (s_[pos_++] - '0');
        if (e > 1'000'000'000) fail("exponent too large");
      }
      auto n = std::make_shared<Node>();
      n->kind = Kind::Power;
      n->exponent = neg ? -e : e;
      n->children = {a};
      return n;
    }
    return a;
  }
  NodePtr parse_atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == 'x') {
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected variable index");
      std::size_t v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
        if (v > 1'000'000) fail("variable index too large");
      }
      auto n = std::make_shared<Node>();
      n->kind = Kind::Var;
      n->var = v;
      return n;
    }
    if (c == '[') {
      ++pos_;
      NodePtr u = parse_word();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ',') fail("expected ','");
      ++pos_;
      NodePtr v = parse_word();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Kind::Commutator;
      n->children = {u, v};
      return n;
    }
    if (c == '(') {
      ++pos_;
      NodePtr w = parse_word();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return w;
    }
    fail("expected variable, '[' or '('");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string print(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Var:
      return "x" + std::to_string(n->var);
    case Kind::Commutator:
      return "[" + print(n->children[0]) + "," + print(n->children[1]) + "]";
    case Kind::Power: {
      const auto& b = n->children[0];
      std::string base = print(b);
      if (b->kind == Kind::Product || b->kind == Kind::Power) base = "(" + base + ")";
      return base + "^" + std::to_string(n->exponent);
    }
    case Kind::Product: {
      std::string out;
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        if (i) out += " ";
        const auto& c = n->children[i];
        out += c->kind == Kind::Product ? "(" + print(c) + ")" : print(c);
      }
      return out;
    }
  }
  return {};
}

bool node_equal(const NodePtr& a, const NodePtr& b) {
  if (a->kind != b->kind || a->var != b->var || a->exponent != b->exponent ||
      a->children.size() != b->children.size())
    return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!node_equal(a->children[i], b->children[i])) return false;
  return true;
}

void collect_vars(const NodePtr& n, std::vector<std::size_t>& out) {
  if (n->kind == Kind::Var) out.push_back(n->var);
  for (const auto& c : n->children) collect_vars(c, out);
}

}  // namespace

Word::Word(NodePtr root) : root_(std::move(root)) { compile(); }

Word Word::parse(std::string_view text) { return Word(WordParser(text).parse_all()); }

Word Word::var(std::size_t i) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = i;
  return Word(n);
}

Word Word::product(const std::vector<Word>& factors) {
  if (factors.empty()) throw InputError("empty product");
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  for (const auto& f : factors) n->children.push_back(f.root_);
  return Word(n);
}

Word Word::power(const Word& w, long long e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = e;
  n->children = {w.root_};
  return Word(n);
}

Word Word::commutator(const Word& u, const Word& v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Commutator;
  n->children = {u.root_, v.root_};
  return Word(n);
}

std::string Word::to_string() const { return print(root_); }

bool operator==(const Word& a, const Word& b) { return node_equal(a.root_, b.root_); }

void Word::compile() {
  vars_.clear();
  collect_vars(root_, vars_);
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  program_.clear();
  std::function<void(const NodePtr&)> emit = [&](const NodePtr& n) {
    switch (n->kind) {
      case Kind::Var: {
        auto it = std::lower_bound(vars_.begin(), vars_.end(), n->var);
        program_.push_back({Op::Push, static_cast<long long>(it - vars_.begin())});
        break;
      }
      case Kind::Product:
        emit(n->children[0]);
        for (std::size_t i = 1; i < n->children.size(); ++i) {
          emit(n->children[i]);
          program_.push_back({Op::Mul, 0});
        }
        break;
      case Kind::Power:
        emit(n->children[0]);
        program_.push_back({Op::Pow, n->exponent});
        break;
      case Kind::Commutator:
        emit(n->children[0]);
        emit(n->children[1]);
        program_.push_back({Op::Comm, 0});
        break;
    }
  };
  emit(root_);
}

ElemId Word::evaluate(const ElementTable& t, const std::vector<ElemId>& values) const {
  if (values.size() != vars_.size()) throw InputError("wrong number of values for word evaluation");
  ElemId stack[64] = {};
  std::vector<ElemId> big;
  ElemId* st = stack;
  if (program_.size() > 64) {
    big.resize(program_.size());
    st = big.data();
  }
  std::size_t sp = 0;
  for (const auto& op : program_) {
    switch (op.code) {
      case Op::Push:
        st[sp++] = values[static_cast<std::size_t>(op.arg)];
        break;
      case Op::Mul:
        --sp;
        st[sp - 1] = t.mul(st[sp - 1], st[sp]);
        break;
      case Op::Pow:
        st[sp - 1] = t.pow(st[sp - 1], op.arg);
        break;
      case Op::Comm:
        --sp;
        st[sp - 1] = t.comm(st[sp - 1], st[sp]);
        break;
    }
  }
  return st[0];
}

Word gamma_word(std::size_t k) {
  if (k < 1) throw InputError("gamma_k needs k >= 1");
  Word w = Word::var(1);
  for (std::size_t i = 2; i <= k; ++i) w = Word::commutator(w, Word::var(i));
  return w;
}

ValueSet value_set(const TablePtr& table, const Word& w, const ValueSetOptions& opts) {
  const auto& t = *table;
  ValueSet res{ElementSet::trivial(table), false, 0};
  const std::size_t k = w.variables().size();
  const std::size_t n = t.order();
  auto add = [&](ElemId v) {
    res.set.insert(v);
    res.set.insert(t.inv(v));
  };
  if (opts.samples) {
    res.sampled = true;
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<ElemId> vals(k);
    for (std::uint64_t s = 0; s < *opts.samples; ++s) {
      for (auto& v : vals) v = static_cast<ElemId>(pick(rng));
      add(w.evaluate(t, vals));
      ++res.evaluations;
    }
    return res;
  }
  // [xa,xb] with distinct variables: the value set is {x^-1 x^y}, i.e. x^-1 c
  // for c in the class of x, which needs only sum |C|^2 evaluations.
  const auto& root = w.root();
  if (root->kind == Word::Kind::Commutator && root->children[0]->kind == Word::Kind::Var &&
      root->children[1]->kind == Word::Kind::Var && root->children[0]->var != root->children[1]->var) {
    for (const auto& cls : conjugacy_classes(table))
      for (ElemId x : cls) {
        ElemId xi = t.inv(x);
        for (ElemId c : cls) {
          add(t.mul(xi, c));
          if (++res.evaluations > opts.budget_evals) throw CapacityError("evaluation budget exhausted");
        }
      }
    return res;
  }
  long double total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<long double>(n);
  if (total > static_cast<long double>(opts.budget_evals))
    throw CapacityError("exhaustive evaluation needs " + std::to_string(static_cast<double>(total)) +
                        " evaluations, budget is " + std::to_string(opts.budget_evals));
  std::vector<ElemId> vals(k, 0);
  for (;;) {
    add(w.evaluate(t, vals));
    ++res.evaluations;
    std::size_t i = 0;
    while (i < k && ++vals[i] == n) vals[i++] = 0;
    if (i == k) break;
  }
  return res;
}

ElementSet verbal_subgroup(const TablePtr& table, const Word& w, const ValueSetOptions& opts) {
  auto vs = value_set(table, w, opts);
  auto elems = vs.set.elements();
  return subgroup(table, elems);
}

WidthResult width(const ElementSet& x, const ElementSet& target, unsigned jobs) {
  const auto& table = x.table();
  const auto& t = *table;
  if (!x.contains(ElementTable::identity())) throw InputError("width: X must contain the identity");
  auto xs = x.elements();
  if (!(subgroup(table, xs) == target)) throw InputError("width: target is not the subgroup generated by X");
  WidthResult res;
  if (target.size() == 1) return res;
  ElementSet reached = x;
  std::vector<ElemId> frontier = xs;
  res.width = 1;
  res.frontiers.push_back(reached.size());
  jobs = std::max(1u, jobs);
  while (reached.size() < target.size()) {
    std::vector<ElemId> next;
    if (jobs == 1 || frontier.size() < 2 * jobs) {
      for (ElemId f : frontier)
        for (ElemId y : xs) {
          ElemId p = t.mul(f, y);
          if (reached.insert(p)) next.push_back(p);
        }
    } else {
      std::vector<std::vector<ElemId>> parts(jobs);
      std::vector<std::thread> pool;
      std::size_t chunk = (frontier.size() + jobs - 1) / jobs;
      for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back([&, j] {
          std::size_t lo = j * chunk, hi = std::min(frontier.size(), lo + chunk);
          for (std::size_t i = lo; i < hi; ++i)
            for (ElemId y : xs) {
              ElemId p = t.mul(frontier[i], y);
              if (!reached.contains(p)) parts[j].push_back(p);
            }
        });
      for (auto& th : pool) th.join();
      for (auto& part : parts)
        for (ElemId p : part)
          if (reached.insert(p)) next.push_back(p);
    }
    if (next.empty()) throw InvariantError("width search stalled before reaching the target");
    frontier = std::move(next);
    ++res.width;
    res.frontiers.push_back(reached.size());
  }
  return res;
}

ElementSet power_set(const ElementSet& x, std::size_t n) {
  ElementSet cur = ElementSet::trivial(x.table());
  for (std::size_t i = 0; i < n; ++i) cur = product_set(cur, x);
  return cur;
}

std::vector<std::size_t> power_set_sizes(const ElementSet& x, std::size_t steps) {
  std::vector<std::size_t> out;
  ElementSet cur = ElementSet::trivial(x.table());
  for (std::size_t i = 0; i < steps; ++i) {
    ElementSet next = product_set(cur, x);
    out.push_back(next.size());
    if (next == cur) break;
    cur = std::move(next);
  }
  return out;
}

WordWidth word_width(const TablePtr& table, const Word& w, const ValueSetOptions& opts, unsigned jobs) {
  WordWidth res;
  res.values = value_set(table, w, opts);
  auto elems = res.values.set.elements();
  ElementSet verbal = subgroup(table, elems);
  res.verbal_order = verbal.size();
  res.width = width(res.values.set, verbal, jobs);
  return res;
}

HamidouneResult hamidoune_check(const ElementSet& x, std::size_t r) {
  const auto& table = x.table();
  if (!x.contains(ElementTable::identity())) throw PreconditionError("X must contain the identity");
  auto xs = x.elements();
  ElementSet whole = ElementSet::full(table);
  if (!(subgroup(table, xs) == whole)) throw PreconditionError("X does not generate the group");
  if (table->order() > r * x.size()) throw PreconditionError("|G| exceeds r|X|");
  HamidouneResult res;
  res.bound = 2 * r;
  res.steps = width(x, whole).width;
  res.holds = res.steps <= res.bound;
  return res;
}

std::vector<ElemId> tau_chain(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v) {
  if (g.size() != v.size()) throw InputError("tau_chain: length mismatch");
  std::vector<ElemId> out(g.size());
  ElemId acc = ElementTable::identity();
  for (std::size_t j = 0; j < g.size(); ++j) {
    out[j] = t.mul(v[j], acc);
    acc = t.mul(t.comm(g[j], v[j]), acc);
  }
  return out;
}

ElemId xi(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v) {
  ElemId r = ElementTable::identity();
  for (std::size_t j = 0; j < g.size(); ++j) r = t.mul(r, t.comm(v[j], g[j]));
  return r;
}

ElemId xi_derivative(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v,
                     const std::vector<ElemId>& x) {
  auto tau = tau_chain(t, g, v);
  ElemId r = ElementTable::identity();
  for (std::size_t j = 0; j < g.size(); ++j) r = t.mul(r, t.conj(t.comm(x[j], g[j]), tau[j]));
  return r;
}

bool derivative_identity_holds(const ElementTable& t, const std::vector<ElemId>& g, const std::vector<ElemId>& v,
                               const std::vector<ElemId>& x) {
  std::vector<ElemId> xv(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) xv[j] = t.mul(x[j], v[j]);
  return xi(t, g, xv) == t.mul(xi_derivative(t, g, v, x), xi(t, g, v));
}

bool twogensets_check(const TablePtr& table, const std::vector<ElemId>& g, const std::vector<ElemId>& v) {
  const auto& t = *table;
  auto tau = tau_chain(t, g, v);
  const std::size_t m = g.size();
  std::vector<ElemId> lhs_gens(m), rhs_gens(m);
  for (std::size_t j = 0; j < m; ++j) lhs_gens[j] = t.conj(g[j], tau[j]);
  ElemId tail = ElementTable::identity();  // g_j ... g_m
  for (std::size_t j = m; j-- > 0;) {
    tail = t.mul(g[j], tail);
    rhs_gens[j] = t.conj(g[j], t.mul(v[j], tail));
  }
  ElementSet lhs = subgroup(table, lhs_gens);
  ElemId all = tail;
  ElementSet lhs_conj(table);
  lhs.for_each([&](ElemId a) { lhs_conj.insert(t.conj(a, all)); });
  return lhs_conj == subgroup(table, rhs_gens);
}

bool nilp_comm_check(const ElementSet& h, const std::vector<ElemId>& x, std::size_t n) {
  const auto& table = h.table();
  const auto& t = *table;
  ElementSet whole = ElementSet::full(table);
  if (!is_normal(h)) throw PreconditionError("H is not normal");
  {
    auto gens = generators_of(derived_subgroup(whole));
    gens.insert(gens.end(), x.begin(), x.end());
    if (!(subgroup(table, gens) == whole)) throw PreconditionError("G is not G'<x_1..x_m>");
  }
  ElementSet rhs = ElementSet::trivial(table);
  for (ElemId xi : x) {
    ElementSet hx(table);
    h.for_each([&](ElemId a) { hx.insert(t.comm(a, xi)); });
    rhs = product_set(rhs, hx);
  }
  rhs = product_set(rhs, iterated_bracket(h, whole, n));
  return rhs == bracket(h, whole);
}

long long ceil_rational(const Rational& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(std::stoll(s.substr(0, slash)), den);
  } catch (const std::logic_error&) {
    throw InputError("malformed rational '" + s + "'");
  }
}

DerivedConstants compute_constants(const ConstantsInput& c) {
  if (c.mu_of_q <= 0 || c.epsilon_of_c <= 0) throw InputError("mu(q) and epsilon(c) must be positive");
  if (c.d < 1 || c.D < 0 || c.C0 < 0 || c.M_of_q < 0 || c.q < 1) throw InputError("constants out of range");
  DerivedConstants out;
  const Rational num(8 * c.D + 2);
  auto k_of = [&](const Rational& rate) {
    Rational base = num / rate;
    Rational a = base + Rational(2 * c.d + 2);
    Rational b = base + Rational(2 * c.C0);
    return 1 + ceil_rational(Rational(c.d) * std::max(a, b));
  };
  out.k_dq = k_of(c.mu_of_q);
  out.h1 = 3 * out.k_dq;
  out.Dbar = 4 + 2 * c.D;
  out.z_q = c.M_of_q * out.Dbar * (c.q + out.Dbar);
  out.k_d = 1 + c.d * std::max(2 * c.d + 4, 2 * c.C0 + 2);
  out.h2 = 3 * out.k_d;
  out.k_prime = k_of(c.epsilon_of_c);
  out.h3 = 3 * out.k_prime;
  return out;
}

}  // namespace widthlab

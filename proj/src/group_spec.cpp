#include "widthlab/group_spec.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "widthlab/error.hpp"

namespace widthlab {

namespace {

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

unsigned long parse_uint(const std::string& s, const std::string& ctx) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw InputError("expected a non-negative integer in " + ctx + ", got '" + s + "'");
  if (s.size() > 9) throw InputError("integer too large in " + ctx);
  return std::stoul(s);
}

// Splits on top-level commas.
std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Permutation cycle_on(std::size_t degree, const std::vector<std::size_t>& pts) {
  auto p = Permutation::identity(degree);
  std::vector<Point> im(p.images().begin(), p.images().end());
  for (std::size_t k = 0; k < pts.size(); ++k) im[pts[k]] = static_cast<Point>(pts[(k + 1) % pts.size()]);
  return Permutation(std::move(im));
}

Group make_sym(unsigned n) {
  Group g{"Sym(" + std::to_string(n) + ")", std::max(1u, n), {}};
  if (n >= 2) {
    g.generators.push_back(cycle_on(n, {0, 1}));
    if (n >= 3) {
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      g.generators.push_back(cycle_on(n, all));
    }
  }
  return g;
}

Group make_alt(unsigned n) {
  Group g{"Alt(" + std::to_string(n) + ")", std::max(1u, n), {}};
  if (n >= 3) {
    g.generators.push_back(cycle_on(n, {0, 1, 2}));
    if (n >= 4) {
      std::vector<std::size_t> pts;
      // (0 1 ... n-1) is even for odd n; for even n use (1 2 ... n-1).
      for (unsigned i = (n % 2 == 1 ? 0 : 1); i < n; ++i) pts.push_back(i);
      g.generators.push_back(cycle_on(n, pts));
    }
  }
  return g;
}

Group make_cyclic(unsigned n) {
  if (n == 0) throw InputError("Cyclic(0) is not a finite group");
  Group g{"Cyclic(" + std::to_string(n) + ")", n, {}};
  if (n >= 2) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    g.generators.push_back(cycle_on(n, all));
  }
  return g;
}

Group make_dihedral(unsigned n) {
  if (n == 0) throw InputError("Dihedral(0) is not defined");
  std::string name = "Dihedral(" + std::to_string(n) + ")";
  if (n == 1) return Group{name, 2, {cycle_on(2, {0, 1})}};
  if (n == 2) {
    auto a = Permutation::from_cycles(4, "(0 1)(2 3)");
    auto b = Permutation::from_cycles(4, "(0 2)(1 3)");
    return Group{name, 4, {a, b}};
  }
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  Group g{name, n, {cycle_on(n, all)}};
  std::vector<Point> refl(n);
  for (unsigned i = 0; i < n; ++i) refl[i] = static_cast<Point>((n - i) % n);
  g.generators.push_back(Permutation(refl));
  return g;
}

// SL(2,q) acting on the q^2-1 nonzero vectors of GF(q)^2 (row vectors, v -> vA).
Group make_sl2(unsigned q) {
  FiniteField F(q);
  std::size_t deg = static_cast<std::size_t>(q) * q - 1;
  auto index = [q](unsigned a, unsigned b) { return static_cast<std::size_t>(a) * q + b - 1; };
  auto matrix_perm = [&](unsigned a, unsigned b, unsigned c, unsigned d) {
    std::vector<Point> im(deg);
    for (unsigned x = 0; x < q; ++x)
      for (unsigned y = 0; y < q; ++y) {
        if (x == 0 && y == 0) continue;
        unsigned nx = F.add(F.mul(x, a), F.mul(y, c));
        unsigned ny = F.add(F.mul(x, b), F.mul(y, d));
        im[index(x, y)] = static_cast<Point>(index(nx, ny));
      }
    return Permutation(std::move(im));
  };
  Group g{"SL(2," + std::to_string(q) + ")", deg, {}};
  for (unsigned t : F.prime_basis()) {
    g.generators.push_back(matrix_perm(1, t, 0, 1));
    g.generators.push_back(matrix_perm(1, 0, t, 1));
  }
  return g;
}

// Heisenberg group of order p^3 in its regular action.
Group make_heisenberg(unsigned p) {
  if (!is_prime(p)) throw InputError("Heisenberg(p) requires p prime");
  std::size_t deg = static_cast<std::size_t>(p) * p * p;
  if (deg > 65535) throw InputError("Heisenberg(p): p too large");
  auto idx = [p](unsigned a, unsigned b, unsigned c) { return (static_cast<std::size_t>(a) * p + b) * p + c; };
  auto right_mult = [&](unsigned a2, unsigned b2, unsigned c2) {
    std::vector<Point> im(deg);
    for (unsigned a = 0; a < p; ++a)
      for (unsigned b = 0; b < p; ++b)
        for (unsigned c = 0; c < p; ++c)
          im[idx(a, b, c)] = static_cast<Point>(idx((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p));
    return Permutation(std::move(im));
  };
  return Group{"Heisenberg(" + std::to_string(p) + ")", deg, {right_mult(1, 0, 0), right_mult(0, 1, 0)}};
}

Group parse_stripped(const std::string& s) {
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw InputError("malformed group spec '" + s + "'");
  std::string head = s.substr(0, open);
  std::string body = s.substr(open + 1, s.size() - open - 2);
  if (head == "Sym") return make_sym(static_cast<unsigned>(parse_uint(body, "Sym")));
  if (head == "Alt") return make_alt(static_cast<unsigned>(parse_uint(body, "Alt")));
  if (head == "Cyclic") return make_cyclic(static_cast<unsigned>(parse_uint(body, "Cyclic")));
  if (head == "Dihedral") return make_dihedral(static_cast<unsigned>(parse_uint(body, "Dihedral")));
  if (head == "Heisenberg") return make_heisenberg(static_cast<unsigned>(parse_uint(body, "Heisenberg")));
  if (head == "SL") {
    auto args = split_args(body);
    if (args.size() != 2 || args[0] != "2") throw InputError("only SL(2,q) is supported");
    return make_sl2(static_cast<unsigned>(parse_uint(args[1], "SL")));
  }
  if (head == "Direct") {
    std::vector<Group> factors;
    for (const auto& a : split_args(body)) factors.push_back(parse_stripped(a));
    return make_direct(factors);
  }
  if (head == "FromGenerators") {
    auto semi = body.find(';');
    if (semi == std::string::npos) throw InputError("FromGenerators needs 'degree; generators'");
    std::size_t deg = parse_uint(body.substr(0, semi), "FromGenerators");
    if (deg == 0 || deg > 65535) throw InputError("FromGenerators degree out of range");
    // Cycle notation was stripped of whitespace; restore separators between points.
    std::string gens = body.substr(semi + 1);
    Group g{"FromGenerators(" + std::to_string(deg) + ";" + gens + ")", deg, {}};
    g.generators = parse_permutation_list(deg, gens);
    return g;
  }
  throw InputError("unknown group family '" + head + "'");
}

}  // namespace

Group make_direct(const std::vector<Group>& factors) {
  if (factors.empty()) throw InputError("Direct() needs at least one factor");
  std::size_t deg = 0;
  std::string name = "Direct(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    deg += factors[i].degree;
    name += (i ? "," : "") + factors[i].name;
  }
  name += ")";
  if (deg > 65535) throw InputError("Direct product degree too large");
  Group g{name, deg, {}};
  std::size_t offset = 0;
  for (const auto& f : factors) {
    for (const auto& gen : f.generators) {
      std::vector<Point> im(deg);
      std::iota(im.begin(), im.end(), Point{0});
      for (std::size_t i = 0; i < f.degree; ++i) im[offset + i] = static_cast<Point>(offset + gen(i));
      g.generators.push_back(Permutation(std::move(im)));
    }
    offset += f.degree;
  }
  return g;
}

Group parse_group(std::string_view spec) {
  // Inside FromGenerators, whitespace separates points; turn it into commas first.
  std::string s;
  bool in_paren_digits = false;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    char c = spec[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      // Preserve a separator between two digit runs.
      std::size_t j = i;
      while (j < spec.size() && std::isspace(static_cast<unsigned char>(spec[j]))) ++j;
      if (in_paren_digits && j < spec.size() && std::isdigit(static_cast<unsigned char>(spec[j]))) s.push_back(',');
      i = j - 1;
      continue;
    }
    in_paren_digits = std::isdigit(static_cast<unsigned char>(c)) != 0;
    s.push_back(c);
  }
  s = strip_ws(s);
  if (s.empty()) throw InputError("empty group spec");
  return parse_stripped(s);
}

FiniteField::FiniteField(unsigned q) : q_(q) {
  if (q < 2 || q > 256) throw InputError("field size must be a prime power in [2, 256]");
  p_ = 0;
  for (unsigned d = 2; d <= q; ++d)
    if (q % d == 0) {
      p_ = d;
      break;
    }
  k_ = 0;
  unsigned t = q;
  while (t % p_ == 0) {
    t /= p_;
    ++k_;
  }
  if (t != 1) throw InputError("field size " + std::to_string(q) + " is not a prime power");
  auto digits = [&](unsigned a) {
    std::vector<unsigned> d(k_);
    for (unsigned i = 0; i < k_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  };
  auto number = [&](const std::vector<unsigned>& d) {
    unsigned a = 0;
    for (unsigned i = k_; i-- > 0;) a = a * p_ + d[i];
    return a;
  };
  // Find a monic irreducible polynomial of degree k by testing for roots in all
  // proper subfields via brute-force factor search over smaller degrees.
  std::vector<unsigned> modulus;  // coefficients c_0..c_{k-1}; x^k = -sum c_i x^i
  auto poly_mulmod = [&](const std::vector<unsigned>& a, const std::vector<unsigned>& b,
                         const std::vector<unsigned>& mod) {
    std::vector<unsigned> prod(2 * k_, 0);
    for (unsigned i = 0; i < k_; ++i)
      for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    for (unsigned d = 2 * k_ - 1; d >= k_; --d) {
      unsigned c = prod[d];
      if (!c) continue;
      prod[d] = 0;
      for (unsigned i = 0; i < k_; ++i) prod[d - k_ + i] = (prod[d - k_ + i] + p_ * p_ - c * mod[i] % p_) % p_;
    }
    prod.resize(k_);
    return prod;
  };
  if (k_ == 1) {
    modulus = {0};
  } else {
    unsigned count = 1;
    for (unsigned i = 0; i < k_; ++i) count *= p_;
    for (unsigned code = 0; code < count && modulus.empty(); ++code) {
      auto cand = digits(code);
      // Irreducible iff the multiplicative structure has no zero divisors.
      bool ok = true;
      for (unsigned a = 1; a < q && ok; ++a)
        for (unsigned b = 1; b < q && ok; ++b) {
          auto pr = poly_mulmod(digits(a), digits(b), cand);
          if (number(pr) == 0) ok = false;
        }
      if (ok) modulus = cand;
    }
  }
  add_.resize(static_cast<std::size_t>(q) * q);
  mul_.resize(static_cast<std::size_t>(q) * q);
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b) {
      auto da = digits(a), db = digits(b);
      std::vector<unsigned> s(k_);
      for (unsigned i = 0; i < k_; ++i) s[i] = (da[i] + db[i]) % p_;
      add_[a * q + b] = number(s);
      if (k_ == 1)
        mul_[a * q + b] = (a * b) % p_;
      else
        mul_[a * q + b] = number(poly_mulmod(da, db, modulus));
    }
}

unsigned FiniteField::neg(unsigned a) const {
  for (unsigned b = 0; b < q_; ++b)
    if (add(a, b) == 0) return b;
  throw InvariantError("no additive inverse");
}

unsigned FiniteField::inv(unsigned a) const {
  for (unsigned b = 1; b < q_; ++b)
    if (mul(a, b) == 1) return b;
  throw InputError("zero has no multiplicative inverse");
}

std::vector<unsigned> FiniteField::prime_basis() const {
  std::vector<unsigned> out;
  unsigned v = 1;
  for (unsigned i = 0; i < k_; ++i) {
    out.push_back(v);
    v *= p_;
  }
  return out;
}

}  // namespace widthlab

#include "widthlab/gamma.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "widthlab/error.hpp"

namespace widthlab {

namespace {

void push_reduced(std::vector<int>& out, int l) {
  if (!out.empty() && out.back() == -l)
    out.pop_back();
  else
    out.push_back(l);
}

bool same_base(const GammaLetter& a, const GammaLetter& b) {
  return a.symbol == b.symbol && a.exponent == b.exponent;
}

}  // namespace

GammaExponent GammaExponent::generator(int g, int sign) {
  if (g < 1) throw InputError("Gamma-generator indices start at 1");
  GammaExponent e;
  e.letters_.push_back(sign * g);
  return e;
}

GammaExponent GammaExponent::from_letters(std::vector<int> letters) {
  GammaExponent e;
  for (int l : letters) {
    if (l == 0) throw InputError("zero Gamma-letter");
    push_reduced(e.letters_, l);
  }
  return e;
}

GammaExponent GammaExponent::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s == "1") return {};
  std::vector<int> letters;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != 'g') throw InputError("bad Gamma-exponent '" + std::string(text) + "'");
    ++i;
    int g = 0;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) g = g * 10 + (s[i++] - '0');
    if (i == start || g < 1) throw InputError("bad Gamma-generator in '" + std::string(text) + "'");
    int sign = 1;
    if (s.compare(i, 3, "^-1") == 0) {
      sign = -1;
      i += 3;
    }
    letters.push_back(sign * g);
    if (i < s.size()) {
      if (s[i] != '*') throw InputError("expected '*' in Gamma-exponent '" + std::string(text) + "'");
      ++i;
      if (i == s.size()) throw InputError("dangling '*' in Gamma-exponent");
    }
  }
  return from_letters(letters);
}

GammaExponent GammaExponent::inverse() const {
  GammaExponent e;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) e.letters_.push_back(-*it);
  return e;
}

std::string GammaExponent::to_string() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += "*";
    out += "g" + std::to_string(std::abs(letters_[i]));
    if (letters_[i] < 0) out += "^-1";
  }
  return out;
}

GammaExponent operator*(const GammaExponent& a, const GammaExponent& b) {
  GammaExponent e = a;
  for (int l : b.letters_) push_reduced(e.letters_, l);
  return e;
}

GammaWord GammaWord::variable(int id, int colour, int sign, GammaExponent e) {
  return letter({Symbol{SymbolKind::Variable, id}, sign, std::move(e), colour});
}

GammaWord GammaWord::parameter(int id, int sign, GammaExponent e) {
  return letter({Symbol{SymbolKind::Parameter, id}, sign, std::move(e), 0});
}

GammaWord GammaWord::parse(std::string_view text) {
  GammaWord w;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError("Gamma-word syntax error at position " + std::to_string(i) + ": " + msg);
  };
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    GammaLetter l;
    if (text[i] == 'x')
      l.symbol.kind = SymbolKind::Variable;
    else if (text[i] == 'k')
      l.symbol.kind = SymbolKind::Parameter;
    else
      fail("expected 'x' or 'k'");
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) l.symbol.id = l.symbol.id * 10 + (text[i++] - '0');
    if (i == start) fail("expected symbol index");
    if (i < text.size() && text[i] == '#') {
      if (l.symbol.kind != SymbolKind::Variable) fail("parameters carry no colour");
      ++i;
      start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) l.colour = l.colour * 10 + (text[i++] - '0');
      if (i == start || l.colour < 1) fail("expected colour >= 1");
    } else if (l.symbol.kind == SymbolKind::Variable) {
      l.colour = 1;
    }
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (text.substr(i, 2) == "-1" && (i + 2 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 2])))) {
        l.sign = -1;
        i += 2;
      } else if (i < text.size() && text[i] == '{') {
        auto close = text.find('}', i);
        if (close == std::string_view::npos) fail("missing '}'");
        std::string_view inner = text.substr(i + 1, close - i - 1);
        while (!inner.empty() && std::isspace(static_cast<unsigned char>(inner.front()))) inner.remove_prefix(1);
        if (!inner.empty() && inner.front() == '-') {
          l.sign = -1;
          inner.remove_prefix(1);
        }
        l.exponent = GammaExponent::parse(inner);
        i = close + 1;
      } else {
        fail("expected '-1' or '{' after '^'");
      }
    }
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) fail("letters must be separated by whitespace");
    w.letters_.push_back(std::move(l));
  }
  return w;
}

GammaWord GammaWord::inverse() const {
  GammaWord w;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
  return w;
}

GammaWord GammaWord::act(const GammaExponent& gamma) const {
  GammaWord w = *this;
  if (gamma.is_identity()) return w;
  for (auto& l : w.letters_) l.exponent = l.exponent * gamma;
  return w;
}

GammaWord GammaWord::slice(std::size_t from, std::size_t to) const {
  return GammaWord(std::vector<GammaLetter>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                                            letters_.begin() + static_cast<std::ptrdiff_t>(to)));
}

std::string GammaWord::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const auto& l = letters_[i];
    if (i) out += " ";
    out += l.symbol.name();
    if (l.symbol.kind == SymbolKind::Variable && l.colour != 1) out += "#" + std::to_string(l.colour);
    if (l.exponent.is_identity()) {
      if (l.sign < 0) out += "^-1";
    } else {
      out += "^{" + std::string(l.sign < 0 ? "-" : "") + l.exponent.to_string() + "}";
    }
  }
  return out;
}

std::vector<Symbol> GammaWord::variable_support() const {
  std::vector<Symbol> out;
  std::set<Symbol> seen;
  for (const auto& l : letters_)
    if (l.symbol.kind == SymbolKind::Variable && seen.insert(l.symbol).second) out.push_back(l.symbol);
  return out;
}

std::vector<Symbol> GammaWord::symbols() const {
  std::vector<Symbol> out;
  std::set<Symbol> seen;
  for (const auto& l : letters_)
    if (seen.insert(l.symbol).second) out.push_back(l.symbol);
  return out;
}

bool GammaWord::contains(const Symbol& s) const {
  return std::any_of(letters_.begin(), letters_.end(), [&](const GammaLetter& l) { return l.symbol == s; });
}

GammaWord operator*(const GammaWord& a, const GammaWord& b) {
  GammaWord w = a;
  w.letters_.insert(w.letters_.end(), b.letters_.begin(), b.letters_.end());
  return w;
}

GammaWord& GammaWord::operator*=(const GammaWord& b) {
  letters_.insert(letters_.end(), b.letters_.begin(), b.letters_.end());
  return *this;
}

GammaWord hat(const GammaWord& u) {
  std::vector<GammaLetter> out;
  for (const auto& l : u.letters())
    if (l.symbol.kind == SymbolKind::Variable) out.push_back({l.symbol, l.sign, {}, l.colour});
  return GammaWord(std::move(out));
}

GammaWord free_reduce(const GammaWord& u) {
  std::vector<GammaLetter> st;
  for (const auto& l : u.letters()) {
    if (!st.empty() && same_base(st.back(), l) && st.back().sign == -l.sign)
      st.pop_back();
    else
      st.push_back(l);
  }
  return GammaWord(std::move(st));
}

bool equals_in_F(const GammaWord& u, const GammaWord& v) {
  auto a = free_reduce(u).letters();
  auto b = free_reduce(v).letters();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_base(a[i], b[i]) || a[i].sign != b[i].sign) return false;
  return true;
}

bool is_balanced(const GammaWord& w) {
  std::map<Symbol, std::pair<int, int>> count;
  for (const auto& l : w.letters()) (l.sign > 0 ? count[l.symbol].first : count[l.symbol].second)++;
  for (const auto& [s, c] : count)
    if (c.first != 1 || c.second != 1) return false;
  return true;
}

std::vector<int> colour_type(const GammaWord& w) {
  std::vector<int> signed_seq;
  for (const auto& l : w.letters()) {
    int c = l.signed_colour();
    if (c < 0 && !signed_seq.empty() && signed_seq.back() == c) continue;
    signed_seq.push_back(c);
  }
  for (int& c : signed_seq) c = std::abs(c);
  return signed_seq;
}

bool leq_Ln(const std::vector<int>& tau, int m, int n) {
  long long pos = 0;
  const long long len = static_cast<long long>(m) * n;
  for (int t : tau) {
    if (t < 1 || t > m) return false;
    while (pos < len && (pos % m) + 1 != t) ++pos;
    if (pos >= len) return false;
    ++pos;
  }
  return true;
}

namespace {

// Occurrence positions (first, second) of each symbol in a balanced word.
std::map<Symbol, std::pair<std::size_t, std::size_t>> occurrences(const GammaWord& w) {
  if (!is_balanced(w)) throw PreconditionError("word is not balanced");
  std::map<Symbol, std::pair<std::size_t, std::size_t>> occ;
  std::map<Symbol, bool> seen;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& s = w.letters()[i].symbol;
    if (!seen[s]) {
      occ[s].first = i;
      seen[s] = true;
    } else {
      occ[s].second = i;
    }
  }
  return occ;
}

GammaLetter bare(const GammaLetter& l) { return {l.symbol, l.sign, {}, l.colour}; }

}  // namespace

std::optional<Decomposition> decompose_nontrivial(const GammaWord& w) {
  auto occ = occurrences(w);
  const auto& L = w.letters();
  auto partner = [&](std::size_t i) {
    const auto& o = occ.at(L[i].symbol);
    return o.first == i ? o.second : o.first;
  };
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (const auto& [s, o] : occ) {
    auto [i1, i2] = o;
    if (i2 - i1 < 2) continue;
    bool has_outside = false;
    for (std::size_t j = i1 + 1; j < i2 && !has_outside; ++j) {
      std::size_t p = partner(j);
      has_outside = p < i1 || p > i2;
    }
    if (!has_outside) continue;
    if (!best || i2 - i1 < best->second - best->first || (i2 - i1 == best->second - best->first && i1 < best->first))
      best = std::make_pair(i1, i2);
  }
  if (!best) return std::nullopt;
  auto [i1, i2] = *best;
  std::size_t px = i1 + 1;
  while (!(partner(px) < i1 || partner(px) > i2)) ++px;
  std::size_t j = partner(px);
  Decomposition d;
  if (j < i1) {
    d.p_xinv = j;
    d.p_yinv = i1;
    d.p_x = px;
    d.p_y = i2;
  } else {
    d.p_xinv = i1;
    d.p_yinv = px;
    d.p_x = i2;
    d.p_y = j;
  }
  d.x = bare(L[d.p_x]);
  d.y = bare(L[d.p_y]);
  return d;
}

std::vector<Decomposition> all_decompositions(const GammaWord& w) {
  auto occ = occurrences(w);
  std::vector<Decomposition> out;
  for (const auto& [s, a] : occ)
    for (const auto& [t, b] : occ)
      if (a.first < b.first && b.first < a.second && a.second < b.second) {
        Decomposition d;
        d.p_xinv = a.first;
        d.p_yinv = b.first;
        d.p_x = a.second;
        d.p_y = b.second;
        d.x = bare(w.letters()[a.second]);
        d.y = bare(w.letters()[b.second]);
        out.push_back(d);
      }
  std::sort(out.begin(), out.end(), [](const Decomposition& a, const Decomposition& b) {
    return std::tie(a.p_xinv, a.p_yinv) < std::tie(b.p_xinv, b.p_yinv);
  });
  return out;
}

GammaWord twisted_commutator(const GammaExponent& a, const GammaExponent& b, const GammaWord& x, const GammaWord& y) {
  return x.inverse() * y.inverse() * x.act(a) * y.act(b);
}

std::map<std::string, GammaWord> replay_certificate(const Certificate& c) {
  std::map<std::string, GammaWord> family;
  std::set<Symbol> pure;
  for (const auto& s : c.basis) {
    if (!pure.insert(s).second) throw InvariantError("repeated basis symbol " + s.name());
    family[s.name()] = GammaWord::letter({s, 1, {}, 0});
  }
  for (const auto& st : c.steps) {
    if (!pure.count(st.symbol)) throw InvariantError("step replaces " + st.symbol.name() + " which is not a basis member");
    for (const auto* side : {&st.left, &st.right})
      for (const auto& l : side->letters())
        if (l.symbol == st.symbol || !pure.count(l.symbol))
          throw InvariantError("exchange word for " + st.member + " uses " + l.symbol.name() +
                               ", which is not another basis member");
    pure.erase(st.symbol);
    family.erase(st.symbol.name());
    if (family.count(st.member)) throw InvariantError("duplicate family member " + st.member);
    family[st.member] = st.left * GammaWord::letter({st.symbol, st.sign, st.exponent, 0}) * st.right;
  }
  return family;
}

TwistedExtraction extract_twisted(const GammaWord& v, const std::string& xi_name, const std::string& eta_name) {
  GammaWord h = hat(v);
  auto d = decompose_nontrivial(h);
  if (!d) throw PreconditionError("hat(V) admits no decomposition A x^-1 B y^-1 C x D y E");
  return extract_twisted(v, *d, xi_name, eta_name);
}

TwistedExtraction extract_twisted(const GammaWord& v, const Decomposition& d, const std::string& xi_name,
                                  const std::string& eta_name) {
  GammaWord h = hat(v);
  if (!is_balanced(h)) throw PreconditionError("hat(V) is not balanced");
  std::vector<std::size_t> varpos;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.letters()[i].symbol.kind == SymbolKind::Variable) varpos.push_back(i);
  const std::size_t P1 = varpos.at(d.p_xinv), P2 = varpos.at(d.p_yinv), P3 = varpos.at(d.p_x), P4 = varpos.at(d.p_y);
  const auto& L = v.letters();
  const GammaLetter& lx1 = L[P1];
  const GammaLetter& ly1 = L[P2];
  const GammaLetter& lx2 = L[P3];
  const GammaLetter& ly2 = L[P4];
  if (lx1.symbol != lx2.symbol || ly1.symbol != ly2.symbol || lx1.sign != -lx2.sign || ly1.sign != -ly2.sign)
    throw InvariantError("decomposition positions do not pair up");
  GammaWord A = v.slice(0, P1), B = v.slice(P1 + 1, P2), C = v.slice(P2 + 1, P3), D = v.slice(P3 + 1, P4),
            E = v.slice(P4 + 1, v.size());
  TwistedExtraction r;
  r.decomposition = d;
  const GammaExponent& e = lx1.exponent;
  const GammaExponent& f = ly1.exponent;
  r.a = e.inverse() * lx2.exponent;
  r.b = f.inverse() * ly2.exponent;
  const GammaExponent ai = r.a.inverse(), bi = r.b.inverse();
  GammaWord U1 = A.act(r.a * bi) * D.act(bi);
  GammaWord U2 = U1.act(ai) * C.act(ai);
  GammaLetter xe{lx2.symbol, lx2.sign, e, lx2.colour};  // x^e
  GammaLetter yf{ly2.symbol, ly2.sign, f, ly2.colour};  // y^f
  r.xi = U2 * GammaWord::letter(xe) * A.inverse();
  r.eta = U1 * GammaWord::letter(yf) * B.inverse() * U2.inverse();
  r.rest = A.act(r.a * bi * ai * r.b) * D.act(bi * ai * r.b) * C.act(ai * r.b) * B.act(r.b) * E;
  if (!equals_in_F(v, twisted_commutator(r.a, r.b, r.xi, r.eta) * r.rest))
    throw InvariantError("twisted-commutator extraction identity failed");
  r.steps.push_back({xi_name, xe.symbol, xe.sign, e, U2, A.inverse()});
  r.steps.push_back({eta_name, yf.symbol, yf.sign, f, U1, B.inverse() * U2.inverse()});
  return r;
}

KExtraction extract_k_twisted(const GammaWord& v, int m, int n, std::size_t k) {
  GammaWord h = hat(v);
  if (!is_balanced(h)) throw PreconditionError("hat(V) is not balanced");
  if (!leq_Ln(colour_type(h), m, n)) throw PreconditionError("colour type of hat(V) is not below L_n");
  if (h.variable_support().size() < static_cast<std::size_t>(n) + 2 * k)
    throw PreconditionError("support of hat(V) has " + std::to_string(h.variable_support().size()) +
                            " variables, need at least n + 2k = " + std::to_string(n + 2 * static_cast<int>(k)));
  KExtraction res;
  res.certificate.basis = v.symbols();
  std::sort(res.certificate.basis.begin(), res.certificate.basis.end());
  GammaWord cur = v;
  for (std::size_t i = 1; i <= k; ++i) {
    GammaWord ch = hat(cur);
    std::vector<Decomposition> choices;
    if (auto d = decompose_nontrivial(ch)) choices.push_back(*d);
    bool done = false;
    for (int pass = 0; pass < 2 && !done; ++pass) {
      if (pass == 1) choices = all_decompositions(ch);
      for (const auto& d : choices) {
        auto ex = extract_twisted(cur, d, "xi" + std::to_string(i), "eta" + std::to_string(i));
        if (!leq_Ln(colour_type(hat(ex.rest)), m, n)) continue;
        if (pass == 1) ++res.fallback_choices;
        for (const auto& st : ex.steps) res.certificate.steps.push_back(st);
        cur = ex.rest;
        res.steps.push_back(std::move(ex));
        done = true;
        break;
      }
    }
    if (!done) throw InvariantError("no twisted-commutator extraction keeps the colour type below L_n at step " + std::to_string(i));
  }
  res.rest = cur;
  return res;
}

void Interpretation::set_generator(int g, const Automorphism& a) {
  if (a.table() != table_) throw InputError("automorphism belongs to a different group");
  gens_[g] = {a, a.inverse()};
}

ElemId Interpretation::get(const Symbol& s) const {
  auto it = values_.find(s);
  if (it == values_.end()) throw InputError("no value assigned to " + s.name());
  return it->second;
}

ElemId Interpretation::apply(const GammaExponent& e, ElemId x) const {
  for (int l : e.letters()) {
    auto it = gens_.find(std::abs(l));
    if (it == gens_.end()) throw InputError("no automorphism for Gamma-generator g" + std::to_string(std::abs(l)));
    x = l > 0 ? it->second.first(x) : it->second.second(x);
  }
  return x;
}

Automorphism Interpretation::automorphism(const GammaExponent& e) const {
  Automorphism a = Automorphism::identity(table_);
  for (int l : e.letters()) {
    auto it = gens_.find(std::abs(l));
    if (it == gens_.end()) throw InputError("no automorphism for Gamma-generator g" + std::to_string(std::abs(l)));
    a = a * (l > 0 ? it->second.first : it->second.second);
  }
  return a;
}

ElemId Interpretation::apply_inverse(const GammaExponent& e, ElemId x) const { return apply(e.inverse(), x); }

ElemId Interpretation::evaluate(const GammaLetter& l) const {
  ElemId v = apply(l.exponent, get(l.symbol));
  return l.sign > 0 ? v : table_->inv(v);
}

ElemId Interpretation::evaluate(const GammaWord& w) const {
  ElemId r = ElementTable::identity();
  for (const auto& l : w.letters()) r = table_->mul(r, evaluate(l));
  return r;
}

void solve_certificate(const Certificate& c, const std::map<std::string, ElemId>& member_values,
                       Interpretation& interp) {
  const auto& t = *interp.table();
  for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) {
    auto mv = member_values.find(it->member);
    if (mv == member_values.end()) throw InputError("no value for family member " + it->member);
    ElemId inner = t.mul(t.mul(t.inv(interp.evaluate(it->left)), mv->second), t.inv(interp.evaluate(it->right)));
    if (it->sign < 0) inner = t.inv(inner);
    interp.set(it->symbol, interp.apply_inverse(it->exponent, inner));
  }
}

std::optional<GammaWord> random_balanced_word(std::mt19937_64& rng, const RandomWordSpec& spec) {
  const int m = spec.m, n = spec.n, nv = spec.num_variables;
  const int len = m * n;
  if (nv < 1 || nv > len) return std::nullopt;
  std::vector<int> order(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> positive(static_cast<std::size_t>(len), 0);
    for (int i = 0; i < nv; ++i) positive[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    std::vector<int> pos_count(static_cast<std::size_t>(m) + 1, 0);
    std::vector<std::vector<int>> free_slots(static_cast<std::size_t>(m) + 1);
    for (int p = 0; p < len; ++p) {
      int c = p % m + 1;
      if (positive[static_cast<std::size_t>(p)])
        ++pos_count[static_cast<std::size_t>(c)];
      else
        free_slots[static_cast<std::size_t>(c)].push_back(p);
    }
    bool ok = true;
    std::vector<int> run_len(static_cast<std::size_t>(len), 0);
    for (int c = 1; c <= m && ok; ++c) {
      int P = pos_count[static_cast<std::size_t>(c)];
      auto& fs = free_slots[static_cast<std::size_t>(c)];
      if (P == 0) continue;
      if (fs.empty()) {
        ok = false;
        break;
      }
      int maxr = std::min<int>(P, static_cast<int>(fs.size()));
      int R = 1 + static_cast<int>(rng() % static_cast<unsigned>(maxr));
      std::shuffle(fs.begin(), fs.end(), rng);
      std::vector<int> chosen(fs.begin(), fs.begin() + R);
      // Random composition of P into R positive parts.
      std::vector<int> parts(static_cast<std::size_t>(R), 1);
      for (int extra = P - R; extra > 0; --extra) ++parts[rng() % static_cast<unsigned>(R)];
      for (int r = 0; r < R; ++r) run_len[static_cast<std::size_t>(chosen[static_cast<std::size_t>(r)])] = parts[static_cast<std::size_t>(r)];
    }
    if (!ok) continue;
    // Placeholders: (colour, sign) sequence.
    std::vector<std::pair<int, int>> seq;
    for (int p = 0; p < len; ++p) {
      int c = p % m + 1;
      if (positive[static_cast<std::size_t>(p)]) seq.push_back({c, 1});
      for (int r = 0; r < run_len[static_cast<std::size_t>(p)]; ++r) seq.push_back({c, -1});
    }
    // Pair positive and negative placeholders of each colour at random.
    std::vector<int> symbol_of(seq.size(), 0);
    int next_id = 1;
    for (int c = 1; c <= m; ++c) {
      std::vector<std::size_t> pos, neg;
      for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i].first == c) (seq[i].second > 0 ? pos : neg).push_back(i);
      std::shuffle(neg.begin(), neg.end(), rng);
      for (std::size_t i = 0; i < pos.size(); ++i) {
        symbol_of[pos[i]] = next_id;
        symbol_of[neg[i]] = next_id;
        ++next_id;
      }
    }
    auto random_exponent = [&] {
      std::vector<int> ls;
      int L = spec.num_gamma > 0 ? static_cast<int>(rng() % static_cast<unsigned>(spec.max_exponent_length + 1)) : 0;
      for (int i = 0; i < L; ++i) {
        int g = 1 + static_cast<int>(rng() % static_cast<unsigned>(spec.num_gamma));
        ls.push_back(rng() % 2 ? g : -g);
      }
      return GammaExponent::from_letters(ls);
    };
    std::vector<GammaLetter> letters;
    for (std::size_t i = 0; i < seq.size(); ++i)
      letters.push_back({Symbol{SymbolKind::Variable, symbol_of[i]}, seq[i].second, random_exponent(), seq[i].first});
    for (int p = 0; p < spec.num_parameters; ++p) {
      GammaLetter l{Symbol{SymbolKind::Parameter, 1 + static_cast<int>(rng() % static_cast<unsigned>(spec.num_parameters))},
                    rng() % 2 ? 1 : -1, random_exponent(), 0};
      letters.insert(letters.begin() + static_cast<std::ptrdiff_t>(rng() % (letters.size() + 1)), l);
    }
    return GammaWord(std::move(letters));
  }
  return std::nullopt;
}

}  // namespace widthlab

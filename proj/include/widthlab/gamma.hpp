#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "widthlab/automorphism.hpp"

namespace widthlab {

// Freely reduced word in Gamma-generators g1, g2, ...; letters are +i / -i.
class GammaExponent {
 public:
  GammaExponent() = default;
  static GammaExponent generator(int g, int sign = 1);
  static GammaExponent from_letters(std::vector<int> letters);
  static GammaExponent parse(std::string_view text);  // "1" or "g1*g2^-1"

  bool is_identity() const { return letters_.empty(); }
  const std::vector<int>& letters() const { return letters_; }
  GammaExponent inverse() const;
  std::string to_string() const;
  friend GammaExponent operator*(const GammaExponent& a, const GammaExponent& b);
  friend bool operator==(const GammaExponent&, const GammaExponent&) = default;
  friend auto operator<=>(const GammaExponent&, const GammaExponent&) = default;

 private:
  std::vector<int> letters_;
};

enum class SymbolKind : std::uint8_t { Variable, Parameter };

struct Symbol {
  SymbolKind kind = SymbolKind::Variable;
  int id = 0;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;
  std::string name() const { return (kind == SymbolKind::Variable ? "x" : "k") + std::to_string(id); }
};

// (symbol^exponent)^sign. Variables carry a colour (>= 1); parameters carry 0.
struct GammaLetter {
  Symbol symbol;
  int sign = 1;
  GammaExponent exponent;
  int colour = 0;

  GammaLetter inverse() const { return {symbol, -sign, exponent, colour}; }
  int signed_colour() const { return sign * colour; }
  friend bool operator==(const GammaLetter&, const GammaLetter&) = default;
};

// Element of the free Gamma-group on the symbols, written as a sequence of letters.
class GammaWord {
 public:
  GammaWord() = default;
  explicit GammaWord(std::vector<GammaLetter> letters) : letters_(std::move(letters)) {}
  static GammaWord letter(const GammaLetter& l) { return GammaWord({l}); }
  static GammaWord variable(int id, int colour, int sign = 1, GammaExponent e = {});
  static GammaWord parameter(int id, int sign = 1, GammaExponent e = {});
  // Whitespace separated letters: x3#2^{g1*g2^-1}, k2^{-g1}, x1^-1, k4.
  static GammaWord parse(std::string_view text);

  const std::vector<GammaLetter>& letters() const { return letters_; }
  std::vector<GammaLetter>& letters() { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  GammaWord inverse() const;
  // U^gamma: every exponent e becomes e*gamma.
  GammaWord act(const GammaExponent& gamma) const;
  GammaWord slice(std::size_t from, std::size_t to) const;
  std::string to_string() const;
  // Distinct variable symbols, in order of first occurrence.
  std::vector<Symbol> variable_support() const;
  std::vector<Symbol> symbols() const;
  bool contains(const Symbol& s) const;

  friend GammaWord operator*(const GammaWord& a, const GammaWord& b);
  GammaWord& operator*=(const GammaWord& b);
  friend bool operator==(const GammaWord&, const GammaWord&) = default;

 private:
  std::vector<GammaLetter> letters_;
};

// Delete parameters and erase exponents, keeping signs.
GammaWord hat(const GammaWord& u);
// Canonical free reduction over letters (symbol, reduced exponent, sign).
GammaWord free_reduce(const GammaWord& u);
bool equals_in_F(const GammaWord& u, const GammaWord& v);
// Every symbol occurs exactly once with each sign.
bool is_balanced(const GammaWord& w);
// Signed colour sequence with runs of equal negative colours contracted, then
// absolute values taken.
std::vector<int> colour_type(const GammaWord& w);
// tau is a subsequence of (1..m) repeated n times.
bool leq_Ln(const std::vector<int>& tau, int m, int n);

// w = A x^-1 B y^-1 C x D y E on a balanced hat word. Positions index w.
struct Decomposition {
  std::size_t p_xinv = 0, p_yinv = 0, p_x = 0, p_y = 0;
  GammaLetter x, y;  // hat letters (trivial exponents)
};
// Canonical choice: take y with y^-1 ... y enclosing the shortest nonempty
// segment that contains a letter whose partner lies outside (ties: leftmost
// y^-1), x the leftmost such letter; if x^-1 lies to the right, replace x by
// x^-1 and swap the roles of x and y.
std::optional<Decomposition> decompose_nontrivial(const GammaWord& w);
// All decompositions in lexicographic order of positions.
std::vector<Decomposition> all_decompositions(const GammaWord& w);

// T_{a,b}(x,y) = x^-1 y^-1 x^a y^b
GammaWord twisted_commutator(const GammaExponent& a, const GammaExponent& b, const GammaWord& x,
                             const GammaWord& y);

// A family member obtained from a basis symbol: member = P (s^e)^sign Q, with P
// and Q words in the other basis symbols.
struct CertificateStep {
  std::string member;
  Symbol symbol;
  int sign = 1;
  GammaExponent exponent;
  GammaWord left, right;
};

struct Certificate {
  std::vector<Symbol> basis;  // initial basis symbols
  std::vector<CertificateStep> steps;
};

// Replays the steps checking the invariance/exchange side conditions and
// returns the final family (member name -> word); throws InvariantError.
std::map<std::string, GammaWord> replay_certificate(const Certificate& c);

struct TwistedExtraction {
  GammaExponent a, b;
  GammaWord xi, eta;
  GammaWord rest;  // V_1
  Decomposition decomposition;
  std::vector<CertificateStep> steps;
};

// V =_F T_{a,b}(xi, eta) V_1 for V whose hat is balanced and nontrivial.
TwistedExtraction extract_twisted(const GammaWord& v, const std::string& xi_name = "xi",
                                  const std::string& eta_name = "eta");
TwistedExtraction extract_twisted(const GammaWord& v, const Decomposition& d, const std::string& xi_name,
                                  const std::string& eta_name);

struct KExtraction {
  std::vector<TwistedExtraction> steps;
  GammaWord rest;  // V_k
  Certificate certificate;
  std::size_t fallback_choices = 0;  // steps where the canonical decomposition broke tau <= L_n
};

// V =_F T_1 ... T_k V_k, re-checking tau(hat V_i) <= L_n after each step.
KExtraction extract_k_twisted(const GammaWord& v, int m, int n, std::size_t k);

// Values for a concrete Gamma-group: symbols map to elements of S and
// Gamma-generators to automorphisms of S.
class Interpretation {
 public:
  explicit Interpretation(TablePtr table) : table_(std::move(table)) {}
  const TablePtr& table() const { return table_; }
  void set_generator(int g, const Automorphism& a);
  void set(const Symbol& s, ElemId v) { values_[s] = v; }
  bool has(const Symbol& s) const { return values_.count(s) != 0; }
  ElemId get(const Symbol& s) const;
  ElemId apply(const GammaExponent& e, ElemId x) const;
  ElemId apply_inverse(const GammaExponent& e, ElemId x) const;
  // The automorphism of S that e denotes.
  Automorphism automorphism(const GammaExponent& e) const;
  ElemId evaluate(const GammaLetter& l) const;
  ElemId evaluate(const GammaWord& w) const;
  std::size_t num_generators() const { return gens_.size(); }

 private:
  TablePtr table_;
  std::map<Symbol, ElemId> values_;
  std::map<int, std::pair<Automorphism, Automorphism>> gens_;
};

// Given values for the final family members (by name) and for every
// unreplaced basis symbol in interp, fills in the replaced basis symbols.
void solve_certificate(const Certificate& c, const std::map<std::string, ElemId>& member_values,
                       Interpretation& interp);

// Random balanced V with tau(hat V) <= L_n: variables of colours 1..m, some
// parameters, Gamma-exponents over num_gamma generators.
struct RandomWordSpec {
  int m = 3;
  int n = 3;
  int num_variables = 8;
  int num_parameters = 2;
  int num_gamma = 2;
  int max_exponent_length = 2;
};
std::optional<GammaWord> random_balanced_word(std::mt19937_64& rng, const RandomWordSpec& spec);

}  // namespace widthlab

#include "widthlab/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "widthlab/error.hpp"

namespace widthlab {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point p : images_) {
    if (p >= images_.size() || seen[p]) throw InputError("image list is not a permutation");
    seen[p] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  if (degree > 65535) throw InputError("degree too large");
  std::vector<Point> im(degree);
  std::iota(im.begin(), im.end(), Point{0});
  Permutation p;
  p.images_ = std::move(im);
  return p;
}

Permutation Permutation::from_cycles(std::size_t degree, std::string_view text) {
  Permutation result = identity(degree);
  auto& im = result.images_;
  std::vector<bool> used(degree, false);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw InputError("expected '(' in cycle notation: " + std::string(text));
    ++i;
    std::vector<std::size_t> cycle;
    for (;;) {
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw InputError("bad cycle notation: " + std::string(text));
      std::size_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::size_t>(text[i] - '0');
        if (v > 1000000) throw InputError("point out of range");
        ++i;
      }
      if (v >= degree) throw InputError("point " + std::to_string(v) + " exceeds degree " + std::to_string(degree));
      if (used[v]) throw InputError("point " + std::to_string(v) + " repeated in cycle notation");
      used[v] = true;
      cycle.push_back(v);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k)
      im[cycle[k]] = static_cast<Point>(cycle[(k + 1) % cycle.size()]);
    skip_ws();
  }
  return result;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<Point>(i);
  return r;
}

std::size_t Permutation::order() const {
  std::vector<bool> seen(images_.size(), false);
  std::size_t ord = 1;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

std::size_t Permutation::support_size() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) ++n;
  return n;
}

std::string Permutation::to_cycles() const {
  std::ostringstream out;
  std::vector<bool> seen(images_.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    any = true;
    out << '(';
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      if (j != i) out << ' ';
      out << j;
    }
    out << ')';
  }
  if (!any) return "()";
  return out.str();
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw InputError("degree mismatch in permutation product");
  Permutation r;
  r.images_.resize(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i) r.images_[i] = b.images_[a.images_[i]];
  return r;
}

Permutation conjugate(const Permutation& x, const Permutation& y) { return y.inverse() * x * y; }

Permutation commutator(const Permutation& x, const Permutation& y) {
  return x.inverse() * y.inverse() * x * y;
}

Permutation power(const Permutation& x, long long n) {
  Permutation base = n < 0 ? x.inverse() : x;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  Permutation result = Permutation::identity(x.degree());
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

std::vector<Permutation> parse_permutation_list(std::size_t degree, std::string_view text) {
  std::vector<Permutation> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    // A permutation is a maximal run of parenthesised cycles.
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i >= text.size() || text[i] != '(') break;
      std::size_t close = text.find(')', i);
      if (close == std::string_view::npos) throw InputError("unbalanced parenthesis in permutation list");
      i = close + 1;
    }
    if (i == start) throw InputError("expected a permutation in list: " + std::string(text));
    out.push_back(Permutation::from_cycles(degree, text.substr(start, i - start)));
  }
  return out;
}

}  // namespace widthlab

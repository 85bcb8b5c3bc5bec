#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace widthlab {

using Point = std::uint16_t;

// Permutation of {0, ..., degree-1}. Products are read left to right:
// (a * b)(i) = b(a(i)), so conjugation x^y = y^-1 x y is a right action.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree);
  // Parses cycle notation such as "(0 1 2)(3 4)"; "()" or "" is the identity.
  static Permutation from_cycles(std::size_t degree, std::string_view text);

  std::size_t degree() const { return images_.size(); }
  Point operator()(std::size_t i) const { return images_[i]; }
  std::span<const Point> images() const { return images_; }

  bool is_identity() const;
  Permutation inverse() const;
  std::size_t order() const;
  // Number of points that are not fixed.
  std::size_t support_size() const;
  std::string to_cycles() const;

  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Point> images_;
};

Permutation conjugate(const Permutation& x, const Permutation& y);
Permutation commutator(const Permutation& x, const Permutation& y);
Permutation power(const Permutation& x, long long n);

// Parses a comma separated list of cycle-notation permutations, e.g.
// "(0 1 2), (0 1)". Commas inside parentheses separate points.
std::vector<Permutation> parse_permutation_list(std::size_t degree, std::string_view text);

}  // namespace widthlab

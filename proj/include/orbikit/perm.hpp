#ifndef ORBIKIT_PERM_HPP
#define ORBIKIT_PERM_HPP

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbikit {

// Permutation of {0..n-1}; img[i] is the image of i.
struct Perm {
  std::vector<int> img;

  Perm() = default;
  explicit Perm(int n) : img(n) { std::iota(img.begin(), img.end(), 0); }
  explicit Perm(std::vector<int> v) : img(std::move(v)) {}

  int degree() const { return (int)img.size(); }
  int operator()(int x) const { return img[x]; }
  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (img[i] != i) return false;
    return true;
  }

  // (a*b)(x) = a(b(x)).
  Perm operator*(const Perm& b) const {
    Perm r;
    r.img.resize(degree());
    for (int i = 0; i < degree(); ++i) r.img[i] = img[b.img[i]];
    return r;
  }
  Perm inverse() const {
    Perm r;
    r.img.resize(degree());
    for (int i = 0; i < degree(); ++i) r.img[img[i]] = i;
    return r;
  }
  // g^{-1} * this * g.
  Perm conjugated_by(const Perm& g) const { return g.inverse() * (*this) * g; }

  bool operator==(const Perm& o) const { return img == o.img; }
  bool operator<(const Perm& o) const { return img < o.img; }

  int order() const {
    Perm p = *this, e(degree());
    int k = 1;
    while (!(p == e)) {
      p = p * (*this);
      ++k;
    }
    return k;
  }

  // Cycle notation on points 1..n.
  std::string cycle_string() const {
    std::ostringstream os;
    std::vector<bool> seen(degree(), false);
    bool any = false;
    for (int i = 0; i < degree(); ++i) {
      if (seen[i] || img[i] == i) continue;
      any = true;
      os << "(";
      int j = i;
      bool first = true;
      do {
        if (!first) os << " ";
        os << j + 1;
        seen[j] = true;
        first = false;
        j = img[j];
      } while (j != i);
      os << ")";
    }
    if (!any) os << "()";
    return os.str();
  }

  // Parse cycle notation like "(1 2 3)(4 5)" on points 1..n.
  static Perm from_cycles(int n, const std::string& s) {
    Perm p(n);
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] != '(') {
        if (isspace((unsigned char)s[i]) || s[i] == ',') {
          ++i;
          continue;
        }
        throw std::invalid_argument("bad cycle string: " + s);
      }
      std::size_t j = s.find(')', i);
      if (j == std::string::npos) throw std::invalid_argument("bad cycle string: " + s);
      std::vector<int> cyc;
      std::istringstream is(s.substr(i + 1, j - i - 1));
      std::string tok;
      while (is >> tok) {
        for (char& ch : tok)
          if (ch == ',') ch = ' ';
        std::istringstream is2(tok);
        int x;
        while (is2 >> x) {
          if (x < 1 || x > n) throw std::invalid_argument("cycle point out of range");
          cyc.push_back(x - 1);
        }
      }
      for (std::size_t k = 0; k < cyc.size(); ++k)
        p.img[cyc[k]] = cyc[(k + 1) % cyc.size()];
      i = j + 1;
    }
    return p;
  }
};

}  // namespace orbikit

#endif

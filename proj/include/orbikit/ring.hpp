#ifndef ORBIKIT_RING_HPP
#define ORBIKIT_RING_HPP

#include <stdexcept>
#include <string>

namespace orbikit {

// Coefficient ring: Z, Q, or F_p for a prime p.
struct Ring {
  enum class Kind { Integers, Rationals, PrimeField };
  Kind kind = Kind::Integers;
  long long p = 0;

  static Ring integers() { return Ring{Kind::Integers, 0}; }
  static Ring rationals() { return Ring{Kind::Rationals, 0}; }
  static Ring prime_field(long long p) {
    if (p < 2) throw std::invalid_argument("prime_field: p must be prime");
    for (long long d = 2; d * d <= p; ++d)
      if (p % d == 0) throw std::invalid_argument("prime_field: p must be prime");
    return Ring{Kind::PrimeField, p};
  }

  bool is_field() const { return kind != Kind::Integers; }
  bool operator==(const Ring& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

  std::string name() const {
    switch (kind) {
      case Kind::Integers: return "Z";
      case Kind::Rationals: return "Q";
      default: return "F" + std::to_string(p);
    }
  }
};

}  // namespace orbikit

#endif

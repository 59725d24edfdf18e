#include "weavesafe/gf2m.hpp"

#include <array>
#include <string>

#include "weavesafe/error.hpp"

namespace weavesafe::gf {
namespace {

constexpr std::string_view kModule = "gf2m";

// Index m. Entries for m = 3, 4, 8 and 16 are pinned by the share format;
// the rest are standard primitive trinomials/pentanomials.
constexpr std::array<std::uint32_t, kMaxDegree + 1> kPolynomials = {
    0,       0,       0,
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11B,    // x^8 + x^4 + x^3 + x + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

int degree_of(std::uint32_t p) {
  int d = -1;
  while (p != 0) {
    ++d;
    p >>= 1;
  }
  return d;
}

// Remainder of a / b over GF(2)[x].
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
  const int db = degree_of(b);
  for (int da = degree_of(a); da >= db; da = degree_of(a)) {
    a ^= b << (da - db);
  }
  return a;
}

void check_degree(unsigned m) {
  if (m < kMinDegree || m > kMaxDegree) {
    throw Error(Errc::parameter_invalid, kModule,
                "unsupported extension degree m=" + std::to_string(m) +
                    " (need 3 <= m <= 16)");
  }
}

}  // namespace

std::uint32_t clmul_reduce(std::uint32_t a, std::uint32_t b, std::uint32_t poly,
                           unsigned m) {
  std::uint32_t acc = 0;
  for (unsigned i = 0; i < m; ++i) {
    if ((b >> i) & 1U) acc ^= a << i;
  }
  // Product has degree <= 2m-2 < 32 for m <= 16.
  return poly_mod(acc, poly);
}

bool is_irreducible(std::uint32_t poly, unsigned m) {
  if (degree_of(poly) != static_cast<int>(m)) return false;
  // A reducible polynomial has a factor of degree <= m/2.
  for (unsigned deg = 1; deg <= m / 2; ++deg) {
    for (std::uint32_t f = 1U << deg; f < (2U << deg); ++f) {
      if (poly_mod(poly, f) == 0) return false;
    }
  }
  return true;
}

std::uint32_t Field::canonical_polynomial(unsigned m) {
  check_degree(m);
  return kPolynomials[m];
}

std::shared_ptr<const Field> Field::create(unsigned m) {
  check_degree(m);
  return std::make_shared<const Field>(m);
}

Field::Field(unsigned m)
    : m_(m), order_(1U << m), poly_(canonical_polynomial(m)) {
  if (!is_irreducible(poly_, m_)) {
    throw Error(Errc::parameter_invalid, kModule,
                "reduction polynomial is reducible for m=" + std::to_string(m));
  }
  const std::uint32_t cycle = order_ - 1;
  exp_.assign(2 * cycle, 0);
  log_.assign(order_, 0);

  // The canonical polynomial for m = 8 is not primitive, so search for the
  // smallest element of full multiplicative order.
  for (std::uint32_t g = 2; g < order_; ++g) {
    std::uint32_t x = 1;
    std::uint32_t i = 0;
    for (; i < cycle; ++i) {
      exp_[i] = x;
      x = clmul_reduce(x, g, poly_, m_);
      if (x == 1) break;
    }
    if (i + 1 == cycle) {
      generator_ = Element(g);
      break;
    }
  }
  if (generator_.is_zero()) {
    throw Error(Errc::parameter_invalid, kModule,
                "no primitive element found for m=" + std::to_string(m));
  }
  for (std::uint32_t i = 0; i < cycle; ++i) {
    exp_[cycle + i] = exp_[i];
    log_[exp_[i]] = i;
  }
  for (std::uint32_t a = 1; a < order_; ++a) {
    if (exp_[log_[a]] != a) {
      throw Error(Errc::parameter_invalid, kModule, "log/antilog tables disagree");
    }
  }
}

Element Field::element(std::uint32_t value) const {
  if (value >= order_) {
    throw Error(Errc::invalid_argument, kModule,
                "value " + std::to_string(value) + " outside GF(2^" +
                    std::to_string(m_) + ")");
  }
  return Element(value);
}

Element Field::inv(Element a) const {
  if (a.is_zero()) {
    throw Error(Errc::division_by_zero, kModule, "inverse of zero");
  }
  const std::uint32_t cycle = order_ - 1;
  return Element(exp_[(cycle - log_[a.value()]) % cycle]);
}

Element Field::div(Element a, Element b) const {
  if (b.is_zero()) {
    throw Error(Errc::division_by_zero, kModule, "division by zero");
  }
  if (a.is_zero()) return Element{};
  const std::uint32_t cycle = order_ - 1;
  return Element(exp_[log_[a.value()] + cycle - log_[b.value()]]);
}

Element Field::pow(Element a, std::uint64_t e) const {
  if (e == 0) return Element(1);
  if (a.is_zero()) return Element{};
  const std::uint64_t cycle = order_ - 1;
  return Element(exp_[(static_cast<std::uint64_t>(log_[a.value()]) * (e % cycle)) % cycle]);
}

void Field::write_symbol(Element a, std::span<std::uint8_t> out) const {
  const std::size_t n = symbol_bytes();
  std::uint32_t v = a.value();
  for (std::size_t i = 0; i < n; ++i) {
    out[n - 1 - i] = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
}

Element Field::read_symbol(std::span<const std::uint8_t> in) const {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < symbol_bytes(); ++i) v = (v << 8) | in[i];
  if (v >= order_) {
    throw Error(Errc::format_error, kModule,
                "symbol " + std::to_string(v) + " has bits above m");
  }
  return Element(v);
}

}  // namespace weavesafe::gf

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace weavesafe::gf {

// A symbol of GF(2^m), m <= 16. Addition is XOR and does not need the field;
// every other operation goes through a Field.
class Element {
 public:
  constexpr Element() = default;
  constexpr explicit Element(std::uint32_t value)
      : value_(static_cast<std::uint16_t>(value)) {}

  constexpr std::uint32_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend constexpr Element operator+(Element a, Element b) {
    return Element(static_cast<std::uint32_t>(a.value_ ^ b.value_));
  }
  friend constexpr Element operator-(Element a, Element b) { return a + b; }
  constexpr Element& operator+=(Element other) {
    value_ ^= other.value_;
    return *this;
  }
  constexpr Element& operator-=(Element other) { return *this += other; }

  friend constexpr bool operator==(Element, Element) = default;
  friend constexpr auto operator<=>(Element, Element) = default;

 private:
  std::uint16_t value_ = 0;
};

inline constexpr unsigned kMinDegree = 3;
inline constexpr unsigned kMaxDegree = 16;

// GF(2^m) with a fixed reduction polynomial per m and log/antilog tables.
// Immutable after construction and shared between matrices via shared_ptr.
class Field {
 public:
  // Throws Error(parameter_invalid) unless 3 <= m <= 16.
  static std::shared_ptr<const Field> create(unsigned m);

  // The reduction polynomial used for degree m, including the x^m term.
  static std::uint32_t canonical_polynomial(unsigned m);

  unsigned degree() const { return m_; }
  std::uint32_t order() const { return order_; }
  std::uint32_t reduction_polynomial() const { return poly_; }
  // Smallest primitive element; the antilog table holds its powers.
  Element generator() const { return generator_; }
  // Bytes per serialized symbol.
  std::size_t symbol_bytes() const { return (m_ + 7) / 8; }

  bool contains(Element a) const { return a.value() < order_; }
  // Validating conversion from an integer.
  Element element(std::uint32_t value) const;

  Element add(Element a, Element b) const { return a + b; }
  Element sub(Element a, Element b) const { return a + b; }
  Element mul(Element a, Element b) const {
    if (a.is_zero() || b.is_zero()) return Element{};
    return Element(exp_[log_[a.value()] + log_[b.value()]]);
  }
  Element inv(Element a) const;
  Element div(Element a, Element b) const;
  Element pow(Element a, std::uint64_t e) const;

  // Tables of length 2^m - 1: antilog[i] = g^i and log[a] for a != 0
  // (log[0] is unused and reads as 0).
  std::span<const std::uint32_t> exp_table() const {
    return {exp_.data(), order_ - 1};
  }
  std::span<const std::uint32_t> log_table() const { return log_; }

  // Big-endian, symbol_bytes() bytes, high bits zero.
  void write_symbol(Element a, std::span<std::uint8_t> out) const;
  Element read_symbol(std::span<const std::uint8_t> in) const;

  explicit Field(unsigned m);

 private:
  unsigned m_;
  std::uint32_t order_;
  std::uint32_t poly_;
  Element generator_;
  // exp_ is stored twice over so mul() can skip the modular reduction.
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const Field>;

// Carry-less polynomial helpers over GF(2), exposed for table validation.
std::uint32_t clmul_reduce(std::uint32_t a, std::uint32_t b, std::uint32_t poly,
                           unsigned m);
bool is_irreducible(std::uint32_t poly, unsigned m);

}  // namespace weavesafe::gf

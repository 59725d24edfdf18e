#include <array>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"
#include "weavesafe/error.hpp"
#include "weavesafe/gf2m.hpp"

using weavesafe::Errc;
using weavesafe::Error;
using weavesafe::gf::Element;
using weavesafe::gf::Field;
using testing_support::slow_mul;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no weavesafe::Error thrown";
  return Errc::io_error;
}

}  // namespace

TEST(Gf2m, CanonicalPolynomialsAreFixed) {
  EXPECT_EQ(Field::canonical_polynomial(3), 0xBu);
  EXPECT_EQ(Field::canonical_polynomial(4), 0x13u);
  EXPECT_EQ(Field::canonical_polynomial(8), 0x11Bu);
  EXPECT_EQ(Field::canonical_polynomial(16), 0x1100Bu);
}

// Trial division by every polynomial of degree <= m/2, independent of
// is_irreducible().
TEST(Gf2m, CanonicalPolynomialsIrreducibleByTrialDivision) {
  for (unsigned m = 3; m <= 16; ++m) {
    const std::uint32_t p = Field::canonical_polynomial(m);
    ASSERT_EQ(p >> m, 1u) << m;
    for (std::uint32_t div = 2; div < (1u << (m / 2 + 1)); ++div) {
      std::uint32_t rem = p;
      const int dd = 31 - __builtin_clz(div);
      for (int sh = static_cast<int>(m) - dd; sh >= 0; --sh) {
        if (rem & (1u << (sh + dd))) rem ^= div << sh;
      }
      EXPECT_NE(rem, 0u) << "m=" << m << " divisor=" << div;
    }
    EXPECT_TRUE(weavesafe::gf::is_irreducible(p, m));
  }
  EXPECT_FALSE(weavesafe::gf::is_irreducible(0b101, 2));  // (x+1)^2
}

TEST(Gf2m, CreateRejectsUnsupportedDegrees) {
  EXPECT_EQ(code_of([] { Field::create(2); }), Errc::parameter_invalid);
  EXPECT_EQ(code_of([] { Field::create(17); }), Errc::parameter_invalid);
  EXPECT_EQ(Field::create(3)->order(), 8u);
  EXPECT_EQ(Field::create(8)->order(), 256u);
}

TEST(Gf2m, SmallFieldExamples) {
  auto f = Field::create(3);
  EXPECT_EQ(f->add(Element(3), Element(3)), Element(0));
  EXPECT_EQ(f->mul(Element(3), Element(3)), Element(5));
  EXPECT_EQ(slow_mul(3, 3, 0xB, 3), 5u);
  EXPECT_EQ(f->inv(Element(2)), Element(5));
  EXPECT_EQ(f->inv(Element(3)), Element(6));
}

TEST(Gf2m, InverseMatchesExhaustiveSearch) {
  for (unsigned m : {3u, 4u, 5u, 8u}) {
    auto f = Field::create(m);
    for (std::uint32_t a = 1; a < f->order(); ++a) {
      std::uint32_t found = 0;
      for (std::uint32_t b = 1; b < f->order(); ++b) {
        if (slow_mul(a, b, f->reduction_polynomial(), m) == 1) found = b;
      }
      EXPECT_EQ(f->inv(Element(a)).value(), found) << "m=" << m << " a=" << a;
    }
  }
}

TEST(Gf2m, TableMultiplyMatchesShiftAndAddForAllPairs) {
  for (unsigned m = 3; m <= 8; ++m) {
    auto f = Field::create(m);
    for (std::uint32_t a = 0; a < f->order(); ++a) {
      for (std::uint32_t b = 0; b < f->order(); ++b) {
        ASSERT_EQ(f->mul(Element(a), Element(b)).value(),
                  slow_mul(a, b, f->reduction_polynomial(), m))
            << "m=" << m << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(Gf2m, TableMultiplyMatchesShiftAndAddSampled) {
  std::mt19937_64 rng(7);
  for (unsigned m = 9; m <= 16; ++m) {
    auto f = Field::create(m);
    std::uniform_int_distribution<std::uint32_t> dist(0, f->order() - 1);
    for (int i = 0; i < 20000; ++i) {
      const auto a = dist(rng);
      const auto b = dist(rng);
      ASSERT_EQ(f->mul(Element(a), Element(b)).value(),
                slow_mul(a, b, f->reduction_polynomial(), m));
      ASSERT_EQ(weavesafe::gf::clmul_reduce(a, b, f->reduction_polynomial(), m),
                slow_mul(a, b, f->reduction_polynomial(), m));
    }
  }
}

TEST(Gf2m, TablesAreConsistentAndGeneratorIsPrimitive) {
  for (unsigned m = 3; m <= 16; ++m) {
    auto f = Field::create(m);
    const auto exp = f->exp_table();
    const auto log = f->log_table();
    ASSERT_EQ(exp.size(), f->order() - 1);
    std::vector<bool> seen(f->order(), false);
    for (std::uint32_t i = 0; i < exp.size(); ++i) {
      ASSERT_NE(exp[i], 0u);
      ASSERT_FALSE(seen[exp[i]]) << "generator order below q-1 at m=" << m;
      seen[exp[i]] = true;
    }
    for (std::uint32_t a = 1; a < f->order(); ++a) ASSERT_EQ(exp[log[a]], a);
    EXPECT_EQ(exp[0], 1u);
    EXPECT_EQ(exp[1], f->generator().value());
  }
}

TEST(Gf2m, FieldAxiomsExhaustiveForSmallFields) {
  for (unsigned m : {3u, 4u}) {
    auto f = Field::create(m);
    const std::uint32_t q = f->order();
    for (std::uint32_t a = 0; a < q; ++a) {
      const Element ea(a);
      EXPECT_EQ(ea + ea, Element(0));
      if (a != 0) EXPECT_EQ(f->mul(ea, f->inv(ea)), Element(1));
      for (std::uint32_t b = 0; b < q; ++b) {
        const Element eb(b);
        EXPECT_EQ(f->mul(ea, eb), f->mul(eb, ea));
        for (std::uint32_t c = 0; c < q; ++c) {
          const Element ec(c);
          ASSERT_EQ(f->mul(f->mul(ea, eb), ec), f->mul(ea, f->mul(eb, ec)));
          ASSERT_EQ(f->mul(ea, eb + ec), f->mul(ea, eb) + f->mul(ea, ec));
        }
      }
    }
  }
}

TEST(Gf2m, FieldAxiomsSampled) {
  std::mt19937_64 rng(11);
  for (unsigned m : {8u, 12u, 16u}) {
    auto f = Field::create(m);
    std::uniform_int_distribution<std::uint32_t> dist(0, f->order() - 1);
    for (int i = 0; i < 5000; ++i) {
      const Element a(dist(rng)), b(dist(rng)), c(dist(rng));
      ASSERT_EQ(f->mul(f->mul(a, b), c), f->mul(a, f->mul(b, c)));
      ASSERT_EQ(f->mul(a, b + c), f->mul(a, b) + f->mul(a, c));
      if (!b.is_zero()) ASSERT_EQ(f->mul(f->div(a, b), b), a);
    }
  }
}

TEST(Gf2m, PowMatchesRepeatedMultiply) {
  auto f = Field::create(5);
  for (std::uint32_t a = 0; a < f->order(); ++a) {
    Element acc(1);
    for (std::uint64_t e = 0; e < 70; ++e) {
      ASSERT_EQ(f->pow(Element(a), e), acc) << a << "^" << e;
      acc = f->mul(acc, Element(a));
    }
  }
}

TEST(Gf2m, DivisionByZeroIsAnError) {
  auto f = Field::create(4);
  EXPECT_EQ(code_of([&] { f->inv(Element(0)); }), Errc::division_by_zero);
  EXPECT_EQ(code_of([&] { f->div(Element(3), Element(0)); }), Errc::division_by_zero);
  EXPECT_EQ(code_of([&] { f->element(16); }), Errc::invalid_argument);
}

TEST(Gf2m, SymbolSerializationIsBigEndian) {
  auto f16 = Field::create(16);
  std::array<std::uint8_t, 2> buf{};
  f16->write_symbol(Element(0xBEEF), buf);
  EXPECT_EQ(buf[0], 0xBE);
  EXPECT_EQ(buf[1], 0xEF);
  EXPECT_EQ(f16->read_symbol(buf), Element(0xBEEF));

  auto f12 = Field::create(12);
  EXPECT_EQ(f12->symbol_bytes(), 2u);
  f12->write_symbol(Element(0xABC), buf);
  EXPECT_EQ(buf[0], 0x0A);
  EXPECT_EQ(buf[1], 0xBC);
  buf[0] = 0x1A;  // bit above m
  EXPECT_EQ(code_of([&] { f12->read_symbol(buf); }), Errc::format_error);

  auto f4 = Field::create(4);
  EXPECT_EQ(f4->symbol_bytes(), 1u);
}

#include <random>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "balloon/digest.hpp"
#include "balloon/errors.hpp"
#include "balloon/rational.hpp"
#include "oracles.hpp"

namespace balloon {
namespace {

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_EQ(Rational::parse("6/8"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("2.5"), Rational(5, 2));
  EXPECT_THROW(Rational::parse("1/0"), std::exception);
  EXPECT_THROW(Rational::parse("abc"), std::exception);
  EXPECT_THROW(Rational::parse(""), std::exception);
}

TEST(Rational, LowestTermsAndPositiveDenominator) {
  const Rational r(4, -6);
  EXPECT_EQ(r.num(), -2);
  EXPECT_EQ(r.den(), 3);
  EXPECT_EQ(r.to_string(), "-2/3");
  EXPECT_EQ(Rational(10, 5).to_string(), "2");
}

TEST(Rational, FloorAndCeilRoundTowardInfinities) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(7, 2).ceil(), 4);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(4).ceil(), 4);
}

TEST(Rational, OverflowThrows) {
  const Rational big(std::int64_t{1} << 62);
  EXPECT_THROW(big * big, std::overflow_error);
}

TEST(Rational, ArithmeticMatchesArbitraryPrecision) {
  using boost::multiprecision::cpp_rational;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-1000, 1000);
  std::uniform_int_distribution<std::int64_t> den(1, 1000);
  auto big = [](const Rational& r) { return cpp_rational(r.num(), r.den()); };
  for (int i = 0; i < 2000; ++i) {
    const Rational a(num(rng), den(rng));
    const Rational b(num(rng), den(rng));
    EXPECT_EQ(big(a + b), big(a) + big(b));
    EXPECT_EQ(big(a - b), big(a) - big(b));
    EXPECT_EQ(big(a * b), big(a) * big(b));
    if (b != 0) EXPECT_EQ(big(a / b), big(a) / big(b));
    EXPECT_EQ(a < b, big(a) < big(b));
  }
}

TEST(Digest, HexRoundTrip) {
  Digest d;
  for (std::size_t i = 0; i < Digest::kSize; ++i) d.bytes[i] = static_cast<std::uint8_t>(i * 7 + 3);
  EXPECT_EQ(Digest::from_hex(d.hex()), d);
  EXPECT_EQ(d.hex().size(), 64u);
  EXPECT_THROW(Digest::from_hex("abc"), std::exception);
}

TEST(Digest, ModMatchesBigInteger) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    Digest d;
    for (auto& byte : d.bytes) byte = static_cast<std::uint8_t>(rng());
    for (std::uint64_t n : {1ull, 2ull, 3ull, 4ull, 5ull, 7ull, 1000003ull, 0xffffffffffffffc5ull}) {
      EXPECT_EQ(d.mod(n), testing::bigint_mod(d, n));
    }
  }
}

TEST(Digest, SmallIntegersReduceAsIntegers) {
  Digest ten;
  ten.bytes.back() = 10;
  Digest six;
  six.bytes.back() = 6;
  EXPECT_EQ(ten.mod(4), 2u);
  EXPECT_EQ(six.mod(4), 2u);
}

TEST(Digest, Sha256KnownAnswer) {
  const std::string abc = "abc";
  const auto d = sha256_hasher()->hash({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()});
  EXPECT_EQ(d.hex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace balloon

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "pa/fixed_log.hpp"
#include "pa/sampling.hpp"

namespace {

using Fl = pa::FixedLog32;
constexpr double kScale = 65536.0;
constexpr double kQuantum = 0.5 / kScale;

TEST(FixedLog, FromRealExamples) {
  EXPECT_EQ(Fl::from_real(1.0).code(), 0U);
  EXPECT_EQ(Fl::from_real(0.0).code(), Fl::kSentinel);
  EXPECT_TRUE(Fl::from_real(0.0).is_zero());
  // 65536 * ln 2 = 45426.0936
  EXPECT_EQ(Fl::from_real(0.5).code(), 45426U);
  // 65536 * ln 4 = 90852.1871
  EXPECT_EQ(Fl::from_real(0.25).code(), 90852U);
}

TEST(FixedLog, OutOfRangeInputIsADomainFault) {
  EXPECT_THROW(Fl::from_real(1.5), std::domain_error);
  EXPECT_THROW(Fl::from_real(-0.1), std::domain_error);
  EXPECT_THROW(Fl::from_real(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(FixedLog, ToRealExamples) {
  EXPECT_EQ(Fl::from_code(0).to_real(), 1.0);
  EXPECT_EQ(Fl::zero().to_real(), 0.0);
}

TEST(FixedLog, RoundtripWithinHalfQuantum) {
  pa::Rng rng(107);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double p = pa::log_uniform(rng, 1e-9, 1.0);
    const double back = Fl::from_real(p).to_real();
    worst = std::max(worst, std::fabs(std::log(back) - std::log(p)));
  }
  EXPECT_LE(worst, kQuantum + 1e-12);
}

TEST(FixedLog, CorrectionTableShape) {
  const auto& table = Fl::table();
  EXPECT_EQ(table.scale(), 65536U);
  EXPECT_EQ(table[0], 45426U);
  EXPECT_EQ(table.max_difference(), 772244U);
  EXPECT_EQ(table[772243], 1U);
  EXPECT_EQ(table[772244], 0U);
  EXPECT_EQ(table[10'000'000], 0U);
  const auto corr = table.corrections();
  for (std::size_t d = 1; d < corr.size(); ++d) {
    ASSERT_LE(corr[d], corr[d - 1]);
  }
}

// Every entry against an extended-precision evaluation.
TEST(FixedLog, CorrectionTableMatchesExtendedPrecision) {
  const auto corr = Fl::table().corrections();
  for (std::size_t d = 0; d < corr.size(); ++d) {
    const long double exact =
        65536.0L * std::log1p(std::exp(-static_cast<long double>(d) / 65536.0L));
    ASSERT_EQ(corr[d], static_cast<std::uint32_t>(std::llround(exact))) << "d=" << d;
  }
}

TEST(FixedLog, WideScaleKeepsThirtyTwoBitCorrections) {
  const pa::LogAddTable table(131072);
  // 131072 * ln 2 = 90852.19
  EXPECT_EQ(table[0], 90852U);
  EXPECT_EQ(table.corrections().front(), 90852U);
  EXPECT_EQ(table[table.max_difference()], 0U);
  EXPECT_EQ(table[1], pa::LogAddTable::entry(131072, 1));
}

TEST(FixedLog, MultiplyExamples) {
  const Fl half = Fl::from_real(0.5);
  const Fl quarter = half * half;
  EXPECT_EQ(quarter.code(), 90852U);
  EXPECT_LE(std::abs(static_cast<long>(quarter.code()) -
                     static_cast<long>(Fl::from_real(0.25).code())),
            1);
  const Fl x = Fl::from_real(0.3);
  EXPECT_EQ(x * Fl::one(), x);
  EXPECT_EQ(x * Fl::zero(), Fl::zero());
  EXPECT_EQ(Fl::zero() * x, Fl::zero());
}

TEST(FixedLog, MultiplySaturatesToZero) {
  const Fl tiny = Fl::from_code(Fl::kSentinel - 10);
  EXPECT_EQ(tiny * Fl::from_code(10), Fl::zero());
  EXPECT_EQ((tiny * Fl::from_code(9)).code(), Fl::kSentinel - 1);
  EXPECT_EQ(Fl::from_neg_log(1e30).code(), Fl::kSentinel - 1);
}

TEST(FixedLog, MultiplyIsExactCodeAddition) {
  pa::Rng rng(109);
  for (int i = 0; i < 10'000; ++i) {
    const auto a = static_cast<std::uint32_t>(rng() % 2'000'000'000U);
    const auto b = static_cast<std::uint32_t>(rng() % 2'000'000'000U);
    ASSERT_EQ((Fl::from_code(a) * Fl::from_code(b)).code(), a + b);
  }
}

TEST(FixedLog, AddExamples) {
  const Fl half = Fl::from_real(0.5);
  EXPECT_EQ((half + half).code(), 0U);
  const Fl x = Fl::from_real(0.01);
  EXPECT_EQ(x + Fl::zero(), x);
  EXPECT_EQ(Fl::zero() + x, x);
  EXPECT_EQ((Fl::one() + Fl::one()).code(), 0U);
}

TEST(FixedLog, AddMatchesLogSumExp) {
  pa::Rng rng(113);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double p = pa::log_uniform(rng, 1e-9, 0.5);
    const double q = pa::log_uniform(rng, 1e-9, 0.5);
    const double sum = (Fl::from_real(p) + Fl::from_real(q)).log_value();
    const long double expected = pa::testing::log_sum_exp(std::log(static_cast<long double>(p)),
                                                          std::log(static_cast<long double>(q)));
    worst = std::max(worst, static_cast<double>(std::fabs(sum - expected)));
  }
  EXPECT_LE(worst, 2.0 / kScale);
}

TEST(FixedLog, AddIsCommutativeAndMonotone) {
  pa::Rng rng(127);
  for (int i = 0; i < 10'000; ++i) {
    const auto a = Fl::from_code(static_cast<std::uint32_t>(rng() % 2'000'000));
    const auto b = Fl::from_code(static_cast<std::uint32_t>(rng() % 2'000'000));
    const auto c = Fl::from_code(static_cast<std::uint32_t>(rng() % 2'000'000));
    ASSERT_EQ(a + b, b + a);
    const Fl low = a < b ? a : b;
    const Fl high = a < b ? b : a;
    ASSERT_LE(low + c, high + c);
  }
}

TEST(FixedLog, ProductChainStaysNearLogOracle) {
  pa::Rng rng(131);
  std::vector<double> factors;
  Fl product = Fl::one();
  for (int i = 0; i < 1000; ++i) {
    const double p = pa::uniform_between(rng, 0.01, 1.0);
    factors.push_back(p);
    product *= Fl::from_real(p);
  }
  const long double expected = pa::testing::log_product(factors);
  EXPECT_LE(std::fabs(product.log_value() - expected), 1000 * kQuantum);
}

TEST(FixedLog, OrderingExamples) {
  EXPECT_GT(Fl::from_real(0.9), Fl::from_real(0.1));
  EXPECT_LT(Fl::zero(), Fl::from_code(Fl::kSentinel - 1));
  EXPECT_LT(Fl::zero(), Fl::one());
}

TEST(FixedLog, OrderingAgreesWhenSeparated) {
  pa::Rng rng(137);
  for (int i = 0; i < 10'000; ++i) {
    const double p = pa::log_uniform(rng, 1e-9, 1.0);
    const double q = pa::log_uniform(rng, 1e-9, 1.0);
    if (std::fabs(std::log(p) - std::log(q)) > 1.0 / kScale) {
      ASSERT_EQ(Fl::from_real(p) <=> Fl::from_real(q), p <=> q);
    }
  }
}

TEST(FixedLog, DivisionIsClampedCodeSubtraction) {
  const Fl a = Fl::from_code(1000);
  EXPECT_EQ((a / Fl::from_code(400)).code(), 600U);
  EXPECT_EQ((a / Fl::from_code(4000)).code(), 0U);
  EXPECT_EQ(Fl::zero() / a, Fl::zero());
  EXPECT_THROW((void)(a / Fl::zero()), std::domain_error);
}

TEST(FixedLog, NarrowCodeVariants) {
  using Fl8 = pa::FixedLog<std::uint8_t, 16>;
  EXPECT_EQ(Fl8::kSentinel, 255);
  EXPECT_EQ(Fl8::from_real(0.5).code(), 11);  // 16 * ln 2 = 11.09
  EXPECT_EQ(Fl8::from_real(1e-300).code(), 254);
  EXPECT_EQ((Fl8::from_code(200) * Fl8::from_code(60)), Fl8::zero());
  EXPECT_EQ((Fl8::from_real(0.5) + Fl8::from_real(0.5)).code(), 0);

  using Fl16 = pa::FixedLog<std::uint16_t, 1024>;
  EXPECT_EQ(Fl16::from_real(0.5).code(), 710);  // 1024 * ln 2 = 709.78
  EXPECT_EQ(Fl16::table()[0], 710U);
  pa::WireWriter out;
  Fl16::from_code(0x1234).write(out);
  EXPECT_EQ(out.bytes(), (pa::Bytes{0x12, 0x34}));
}

TEST(FixedLog, SerializationRoundtrip) {
  pa::WireWriter out;
  const std::vector<Fl> values{Fl::zero(), Fl::one(), Fl::from_real(0.5), Fl::from_code(123456789)};
  for (const auto& value : values) {
    value.write(out);
  }
  EXPECT_EQ(out.bytes().size(), 4 * values.size());
  pa::WireReader in(out.bytes());
  for (const auto& value : values) {
    ASSERT_EQ(Fl::read(in), value);
  }
  EXPECT_TRUE(in.at_end());
}

TEST(FixedLog, RepresentsVerySmallProbabilities) {
  const Fl floor = Fl::from_code(Fl::kSentinel - 1);
  // ln floor = -(2^32 - 2) / 65536 = -65535.99997, about 10^-28462
  EXPECT_NEAR(floor.log_value() / std::log(10.0), -28461.9, 0.1);
  EXPECT_FALSE(floor.is_zero());
}

}  // namespace

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "blo/attack.hpp"
#include "blo/errors.hpp"
#include "test_util.hpp"

using namespace blo;
using blo::testing::arbitrary_bits;
using blo::testing::bits;

namespace {

ProtectedTemplate tpl5(const char* data) {
  const auto d = bits(data);
  return ProtectedTemplate(d, TransformParams(5), d.size() / 4 * 5);
}

std::set<std::string> texts(const std::vector<FeatureVector>& v) {
  std::set<std::string> out;
  for (const auto& f : v) out.insert(f.data.to_text());
  return out;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(BLO_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Brute-force fibers for an a-bit input of 5-bit blocks, computed straight
// from the five-bit XOR rule on integers. Key and members are the integer
// values of the bit strings, bit 0 most significant.
std::map<std::uint64_t, std::vector<std::uint64_t>> brute_force_fibers(unsigned a) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> fibers;
  const unsigned n = a / 5;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << a); ++x) {
    std::uint64_t out = 0;
    for (unsigned blk = 0; blk < n; ++blk) {
      const unsigned v = (x >> (5 * (n - 1 - blk))) & 31U;
      const unsigned b1 = (v >> 4) & 1, b2 = (v >> 3) & 1, b3 = (v >> 2) & 1, b4 = (v >> 1) & 1, b5 = v & 1;
      out = (out << 4) | ((b1 ^ b3) << 3) | ((b2 ^ b3) << 2) | ((b4 ^ b3) << 1) | (b5 ^ b3);
    }
    fibers[out].push_back(x);
  }
  return fibers;
}

}  // namespace

TEST(InvertBlock, Examples) {
  EXPECT_EQ(invert_block(bits("1010"), false).bits(), bits("10010"));
  EXPECT_EQ(invert_block(bits("1010"), true).bits(), bits("01101"));
  EXPECT_EQ(invert_block(bits("0000"), false).bits(), bits("00000"));
  EXPECT_EQ(invert_block(bits("11"), true).bits(), bits("010"));
}

TEST(InvertBlock, RejectsBadLength) {
  EXPECT_THROW((void)invert_block(bits("101"), false), DimensionError);
  EXPECT_THROW((void)invert_block(BitString(), false), DimensionError);
  EXPECT_THROW((void)invert_block(bits("1"), true), DimensionError);
}

TEST(InvertBlock, InvertsEveryOutputForManySizes) {
  for (std::size_t b = 3; b <= 11; b += 2) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << (b - 1)); ++v) {
      const auto out = BitString::from_uint(v, b - 1);
      for (bool p : {false, true}) {
        const auto blk = invert_block(out, p);
        ASSERT_EQ(blk.size(), b);
        ASSERT_EQ(blk.bits()[blk.pivot_index()], p);
        ASSERT_EQ(transform_block(blk), out);
      }
    }
  }
}

TEST(Forge, WorkedExamples) {
  EXPECT_EQ(forge(tpl5("1010"), Selector{bits("0")}).data, bits("10010"));
  EXPECT_EQ(forge(tpl5("10101000"), Selector{bits("01")}).data, bits("1001001111"));
  EXPECT_EQ(forge(tpl5("10101000"), Selector{bits("11")}).data, bits("0110101111"));
}

TEST(Forge, SelectorLengthMismatch) {
  EXPECT_THROW((void)forge(tpl5("10101000"), Selector{bits("0")}), DimensionError);
  EXPECT_THROW((void)forge(tpl5("1010"), Selector{bits("01")}), DimensionError);
}

TEST(Forge, ZeroPadYieldsPaddedLength) {
  const auto tpl = transform(FeatureVector(bits("1011001")), TransformParams(5));
  const auto forged = forge(tpl, Selector::uniform(2, true));
  EXPECT_EQ(forged.size(), 10U);
  EXPECT_TRUE(same_protected_content(transform(forged, tpl.params()), tpl));
}

TEST(Enumerate, WorkedExamples) {
  EXPECT_EQ(texts(enumerate_preimages(tpl5("1010"), 10)), (std::set<std::string>{"10010", "01101"}));
  const auto four = enumerate_preimages(tpl5("10101000"), 100);
  ASSERT_EQ(four.size(), 4U);
  // Ascending selector order 00, 01, 10, 11.
  EXPECT_EQ(four[0].data, bits("10010 10000"));
  EXPECT_EQ(four[1].data, bits("10010 01111"));
  EXPECT_EQ(four[2].data, bits("01101 10000"));
  EXPECT_EQ(four[3].data, bits("01101 01111"));
}

TEST(Enumerate, LimitCaps) {
  const auto tpl = transform(FeatureVector(random_bits(1795, 3)), TransformParams(5));
  const auto one = enumerate_preimages(tpl, 1);
  ASSERT_EQ(one.size(), 1U);
  EXPECT_EQ(one[0].data, forge(tpl, Selector::uniform(tpl.block_count(), false)).data);
  EXPECT_EQ(enumerate_preimages(tpl, 5).size(), 5U);
  EXPECT_EQ(enumerate_preimages(tpl5("1010"), 1000).size(), 2U);
  EXPECT_THROW((void)enumerate_preimages(tpl, 0), InvalidArgument);
}

TEST(Enumerate, DistinctAndAllMap) {
  const auto tpl = transform(FeatureVector(random_bits(45, 9)), TransformParams(5));
  const auto all = enumerate_preimages(tpl, 1U << 20);
  ASSERT_EQ(all.size(), 512U);
  EXPECT_EQ(texts(all).size(), 512U);
  for (const auto& f : all) ASSERT_EQ(transform(f, tpl.params()), tpl);
}

TEST(SelectorRank, MostSignificantIsBlockZero) {
  EXPECT_EQ(Selector::from_rank(1, 2).choices, bits("01"));
  EXPECT_EQ(Selector::from_rank(2, 2).choices, bits("10"));
  EXPECT_EQ(Selector::from_rank(5, 100).choices.slice(97, 3), bits("101"));
  EXPECT_THROW((void)Selector::from_rank(4, 2), InvalidArgument);
}

TEST(CountPreimages, Exponents) {
  const auto big = transform(FeatureVector(random_bits(1795, 1)), TransformParams(5));
  ASSERT_EQ(big.data().size(), 1436U);
  EXPECT_EQ(count_preimages(big).exponent, 359U);
  EXPECT_EQ(count_preimages(big).to_string(), "2^359");
  EXPECT_FALSE(count_preimages(big).value().has_value());
  EXPECT_EQ(count_preimages(tpl5("1010")), (PreimageCount{2, 1}));
  EXPECT_EQ(count_preimages(tpl5("10101000")).value(), 4U);
  EXPECT_EQ(count_preimages(tpl5("10101000")).to_string(), "4");
  EXPECT_EQ((PreimageCount{2, 62}).to_string(), "4611686018427387904");
  EXPECT_EQ((PreimageCount{2, 63}).to_string(), "2^63");
}

TEST(BuildTable, FiveBitMatchesFixture) {
  const auto table = build_table(5);
  EXPECT_EQ(table.rows.size(), 16U);
  EXPECT_EQ(format_table(table), read_fixture("table_b5.txt"));
  EXPECT_EQ(table.rows.back().output, bits("1111"));
  EXPECT_EQ(table.rows.back().pivot_zero, bits("11011"));
  EXPECT_EQ(table.rows.back().pivot_one, bits("00100"));
}

TEST(BuildTable, ThreeBitMatchesBruteForce) {
  // Oracle: push all 8 3-bit blocks through the rule (b1^b2, b3^b2).
  std::map<std::string, std::set<std::string>> oracle;
  for (unsigned v = 0; v < 8; ++v) {
    const unsigned b1 = (v >> 2) & 1, b2 = (v >> 1) & 1, b3 = v & 1;
    const std::string out{char('0' + (b1 ^ b2)), char('0' + (b3 ^ b2))};
    oracle[out].insert(BitString::from_uint(v, 3).to_text());
  }
  const auto table = build_table(3);
  ASSERT_EQ(table.rows.size(), 4U);
  for (const auto& row : table.rows) {
    EXPECT_EQ(oracle.at(row.output.to_text()),
              (std::set<std::string>{row.pivot_zero.to_text(), row.pivot_one.to_text()}));
  }
  EXPECT_EQ(format_table(table), "00  000  111\n01  001  110\n10  100  011\n11  101  010\n");
}

TEST(BuildTable, RowInvariants) {
  for (std::size_t b = 3; b <= 13; b += 2) {
    const auto table = build_table(b);
    ASSERT_EQ(table.rows.size(), std::size_t{1} << (b - 1));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& r = table.rows[i];
      ASSERT_EQ(r.output.to_uint(), i);
      ASSERT_EQ(complement(r.pivot_zero), r.pivot_one);
      ASSERT_EQ(transform_block(Block(r.pivot_zero)), r.output);
      ASSERT_EQ(transform_block(Block(r.pivot_one)), r.output);
    }
  }
}

TEST(BuildTable, RejectsOutOfRange) {
  EXPECT_THROW((void)build_table(1), InvalidArgument);
  EXPECT_THROW((void)build_table(4), InvalidArgument);
  EXPECT_THROW((void)build_table(19), InvalidArgument);
  EXPECT_NO_THROW((void)build_table(17));
}

TEST(Properties, ForgeryAlwaysSucceeds) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t b = 3 + 2 * (gen() % 8);
    const auto policy = (gen() & 1) ? PaddingPolicy::kTruncate : PaddingPolicy::kZeroPad;
    const std::size_t len = b + gen() % 500;
    const auto tpl = transform(FeatureVector(arbitrary_bits(gen, len)), TransformParams(b, policy));
    const Selector sel{arbitrary_bits(gen, tpl.block_count())};
    const auto forged = forge(tpl, sel);
    ASSERT_EQ(forged.size(), tpl.block_count() * b);
    ASSERT_TRUE(same_protected_content(transform(forged, tpl.params()), tpl));
    const auto paired = forge(tpl, Selector{complement(sel.choices)});
    ASSERT_EQ(paired.data, complement(forged.data));
  }
}

TEST(FiberExactness, MatchesBruteForceUpToFifteenBits) {
  for (unsigned a : {5U, 10U, 15U}) {
    const auto fibers = brute_force_fibers(a);
    const std::size_t n = a / 5;
    ASSERT_EQ(fibers.size(), std::size_t{1} << (a - n)) << a;
    for (const auto& [out, members] : fibers) {
      ASSERT_EQ(members.size(), std::size_t{1} << n);
      const ProtectedTemplate tpl(BitString::from_uint(out, a - n), TransformParams(5), a);
      std::vector<std::uint64_t> enumerated;
      for (const auto& f : enumerate_preimages(tpl, 1U << 20)) enumerated.push_back(f.data.to_uint());
      std::sort(enumerated.begin(), enumerated.end());
      ASSERT_EQ(enumerated, members) << a << " " << out;
    }
  }
}

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "blo/attack.hpp"
#include "blo/errors.hpp"
#include "blo/transform.hpp"
#include "test_util.hpp"

using namespace blo;
using blo::testing::arbitrary_bits;
using blo::testing::bits;

namespace {

FeatureVector fv(const char* text) { return FeatureVector(bits(text)); }

// Literal five-bit rule (b1^b3, b2^b3, b4^b3, b5^b3) on an integer block,
// b1 as the most significant bit.
unsigned reference_block5(unsigned block) {
  const unsigned b1 = (block >> 4) & 1, b2 = (block >> 3) & 1, b3 = (block >> 2) & 1, b4 = (block >> 1) & 1,
                 b5 = block & 1;
  return ((b1 ^ b3) << 3) | ((b2 ^ b3) << 2) | ((b4 ^ b3) << 1) | (b5 ^ b3);
}

std::map<std::string, std::pair<std::string, std::string>> load_table_fixture() {
  std::ifstream in(std::string(BLO_FIXTURE_DIR) + "/table_b5.txt");
  std::map<std::string, std::pair<std::string, std::string>> rows;
  std::string out, a, b;
  while (in >> out >> a >> b) rows[out] = {a, b};
  return rows;
}

}  // namespace

TEST(TransformParams, RejectsEvenAndSmallBlockSizes) {
  EXPECT_THROW(TransformParams(4), InvalidArgument);
  EXPECT_THROW(TransformParams(30), InvalidArgument);
  EXPECT_THROW(TransformParams(1), InvalidArgument);
  EXPECT_THROW(TransformParams(0), InvalidArgument);
  EXPECT_NO_THROW(TransformParams(3));
  EXPECT_NO_THROW(TransformParams(31));
}

TEST(Segment, SizeArithmetic) {
  const FeatureVector f(random_bits(1795, 1));
  EXPECT_EQ(segment(f, TransformParams(5, PaddingPolicy::kZeroPad)).size(), 359U);
  EXPECT_EQ(segment(f, TransformParams(5, PaddingPolicy::kTruncate)).size(), 359U);
}

TEST(Segment, ZeroPadExtendsTail) {
  const auto blocks = segment(fv("1011001"), TransformParams(5, PaddingPolicy::kZeroPad));
  ASSERT_EQ(blocks.size(), 2U);
  EXPECT_EQ(blocks[0].bits(), bits("10110"));
  EXPECT_EQ(blocks[1].bits(), bits("01000"));
}

TEST(Segment, TruncateDropsTail) {
  const auto blocks = segment(fv("1011001"), TransformParams(5, PaddingPolicy::kTruncate));
  ASSERT_EQ(blocks.size(), 1U);
  EXPECT_EQ(blocks[0].bits(), bits("10110"));
}

TEST(Segment, TruncateRejectsInputShorterThanBlock) {
  EXPECT_THROW((void)segment(fv("1011"), TransformParams(5, PaddingPolicy::kTruncate)), InvalidArgument);
  EXPECT_EQ(segment(fv("1"), TransformParams(5, PaddingPolicy::kZeroPad)).size(), 1U);
}

TEST(Block, RejectsEvenOrShort) {
  EXPECT_THROW(Block(bits("1001")), InvalidArgument);
  EXPECT_THROW(Block(bits("1")), InvalidArgument);
  EXPECT_THROW(Block{BitString{}}, InvalidArgument);
}

TEST(TransformBlock, Examples) {
  EXPECT_EQ(transform_block(Block(bits("10010"))), bits("1010"));
  EXPECT_EQ(transform_block(Block(bits("01101"))), bits("1010"));
  EXPECT_EQ(transform_block(Block(bits("00000"))), bits("0000"));
  EXPECT_EQ(transform_block(Block(bits("101"))), bits("11"));
  EXPECT_EQ(transform_block(Block(bits("111"))), bits("00"));
  EXPECT_EQ(transform_block(Block(bits("0010000"))), bits("001000"));
  EXPECT_EQ(transform_block(Block(bits("0001000"))), bits("111111"));
}

TEST(TransformBlock, MatchesLiteralFiveBitRule) {
  for (unsigned v = 0; v < 32; ++v) {
    EXPECT_EQ(transform_block(Block(BitString::from_uint(v, 5))).to_uint(), reference_block5(v)) << v;
  }
}

TEST(TransformBlock, AllThirtyTwoBlocksReproduceTheTable) {
  const auto fixture = load_table_fixture();
  ASSERT_EQ(fixture.size(), 16U);
  std::map<std::string, std::vector<std::string>> fibers;
  for (unsigned v = 0; v < 32; ++v) {
    const auto in = BitString::from_uint(v, 5);
    fibers[transform_block(Block(in)).to_text()].push_back(in.to_text());
  }
  ASSERT_EQ(fibers.size(), 16U);
  for (const auto& [out, ins] : fibers) {
    ASSERT_EQ(ins.size(), 2U) << out;
    const auto& row = fixture.at(out);
    EXPECT_TRUE((ins[0] == row.first && ins[1] == row.second) || (ins[0] == row.second && ins[1] == row.first))
        << out;
  }
}

TEST(Transform, SizeArithmetic) {
  const auto tpl = transform(FeatureVector(random_bits(1795, 7)), TransformParams(5));
  EXPECT_EQ(tpl.data().size(), 1436U);
  EXPECT_EQ(tpl.block_count(), 359U);
  EXPECT_EQ(tpl.original_length(), 1795U);
  EXPECT_EQ(1795U - tpl.block_count(), tpl.data().size());
}

TEST(Transform, TwoBlockExample) {
  EXPECT_EQ(transform(fv("1001010000"), TransformParams(5)).data(), bits("10101000"));
  EXPECT_EQ(transform(fv("0000000000"), TransformParams(5)).data(), bits("00000000"));
}

TEST(Transform, ZeroPadRecordsOriginalLength) {
  const auto tpl = transform(fv("1011001"), TransformParams(5, PaddingPolicy::kZeroPad));
  EXPECT_EQ(tpl.original_length(), 7U);
  EXPECT_EQ(tpl.block_count(), 2U);
  EXPECT_EQ(tpl.data(), bits("0101 0100"));
  const auto trunc = transform(fv("1011001"), TransformParams(5, PaddingPolicy::kTruncate));
  EXPECT_EQ(trunc.block_count(), 1U);
  EXPECT_EQ(trunc.data(), bits("0101"));
}

TEST(ProtectedTemplate, ValidatesLength) {
  EXPECT_THROW(ProtectedTemplate(bits("101"), TransformParams(5), 5), DimensionError);
  EXPECT_THROW(ProtectedTemplate(BitString(), TransformParams(5, PaddingPolicy::kTruncate), 4), InvalidArgument);
  EXPECT_NO_THROW(ProtectedTemplate(bits("1010"), TransformParams(5), 3));
}

TEST(Properties, LengthLawAndBlockCount) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t b = 3 + 2 * (gen() % 8);
    const auto policy = (gen() & 1) ? PaddingPolicy::kTruncate : PaddingPolicy::kZeroPad;
    const std::size_t len = b + gen() % 400;
    const TransformParams params(b, policy);
    const auto tpl = transform(FeatureVector(arbitrary_bits(gen, len)), params);
    const std::size_t n = policy == PaddingPolicy::kZeroPad ? (len + b - 1) / b : len / b;
    ASSERT_EQ(tpl.block_count(), n);
    ASSERT_EQ(tpl.data().size(), n * (b - 1));
    if (policy == PaddingPolicy::kTruncate || len % b == 0) {
      ASSERT_LT(tpl.data().size(), len);
    }
    if (len % b == 0) {
      ASSERT_EQ(tpl.data().size() * b, len * (b - 1));
    }
  }
}

TEST(Properties, ComplementInvariance) {
  std::mt19937_64 gen(2);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t b = 3 + 2 * (gen() % 6);
    const std::size_t len = b * (1 + gen() % 60);
    const auto x = arbitrary_bits(gen, len);
    const TransformParams params(b);
    ASSERT_EQ(transform(FeatureVector(x), params), transform(FeatureVector(complement(x)), params));
  }
}

TEST(Properties, DeterministicAndFiberMember) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t b = 3 + 2 * (gen() % 4);
    const std::size_t len = 1 + gen() % 200;
    const FeatureVector f(arbitrary_bits(gen, len));
    const TransformParams params(b);
    const auto tpl = transform(f, params);
    ASSERT_EQ(transform(f, params), tpl);
    // The zero-padded original is the forgery whose selector is its own pivot bits.
    BitString pivots;
    for (const auto& blk : segment(f, params)) pivots.push_back(blk.bits()[blk.pivot_index()]);
    BitString padded = f.data;
    padded.append(BitString(tpl.block_count() * b - len));
    ASSERT_EQ(forge(tpl, Selector{pivots}).data, padded);
  }
}

TEST(BloCodec, HeaderLayout) {
  const auto tpl = transform(fv("1001010000"), TransformParams(5, PaddingPolicy::kTruncate));
  const auto enc = encode_template(tpl);
  const std::vector<std::uint8_t> expected{'B', 'L', 'O', '1', 0x01, 0x01, 0x00, 0x05, 0, 0, 0, 10, 0, 0, 0, 8, 0xA8};
  EXPECT_EQ(enc, expected);
  EXPECT_EQ(decode_template(enc), tpl);
}

TEST(BloCodec, RejectsCorruptFiles) {
  const auto good = encode_template(transform(fv("1001010000"), TransformParams(5)));
  auto bad_magic = good;
  bad_magic[3] = '2';
  EXPECT_THROW((void)decode_template(bad_magic), FormatError);
  auto bad_version = good;
  bad_version[4] = 0x02;
  EXPECT_THROW((void)decode_template(bad_version), FormatError);
  auto bad_policy = good;
  bad_policy[5] = 0x07;
  EXPECT_THROW((void)decode_template(bad_policy), FormatError);
  auto even_block = good;
  even_block[7] = 0x04;
  EXPECT_THROW((void)decode_template(even_block), FormatError);
  auto wrong_length = good;
  wrong_length[11] = 15;  // original length 15 -> 3 blocks, 12 bits expected
  EXPECT_THROW((void)decode_template(wrong_length), FormatError);
  auto truncated = good;
  truncated.pop_back();
  EXPECT_THROW((void)decode_template(truncated), FormatError);
  EXPECT_THROW((void)decode_template(std::vector<std::uint8_t>{}), FormatError);
}

TEST(Properties, BloCodecRoundTrip) {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t b = 3 + 2 * (gen() % 10);
    const auto policy = (gen() & 1) ? PaddingPolicy::kTruncate : PaddingPolicy::kZeroPad;
    const auto tpl = transform(FeatureVector(arbitrary_bits(gen, b + gen() % 300)), TransformParams(b, policy));
    ASSERT_EQ(decode_template(encode_template(tpl)), tpl);
  }
}

#include <gtest/gtest.h>

#include <random>

#include "rrix/oracle.hpp"
#include "rrix/serialization.hpp"
#include "test_util.hpp"

namespace rrix {
namespace {

using namespace rrix::testing;

DynamicRIndex build(std::span<const Symbol> t) {
  DynamicRIndex idx;
  for (std::size_t k = t.size(); k-- > 0;) idx.extend(t[k]);
  return idx;
}

ErrorCode decode_error(std::string_view bytes) {
  try {
    decode(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

TEST(IndexFile, HeaderBytes) {
  auto idx = build(terminated("GATTACAT"));
  const std::string bytes = encode(snapshot(idx, false));
  ASSERT_GE(bytes.size(), 6u);
  EXPECT_EQ(bytes.substr(0, 4), "RRIX");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 1);
  EXPECT_EQ(encode(snapshot(idx, true))[5], 5);
  EXPECT_EQ(encode(snapshot(FrozenIndex::from_symbols(terminated("GATTACAT"))))[5], 2);
}

TEST(IndexFile, RunListEncoding) {
  // "aaaa$1": BWT a$1aaa? runs are small, so every length fits one LEB128 byte.
  auto idx = build(terminated("aaaa"));
  auto f = snapshot(idx, false);
  const std::string bytes = encode(f);
  std::size_t pos = 6;
  auto u64_at = [&](std::size_t p) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{static_cast<unsigned char>(bytes[p + k])} << (8 * k);
    return v;
  };
  pos += 8 + u64_at(pos);  // skip alphabet
  const std::uint64_t len = u64_at(pos);
  EXPECT_EQ(len, 16u + f.runs.size() * 5);
  EXPECT_EQ(u64_at(pos + 8), 5u);
  EXPECT_EQ(u64_at(pos + 16), f.runs.size());
}

TEST(IndexFile, RoundTripsDynamic) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto t = terminated(random_string(rng, 1 + rng() % 300, round % 2 ? kDna : kLatin));
    auto idx = build(t);
    auto f = snapshot(idx, round % 2 == 0);
    const std::string bytes = encode(f);
    auto g = decode(bytes);
    ASSERT_EQ(f, g);
    auto back = restore_dynamic(g);
    ASSERT_EQ(back.bwt(), idx.bwt());
    ASSERT_EQ(back.suffix_array(), idx.suffix_array());
    ASSERT_EQ(encode(snapshot(back, round % 2 == 0)), bytes);
    // a restored index keeps extending correctly
    back.extend(sentinel(2));
    idx.extend(sentinel(2));
    ASSERT_EQ(back.bwt(), idx.bwt());
  }
}

TEST(IndexFile, RoundTripsFrozen) {
  std::mt19937_64 rng(6);
  for (int round = 0; round < 30; ++round) {
    auto t = terminated(random_string(rng, 1 + rng() % 300, kDna));
    auto frozen = FrozenIndex::from_symbols(t);
    const std::string bytes = encode(snapshot(frozen));
    auto back = restore_frozen(decode(bytes));
    ASSERT_EQ(back.runs(), frozen.runs());
    ASSERT_EQ(back.thresholds(), frozen.thresholds());
    ASSERT_TRUE(std::equal(back.text().begin(), back.text().end(), t.begin(), t.end()));
    ASSERT_EQ(encode(snapshot(back)), bytes);
  }
}

TEST(IndexFile, RejectsDamage) {
  auto idx = build(parse_symbols("GATTACAT$1GATACAT$2"));
  const std::string good = encode(snapshot(idx, false));
  EXPECT_EQ(decode_error("RRIY" + good.substr(4)), ErrorCode::bad_magic);
  EXPECT_EQ(decode_error("RR"), ErrorCode::bad_magic);
  std::string v = good;
  v[4] = 2;
  EXPECT_EQ(decode_error(v), ErrorCode::bad_version);
  std::string flags = good;
  flags[5] = 0x10;
  EXPECT_EQ(decode_error(flags), ErrorCode::corrupt_index);
  EXPECT_EQ(decode_error(good.substr(0, good.size() - 1)), ErrorCode::corrupt_index);
  EXPECT_EQ(decode_error(good + "x"), ErrorCode::corrupt_index);

  // a boundary pair that disagrees with the samples
  auto f = snapshot(idx, false);
  f.boundaries[0].second += 1;
  try {
    restore_dynamic(decode(encode(f)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::corrupt_index);
  }

  // swapped samples break the permutation
  auto g = snapshot(idx, false);
  std::swap(g.runs[0].head_sa, g.runs[1].tail_sa);
  g.boundaries.clear();
  g.flags = 0;
  EXPECT_THROW(restore_dynamic(decode(encode(g))), Error);

  // every single-byte flip either decodes to the same index or is rejected
  for (std::size_t k = 6; k < good.size(); ++k) {
    std::string bad = good;
    bad[k] = static_cast<char>(bad[k] ^ 0x5a);
    try {
      auto back = restore_dynamic(decode(bad));
      back.check_boundaries();
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::corrupt_index) << to_string(e.code()) << " at byte " << k;
    }
  }
}

TEST(IndexFile, AlphabetTableMustMatchRuns) {
  auto f = snapshot(build(terminated("GATTACA")), false);
  f.regular_bytes['Z' / 8] |= 1u << ('Z' % 8);
  EXPECT_EQ(decode_error(encode(f)), ErrorCode::corrupt_index);
}

}  // namespace
}  // namespace rrix

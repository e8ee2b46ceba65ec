#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rrix/errors.hpp"
#include "rrix/matching_statistics.hpp"
#include "rrix/r_index.hpp"

namespace rrix {

/// On-disk index layout.
///
///   "RRIX"  version:u8  flags:u8
///   then seven sections, each prefixed by its byte length as u64:
///     alphabet     u32 count, count x u32 non-regular codes, 32-byte bitmap of regular bytes
///     runs         u64 n, u64 r, r x (u32 symbol, LEB128 length)
///     hole         u64
///     head samples r x u64
///     tail samples r x u64
///     boundaries   u64 count, count x (u64 x, u64 y)          empty unless flags bit 0
///     thresholds   u64 count, count x (u32 c, u64 h, u64 thr)  empty unless flags bit 1
/// All integers are little-endian. SA values are 1-based.
struct IndexFile {
  static constexpr std::array<char, 4> kMagic = {'R', 'R', 'I', 'X'};
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::uint8_t kHasBoundaries = 1u << 0;
  static constexpr std::uint8_t kHasThresholds = 1u << 1;
  static constexpr std::uint8_t kReversed = 1u << 2;

  struct StoredRun {
    Symbol symbol = 0;
    std::uint64_t length = 0;
    std::uint64_t head_sa = 0;
    std::uint64_t tail_sa = 0;
    friend bool operator==(const StoredRun&, const StoredRun&) = default;
  };

  std::uint8_t flags = 0;
  std::vector<Symbol> special_symbols;  ///< sentinels and end marker present, ascending
  std::array<std::uint8_t, 32> regular_bytes{};
  std::uint64_t n = 0;
  std::vector<StoredRun> runs;
  std::uint64_t hole = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> boundaries;
  std::vector<ThresholdEntry> thresholds;

  bool reversed() const noexcept { return flags & kReversed; }
  bool frozen() const noexcept { return flags & kHasThresholds; }

  friend bool operator==(const IndexFile&, const IndexFile&) = default;
};

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void varint(std::uint64_t v) {
    do {
      std::uint8_t b = v & 0x7f;
      v >>= 7;
      if (v != 0) b |= 0x80;
      u8(b);
    } while (v != 0);
  }
  void bytes(std::string_view s) { out_.append(s); }
  void section(const ByteWriter& body) {
    u64(body.out_.size());
    bytes(body.out_);
  }
  const std::string& str() const noexcept { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t{u8()} << (8 * k);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{u8()} << (8 * k);
    return v;
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      std::uint8_t b = u8();
      v |= std::uint64_t{b & 0x7fu} << shift;
      if ((b & 0x80) == 0) return v;
    }
    fail(ErrorCode::corrupt_index, "varint too long");
  }
  std::string_view bytes(std::size_t k) {
    need(k);
    auto s = in_.substr(pos_, k);
    pos_ += k;
    return s;
  }
  ByteReader section() {
    const std::uint64_t len = u64();
    if (len > in_.size() - pos_) fail(ErrorCode::corrupt_index, "section runs past the end of the file");
    return ByteReader(bytes(static_cast<std::size_t>(len)));
  }
  bool done() const noexcept { return pos_ == in_.size(); }
  void expect_done(const char* what) const {
    if (!done()) fail(ErrorCode::corrupt_index, std::string("trailing bytes in ") + what);
  }

 private:
  void need(std::size_t k) const {
    if (k > in_.size() - pos_) fail(ErrorCode::corrupt_index, "truncated index file");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string encode(const IndexFile& f) {
  detail::ByteWriter w;
  w.bytes({IndexFile::kMagic.data(), IndexFile::kMagic.size()});
  w.u8(IndexFile::kVersion);
  w.u8(f.flags);

  detail::ByteWriter alphabet;
  alphabet.u32(static_cast<std::uint32_t>(f.special_symbols.size()));
  for (Symbol s : f.special_symbols) alphabet.u32(s);
  for (std::uint8_t b : f.regular_bytes) alphabet.u8(b);
  w.section(alphabet);

  detail::ByteWriter runs;
  runs.u64(f.n);
  runs.u64(f.runs.size());
  for (const auto& r : f.runs) {
    runs.u32(r.symbol);
    runs.varint(r.length);
  }
  w.section(runs);

  detail::ByteWriter hole;
  hole.u64(f.hole);
  w.section(hole);

  detail::ByteWriter heads, tails;
  for (const auto& r : f.runs) {
    heads.u64(r.head_sa);
    tails.u64(r.tail_sa);
  }
  w.section(heads);
  w.section(tails);

  detail::ByteWriter boundaries;
  if (f.flags & IndexFile::kHasBoundaries) {
    boundaries.u64(f.boundaries.size());
    for (auto [x, y] : f.boundaries) {
      boundaries.u64(x);
      boundaries.u64(y);
    }
  }
  w.section(boundaries);

  detail::ByteWriter thresholds;
  if (f.flags & IndexFile::kHasThresholds) {
    thresholds.u64(f.thresholds.size());
    for (const auto& e : f.thresholds) {
      thresholds.u32(e.symbol);
      thresholds.u64(e.gap_start);
      thresholds.u64(e.threshold);
    }
  }
  w.section(thresholds);
  return w.str();
}

inline IndexFile decode(std::string_view bytes) {
  detail::ByteReader in(bytes);
  if (bytes.size() < 4 || bytes.substr(0, 4) != std::string_view(IndexFile::kMagic.data(), 4))
    fail(ErrorCode::bad_magic, "not an index file");
  in.bytes(4);
  if (bytes.size() < 5 || in.u8() != IndexFile::kVersion) fail(ErrorCode::bad_version, "unsupported index version");
  IndexFile f;
  f.flags = in.u8();
  if (f.flags & ~(IndexFile::kHasBoundaries | IndexFile::kHasThresholds | IndexFile::kReversed))
    fail(ErrorCode::corrupt_index, "unknown flag bits");

  auto alphabet = in.section();
  const std::uint32_t specials = alphabet.u32();
  for (std::uint32_t k = 0; k < specials; ++k) f.special_symbols.push_back(alphabet.u32());
  for (auto& b : f.regular_bytes) b = alphabet.u8();
  alphabet.expect_done("alphabet");

  auto runs = in.section();
  f.n = runs.u64();
  const std::uint64_t r = runs.u64();
  if (r > f.n) fail(ErrorCode::corrupt_index, "more runs than symbols");
  f.runs.resize(r);
  std::uint64_t total = 0;
  for (auto& run : f.runs) {
    run.symbol = runs.u32();
    run.length = runs.varint();
    if (run.length == 0) fail(ErrorCode::corrupt_index, "zero-length run");
    total += run.length;
  }
  runs.expect_done("run list");
  if (total != f.n) fail(ErrorCode::corrupt_index, "run lengths do not add up to n");

  auto hole = in.section();
  f.hole = hole.u64();
  hole.expect_done("hole");

  auto heads = in.section();
  for (auto& run : f.runs) run.head_sa = heads.u64();
  heads.expect_done("head samples");
  auto tails = in.section();
  for (auto& run : f.runs) run.tail_sa = tails.u64();
  tails.expect_done("tail samples");

  auto boundaries = in.section();
  if (f.flags & IndexFile::kHasBoundaries) {
    const std::uint64_t count = boundaries.u64();
    if (count + 1 != r) fail(ErrorCode::corrupt_index, "boundary count is not r - 1");
    for (std::uint64_t k = 0; k < count; ++k) {
      std::uint64_t x = boundaries.u64();
      std::uint64_t y = boundaries.u64();
      f.boundaries.emplace_back(x, y);
    }
  }
  boundaries.expect_done("boundary set");

  auto thresholds = in.section();
  if (f.flags & IndexFile::kHasThresholds) {
    const std::uint64_t count = thresholds.u64();
    if (count >= r + 1) fail(ErrorCode::corrupt_index, "more thresholds than runs");
    for (std::uint64_t k = 0; k < count; ++k) {
      ThresholdEntry e;
      e.symbol = thresholds.u32();
      e.gap_start = thresholds.u64();
      e.threshold = thresholds.u64();
      f.thresholds.push_back(e);
    }
  }
  thresholds.expect_done("threshold table");
  in.expect_done("index file");

  // The alphabet table must describe exactly the symbols in the run list.
  std::set<Symbol> specials_seen;
  std::array<std::uint8_t, 32> bytes_seen{};
  for (const auto& run : f.runs) {
    if (is_regular(run.symbol)) {
      bytes_seen[byte_of(run.symbol) / 8] |= static_cast<std::uint8_t>(1u << (byte_of(run.symbol) % 8));
    } else {
      specials_seen.insert(run.symbol);
    }
  }
  if (std::vector<Symbol>(specials_seen.begin(), specials_seen.end()) != f.special_symbols || bytes_seen != f.regular_bytes)
    fail(ErrorCode::corrupt_index, "alphabet table disagrees with the run list");
  return f;
}

namespace detail {

inline void fill_alphabet(IndexFile& f) {
  std::set<Symbol> specials;
  for (const auto& run : f.runs) {
    if (is_regular(run.symbol)) {
      f.regular_bytes[byte_of(run.symbol) / 8] |= static_cast<std::uint8_t>(1u << (byte_of(run.symbol) % 8));
    } else {
      specials.insert(run.symbol);
    }
  }
  f.special_symbols.assign(specials.begin(), specials.end());
}

}  // namespace detail

inline IndexFile snapshot(const DynamicRIndex& idx, bool reversed) {
  IndexFile f;
  f.flags = IndexFile::kHasBoundaries | (reversed ? IndexFile::kReversed : 0);
  f.n = idx.size();
  f.hole = idx.hole();
  for (const auto& r : idx.run_samples()) f.runs.push_back({r.symbol, r.length, r.head_sa, r.tail_sa});
  f.boundaries = idx.boundary_pairs();
  detail::fill_alphabet(f);
  return f;
}

inline IndexFile snapshot(const FrozenIndex& idx) {
  IndexFile f;
  f.flags = IndexFile::kHasThresholds;
  f.n = idx.size();
  for (const auto& r : idx.runs()) {
    f.runs.push_back({r.symbol, r.length, r.head_sa, r.tail_sa});
    if (r.head_sa == 1) f.hole = r.head;
  }
  f.thresholds = idx.thresholds();
  detail::fill_alphabet(f);
  return f;
}

/// Also accepts a frozen file; its runs and samples are enough for count and locate.
inline DynamicRIndex restore_dynamic(const IndexFile& f) {
  if (f.runs.empty()) fail(ErrorCode::corrupt_index, "empty run list");
  std::vector<DynamicRIndex::RunSample> runs;
  runs.reserve(f.runs.size());
  for (const auto& r : f.runs) runs.push_back({r.symbol, r.length, r.head_sa, r.tail_sa});
  DynamicRIndex idx = DynamicRIndex::from_runs(runs, f.hole);
  idx.verify_samples();
  if ((f.flags & IndexFile::kHasBoundaries) && idx.boundary_pairs() != f.boundaries)
    fail(ErrorCode::corrupt_index, "boundary set disagrees with the run samples");
  return idx;
}

inline FrozenIndex restore_frozen(const IndexFile& f) {
  if (!f.frozen()) fail(ErrorCode::invalid_argument, "index file holds no thresholds");
  if (f.runs.empty()) fail(ErrorCode::corrupt_index, "empty run list");
  std::vector<FrozenIndex::Run> runs;
  runs.reserve(f.runs.size());
  std::uint64_t head = 1;
  for (const auto& r : f.runs) {
    runs.push_back({r.symbol, head, r.length, r.head_sa, r.tail_sa});
    head += r.length;
  }
  FrozenIndex idx = FrozenIndex::from_parts(std::move(runs), f.thresholds);
  if (f.hole == 0 || f.hole > f.n || idx.runs()[idx.run_index(f.hole)].head_sa != 1 || idx.runs()[idx.run_index(f.hole)].head != f.hole)
    fail(ErrorCode::corrupt_index, "hole does not hold SA = 1");
  return idx;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::io, "cannot read " + path);
  return data;
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorCode::io, "cannot write " + path);
}

inline void save(const std::string& path, const IndexFile& f) { write_file(path, encode(f)); }
inline IndexFile load(const std::string& path) { return decode(read_file(path)); }

}  // namespace rrix

// rrix: build, extend and query r-index files.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrix/oracle.hpp"
#include "rrix/rrix.hpp"

namespace {

using namespace rrix;

bool g_verbose = false;

void log(const std::string& msg) {
  if (g_verbose) std::cerr << "rrix: " << msg << '\n';
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::out_of_bounds:
      return 1;
    case ErrorCode::empty_input:
    case ErrorCode::byte_not_in_alphabet:
    case ErrorCode::unterminated_text:
    case ErrorCode::missing_sentinel:
    case ErrorCode::sentinel_reuse:
    case ErrorCode::symbol_absent_from_text:
    case ErrorCode::io:
      return 2;
    case ErrorCode::bad_magic:
    case ErrorCode::bad_version:
    case ErrorCode::corrupt_index:
      return 3;
    default:
      return 4;
  }
}

struct InputFlags {
  std::string format = "plain";
  std::string separator;
  std::string alphabet;
};

void add_input_flags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--format", f.format, "plain or fasta")->check(CLI::IsMember({"plain", "fasta"}));
  cmd->add_option("--separator", f.separator, "plain input: record separator byte (\\n and \\t accepted)");
  cmd->add_option("--alphabet", f.alphabet, "reject bytes outside this set");
}

Text read_text(const std::string& path, const InputFlags& f, std::uint32_t first_record) {
  IngestOptions opt;
  opt.format = f.format == "fasta" ? InputFormat::fasta_lite : InputFormat::plain;
  if (!f.separator.empty()) {
    if (f.separator == "\\n") {
      opt.record_separator = '\n';
    } else if (f.separator == "\\t") {
      opt.record_separator = '\t';
    } else if (f.separator.size() == 1) {
      opt.record_separator = f.separator[0];
    } else {
      fail(ErrorCode::invalid_argument, "separator must be a single byte");
    }
  }
  if (!f.alphabet.empty()) opt.alphabet = Alphabet::from_bytes(f.alphabet);
  opt.first_record = first_record;
  opt.trim_trailing_newline = true;
  Text t = ingest(read_file(path), opt);
  log("read " + std::to_string(t.size()) + " symbols in " + std::to_string(t.record_count()) + " records from " + path);
  return t;
}

std::string strip_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::vector<Symbol> pattern_codes(std::string_view p) {
  std::vector<Symbol> out;
  for (unsigned char b : p) out.push_back(regular(b));
  return out;
}

/// The indexed string for a reversed-orientation index: T reversed, then the end marker.
std::vector<Symbol> reversed_with_marker(std::span<const Symbol> t) {
  std::vector<Symbol> x(t.rbegin(), t.rend());
  x.push_back(kEndMarker);
  return x;
}

/// A loaded index plus the facts about the forward text that the CLI reports.
struct Loaded {
  IndexFile file;
  DynamicRIndex index;

  bool reversed() const { return file.reversed(); }
  std::uint64_t text_length() const { return reversed() ? file.n - 1 : file.n; }
  std::uint32_t records() const {
    return static_cast<std::uint32_t>(std::count_if(file.special_symbols.begin(), file.special_symbols.end(), is_sentinel));
  }

  std::vector<Symbol> forward_text() const {
    auto x = index.text();
    if (!reversed()) return x;
    x.pop_back();
    std::reverse(x.begin(), x.end());
    return x;
  }
};

Loaded load_index(const std::string& path) {
  Loaded l{load(path), {}};
  l.index = restore_dynamic(l.file);
  log("loaded " + path + ": n=" + std::to_string(l.file.n) + " r=" + std::to_string(l.file.runs.size()));
  return l;
}

FrozenIndex load_frozen(const Loaded& l) {
  if (l.file.frozen()) return restore_frozen(l.file);
  log("freezing the dynamic index");
  if (!l.reversed()) return FrozenIndex::from_dynamic(l.index);
  return FrozenIndex::from_symbols(l.forward_text());
}

void print_stats(std::uint64_t n, std::uint64_t r, std::uint64_t b) {
  std::cout << "n\t" << n << "\nr\t" << r << "\nboundaries\t" << b << '\n';
}

// ---- build

struct BuildArgs {
  std::string input, output;
  bool offline = false;
  bool forward = false;
  bool frozen = false;
  InputFlags in;
};

DynamicRIndex build_dynamic(std::span<const Symbol> t, bool reversed, bool offline) {
  if (offline) {
    std::vector<Symbol> s = reversed ? reversed_with_marker(t) : std::vector<Symbol>(t.begin(), t.end());
    return DynamicRIndex::from_suffix_array(s, oracle::naive_sa(s));
  }
  DynamicRIndex idx;
  if (reversed) {
    idx.extend(kEndMarker);
    for (Symbol c : t) idx.extend(c);
  } else {
    for (std::size_t k = t.size(); k-- > 0;) idx.extend(t[k]);
  }
  return idx;
}

int cmd_build(const BuildArgs& a) {
  Text text = read_text(a.input, a.in, 1);
  IndexFile f;
  if (a.frozen) {
    auto frozen = a.offline ? FrozenIndex::from_suffix_array({text.symbols().begin(), text.symbols().end()},
                                                             oracle::naive_sa(text.symbols()))
                            : FrozenIndex::from_text(text);
    f = snapshot(frozen);
    save(a.output, f);
    print_stats(text.size(), f.runs.size(), 0);
    return 0;
  }
  const bool reversed = !a.forward;
  DynamicRIndex idx = build_dynamic(text.symbols(), reversed, a.offline);
  log(std::string(a.offline ? "offline" : "online") + " build done");
  f = snapshot(idx, reversed);
  save(a.output, f);
  print_stats(text.size(), idx.run_count(), idx.boundary_count());
  return 0;
}

// ---- extend

struct ExtendArgs {
  std::string index, input, output;
  InputFlags in;
};

int cmd_extend(const ExtendArgs& a) {
  Loaded l = load_index(a.index);
  if (l.file.frozen()) fail(ErrorCode::invalid_argument, "a frozen index cannot be extended");
  Text text = read_text(a.input, a.in, l.records() + 1);
  const std::uint64_t r_before = l.index.run_count();
  if (l.reversed()) {
    for (Symbol c : text.symbols()) l.index.extend(c);
  } else {
    auto s = text.symbols();
    for (std::size_t k = s.size(); k-- > 0;) l.index.extend(s[k]);
  }
  log("r " + std::to_string(r_before) + " -> " + std::to_string(l.index.run_count()));
  save(a.output.empty() ? a.index : a.output, snapshot(l.index, l.reversed()));
  print_stats(l.text_length() + text.size(), l.index.run_count(), l.index.boundary_count());
  return 0;
}

// ---- count / locate

std::vector<std::uint64_t> locate_forward(const Loaded& l, std::string_view pattern) {
  std::vector<std::uint64_t> out;
  if (pattern.empty()) {
    auto t = l.forward_text();
    for (std::size_t i = 0; i < t.size(); ++i)
      if (is_regular(t[i])) out.push_back(i + 1);
    return out;
  }
  auto p = pattern_codes(pattern);
  if (!l.reversed()) return l.index.locate_all(p);
  std::reverse(p.begin(), p.end());
  const std::uint64_t n = l.text_length();
  const std::uint64_t m = p.size();
  for (std::uint64_t q : l.index.locate_all(p)) out.push_back(n - q - m + 2);
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_count(const std::string& index, const std::string& pattern) {
  Loaded l = load_index(index);
  if (pattern.empty()) {
    std::cout << l.text_length() - l.records() << '\n';
    return 0;
  }
  auto p = pattern_codes(pattern);
  if (l.reversed()) std::reverse(p.begin(), p.end());
  std::cout << l.index.count(p) << '\n';
  return 0;
}

int cmd_locate(const std::string& index, const std::string& pattern) {
  Loaded l = load_index(index);
  std::ostringstream out;
  for (std::uint64_t pos : locate_forward(l, pattern)) out << pos << '\n';
  std::cout << out.str();
  return 0;
}

// ---- lz77

struct Lz77Args {
  std::string input, output;
  bool binary = false;
  InputFlags in;
};

int cmd_lz77(const Lz77Args& a) {
  Text text = read_text(a.input, a.in, 1);
  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output, std::ios::binary | std::ios::trunc);
    if (!file) fail(ErrorCode::io, "cannot open " + a.output + " for writing");
  }
  std::ostream& out = a.output.empty() ? std::cout : file;
  Lz77Parser parser;
  std::uint64_t phrases = 0;
  auto emit = [&](const Lz77Phrase& ph) {
    ++phrases;
    if (a.binary) {
      write_phrase_binary(out, ph);
    } else {
      write_phrase_tsv(out, ph);
    }
  };
  for (Symbol c : text.symbols())
    if (auto ph = parser.feed(c)) emit(*ph);
  if (auto ph = parser.finalize()) emit(*ph);
  out.flush();
  if (!out) fail(ErrorCode::io, "write failed");
  log(std::to_string(phrases) + " phrases");
  return 0;
}

// ---- ms / mems / absent

struct QueryArgs {
  std::string index, query;
  bool literal = false;
  std::uint64_t min_len = 1;
};

std::vector<Symbol> read_query(const QueryArgs& a) {
  std::string q = a.literal ? a.query : strip_newline(read_file(a.query));
  if (q.empty()) fail(ErrorCode::empty_input, "empty query");
  return pattern_codes(q);
}

int cmd_ms(const QueryArgs& a) {
  auto s = read_query(a);
  FrozenIndex f = load_frozen(load_index(a.index));
  auto ms = matching_statistics(f, s);
  std::ostringstream out;
  for (std::size_t i = 0; i < ms.size(); ++i) out << i + 1 << '\t' << ms.p[i] << '\t' << ms.len[i] << '\n';
  std::cout << out.str();
  return 0;
}

int cmd_mems(const QueryArgs& a) {
  auto s = read_query(a);
  FrozenIndex f = load_frozen(load_index(a.index));
  std::ostringstream out;
  for (const Mem& m : mems(matching_statistics(f, s), a.min_len))
    out << m.query_pos << '\t' << m.text_pos << '\t' << m.length << '\n';
  std::cout << out.str();
  return 0;
}

int cmd_absent(const QueryArgs& a) {
  auto s = read_query(a);
  FrozenIndex f = load_frozen(load_index(a.index));
  std::ostringstream out;
  for (const QuerySubstring& q : minimal_absent(f, s, matching_statistics(f, s)))
    out << q.start << '\t' << q.length << '\n';
  std::cout << out.str();
  return 0;
}

// ---- selfcheck

int cmd_selfcheck(const std::string& input, const InputFlags& in) {
  Text text = read_text(input, in, 1);
  const auto t = text.symbols();
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    if (!ok) ++failures;
    if (!ok || g_verbose) std::cerr << (ok ? "ok   " : "FAIL ") << name << '\n';
  };

  DynamicRIndex fwd = build_dynamic(t, false, false);
  const auto sa = oracle::naive_sa(t);
  check("bwt", fwd.bwt() == oracle::bwt_from_sa(t, sa));
  check("suffix array", fwd.suffix_array() == sa);
  check("boundary set", fwd.boundary_pairs() == oracle::boundary_pairs(t));

  DynamicRIndex rev = build_dynamic(t, true, false);
  const std::string online = encode(snapshot(rev, true));
  check("online/offline", online == encode(snapshot(build_dynamic(t, true, true), true)));
  auto reloaded = restore_dynamic(decode(online));
  check("save/load", encode(snapshot(reloaded, true)) == online);

  auto phrases = Lz77Parser::parse(t);
  check("lz77", phrases == oracle::naive_lz77(t) && oracle::lz77_decode(phrases) == std::vector<Symbol>(t.begin(), t.end()));

  std::mt19937_64 rng(t.size());
  bool locate_ok = true;
  for (int k = 0; k < 200 && locate_ok; ++k) {
    const std::size_t i = rng() % t.size();
    const std::size_t len = 1 + rng() % std::min<std::size_t>(8, t.size() - i);
    std::span<const Symbol> p(t.data() + i, len);
    locate_ok = fwd.locate_all(p) == oracle::occurrences(t, p);
  }
  check("locate", locate_ok);

  auto frozen = FrozenIndex::from_symbols(t);
  bool ms_ok = true;
  std::vector<Symbol> regulars;
  for (Symbol c : t)
    if (is_regular(c)) regulars.push_back(c);
  for (int k = 0; k < 20 && ms_ok && !regulars.empty(); ++k) {
    const std::size_t i = rng() % regulars.size();
    std::vector<Symbol> s(regulars.begin() + static_cast<std::ptrdiff_t>(i),
                          regulars.begin() + static_cast<std::ptrdiff_t>(std::min(regulars.size(), i + 1 + rng() % 64)));
    for (auto& c : s)
      if (rng() % 20 == 0) c = regulars[rng() % regulars.size()];
    auto ms = matching_statistics(frozen, s);
    ms_ok = ms.len == oracle::naive_ms(s, t).len && minimal_absent(frozen, s, ms) == oracle::naive_minimal_absent(s, t);
    auto got = mems(ms, 1);
    auto want = oracle::naive_mems(s, t, 1);
    ms_ok = ms_ok && got.size() == want.size();
    for (std::size_t j = 0; ms_ok && j < got.size(); ++j)
      ms_ok = got[j].query_pos == want[j].start && got[j].length == want[j].length;
  }
  check("matching statistics", ms_ok);
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rrix: dynamic r-index over sentinel-terminated text collections"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", g_verbose, "log progress to stderr");
  app.fallthrough();

  BuildArgs build;
  auto* b = app.add_subcommand("build", "build an index file from a text");
  b->add_option("input", build.input, "input text")->required();
  b->add_option("-o,--output", build.output, "index file to write")->required();
  auto* online_flag = b->add_flag("--online", "prepend symbols one by one (default)");
  b->add_flag("--offline", build.offline, "build from an explicit suffix array")->excludes(online_flag);
  b->add_flag("--forward", build.forward, "index T itself; extend then prepends records");
  b->add_flag("--frozen", build.frozen, "write a static index with thresholds");
  add_input_flags(b, build.in);

  ExtendArgs extend;
  auto* e = app.add_subcommand("extend", "append records to an index");
  e->add_option("index", extend.index, "index file")->required();
  e->add_option("input", extend.input, "records to add")->required();
  e->add_option("-o,--output", extend.output, "write here instead of in place");
  add_input_flags(e, extend.in);

  std::string index, pattern;
  auto* c = app.add_subcommand("count", "number of occurrences of a pattern");
  c->add_option("index", index)->required();
  c->add_option("pattern", pattern)->required();
  auto* l = app.add_subcommand("locate", "text positions of a pattern, ascending");
  l->add_option("index", index)->required();
  l->add_option("pattern", pattern)->required();

  Lz77Args lz;
  auto* z = app.add_subcommand("lz77", "greedy LZ77 parse as TSV");
  z->add_option("input", lz.input)->required();
  z->add_option("-o,--output", lz.output, "output file (default stdout)");
  z->add_flag("--binary", lz.binary, "LEB128 framing instead of TSV");
  add_input_flags(z, lz.in);

  QueryArgs query;
  auto add_query = [&](const char* name, const char* desc) {
    auto* q = app.add_subcommand(name, desc);
    q->add_option("index", query.index)->required();
    q->add_option("query", query.query, "query file")->required();
    q->add_flag("--string", query.literal, "treat the query argument as the query itself");
    return q;
  };
  auto* ms = add_query("ms", "matching statistics of a query");
  auto* mm = add_query("mems", "maximal exact matches of a query");
  mm->add_option("--min-len", query.min_len, "minimum MEM length");
  auto* ab = add_query("absent", "minimal absent substrings of a query");

  std::string check_input;
  InputFlags check_flags;
  auto* sc = app.add_subcommand("selfcheck", "")->group("");
  sc->add_option("input", check_input)->required();
  add_input_flags(sc, check_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (b->parsed()) return cmd_build(build);
    if (e->parsed()) return cmd_extend(extend);
    if (c->parsed()) return cmd_count(index, pattern);
    if (l->parsed()) return cmd_locate(index, pattern);
    if (z->parsed()) return cmd_lz77(lz);
    if (ms->parsed()) return cmd_ms(query);
    if (mm->parsed()) return cmd_mems(query);
    if (ab->parsed()) return cmd_absent(query);
    if (sc->parsed()) return cmd_selfcheck(check_input, check_flags);
  } catch (const Error& err) {
    std::cerr << "rrix: " << err.what() << '\n';
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "rrix: internal error: " << err.what() << '\n';
    return 4;
  }
  return 1;
}

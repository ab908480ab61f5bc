#include "gsr/embedding_store.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <limits>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"
#include "support/fixtures.hpp"

namespace gsr {
namespace {

using testing::TempDir;

// Writes the byte layout by hand so the loader is checked against the format,
// not against its own writer.
std::string binary_bytes(const std::string& header,
                         const std::vector<std::pair<std::string, std::vector<float>>>& rows, bool newline) {
  std::string out = header + "\n";
  for (const auto& [tok, vec] : rows) {
    out += tok + " ";
    for (float f : vec) {
      char b[4];
      std::memcpy(b, &f, 4);
      out.append(b, 4);
    }
    if (newline) out += '\n';
  }
  return out;
}

TEST(EmbeddingStore, LoadsMinimalBinaryFile) {
  TempDir dir;
  write_file(dir / "min.bin", binary_bytes("2 3", {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, true));
  auto s = load_binary(dir / "min.bin");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.dim(), 3u);
  EXPECT_EQ(s.token(0), "a");
  EXPECT_EQ(s.vector(1)[1], 1.0f);
}

TEST(EmbeddingStore, TrailingNewlineIsOptional) {
  TempDir dir;
  write_file(dir / "a.bin", binary_bytes("2 2", {{"x", {1.5f, -2}}, {"y", {3, 4}}}, true));
  write_file(dir / "b.bin", binary_bytes("2 2", {{"x", {1.5f, -2}}, {"y", {3, 4}}}, false));
  EXPECT_EQ(load_binary(dir / "a.bin"), load_binary(dir / "b.bin"));
}

TEST(EmbeddingStore, EmptyBinaryFileIsHeaderError) {
  TempDir dir;
  write_file(dir / "empty.bin", "");
  EXPECT_THROW(load_binary(dir / "empty.bin"), FormatError);
  write_file(dir / "junk.bin", "two three\n");
  EXPECT_THROW(load_binary(dir / "junk.bin"), FormatError);
}

TEST(EmbeddingStore, TruncatedBinaryIsRejected) {
  TempDir dir;
  auto bytes = binary_bytes("2 3", {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, true);
  write_file(dir / "t.bin", bytes.substr(0, bytes.size() - 6));
  EXPECT_THROW(load_binary(dir / "t.bin"), FormatError);
  write_file(dir / "short.bin", binary_bytes("3 3", {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, true));
  EXPECT_THROW(load_binary(dir / "short.bin"), FormatError);
}

TEST(EmbeddingStore, DuplicateTokenNamesTheToken) {
  TempDir dir;
  write_file(dir / "d.bin", binary_bytes("2 1", {{"dup", {1}}, {"dup", {2}}}, true));
  try {
    load_binary(dir / "d.bin");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
}

TEST(EmbeddingStore, NonFiniteComponentIsLoadError) {
  TempDir dir;
  const float nan = std::numeric_limits<float>::quiet_NaN();
  write_file(dir / "nan.bin", binary_bytes("1 2", {{"a", {1, nan}}}, true));
  EXPECT_THROW(load_binary(dir / "nan.bin"), FormatError);
  write_file(dir / "inf.txt", "a 1 inf\n");
  EXPECT_THROW(load_text(dir / "inf.txt"), FormatError);
}

TEST(EmbeddingStore, BinaryRoundTripFiveWordFixture) {
  TempDir dir;
  EmbeddingStore s(4, "fixture");
  const std::array<std::array<float, 4>, 5> rows = {{{1, 2, 3, 4},
                                                     {-0.5f, 0.25f, 1e-8f, -3e7f},
                                                     {0, 0, 0, 0},
                                                     {3.14159f, 2.71828f, -1, 1},
                                                     {1e-38f, -1e38f, 7, 8}}};
  const std::array<const char*, 5> toks = {"alpha", "Beta", "caf\xc3\xa9", "d_e", "\xff\xfe"};
  for (std::size_t i = 0; i < 5; ++i) s.add(toks[i], rows[i]);
  save_binary(s, dir / "r.bin");
  auto back = load_binary(dir / "r.bin");
  EXPECT_EQ(back, s);
  // The bytes written match the hand-built layout exactly.
  std::vector<std::pair<std::string, std::vector<float>>> expect;
  for (std::size_t i = 0; i < 5; ++i) expect.push_back({toks[i], {rows[i].begin(), rows[i].end()}});
  EXPECT_EQ(read_file(dir / "r.bin"), binary_bytes("5 4", expect, true));
}

TEST(EmbeddingStore, RandomStoresRoundTripBothFormats) {
  TempDir dir;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto s = testing::random_store(1 + seed % 7, 1 + seed % 5, seed);
    save_binary(s, dir / "x.bin");
    save_text(s, dir / "x.vec");
    EXPECT_EQ(load_binary(dir / "x.bin"), s) << seed;
    EXPECT_EQ(load_text(dir / "x.vec"), s) << seed;
    // Writing the reloaded store reproduces the file byte for byte.
    const auto first = read_file(dir / "x.vec");
    save_text(load_text(dir / "x.vec"), dir / "y.vec");
    EXPECT_EQ(read_file(dir / "y.vec"), first);
  }
}

TEST(EmbeddingStore, TextWithoutHeader) {
  TempDir dir;
  write_file(dir / "t.vec", "x 1 2\ny 3 4");
  auto s = load_text(dir / "t.vec");
  EXPECT_EQ(s.dim(), 2u);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.vector(1)[0], 3.0f);
}

TEST(EmbeddingStore, TextRaggedLineReportsLineNumber) {
  TempDir dir;
  write_file(dir / "r.vec", "1 2\nx 1 2 3\n");
  try {
    load_text(dir / "r.vec");
    FAIL() << "expected a ragged-line error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(EmbeddingStore, TextRejectsInvalidUtf8) {
  TempDir dir;
  write_file(dir / "bad.vec", "ok 1 2\n\xc3\x28 3 4\n");
  EXPECT_THROW(load_text(dir / "bad.vec"), FormatError);
}

TEST(EmbeddingStore, SaveRejectsEmptyStoreAndDelimiterTokens) {
  TempDir dir;
  EmbeddingStore empty(3);
  EXPECT_THROW(save_text(empty, dir / "e.vec"), InputError);
  EXPECT_THROW(save_binary(empty, dir / "e.bin"), InputError);
  EmbeddingStore spaced(1);
  const float one = 1.0f;
  spaced.add("new york", std::span<const float>(&one, 1));
  EXPECT_THROW(save_binary(spaced, dir / "s.bin"), InputError);
}

TEST(EmbeddingStore, LookupExactThenLowercase) {
  EmbeddingStore s(1);
  const float v = 1.0f;
  s.add("Paris", std::span<const float>(&v, 1));
  s.add("london", std::span<const float>(&v, 1));
  auto exact = s.lookup("Paris");
  ASSERT_TRUE(exact);
  EXPECT_EQ(exact->form, LookupForm::exact);
  auto lower = s.lookup("London");
  ASSERT_TRUE(lower);
  EXPECT_EQ(lower->form, LookupForm::lowercase);
  EXPECT_EQ(s.token(lower->row), "london");
  EXPECT_FALSE(s.lookup("zzqx"));
  EXPECT_FALSE(s.lookup("paris"));  // fallback only lowercases the query
}

TEST(EmbeddingStore, AddValidatesInput) {
  EmbeddingStore s(2);
  const std::array<float, 2> ok = {1, 2};
  const std::array<float, 3> wrong = {1, 2, 3};
  s.add("a", ok);
  EXPECT_THROW(s.add("a", ok), InputError);
  EXPECT_THROW(s.add("b", wrong), InputError);
  EXPECT_THROW(s.add("", ok), InputError);
  const std::array<float, 2> inf = {1, std::numeric_limits<float>::infinity()};
  EXPECT_THROW(s.add("c", inf), InputError);
  EXPECT_EQ(s.size(), 1u);
}

TEST(EmbeddingStore, DisplayTokenReplacesInvalidBytes) {
  EXPECT_EQ(display_token("caf\xc3\xa9"), "caf\xc3\xa9");
  EXPECT_EQ(display_token("a\xff"), "a\xef\xbf\xbd");
  EXPECT_TRUE(is_valid_utf8("\xe2\x82\xac"));
  EXPECT_FALSE(is_valid_utf8("\xe2\x82"));
  EXPECT_FALSE(is_valid_utf8("\xc0\x80"));
}

TEST(EmbeddingStore, GzipInputIsInflated) {
  TempDir dir;
  const std::string text = "x 1 2\ny 3 4\n";
  // Precomputed gzip stream of `text`, produced once with `gzip -n`.
  const unsigned char gz[] = {0x1f, 0x8b, 0x08, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x03, 0xab, 0x50,
                              0x30, 0x54, 0x30, 0xe2, 0xaa, 0x54, 0x30, 0x56, 0x30, 0xe1, 0x02, 0x00,
                              0x12, 0xa6, 0x97, 0xd5, 0x0c, 0x00, 0x00, 0x00};
  write_file(dir / "t.vec.gz", std::string(reinterpret_cast<const char*>(gz), sizeof(gz)));
  EXPECT_EQ(read_file(dir / "t.vec.gz"), text);
}

}  // namespace
}  // namespace gsr

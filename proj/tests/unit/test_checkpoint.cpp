#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "textlier/checkpoint.hpp"
#include "textlier/error.hpp"
#include "textlier/random.hpp"

using namespace textlier;

namespace {

Checkpoint sample() {
  Checkpoint c;
  c.config["ae.latent_dim"] = "4";
  c.config["note"] = "two words";
  c.params.push_back({"w", nn::Tensor({2, 3}, {1.0, -2.5, 0.1, 1e-300, -0.0, 3.0})});
  c.params.push_back({"b", nn::Tensor({1}, {0.5})});
  return c;
}

std::string text_of(const Checkpoint& c) {
  std::ostringstream out;
  write_checkpoint(out, c);
  return out.str();
}

void expect_format_error(const std::string& text, const std::string& fragment) {
  std::istringstream in(text);
  try {
    read_checkpoint(in, "ck");
    ADD_FAILURE() << "accepted:\n" << text;
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Real, RandomBitPatternsRoundTrip) {
  Rng rng(5);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const double v = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(std::bit_cast<std::uint64_t>(parse_real(format_real(v))), std::bit_cast<std::uint64_t>(v))
        << format_real(v);
    ++checked;
  }
}

TEST(Real, ExtremesRoundTrip) {
  using L = std::numeric_limits<double>;
  for (double v : {0.0, -0.0, L::min(), L::max(), L::lowest(), L::denorm_min(), -L::denorm_min(),
                   L::epsilon(), 1.0 / 3.0, 0.1})
    EXPECT_EQ(std::bit_cast<std::uint64_t>(parse_real(format_real(v))), std::bit_cast<std::uint64_t>(v))
        << format_real(v);
}

TEST(Real, RejectsGarbage) {
  for (const char* s : {"", "abc", "1.0x", "--1", " 1"}) EXPECT_THROW(parse_real(s), FormatError) << s;
}

TEST(Checkpoint, StreamRoundTrip) {
  const Checkpoint c = sample();
  std::istringstream in(text_of(c));
  const Checkpoint back = read_checkpoint(in, "mem");
  EXPECT_EQ(back.config, c.config);
  ASSERT_EQ(back.params.size(), 2u);
  EXPECT_EQ(back.param("w"), c.param("w"));
  EXPECT_EQ(back.param("b"), c.param("b"));
  EXPECT_EQ(text_of(back), text_of(c));
  EXPECT_THROW(back.param("missing"), FormatError);
  EXPECT_THROW(back.value("missing"), FormatError);
}

TEST(Checkpoint, WriterRejectsBadContent) {
  Checkpoint c = sample();
  c.config["bad key"] = "1";
  std::ostringstream out;
  EXPECT_THROW(write_checkpoint(out, c), ArgumentError);
  Checkpoint n = sample();
  n.params[0].tensor[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(write_checkpoint(out, n), NumericalError);
}

TEST(Checkpoint, MalformedInputNamesTheLine) {
  expect_format_error("", "ck:0: expected 'textlier-checkpoint'");
  expect_format_error("other\n", "ck:1:");
  expect_format_error("textlier-checkpoint\nversion 2\nend\n", "ck:2: expected checkpoint version 1");
  expect_format_error("textlier-checkpoint\nversion 1\nconfig a 1\n", "'end' line");
  expect_format_error("textlier-checkpoint\nversion 1\nconfig a 1\nconfig a 2\nend\n",
                      "ck:4: expected unique config key 'a'");
  expect_format_error("textlier-checkpoint\nversion 1\nbogus\nend\n", "got 'bogus'");
  expect_format_error("textlier-checkpoint\nversion 1\nparam w 1 2\n1.0\nend\n", "ck:5: expected a real value in 'w', got 'end'");
  expect_format_error("textlier-checkpoint\nversion 1\nparam w 1 2\n1.0 2.0 3.0\nend\n",
                      "no more values");
  expect_format_error("textlier-checkpoint\nversion 1\nparam w 1 1\ninf\nend\n", "finite values");
  expect_format_error("textlier-checkpoint\nversion 1\nparam w 1 0\nend\n", "positive dimension");
  expect_format_error("textlier-checkpoint\nversion 1\nparam w 1 1\n1\nparam w 1 1\n2\nend\n",
                      "unique parameter name 'w'");
}

TEST(Checkpoint, ToleratesBlankLinesAndCarriageReturns) {
  std::istringstream in("textlier-checkpoint\r\n\nversion 1\r\nparam w 1 2\r\n1 2\r\n\nend\r\n");
  EXPECT_EQ(read_checkpoint(in, "ck").param("w"), nn::Tensor({2}, {1.0, 2.0}));
}

TEST(Checkpoint, FileSaveAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "textlier_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "model.txt";
  save_checkpoint(path, sample());
  EXPECT_EQ(load_checkpoint(path).param("w"), sample().param("w"));
  for (const auto& e : std::filesystem::directory_iterator(dir))
    EXPECT_EQ(e.path().filename(), "model.txt");
  EXPECT_THROW(load_checkpoint(dir / "absent.txt"), IoError);
  std::filesystem::remove_all(dir);
}

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "rgis/edge_list.hpp"

using namespace rgis;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    from_edge_list(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(EdgeList, ParsesSmallDocument) {
  const auto g = from_edge_list("3 1\n0 1\n");
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_EQ(g.degree(2), 0u);
}

TEST(EdgeList, RejectsBadDocumentsWithLineNumbers) {
  EXPECT_EQ(error_line("2 1\n0 0\n"), 2u);         // self-loop
  EXPECT_EQ(error_line("3 2\n0 1\n0 1\n"), 3u);    // duplicate
  EXPECT_EQ(error_line("3 1\n0 3\n"), 2u);         // out of range
  EXPECT_EQ(error_line("3 1\n2 1\n"), 2u);         // u > v
  EXPECT_EQ(error_line("3 1\nzero one\n"), 2u);    // malformed
  EXPECT_EQ(error_line("three\n"), 1u);            // bad header
  EXPECT_GT(error_line("3 2\n0 1\n"), 0u);         // missing edge
  EXPECT_GT(error_line("3 1\n0 1\n1 2\n"), 0u);    // extra edge
}

TEST(EdgeList, AcceptsCarriageReturns) {
  const auto g = from_edge_list("3 2\r\n0 1\r\n1 2\r\n");
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(EdgeList, RoundTrip) {
  for (std::uint64_t seed = 1; seed < 6; ++seed) {
    const auto g = gnp_sample(50, 0.2, seed);
    EXPECT_TRUE(from_edge_list(to_edge_list(g)) == g);
  }
  EXPECT_TRUE(from_edge_list(to_edge_list(empty_graph(0))) == empty_graph(0));
}

TEST(EdgeList, FileRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "rgis_edge_list_test.el";
  const auto g = complete_bipartite(3, 4);
  write_edge_list_file(g, path.string());
  EXPECT_TRUE(read_edge_list_file(path.string()) == g);
  std::filesystem::remove(path);
  EXPECT_THROW(read_edge_list_file(path.string()), std::runtime_error);
}

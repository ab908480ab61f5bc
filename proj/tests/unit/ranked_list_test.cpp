#include "gsr/ranked_list.hpp"

#include <gtest/gtest.h>

#include "gsr/error.hpp"
#include "support/fixtures.hpp"

namespace gsr {
namespace {

RankedList five() {
  return make_ranked_list("q", {{"e", 0.1}, {"a", 0.9}, {"c", 0.5}, {"b", 0.5}, {"d", 0.3}});
}

TEST(RankedList, SortsByScoreThenId) {
  auto l = five();
  ASSERT_TRUE(is_well_formed(l));
  std::vector<std::string> ids;
  for (const auto& it : l.items) ids.push_back(it.doc_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"a", "b", "c", "d", "e"}));
  EXPECT_EQ(l.items[4].rank, 5u);
}

TEST(RankedList, Truncation) {
  auto l = five();
  EXPECT_TRUE(truncate_to_k(l, 0).empty());
  EXPECT_EQ(truncate_to_k(l, 9).size(), 5u);
  auto two = truncate_to_k(l, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.items[1].doc_id, "b");
  EXPECT_EQ(two.items[1].rank, 2u);
}

TEST(RankedList, WellFormedDetectsViolations) {
  auto l = five();
  l.items[2].rank = 7;
  EXPECT_FALSE(is_well_formed(l));
  l = five();
  l.items[3].score = 2.0;
  EXPECT_FALSE(is_well_formed(l));
  l = five();
  l.items[1].doc_id = "a";
  EXPECT_FALSE(is_well_formed(l));
}

TEST(RankedList, TrecRunRoundTrip) {
  RunSet run;
  run["301"] = five();
  run["301"].query_id = "301";
  run["302"] = make_ranked_list("302", {{"x", 1.0 / 3.0}, {"y", -2.5e-9}});
  testing::TempDir dir;
  write_trec_run(run, "sys", dir / "run.txt");
  auto back = read_trec_run(dir / "run.txt");
  ASSERT_EQ(back.size(), 2u);
  for (const auto& [qid, list] : run) {
    ASSERT_EQ(back[qid].size(), list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
      EXPECT_EQ(back[qid].items[i].doc_id, list.items[i].doc_id);
      EXPECT_EQ(back[qid].items[i].score, list.items[i].score);
      EXPECT_EQ(back[qid].items[i].rank, i + 1);
    }
  }
  EXPECT_EQ(format_trec_run(back, "sys"), format_trec_run(run, "sys"));
}

TEST(RankedList, TrecRunParsingOrdersByRankAndRejectsJunk) {
  auto run = parse_trec_run_text("1 Q0 b 2 0.5 t\n1 Q0 a 1 0.9 t\n");
  ASSERT_EQ(run["1"].size(), 2u);
  EXPECT_EQ(run["1"].items[0].doc_id, "a");
  EXPECT_THROW(parse_trec_run_text("1 Q0 a 1 0.9\n"), FormatError);
  EXPECT_THROW(parse_trec_run_text("1 Q0 a one 0.9 t\n"), FormatError);
  EXPECT_THROW(parse_trec_run_text("1 Q0 a 1 0.9 t\n1 Q0 a 2 0.8 t\n"), FormatError);
}

}  // namespace
}  // namespace gsr

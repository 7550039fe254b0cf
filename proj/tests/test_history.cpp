#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "brute_force.hpp"
#include "cbst/history.hpp"

namespace cbst {
namespace {

Event invoke(std::uint32_t t, std::uint32_t seq, OpKind op, Key key, std::int64_t ts) {
  return {t, seq, EventKind::kInvoke, op, key, std::nullopt, ts};
}

Event respond(std::uint32_t t, std::uint32_t seq, OpKind op, Key key, bool r, std::int64_t ts) {
  return {t, seq, EventKind::kRespond, op, key, r, ts};
}

TEST(History, FormatMatchesLineSyntax) {
  EXPECT_EQ(format_event(invoke(0, 3, OpKind::kInsert, 5, 100)), "0 3 INVOKE INSERT 5 100");
  EXPECT_EQ(format_event(respond(2, 0, OpKind::kDelete, -7, false, 9)),
            "2 0 RESPOND DELETE -7 false 9");
}

TEST(History, ParseRejectsGarbage) {
  EXPECT_THROW(parse_event("0 0 INVOKE INSERT"), HistoryFormatError);
  EXPECT_THROW(parse_event("0 0 CALL INSERT 5 1"), HistoryFormatError);
  EXPECT_THROW(parse_event("0 0 RESPOND INSERT 5 maybe 1"), HistoryFormatError);
  EXPECT_THROW(parse_event("x 0 INVOKE INSERT 5 1"), HistoryFormatError);
  EXPECT_THROW(parse_event("0 0 INVOKE insert 5 1"), HistoryFormatError);
}

TEST(History, RoundTripsThroughText) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    History h = testing::random_history(rng, 3, 12, 5);
    std::stringstream buf;
    write_history(buf, h);
    History back = read_history(buf);
    EXPECT_EQ(back.events(), h.events());
  }
}

TEST(History, ReaderSkipsCommentsAndNamesBadLine) {
  std::istringstream ok("# header\n\n0 0 INVOKE SEARCH 1 5\n0 0 RESPOND SEARCH 1 true 6\n");
  EXPECT_EQ(read_history(ok).size(), 2u);
  std::istringstream bad("0 0 INVOKE SEARCH 1 5\nnonsense\n");
  try {
    read_history(bad);
    FAIL() << "expected HistoryFormatError";
  } catch (const HistoryFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(History, EventsAreSortedByTime) {
  History h({respond(0, 0, OpKind::kInsert, 1, true, 20), invoke(0, 0, OpKind::kInsert, 1, 10)});
  EXPECT_EQ(h.events().front().kind, EventKind::kInvoke);
  EXPECT_EQ(h.check_well_formed(), "");
}

TEST(History, WellFormednessProblems) {
  EXPECT_NE(History({respond(0, 0, OpKind::kInsert, 1, true, 5)}).check_well_formed(), "");
  EXPECT_NE(History({invoke(0, 0, OpKind::kInsert, 1, 5), invoke(0, 1, OpKind::kInsert, 2, 6)})
                .check_well_formed(),
            "");
  EXPECT_NE(History({invoke(0, 0, OpKind::kInsert, 1, 5),
                     respond(0, 0, OpKind::kDelete, 1, true, 6)})
                .check_well_formed(),
            "");
  EXPECT_NE(History({invoke(0, 0, OpKind::kInsert, kPosInf, 5)}).check_well_formed(), "");
  EXPECT_THROW(History({respond(0, 0, OpKind::kInsert, 1, true, 5)}).operations(),
               HistoryFormatError);
}

TEST(History, OperationsPairEventsAndKeepPending) {
  History h({invoke(0, 0, OpKind::kInsert, 1, 10), invoke(1, 0, OpKind::kSearch, 1, 11),
             respond(0, 0, OpKind::kInsert, 1, true, 12)});
  auto ops = h.operations();
  ASSERT_EQ(ops.size(), 2u);
  EXPECT_EQ(ops[0].respond_ns, 12);
  EXPECT_EQ(ops[0].result, true);
  EXPECT_TRUE(ops[1].pending());
  EXPECT_EQ(ops[1].respond_ns, Operation::kPending);
  EXPECT_FALSE(h.complete());
}

TEST(History, FixturesParse) {
  for (const char* name : {"linearizable.history", "nonlinearizable.history"}) {
    std::ifstream in(std::string(CBST_FIXTURE_DIR) + "/" + name);
    ASSERT_TRUE(in) << name;
    History h = read_history(in);
    EXPECT_EQ(h.operations().size(), 2u);
    EXPECT_TRUE(h.complete());
  }
}

}  // namespace
}  // namespace cbst

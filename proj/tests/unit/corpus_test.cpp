// Copyright 2026 The Entrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entrain/corpus.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "entrain/error.hpp"
#include "test_util.hpp"

namespace entrain {
namespace {

using testing::MakeTurns;

constexpr const char* kHeader = "index,speaker,start_s,end_s,char_count\n";

std::vector<Turn> Parse(const std::string& body) {
  std::istringstream in(std::string(kHeader) + body);
  return ParseTurnTable(in);
}

TEST(TurnTableTest, FourAlternatingRows) {
  const auto turns = Parse(
      "0,C,0.0,1.0,5\n"
      "1,T,1.2,2.0,3\n"
      "2,C,2.5,4.0,9\n"
      "3,T,4.1,5.0,2\n");
  const Conversation c = MakeConversation("x", turns);
  ASSERT_EQ(c.turns.size(), 4u);
  EXPECT_EQ(c.turns[2].speaker, Speaker::kClient);
  EXPECT_DOUBLE_EQ(c.turns[3].end_s, 5.0);
}

TEST(TurnTableTest, SameSpeakerRowsMerge) {
  const auto turns = Parse(
      "0,C,1.0,2.0,5\n"
      "1,C,2.5,3.0,7\n"
      "2,T,3.5,4.0,1\n");
  const Conversation c = MakeConversation("x", turns);
  ASSERT_EQ(c.turns.size(), 2u);
  EXPECT_DOUBLE_EQ(c.turns[0].start_s, 1.0);
  EXPECT_DOUBLE_EQ(c.turns[0].end_s, 3.0);
  EXPECT_EQ(c.turns[0].char_count, 12);
  EXPECT_EQ(c.turns[1].index, 1u);
}

TEST(TurnTableTest, EndBeforeStartRejected) {
  const auto turns = Parse("0,C,2.0,1.0,5\n1,T,3.0,4.0,1\n");
  EXPECT_THROW(MakeConversation("x", turns), ValidationError);
}

TEST(TurnTableTest, OverlapRejected) {
  const auto turns = Parse("0,C,0.0,2.0,5\n1,T,1.5,4.0,1\n");
  EXPECT_THROW(MakeConversation("x", turns), ValidationError);
}

TEST(TurnTableTest, SingleSpeakerRejected) {
  const auto turns = Parse("0,C,0.0,1.0,5\n1,C,1.5,2.0,1\n");
  EXPECT_THROW(MakeConversation("x", turns), Error);
}

TEST(TurnTableTest, MalformedInput) {
  std::istringstream no_header("0,C,0,1,1\n");
  EXPECT_THROW(ParseTurnTable(no_header), ParseError);
  EXPECT_THROW(Parse("0,X,0.0,1.0,5\n"), ValidationError);
  EXPECT_THROW(Parse("0,C,abc,1.0,5\n"), ParseError);
  EXPECT_THROW(Parse("0,C,0.0,1.0\n"), ParseError);
  try {
    Parse("0,C,0.0,1.0,5\n1,T,zz,2,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(TurnTableTest, RoundTrip) {
  const Conversation a = MakeConversation("x", MakeTurns("CTCTCT"));
  std::stringstream buffer;
  WriteTurnTable(buffer, a);
  const Conversation b = MakeConversation("x", ParseTurnTable(buffer));
  EXPECT_EQ(a.turns, b.turns);
}

TEST(TurnTableTest, MergeIsIdempotent) {
  const auto turns = MakeTurns("TCTCTC");
  const Conversation c = MakeConversation("x", turns);
  EXPECT_EQ(c.turns, turns);
  EXPECT_EQ(MakeConversation("x", c.turns).turns, c.turns);
}

TEST(TurnTableTest, AudioMustCoverTurns) {
  Waveform wave;
  wave.sample_rate = 8000;
  wave.samples.assign(8000, 0.0f);
  EXPECT_THROW(MakeConversation("x", MakeTurns("CTCT"), wave), ValidationError);
  wave.samples.assign(8000 * 6, 0.0f);
  EXPECT_NO_THROW(MakeConversation("x", MakeTurns("CTCT"), wave));
}

TEST(TurnTableTest, LoadUsesFileStemAsId) {
  testing::TempDir dir;
  const auto path = dir.path() / "session7.csv";
  testing::Spit(path, std::string(kHeader) + "0,C,0,1,2\n1,T,1,2,3\n");
  EXPECT_EQ(LoadConversation(path).id, "session7");
}

RatingsTable ParseRatingsText(const std::string& body) {
  std::istringstream in("conversation_id,tes,blri,ses\n" + body);
  return ParseRatings(in);
}

TEST(RatingsTest, ScaleMaximaAccepted) {
  const RatingsTable t = ParseRatingsText("conv1,63,48,25\n");
  const Ratings* r = t.Find("conv1");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->tes, 63);
  EXPECT_EQ(r->blri, 48);
  EXPECT_EQ(r->ses, 25);
  EXPECT_TRUE(r->complete());
}

TEST(RatingsTest, EmptyCellsAreMissing) {
  const RatingsTable t = ParseRatingsText("conv2,55,,\n");
  const Ratings* r = t.Find("conv2");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->tes, 55);
  EXPECT_FALSE(r->blri.has_value());
  EXPECT_FALSE(r->ses.has_value());
  EXPECT_EQ(t.IncompleteIds(), std::vector<std::string>{"conv2"});
}

TEST(RatingsTest, OutOfRangeNamesScale) {
  try {
    ParseRatingsText("conv3,70,0,10\n");
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_EQ(e.scale(), "TES");
  }
  EXPECT_THROW(ParseRatingsText("c,9,-49,5\n"), RangeError);
  EXPECT_THROW(ParseRatingsText("c,9,0,4\n"), RangeError);
}

TEST(RatingsTest, DuplicatesAndBadHeaderRejected) {
  EXPECT_THROW(ParseRatingsText("a,10,0,5\na,11,0,5\n"), Error);
  std::istringstream bad("id,x\n");
  EXPECT_THROW(ParseRatings(bad), ParseError);
}

TEST(RatingsTest, WriteParseRoundTrip) {
  const RatingsTable t = ParseRatingsText("b,9,-48,5\na,63,,25\n");
  std::stringstream buffer;
  WriteRatings(buffer, t);
  const RatingsTable u = ParseRatings(buffer);
  EXPECT_EQ(t.rows(), u.rows());
}

}  // namespace
}  // namespace entrain

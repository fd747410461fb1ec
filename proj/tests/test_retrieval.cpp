#include <memory>

#include <doctest.h>

#include "ideaforge/errors.hpp"
#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/provider/mock_provider.hpp"
#include "ideaforge/retrieval/paper_source.hpp"
#include "ideaforge/retrieval/retrieval.hpp"
#include "ideaforge/retrieval/types.hpp"
#include "test_util.hpp"

using namespace ideaforge;

namespace {

retrieval::PaperRecord paper(const std::string& id, const std::string& title,
                             const std::string& abstract_text,
                             int relevance = 0) {
  retrieval::PaperRecord p;
  p.paper_id = id;
  p.title = title;
  p.abstract_text = abstract_text;
  p.relevance = relevance;
  return p;
}

retrieval::StaticPaperSource tiny_source() {
  std::vector<retrieval::PaperRecord> corpus{
      paper("p1", "Alpha decoding strategies", "We study alpha methods."),
      paper("p2", "Beta prompting with alpha hints", "Beta alpha mix."),
      paper("p3", "Gamma verification", "Unrelated gamma work."),
      paper("p4", "Alpha beta gamma survey", "Covers alpha beta gamma."),
  };
  std::map<std::string, std::vector<std::string>> refs{
      {"p4", {"p3", "p1", "p2"}}};
  return retrieval::StaticPaperSource(std::move(corpus), std::move(refs));
}

provider::Gateway mock_gateway(const std::filesystem::path& dir,
                               provider::MockScript script = {}) {
  provider::GatewayConfig config;
  config.cache_dir = dir;
  config.retry.base_delay_ms = 0;
  return provider::Gateway(config,
                           std::make_shared<provider::MockProvider>(script));
}

}  // namespace

TEST_CASE("topic catalog lookup") {
  CHECK(retrieval::topic_catalog().size() == 7);
  const auto& topic = retrieval::topic_by_name(" Factuality ");
  CHECK(topic.name == "factuality");
  CHECK_FALSE(topic.description.empty());
  CHECK_THROWS_AS(retrieval::topic_by_name("astrology"), ConfigError);
}

TEST_CASE("planned step parsing accepts the documented forms") {
  auto step = retrieval::parse_planned_step("KeywordQuery(chain of thought)");
  REQUIRE(step.has_value());
  CHECK_FALSE(step->stop);
  CHECK(step->action.kind == retrieval::ActionKind::KeywordQuery);
  CHECK(step->action.argument == "chain of thought");

  step = retrieval::parse_planned_step("Let's do PaperQuery( arxiv-123 ).");
  REQUIRE(step.has_value());
  CHECK(step->action.kind == retrieval::ActionKind::PaperQuery);
  CHECK(step->action.argument == "arxiv-123");

  step = retrieval::parse_planned_step("getreferences(p9)");
  REQUIRE(step.has_value());
  CHECK(step->action.kind == retrieval::ActionKind::GetReferences);

  step = retrieval::parse_planned_step("I will Stop() here.");
  REQUIRE(step.has_value());
  CHECK(step->stop);

  // The earliest recognizable form wins.
  step = retrieval::parse_planned_step("Stop() or KeywordQuery(x)");
  REQUIRE(step.has_value());
  CHECK(step->stop);
  step = retrieval::parse_planned_step("KeywordQuery(x) then Stop()");
  REQUIRE(step.has_value());
  CHECK_FALSE(step->stop);
  CHECK(step->action.argument == "x");

  CHECK_FALSE(retrieval::parse_planned_step("KeywordQuery(oops").has_value());
  CHECK_FALSE(retrieval::parse_planned_step("KeywordQuery()").has_value());
  CHECK_FALSE(retrieval::parse_planned_step("no action at all").has_value());
}

TEST_CASE("action formatting round trips through the parser") {
  retrieval::RetrievalAction action{retrieval::ActionKind::GetReferences,
                                    "p42"};
  auto step = retrieval::parse_planned_step(retrieval::format_action(action));
  REQUIRE(step.has_value());
  CHECK(step->action.kind == action.kind);
  CHECK(step->action.argument == action.argument);
}

TEST_CASE("paper json round trip") {
  auto original = paper("p7", "A title", "An abstract.", 9);
  auto back = retrieval::paper_from_json(retrieval::paper_to_json(original));
  CHECK(back.paper_id == original.paper_id);
  CHECK(back.title == original.title);
  CHECK(back.abstract_text == original.abstract_text);
  CHECK(back.relevance == 9);
}

TEST_CASE("trace rejects duplicates and empty ids") {
  retrieval::RetrievalTrace trace;
  CHECK(trace.add_paper(paper("p1", "t", "a")));
  CHECK_FALSE(trace.add_paper(paper("p1", "t again", "a again")));
  CHECK_FALSE(trace.add_paper(paper("", "anon", "a")));
  CHECK(trace.papers.size() == 1);
  CHECK(trace.contains("p1"));
  CHECK_FALSE(trace.contains("p2"));
}

TEST_CASE("execute_action respects caps and dedupes") {
  auto source = tiny_source();
  retrieval::RetrievalTrace trace;
  retrieval::RetrievalCaps caps;
  caps.per_call_keep = 2;
  caps.max_papers = 3;

  retrieval::RetrievalAction query{retrieval::ActionKind::KeywordQuery,
                                   "alpha"};
  // Three papers mention "alpha"; the per-call cap keeps the first two.
  CHECK(retrieval::execute_action(query, source, trace, caps) == 2);
  CHECK(trace.papers.size() == 2);
  // Same query again: everything returned is already collected.
  CHECK(retrieval::execute_action(query, source, trace, caps) == 0);

  retrieval::RetrievalAction refs{retrieval::ActionKind::GetReferences, "p4"};
  // References come back [p3, p1]; p3 is new and fills the pool cap.
  CHECK(retrieval::execute_action(refs, source, trace, caps) == 1);
  CHECK(trace.papers.size() == 3);
  CHECK(trace.contains("p3"));

  retrieval::RetrievalAction gamma{retrieval::ActionKind::KeywordQuery,
                                   "gamma"};
  // The pool is full, so even fresh results are turned away.
  CHECK(retrieval::execute_action(gamma, source, trace, caps) == 0);
  CHECK(trace.papers.size() == 3);
  REQUIRE(trace.actions.size() == 4);
  CHECK(trace.actions[0].added == 2);
  CHECK(trace.actions[1].added == 0);
  CHECK(trace.actions[2].added == 1);
  CHECK(trace.actions[3].added == 0);

  retrieval::RetrievalAction bad{retrieval::ActionKind::PaperQuery, "nope"};
  CHECK_THROWS_AS(retrieval::execute_action(bad, source, trace, caps),
                  StageError);
  retrieval::RetrievalAction bad_refs{retrieval::ActionKind::GetReferences,
                                      "nope"};
  CHECK_THROWS_AS(retrieval::execute_action(bad_refs, source, trace, caps),
                  StageError);
}

TEST_CASE("select_top orders by relevance with arrival tiebreak") {
  retrieval::RetrievalTrace trace;
  trace.add_paper(paper("p1", "t1", "a", 3));
  trace.add_paper(paper("p2", "t2", "a", 9));
  trace.add_paper(paper("p3", "t3", "a", 5));
  trace.add_paper(paper("p4", "t4", "a", 9));

  auto top = retrieval::select_top(trace, 3);
  REQUIRE(top.papers.size() == 3);
  CHECK(top.papers[0].paper_id == "p2");
  CHECK(top.papers[1].paper_id == "p4");
  CHECK(top.papers[2].paper_id == "p3");
  CHECK_FALSE(top.short_of_request);

  auto all = retrieval::select_top(trace, 10);
  CHECK(all.papers.size() == 4);
  CHECK(all.short_of_request);
}

TEST_CASE("score_paper tolerates phrasing and re-asks before giving up") {
  test_util::TempDir tmp("score");
  const auto& topic = retrieval::topic_by_name("factuality");
  auto record = paper("p1", "Alpha decoding", "We study alpha.");
  retrieval::LlmOptions options;
  options.model = "mock-chat";

  {
    provider::MockScript script;
    script.rules.push_back(
        {std::string(retrieval::kScoreMarker), "I grade it 7/10", 0});
    auto gateway = mock_gateway(tmp.path() / "a", script);
    CHECK(retrieval::score_paper(topic, record, gateway, options) == 7);
  }
  {
    provider::MockScript script;
    script.rules.push_back(
        {std::string(retrieval::kScoreMarker), "Score: 3", 0});
    auto gateway = mock_gateway(tmp.path() / "b", script);
    CHECK(retrieval::score_paper(topic, record, gateway, options) == 3);
  }
  {
    provider::MockScript script;
    script.rules.push_back(
        {std::string(retrieval::kScoreMarker), "no digits here", 0});
    auto gateway = mock_gateway(tmp.path() / "c", script);
    CHECK_THROWS_AS(retrieval::score_paper(topic, record, gateway, options),
                    ParseError);
  }
  {
    provider::MockScript script;
    script.rules.push_back(
        {std::string(retrieval::kScoreMarker), "42", 0});
    auto gateway = mock_gateway(tmp.path() / "d", script);
    CHECK_THROWS_AS(retrieval::score_paper(topic, record, gateway, options),
                    ParseError);
  }
}

TEST_CASE("plan_action returns actions, honors stop, raises on garbage") {
  test_util::TempDir tmp("plan");
  const auto& topic = retrieval::topic_by_name("safety");
  retrieval::RetrievalTrace trace;
  retrieval::LlmOptions options;
  options.model = "mock-chat";

  {
    provider::MockScript script;
    script.rules.push_back({std::string(retrieval::kPlannerMarker),
                            "KeywordQuery(adversarial prompts)", 0});
    auto gateway = mock_gateway(tmp.path() / "a", script);
    auto action = retrieval::plan_action(topic, trace, gateway, options);
    REQUIRE(action.has_value());
    CHECK(action->argument == "adversarial prompts");
  }
  {
    provider::MockScript script;
    script.rules.push_back(
        {std::string(retrieval::kPlannerMarker), "Stop()", 0});
    auto gateway = mock_gateway(tmp.path() / "b", script);
    CHECK_FALSE(
        retrieval::plan_action(topic, trace, gateway, options).has_value());
  }
  {
    provider::MockScript script;
    script.rules.push_back(
        {std::string(retrieval::kPlannerMarker), "hmm, not sure", 0});
    auto gateway = mock_gateway(tmp.path() / "c", script);
    CHECK_THROWS_AS(retrieval::plan_action(topic, trace, gateway, options),
                    ParseError);
  }
}

TEST_CASE("synthetic paper source is deterministic per seed") {
  retrieval::SyntheticPaperSource a(5);
  retrieval::SyntheticPaperSource b(5);
  retrieval::SyntheticPaperSource c(6);
  auto ra = a.keyword_search("calibration", 4);
  auto rb = b.keyword_search("calibration", 4);
  auto rc = c.keyword_search("calibration", 4);
  REQUIRE(ra.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(ra[i].paper_id == rb[i].paper_id);
    CHECK(ra[i].title == rb[i].title);
  }
  CHECK(ra[0].paper_id != rc[0].paper_id);

  CHECK(a.lookup(ra[0].paper_id).has_value());
  CHECK_FALSE(a.lookup("arxiv-1234").has_value());
  CHECK(a.references(ra[0].paper_id, 3).size() == 3);
  CHECK(a.references("arxiv-1234", 3).empty());
}

TEST_CASE("full retrieval loop fills the pool and scores everything") {
  test_util::TempDir tmp("loop");
  const auto& topic = retrieval::topic_by_name("math");
  retrieval::SyntheticPaperSource source(11);
  retrieval::RetrievalCaps caps;
  caps.per_call_keep = 5;
  caps.max_papers = 12;
  caps.max_actions = 30;
  retrieval::LlmOptions options;
  options.model = "mock-chat";

  // The built-in planner always proposes another query, so the paper cap
  // is what ends the loop.
  auto gateway = mock_gateway(tmp.path());
  auto trace = retrieval::run_retrieval(topic, gateway, source, caps, options);
  CHECK(trace.topic_name == "math");
  CHECK(trace.papers.size() == 12);
  CHECK(trace.actions.size() <= 30);
  for (const auto& p : trace.papers) {
    CHECK(p.relevance >= 1);
    CHECK(p.relevance <= 10);
  }
}

TEST_CASE("retrieval loop stops at the action cap when nothing new arrives") {
  test_util::TempDir tmp("actioncap");
  const auto& topic = retrieval::topic_by_name("coding");
  retrieval::SyntheticPaperSource source(11);
  retrieval::RetrievalCaps caps;
  caps.per_call_keep = 5;
  caps.max_papers = 50;
  caps.max_actions = 4;
  retrieval::LlmOptions options;
  options.model = "mock-chat";

  provider::MockScript script;
  // Same lookup every round: one paper first time, duplicates after.
  script.rules.push_back(
      {std::string(retrieval::kPlannerMarker), "PaperQuery(syn-0)", 0});
  auto gateway = mock_gateway(tmp.path(), script);
  auto trace = retrieval::run_retrieval(topic, gateway, source, caps, options);
  CHECK(trace.actions.size() == 4);
  CHECK(trace.papers.size() == 1);
}

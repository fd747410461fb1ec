#include <memory>
#include <string>

#include <doctest.h>

#include "ideaforge/errors.hpp"
#include "ideaforge/ideation/types.hpp"
#include "ideaforge/proposal/expand.hpp"
#include "ideaforge/proposal/filters.hpp"
#include "ideaforge/proposal/style.hpp"
#include "ideaforge/proposal/types.hpp"
#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/provider/mock_provider.hpp"
#include "ideaforge/retrieval/paper_source.hpp"
#include "test_util.hpp"

using namespace ideaforge;

namespace {

proposal::ProjectProposal full_proposal() {
  proposal::ProjectProposal p;
  p.title = "Probe Before Answering";
  p.problem_statement = "Models state wrong facts with high confidence.";
  p.motivation = "An explicit verification pass should catch silent errors.";
  p.proposed_method = "Generate probes, answer them, then revise the draft.";
  p.experiment_plan = "Step 1: build probes. Step 2: evaluate on QA suites.";
  p.test_case_examples = "Input: a trivia question. Output: revised answer.";
  p.fallback_plan = "Reduce to a single verification question per draft.";
  return p;
}

ideation::SeedIdea seed_idea(const std::string& title) {
  ideation::SeedIdea idea;
  idea.title = title;
  idea.problem = "Models state wrong facts confidently.";
  idea.existing_methods = "Single-pass prompting has no error check.";
  idea.motivation = "Verification should catch silent mistakes.";
  idea.proposed_method = "Probe the draft answer with targeted questions.";
  idea.experiment_plan = "Evaluate probe-and-revise on QA benchmarks.";
  idea.topic_name = "factuality";
  return idea;
}

provider::Gateway mock_gateway(const std::filesystem::path& dir,
                               provider::MockScript script = {}) {
  provider::GatewayConfig config;
  config.cache_dir = dir;
  config.retry.base_delay_ms = 0;
  return provider::Gateway(config,
                           std::make_shared<provider::MockProvider>(script));
}

const std::string kStylePrompt =
    "Rewrite the idea in the house format.\n"
    "Here is the idea:\n\n{{IDEA}}\n"
    "Here is the template describing the required sections:\n\n"
    "{{TEMPLATE}}\n"
    "Rewrite the idea now.\n";

}  // namespace

TEST_CASE("proposal format and parse round trip") {
  auto original = full_proposal();
  auto parsed = proposal::parse_proposal(proposal::format_proposal(original));
  CHECK(parsed.title == original.title);
  CHECK(parsed.problem_statement == original.problem_statement);
  CHECK(parsed.motivation == original.motivation);
  CHECK(parsed.proposed_method == original.proposed_method);
  CHECK(parsed.experiment_plan == original.experiment_plan);
  CHECK(parsed.test_case_examples == original.test_case_examples);
  CHECK(parsed.fallback_plan == original.fallback_plan);
}

TEST_CASE("section headings are the canonical seven") {
  const auto& headings = proposal::section_headings();
  REQUIRE(headings.size() == proposal::kSectionCount);
  CHECK(headings.front() == "Title");
  CHECK(headings[4] == "Step-by-Step Experiment Plan");
  CHECK(headings.back() == "Fallback Plan");
}

TEST_CASE("proposal parsing tolerates markdown, numbering, and aliases") {
  std::string text =
      "## 1. Title: Probe Before Answering\n"
      "2) Problem\n"
      "Models state wrong facts.\n"
      "**Motivation**: Verification helps.\n"
      "4: Method: Probe and revise.\n"
      "Experiments: Run on QA suites.\n"
      "Test Cases: One trivia example.\n"
      "7. Fallback Plan: Single probe only.\n";
  auto p = proposal::parse_proposal(text);
  CHECK(p.title == "Probe Before Answering");
  CHECK(p.problem_statement == "Models state wrong facts.");
  CHECK(p.motivation == "Verification helps.");
  CHECK(p.proposed_method == "Probe and revise.");
  CHECK(p.experiment_plan == "Run on QA suites.");
  CHECK(p.test_case_examples == "One trivia example.");
  CHECK(p.fallback_plan == "Single probe only.");
}

TEST_CASE("proposal parsing keeps multi-line section bodies") {
  std::string text = proposal::format_proposal(full_proposal());
  // Splice a two-line body into the experiment plan section.
  auto p = proposal::parse_proposal(
      "1. Title\nT\n\n2. Problem Statement\nP\n\n3. Motivation\nM\n\n"
      "4. Proposed Method\nX\n\n5. Step-by-Step Experiment Plan\n"
      "Step 1: collect data.\nStep 2: run the method.\n\n"
      "6. Test Case Examples\nE\n\n7. Fallback Plan\nF\n");
  CHECK(p.experiment_plan == "Step 1: collect data.\nStep 2: run the method.");
  CHECK(proposal::parse_proposal(text).title == full_proposal().title);
}

TEST_CASE("proposal parsing names the first missing section") {
  auto p = full_proposal();
  p.fallback_plan.clear();
  try {
    proposal::parse_proposal(proposal::format_proposal(p));
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.field() == "Fallback Plan");
  }
  CHECK_THROWS_AS(proposal::parse_proposal("free text, no sections"),
                  ParseError);
}

TEST_CASE("proposal json round trip keeps metadata") {
  auto p = full_proposal();
  p.provenance = "human";
  p.topic_name = "factuality";
  p.source_idea_title = "Probe First";
  auto back = proposal::proposal_from_json(proposal::proposal_to_json(p));
  CHECK(back.title == p.title);
  CHECK(back.provenance == "human");
  CHECK(back.topic_name == "factuality");
  CHECK(back.source_idea_title == "Probe First");
}

TEST_CASE("word count covers every section") {
  proposal::ProjectProposal p;
  p.title = "one two";
  p.problem_statement = "three";
  p.motivation = "four five";
  p.proposed_method = "six";
  p.experiment_plan = "seven eight";
  p.test_case_examples = "nine";
  p.fallback_plan = "ten";
  CHECK(proposal::proposal_word_count(p) == 10);
}

TEST_CASE("expansion turns a seed idea into a full proposal") {
  test_util::TempDir tmp("expand");
  auto gateway = mock_gateway(tmp.path());
  auto idea = seed_idea("Probe and Revise");
  proposal::ExpandOptions options;
  options.model = "mock-chat";

  auto p = proposal::expand_idea(gateway, idea, "1. Title\n...", "demo",
                                  options);
  CHECK(p.title == "Probe and Revise");
  CHECK(p.provenance == "ai");
  CHECK(p.topic_name == "factuality");
  CHECK(p.source_idea_title == "Probe and Revise");
  CHECK(p.experiment_plan.rfind("Step 1:", 0) == 0);
  CHECK_FALSE(p.fallback_plan.empty());
}

TEST_CASE("expansion re-asks and then raises a parse error") {
  test_util::TempDir tmp("expand-fail");
  provider::MockScript script;
  script.rules.push_back({proposal::kExpandMarker, "not a proposal", 0});
  auto gateway = mock_gateway(tmp.path(), script);
  proposal::ExpandOptions options;
  options.model = "mock-chat";
  options.re_asks = 2;

  CHECK_THROWS_AS(proposal::expand_idea(gateway, seed_idea("Doomed"),
                                        "template", "demo", options),
                  ParseError);
  // One call per attempt, each with a distinct derived seed.
  CHECK(gateway.stats().provider_calls == 3);
}

TEST_CASE("novelty filter flags overlap with specific papers as evidence") {
  test_util::TempDir tmp("novelty");
  auto p = full_proposal();

  std::vector<retrieval::PaperRecord> corpus;
  for (int i = 0; i < 3; ++i) {
    retrieval::PaperRecord rec;
    rec.paper_id = "p" + std::to_string(i);
    rec.title = "Probe answering study " + std::to_string(i);
    rec.abstract_text = "About probing before answering.";
    corpus.push_back(rec);
  }
  retrieval::StaticPaperSource source(corpus);
  proposal::FilterOptions options;
  options.model = "mock-chat";
  options.top_n = 3;

  {
    provider::MockScript script;
    script.rules.push_back({proposal::kNoveltyMarker, "No", 0});
    auto gateway = mock_gateway(tmp.path() / "pass", script);
    auto verdict = proposal::novelty_filter(gateway, source, p, options);
    CHECK(verdict.passed);
    CHECK(verdict.reason.empty());
    CHECK(verdict.evidence.empty());
  }
  {
    // Only the paper titled "...study 1" is judged a duplicate.
    provider::MockScript script;
    script.rules.push_back({"Existing paper: Probe answering study 1", "Yes",
                            0});
    script.rules.push_back({proposal::kNoveltyMarker, "No", 0});
    auto gateway = mock_gateway(tmp.path() / "one", script);
    auto verdict = proposal::novelty_filter(gateway, source, p, options);
    CHECK_FALSE(verdict.passed);
    CHECK(verdict.reason == "novelty-duplicate");
    CHECK(verdict.evidence == std::vector<std::string>{"p1"});
  }
}

TEST_CASE("feasibility filter maps replies onto verdicts") {
  test_util::TempDir tmp("feas");
  auto p = full_proposal();
  proposal::FilterOptions options;
  options.model = "mock-chat";

  auto run_with = [&](const std::string& reply, const std::string& sub) {
    provider::MockScript script;
    script.rules.push_back({proposal::kFeasibilityMarker, reply, 0});
    auto gateway = mock_gateway(tmp.path() / sub, script);
    return proposal::feasibility_filter(gateway, p, options);
  };

  auto ok = run_with("feasible", "a");
  CHECK(ok.passed);

  auto resources = run_with("infeasible: resources", "b");
  CHECK_FALSE(resources.passed);
  CHECK(resources.reason == "infeasible-resources");
  REQUIRE(resources.evidence.size() == 1);
  CHECK(resources.evidence[0] == "infeasible: resources");

  auto inconsistent = run_with("infeasible: inconsistent", "c");
  CHECK_FALSE(inconsistent.passed);
  CHECK(inconsistent.reason == "inconsistent-setup");

  provider::MockScript script;
  script.rules.push_back({proposal::kFeasibilityMarker, "maybe?", 0});
  auto gateway = mock_gateway(tmp.path() / "d", script);
  CHECK_THROWS_AS(proposal::feasibility_filter(gateway, p, options),
                  ParseError);
}

TEST_CASE("combined filters check novelty first") {
  test_util::TempDir tmp("filters");
  auto p = full_proposal();
  retrieval::PaperRecord rec;
  rec.paper_id = "p0";
  rec.title = "Probe answering";
  rec.abstract_text = "Probing study.";
  retrieval::StaticPaperSource source({rec});
  proposal::FilterOptions options;
  options.model = "mock-chat";

  {
    // Novelty fails, so the feasibility judge is never consulted.
    provider::MockScript script;
    script.rules.push_back({proposal::kNoveltyMarker, "Yes", 0});
    auto gateway = mock_gateway(tmp.path() / "nov", script);
    auto verdict = proposal::run_filters(gateway, source, p, options);
    CHECK(verdict.reason == "novelty-duplicate");
    CHECK(gateway.stats().provider_calls == 1);
  }
  {
    provider::MockScript script;
    script.rules.push_back({proposal::kNoveltyMarker, "No", 0});
    script.rules.push_back(
        {proposal::kFeasibilityMarker, "infeasible: resources", 0});
    auto gateway = mock_gateway(tmp.path() / "feas", script);
    auto verdict = proposal::run_filters(gateway, source, p, options);
    CHECK(verdict.reason == "infeasible-resources");
  }
}

TEST_CASE("entity extraction keys on digits, caps, and camel case") {
  auto entities = proposal::extract_entities(
      "We fine-tune GPT-4 and LLaMA on 12 tasks (BERT included), using "
      "chain-of-thought and plain prompts.");
  CHECK(entities.count("GPT-4") == 1);
  CHECK(entities.count("LLaMA") == 1);
  CHECK(entities.count("12") == 1);
  CHECK(entities.count("BERT") == 1);
  CHECK(entities.count("We") == 0);
  CHECK(entities.count("chain-of-thought") == 0);
  CHECK(entities.count("prompts") == 0);
}

TEST_CASE("preservation check flags dropped entities and length drift") {
  proposal::StyleOptions options;
  auto original = full_proposal();
  original.proposed_method = "Probe GPT-4 drafts, then revise with 3 checks.";

  auto same = proposal::preservation_check(original, original, options);
  CHECK_FALSE(same.flagged);
  CHECK(same.length_ratio == doctest::Approx(1.0));

  auto reworded = original;
  reworded.proposed_method = "Probe model drafts, then revise with checks.";
  auto check = proposal::preservation_check(original, reworded, options);
  CHECK(check.flagged);
  CHECK_FALSE(check.entities_removed.empty());

  auto shrunk = original;
  shrunk.problem_statement = "Wrong.";
  shrunk.motivation = "Helps.";
  shrunk.proposed_method = "Probe.";
  shrunk.experiment_plan = "Run.";
  shrunk.test_case_examples = "One.";
  shrunk.fallback_plan = "Cut.";
  auto short_check = proposal::preservation_check(original, shrunk, options);
  CHECK(short_check.length_flagged);
  CHECK(short_check.length_ratio < options.min_length_ratio);
}

TEST_CASE("style normalization echoes through the offline editor") {
  test_util::TempDir tmp("style");
  auto gateway = mock_gateway(tmp.path());
  auto p = full_proposal();
  p.topic_name = "factuality";
  proposal::StyleOptions options;
  options.model = "mock-chat";

  auto result =
      proposal::style_normalize(gateway, p, kStylePrompt, "1. Title", options);
  CHECK(result.normalized.title == p.title);
  CHECK(result.normalized.fallback_plan == p.fallback_plan);
  CHECK(result.normalized.topic_name == "factuality");
  CHECK_FALSE(result.check.flagged);
  CHECK(result.check.length_ratio == doctest::Approx(1.0));
}

TEST_CASE("style normalization validates its prompt asset") {
  test_util::TempDir tmp("style-bad");
  auto gateway = mock_gateway(tmp.path());
  proposal::StyleOptions options;
  options.model = "mock-chat";

  CHECK_THROWS_AS(proposal::style_normalize(gateway, full_proposal(),
                                            "no slots at all", "tpl",
                                            options),
                  ConfigError);
  CHECK_THROWS_AS(proposal::style_normalize(gateway, full_proposal(),
                                            "only {{IDEA}} here", "tpl",
                                            options),
                  ConfigError);

  provider::MockScript script;
  script.rules.push_back({"Here is the idea:", "scrambled reply", 0});
  auto scripted = mock_gateway(tmp.path() / "x", script);
  CHECK_THROWS_AS(proposal::style_normalize(scripted, full_proposal(),
                                            kStylePrompt, "tpl", options),
                  ParseError);
}

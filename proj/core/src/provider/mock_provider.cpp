#include "ideaforge/provider/mock_provider.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "ideaforge/errors.hpp"
#include "ideaforge/ideation/prompt.hpp"
#include "ideaforge/ideation/types.hpp"
#include "ideaforge/proposal/expand.hpp"
#include "ideaforge/proposal/filters.hpp"
#include "ideaforge/proposal/types.hpp"
#include "ideaforge/ranking/judge.hpp"
#include "ideaforge/retrieval/retrieval.hpp"
#include "ideaforge/util/digest.hpp"
#include "ideaforge/util/io.hpp"
#include "ideaforge/util/rng.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::provider {

namespace {

uint64_t digest_to_u64(const std::string& digest) {
  return std::stoull(digest.substr(0, 16), nullptr, 16);
}

const std::string& last_user_content(const CompletionRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend();
       ++it) {
    if (it->role == "user") return it->content;
  }
  throw ProviderError("mock provider got a request with no user message");
}

// Returns the trimmed text after `label` on the first line containing it.
std::string line_value(const std::string& prompt, const std::string& label) {
  for (const auto& line : util::split_lines(prompt)) {
    size_t at = line.find(label);
    if (at != std::string::npos) {
      return util::trim(line.substr(at + label.size()));
    }
  }
  return "";
}

std::string strip_trailing_period(std::string s) {
  while (!s.empty() && (s.back() == '.' || s.back() == ':')) s.pop_back();
  return util::trim(s);
}

const std::vector<std::string>& facet_words() {
  static const std::vector<std::string> words = {
      "calibration", "verification", "decomposition", "retrieval",
      "consistency", "abstention",   "attribution",   "reflection",
      "grounding",   "adaptation",   "robustness",    "alignment"};
  return words;
}

const std::vector<std::string>& method_words() {
  static const std::vector<std::string> words = {
      "Iterative",   "Contrastive", "Hierarchical", "Adaptive",
      "Self-Guided", "Modular",     "Recursive",    "Structured",
      "Cooperative", "Curriculum",  "Symbolic",     "Probabilistic"};
  return words;
}

const std::vector<std::string>& technique_words() {
  static const std::vector<std::string> words = {
      "Verification", "Decomposition", "Sampling",  "Voting",
      "Reranking",    "Abstention",    "Debate",    "Simulation",
      "Editing",      "Distillation",  "Scaffolds", "Replay"};
  return words;
}

const std::vector<std::string>& dataset_words() {
  static const std::vector<std::string> words = {
      "a held-out QA suite",      "a multi-step reasoning set",
      "a code-generation suite",  "a long-form writing set",
      "an adversarial probe set", "a cross-lingual suite"};
  return words;
}

std::string fill(std::string tpl, const std::string& topic,
                 const std::string& facet, const std::string& word) {
  tpl = util::replace_all(tpl, "{T}", topic);
  tpl = util::replace_all(tpl, "{F}", facet);
  tpl = util::replace_all(tpl, "{W}", word);
  return tpl;
}

// Deterministic fielded idea derived from a seed. Every field picks one of
// several phrasings so two draws rarely share much vocabulary; downstream
// deduplication sees realistic, mostly-distinct texts.
ideation::SeedIdea synth_idea(uint64_t seed, const std::string& topic) {
  util::RandomStream rng(seed);
  std::string adj = rng.pick(method_words());
  std::string tech = rng.pick(technique_words());
  std::string facet = rng.pick(facet_words());
  char tag[8];
  snprintf(tag, sizeof(tag), "%04llx",
           static_cast<unsigned long long>(rng.next_u64() & 0xffff));

  static const std::vector<std::string> problem_tpl = {
      "Models asked about {T} drift toward plausible but wrong answers once "
      "{F} is stressed.",
      "Benchmarks on {T} reveal brittle behavior whenever inputs demand {F}.",
      "Small wording changes flip predictions on {T}, exposing weak {F}.",
      "Errors on {T} compound because no step checks {F} before answering."};
  static const std::vector<std::string> existing_tpl = {
      "Single-pass prompting dominates {W} work and leaves {F} failures "
      "undetected.",
      "Prior {W} methods tune surface fluency instead of measuring {F}.",
      "Existing pipelines bolt {W} heuristics on after decoding, too late "
      "to repair {F}.",
      "Published {W} baselines assume clean inputs and ignore {F} entirely."};
  static const std::vector<std::string> motivation_tpl = {
      "Making {F} an explicit intermediate target should surface mistakes "
      "that end-to-end scoring hides.",
      "If the model critiques its own {F}, the second pass can spend "
      "compute exactly where the first pass was unsure.",
      "Decoupling drafting from {F} checking lets each stage use a prompt "
      "specialized for that job.",
      "A {W} loop turns silent {F} failures into visible, fixable signals."};
  static const std::vector<std::string> method_tpl = {
      "Draft an answer, generate {W} probes targeting {F}, then revise the "
      "draft conditioned on the probe outcomes.",
      "Run {W} over candidate answers, score each for {F}, and emit the "
      "candidate with the best combined score.",
      "Decompose the task into subgoals, apply {W} per subgoal, and merge "
      "results with a {F}-weighted vote.",
      "Interleave generation with {W}: after each segment, test {F} and "
      "backtrack when the test fails."};
  static const std::vector<std::string> plan_tpl = {
      "Evaluate on {W}, reporting accuracy and {F} against direct "
      "prompting and chain-of-thought baselines.",
      "Compare against self-consistency on {W}; ablate each stage and "
      "measure {F} separately per ablation.",
      "Use {W} with matched inference budgets; test whether gains in {F} "
      "persist across two model families.",
      "Split {W} by difficulty, then check where the method helps {F} most "
      "and report cost per corrected error."};

  ideation::SeedIdea idea;
  idea.title = adj + " " + tech + " for " +
               std::string(1, static_cast<char>(toupper(facet[0]))) +
               facet.substr(1) + " " + tag;
  idea.problem = fill(rng.pick(problem_tpl), topic, facet, tech);
  idea.existing_methods =
      fill(rng.pick(existing_tpl), topic, facet, util::to_lower(adj));
  idea.motivation =
      fill(rng.pick(motivation_tpl), topic, facet, util::to_lower(tech));
  idea.proposed_method =
      fill(rng.pick(method_tpl), topic, facet, util::to_lower(tech));
  idea.experiment_plan =
      fill(rng.pick(plan_tpl), topic, facet, rng.pick(dataset_words()));
  return idea;
}

std::string segment_between(const std::string& text, const std::string& from,
                            const std::string& to) {
  size_t begin = text.find(from);
  if (begin == std::string::npos) return "";
  begin += from.size();
  size_t end = text.find(to, begin);
  if (end == std::string::npos) end = text.size();
  return text.substr(begin, end - begin);
}

int parse_requested_count(const std::string& prompt) {
  const std::string label = "Generate exactly ";
  size_t at = prompt.find(label);
  if (at == std::string::npos) return 1;
  size_t i = at + label.size();
  int value = 0;
  while (i < prompt.size() &&
         isdigit(static_cast<unsigned char>(prompt[i]))) {
    value = value * 10 + (prompt[i] - '0');
    ++i;
  }
  return value > 0 ? value : 1;
}

std::vector<std::string> alnum_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string token;
  for (char ch : text) {
    if (isalnum(static_cast<unsigned char>(ch))) {
      token += static_cast<char>(tolower(static_cast<unsigned char>(ch)));
    } else if (!token.empty()) {
      tokens.push_back(std::move(token));
      token.clear();
    }
  }
  if (!token.empty()) tokens.push_back(std::move(token));
  return tokens;
}

}  // namespace

MockScript mock_script_from_json(const nlohmann::json& doc) {
  MockScript script;
  try {
    script.embedding_dim = doc.value("embedding_dim", size_t{64});
    if (doc.contains("rules")) {
      for (const auto& row : doc.at("rules")) {
        MockRule rule;
        rule.match = row.at("match").get<std::string>();
        rule.response = row.at("response").get<std::string>();
        rule.fail_times = row.value("fail_times", 0);
        script.rules.push_back(std::move(rule));
      }
    }
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError(std::string("bad mock script: ") + err.what());
  }
  if (script.embedding_dim == 0) {
    throw ConfigError("mock script embedding_dim must be positive");
  }
  return script;
}

MockScript load_mock_script(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError("mock script " + path.string() +
                      " is not valid JSON: " + err.what());
  }
  return mock_script_from_json(doc);
}

MockProvider::MockProvider() : MockProvider(MockScript{}) {}

MockProvider::MockProvider(MockScript script) : script_(std::move(script)) {
  failures_left_.reserve(script_.rules.size());
  counters_.assign(script_.rules.size(), 0);
  for (const auto& rule : script_.rules) {
    failures_left_.push_back(rule.fail_times);
  }
}

std::string MockProvider::scripted_reply(const std::string& prompt,
                                         const std::string& digest,
                                         bool& matched) {
  std::lock_guard<std::mutex> lock(mutex_);
  for (size_t i = 0; i < script_.rules.size(); ++i) {
    const MockRule& rule = script_.rules[i];
    if (prompt.find(rule.match) == std::string::npos) continue;
    matched = true;
    if (failures_left_[i] > 0) {
      failures_left_[i] -= 1;
      throw TransientProviderError("scripted transient failure for rule " +
                                   std::to_string(i));
    }
    counters_[i] += 1;
    std::string reply = rule.response;
    reply = util::replace_all(reply, "{{n}}", std::to_string(counters_[i]));
    reply = util::replace_all(reply, "{{hash8}}", digest.substr(0, 8));
    return reply;
  }
  matched = false;
  return "";
}

std::string MockProvider::built_in_reply(const std::string& prompt,
                                         const std::string& digest) {
  uint64_t h = digest_to_u64(digest);

  if (prompt.find(ranking::kPairwiseMarker) != std::string::npos) {
    std::string a = segment_between(prompt, "Proposal A:", "Proposal B:");
    std::string b =
        segment_between(prompt, "Proposal B:", ranking::kPairwiseMarker);
    return util::sha256_hex(a) < util::sha256_hex(b) ? "A" : "B";
  }

  if (prompt.find(proposal::kFeasibilityMarker) != std::string::npos) {
    if (h % 8 == 0) return "infeasible: resources";
    if (h % 16 == 1) return "infeasible: inconsistent";
    return "feasible";
  }

  if (prompt.find(proposal::kNoveltyMarker) != std::string::npos) {
    return h % 50 == 0 ? "Yes" : "No";
  }

  if (prompt.find("Here is the idea:") != std::string::npos &&
      prompt.find("Here is the template") != std::string::npos) {
    return util::trim(segment_between(prompt, "Here is the idea:",
                                      "Here is the template")) +
           "\n";
  }

  if (prompt.find(proposal::kExpandMarker) != std::string::npos) {
    std::string segment = segment_between(prompt, proposal::kExpandMarker,
                                          "\nWrite the full proposal");
    proposal::ProjectProposal full;
    try {
      ideation::SeedIdea idea = ideation::parse_seed_idea(segment);
      full.title = idea.title;
      full.problem_statement = idea.problem;
      full.motivation = idea.motivation + " " + idea.existing_methods;
      full.proposed_method = idea.proposed_method;
      full.experiment_plan =
          "Step 1: implement the method. Step 2: " + idea.experiment_plan +
          " Step 3: run ablations over prompts and model sizes.";
    } catch (const ParseError&) {
      util::RandomStream rng(h);
      full.title = rng.pick(method_words()) + " " +
                   rng.pick(technique_words()) + " " + digest.substr(0, 4);
      full.problem_statement = "Models fail on the target behavior.";
      full.motivation = "A structured procedure should help.";
      full.proposed_method = "Apply the procedure in stages.";
      full.experiment_plan =
          "Step 1: implement. Step 2: evaluate. Step 3: ablate.";
    }
    full.test_case_examples =
        "Input: a representative task instance. Expected output: the "
        "corrected answer with the intermediate probe shown.";
    full.fallback_plan =
        "If the full method underperforms, reduce it to the strongest "
        "single stage and analyze where the probes disagree with labels.";
    return proposal::format_proposal(full);
  }

  if (prompt.find(ideation::kSeedBatchMarker) != std::string::npos) {
    int count = parse_requested_count(prompt);
    std::string topic = strip_trailing_period(
        line_value(prompt, std::string(ideation::kSeedBatchMarker)));
    if (topic.empty()) topic = "the target behavior";
    std::string out;
    for (int j = 0; j < count; ++j) {
      ideation::SeedIdea idea = synth_idea(
          util::derive_seed(h, "mock-idea", static_cast<uint64_t>(j)),
          topic);
      out += ideation::format_seed_idea(idea);
      if (j + 1 < count) out += "###\n";
    }
    return out;
  }

  if (prompt.find(retrieval::kScoreMarker) != std::string::npos) {
    return std::to_string(1 + h % 10);
  }

  if (prompt.find(retrieval::kPlannerMarker) != std::string::npos) {
    std::string topic = line_value(prompt, "Topic:");
    util::RandomStream rng(h);
    return "KeywordQuery(" + topic + " " + rng.pick(facet_words()) + ")";
  }

  return "OK " + digest.substr(0, 8);
}

Completion MockProvider::complete(const CompletionRequest& request) {
  const std::string& prompt = last_user_content(request);
  std::string digest = util::sha256_hex(canonical_json(request));

  bool matched = false;
  std::string reply = scripted_reply(prompt, digest, matched);
  if (!matched) reply = built_in_reply(prompt, digest);

  Completion completion;
  completion.text = std::move(reply);
  completion.usage.prompt_tokens = util::approx_tokens(prompt);
  completion.usage.completion_tokens = util::approx_tokens(completion.text);
  return completion;
}

std::vector<std::vector<double>> MockProvider::embed(
    const EmbeddingRequest& request) {
  std::vector<std::vector<double>> vectors;
  vectors.reserve(request.texts.size());
  for (const auto& text : request.texts) {
    std::vector<double> v(script_.embedding_dim, 0.0);
    // Hashed bag of words: stable across platforms, near-identical texts
    // land on near-identical vectors, disjoint texts stay near-orthogonal.
    for (const auto& word : alnum_tokens(text)) {
      uint64_t wh = util::derive_seed(0x5eedf00dULL, word, 0);
      v[wh % script_.embedding_dim] += ((wh >> 32) & 1) ? 1.0 : -1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm == 0.0) {
      v[0] = 1.0;
    } else {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace ideaforge::provider

#include "ideaforge/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <unistd.h>

#include "ideaforge/dedup/dedup.hpp"
#include "ideaforge/errors.hpp"
#include "ideaforge/ideation/generator.hpp"
#include "ideaforge/proposal/expand.hpp"
#include "ideaforge/proposal/filters.hpp"
#include "ideaforge/proposal/style.hpp"
#include "ideaforge/ranking/judge.hpp"
#include "ideaforge/ranking/swiss.hpp"
#include "ideaforge/retrieval/retrieval.hpp"
#include "ideaforge/retrieval/semantic_scholar.hpp"
#include "ideaforge/util/io.hpp"
#include "ideaforge/util/rng.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::pipeline {

using nlohmann::json;

namespace {

provider::GatewayConfig gateway_config(const PipelineConfig& config) {
  provider::GatewayConfig gc;
  gc.cache_dir = config.cache_dir;
  gc.budget.max_requests = config.budget_max_requests;
  gc.budget.max_cost_units = config.budget_max_cost_units;
  gc.max_parallel = config.max_parallel;
  gc.cost_per_token = config.cost_per_token;
  return gc;
}

std::unique_ptr<retrieval::PaperSource> make_source(
    const PipelineConfig& config) {
  if (config.paper_source == "live") {
    return std::make_unique<retrieval::SemanticScholarSource>();
  }
  return std::make_unique<retrieval::SyntheticPaperSource>(config.seed);
}

// Scoped lock file carrying the holder's pid; stale locks from dead
// processes are reclaimed.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& out_dir)
      : path_(out_dir / ".lock") {
    std::filesystem::create_directories(out_dir);
    if (std::filesystem::exists(path_)) {
      std::string holder = util::trim(util::read_file(path_));
      if (!holder.empty() &&
          std::filesystem::exists("/proc/" + holder)) {
        throw StageError("output directory " + out_dir.string() +
                         " is locked by running process " + holder);
      }
    }
    util::write_file_atomic(path_, std::to_string(getpid()) + "\n");
  }

  ~RunLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

std::string csv_cell(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Field contents only; shared field labels would inflate every pairwise
// similarity.
std::string embed_text(const ideation::SeedIdea& idea) {
  return idea.title + "\n" + idea.problem + "\n" + idea.existing_methods +
         "\n" + idea.motivation + "\n" + idea.proposed_method + "\n" +
         idea.experiment_plan;
}

std::vector<ideation::SeedIdea> read_ideas(
    const std::filesystem::path& path) {
  std::vector<ideation::SeedIdea> ideas;
  for (const auto& row : util::read_jsonl(path)) {
    ideas.push_back(ideation::seed_from_json(row));
  }
  return ideas;
}

std::vector<proposal::ProjectProposal> read_proposals(
    const std::filesystem::path& path) {
  std::vector<proposal::ProjectProposal> proposals;
  for (const auto& row : util::read_jsonl(path)) {
    proposals.push_back(proposal::proposal_from_json(row));
  }
  return proposals;
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {
      "retrieve", "ideate", "dedup", "expand", "filter", "normalize",
      "rank"};
  return names;
}

Pipeline::Pipeline(PipelineConfig config,
                   std::shared_ptr<provider::Provider> provider)
    : config_(std::move(config)),
      digest_(config_digest(config_)),
      gateway_(gateway_config(config_), std::move(provider)),
      source_(make_source(config_)) {
  manifest_path_ = config_.out_dir / "manifest.json";
}

const retrieval::Topic& Pipeline::topic(size_t index) const {
  return retrieval::topic_by_name(config_.topics.at(index));
}

std::filesystem::path Pipeline::topic_dir(size_t index) const {
  return config_.out_dir / config_.topics.at(index);
}

std::uint64_t Pipeline::stage_seed(const std::string& stage,
                                   size_t topic_index) const {
  return util::derive_seed(config_.seed, stage, topic_index);
}

void Pipeline::prepare() {
  manifest_ = load_manifest(manifest_path_);
  if (manifest_.stages.empty() && manifest_.config_digest.empty()) {
    manifest_.config_digest = digest_;
    manifest_.root_seed = config_.seed;
    return;
  }
  if (manifest_.config_digest != digest_) {
    throw ConfigError(
        "the output directory was produced under a different config "
        "(digest " +
        manifest_.config_digest.substr(0, 12) + ", current " +
        digest_.substr(0, 12) +
        "); point out_dir somewhere fresh or restore the config");
  }
}

void Pipeline::run_one(const std::string& stage, size_t topic_index,
                       RunReport& report) {
  std::string name = stage + ":" + config_.topics.at(topic_index);
  if (const StageRecord* done = manifest_.find(name);
      done && done->status == "done" &&
      artifacts_intact(config_.out_dir, *done)) {
    report.skipped.push_back(name);
    return;
  }

  std::filesystem::create_directories(topic_dir(topic_index));
  std::uint64_t calls_before = gateway_.stats().provider_calls;

  std::vector<std::filesystem::path> artifacts;
  if (stage == "retrieve") {
    artifacts = stage_retrieve(topic_index);
  } else if (stage == "ideate") {
    artifacts = stage_ideate(topic_index);
  } else if (stage == "dedup") {
    artifacts = stage_dedup(topic_index);
  } else if (stage == "expand") {
    artifacts = stage_expand(topic_index);
  } else if (stage == "filter") {
    artifacts = stage_filter(topic_index);
  } else if (stage == "normalize") {
    artifacts = stage_normalize(topic_index);
  } else if (stage == "rank") {
    artifacts = stage_rank(topic_index);
  } else {
    throw ConfigError("unknown stage \"" + stage + "\"");
  }

  StageRecord record;
  record.name = name;
  record.status = "done";
  record.seed = stage_seed(stage, topic_index);
  record.provider_calls = gateway_.stats().provider_calls - calls_before;
  for (const auto& artifact : artifacts) {
    record.artifacts.push_back(record_artifact(config_.out_dir, artifact));
  }
  manifest_.upsert(std::move(record));
  save_manifest(manifest_path_, manifest_);
  report.executed.push_back(name);
}

namespace {

void check_topic_filter(const PipelineConfig& config,
                        const std::string& only_topic) {
  if (only_topic.empty()) return;
  if (std::find(config.topics.begin(), config.topics.end(), only_topic) ==
      config.topics.end()) {
    throw ConfigError("topic \"" + only_topic +
                      "\" is not in the config's topic list");
  }
}

}  // namespace

RunReport Pipeline::run(const std::string& only_topic) {
  check_topic_filter(config_, only_topic);
  RunLock lock(config_.out_dir);
  prepare();
  RunReport report;
  for (size_t t = 0; t < config_.topics.size(); ++t) {
    if (!only_topic.empty() && config_.topics[t] != only_topic) continue;
    for (const auto& stage : stage_names()) {
      run_one(stage, t, report);
    }
  }
  report.stats = gateway_.stats();
  return report;
}

RunReport Pipeline::run_stage(const std::string& stage_name,
                              const std::string& only_topic) {
  if (std::find(stage_names().begin(), stage_names().end(), stage_name) ==
      stage_names().end()) {
    throw ConfigError("unknown stage \"" + stage_name + "\"; stages are " +
                      join(stage_names(), ", "));
  }
  check_topic_filter(config_, only_topic);
  RunLock lock(config_.out_dir);
  prepare();
  RunReport report;
  for (size_t t = 0; t < config_.topics.size(); ++t) {
    if (!only_topic.empty() && config_.topics[t] != only_topic) continue;
    run_one(stage_name, t, report);
  }
  report.stats = gateway_.stats();
  return report;
}

std::vector<std::filesystem::path> Pipeline::stage_retrieve(
    size_t topic_index) {
  retrieval::RetrievalCaps caps;
  caps.per_call_keep = config_.retrieval_per_call;
  caps.max_papers = config_.retrieval_max_papers;
  caps.max_actions = config_.retrieval_max_actions;

  retrieval::LlmOptions options;
  options.model = config_.chat_model;
  options.temperature = 0.0;
  options.max_tokens = 512;
  options.re_asks = config_.re_asks;
  options.seed = stage_seed("retrieve", topic_index);

  retrieval::RetrievalTrace trace = retrieval::run_retrieval(
      topic(topic_index), gateway_, *source_, caps, options);

  std::vector<json> papers;
  for (const auto& paper : trace.papers) {
    papers.push_back(retrieval::paper_to_json(paper));
  }
  std::vector<json> actions;
  for (const auto& executed : trace.actions) {
    actions.push_back(
        {{"kind", retrieval::action_kind_name(executed.action.kind)},
         {"argument", executed.action.argument},
         {"added", executed.added}});
  }

  std::filesystem::path dir = config_.topics.at(topic_index);
  util::write_jsonl(config_.out_dir / dir / "papers.jsonl", papers);
  util::write_jsonl(config_.out_dir / dir / "actions.jsonl", actions);
  return {dir / "papers.jsonl", dir / "actions.jsonl"};
}

std::vector<std::filesystem::path> Pipeline::stage_ideate(
    size_t topic_index) {
  std::filesystem::path dir = config_.topics.at(topic_index);

  std::vector<retrieval::PaperRecord> papers;
  for (const auto& row :
       util::read_jsonl(config_.out_dir / dir / "papers.jsonl")) {
    papers.push_back(retrieval::paper_from_json(row));
  }
  std::stable_sort(papers.begin(), papers.end(),
                   [](const retrieval::PaperRecord& a,
                      const retrieval::PaperRecord& b) {
                     return a.relevance > b.relevance;
                   });
  if (papers.size() > config_.rag_pool) papers.resize(config_.rag_pool);

  ideation::GenerationConfig gen;
  gen.ideas_per_topic = config_.ideas_per_topic;
  gen.batch_size = config_.batch_size;
  gen.rag_probability = config_.rag_probability;
  gen.rag_pool = config_.rag_pool;
  gen.rag_sample = config_.rag_sample;
  gen.max_prompt_tokens = config_.max_prompt_tokens;
  gen.re_asks = config_.re_asks;
  gen.model = config_.chat_model;
  gen.temperature = config_.generation_temperature;
  gen.max_tokens = config_.generation_max_tokens;

  std::filesystem::path demo_dir =
      config_.resolve_asset(config_.seed_demo_dir);
  std::vector<std::filesystem::path> demo_files;
  if (std::filesystem::is_directory(demo_dir)) {
    for (const auto& entry :
         std::filesystem::directory_iterator(demo_dir)) {
      if (entry.path().extension() == ".txt") {
        demo_files.push_back(entry.path());
      }
    }
  }
  std::sort(demo_files.begin(), demo_files.end());
  for (const auto& file : demo_files) {
    gen.demos.push_back(
        ideation::parse_seed_idea(util::read_file(file)));
  }

  ideation::GenerationOutcome outcome = ideation::generate_seed_ideas(
      topic(topic_index), gen, papers, gateway_,
      stage_seed("ideate", topic_index), config_.ideas_per_topic);

  std::vector<json> rows;
  for (const auto& idea : outcome.ideas) {
    rows.push_back(ideation::seed_to_json(idea));
  }
  util::write_jsonl(config_.out_dir / dir / "seed_ideas.jsonl", rows);

  json gen_report = {{"requested", config_.ideas_per_topic},
                     {"generated", outcome.ideas.size()},
                     {"attempted_batches", outcome.attempted_batches},
                     {"failed_batches", outcome.failed_batches},
                     {"skipped_ideas", outcome.skipped_ideas},
                     {"rag_batches", outcome.rag_batches},
                     {"truncated_any", outcome.truncated_any}};
  util::write_file_atomic(config_.out_dir / dir / "gen_report.json",
                          gen_report.dump(2) + "\n");
  return {dir / "seed_ideas.jsonl", dir / "gen_report.json"};
}

std::vector<std::filesystem::path> Pipeline::stage_dedup(
    size_t topic_index) {
  std::filesystem::path dir = config_.topics.at(topic_index);
  std::vector<ideation::SeedIdea> ideas =
      read_ideas(config_.out_dir / dir / "seed_ideas.jsonl");

  std::vector<std::vector<double>> vectors;
  vectors.reserve(ideas.size());
  const size_t chunk = 64;
  for (size_t start = 0; start < ideas.size(); start += chunk) {
    provider::EmbeddingRequest req;
    req.model = config_.embed_model;
    for (size_t i = start; i < std::min(start + chunk, ideas.size()); ++i) {
      req.texts.push_back(embed_text(ideas[i]));
    }
    provider::Embeddings batch = gateway_.embed(req);
    for (auto& v : batch.vectors) vectors.push_back(std::move(v));
  }

  dedup::DedupConfig dc;
  dc.threshold = config_.dedup_threshold;
  dc.compare_all_prior = config_.dedup_compare_all_prior;
  dedup::DedupReport report = dedup::deduplicate(vectors, dc);

  json doc = {{"report", dedup::report_to_json(report)},
              {"curve", dedup::curve_to_json(dedup::duplication_curve(
                            report, config_.curve_bucket))}};
  util::write_file_atomic(config_.out_dir / dir / "dedup_report.json",
                          doc.dump(2) + "\n");

  std::vector<json> kept;
  for (size_t index : report.kept) {
    kept.push_back(ideation::seed_to_json(ideas[index]));
  }
  util::write_jsonl(config_.out_dir / dir / "kept_ideas.jsonl", kept);
  return {dir / "dedup_report.json", dir / "kept_ideas.jsonl"};
}

std::vector<std::filesystem::path> Pipeline::stage_expand(
    size_t topic_index) {
  std::filesystem::path dir = config_.topics.at(topic_index);
  std::vector<ideation::SeedIdea> ideas =
      read_ideas(config_.out_dir / dir / "kept_ideas.jsonl");
  if (config_.expand_top > 0 && ideas.size() > config_.expand_top) {
    ideas.resize(config_.expand_top);
  }

  std::string template_text =
      util::read_file(config_.resolve_asset(config_.proposal_template));
  std::string demo =
      util::read_file(config_.resolve_asset(config_.proposal_demo));

  std::uint64_t seed = stage_seed("expand", topic_index);
  std::vector<json> rows;
  size_t failed = 0;
  for (size_t i = 0; i < ideas.size(); ++i) {
    proposal::ExpandOptions options;
    options.model = config_.chat_model;
    options.temperature = 0.7;
    options.max_tokens = config_.generation_max_tokens;
    options.re_asks = config_.re_asks;
    options.seed = util::derive_seed(seed, "idea", i);
    try {
      proposal::ProjectProposal full = proposal::expand_idea(
          gateway_, ideas[i], template_text, demo, options);
      rows.push_back(proposal::proposal_to_json(full));
    } catch (const ParseError&) {
      failed += 1;  // one bad idea must not sink the batch
    }
  }
  util::write_jsonl(config_.out_dir / dir / "proposals.jsonl", rows);
  json report = {{"attempted", ideas.size()},
                 {"expanded", rows.size()},
                 {"failed", failed}};
  util::write_file_atomic(config_.out_dir / dir / "expand_report.json",
                          report.dump(2) + "\n");
  return {dir / "proposals.jsonl", dir / "expand_report.json"};
}

std::vector<std::filesystem::path> Pipeline::stage_filter(
    size_t topic_index) {
  std::filesystem::path dir = config_.topics.at(topic_index);
  std::vector<proposal::ProjectProposal> proposals =
      read_proposals(config_.out_dir / dir / "proposals.jsonl");

  std::uint64_t seed = stage_seed("filter", topic_index);
  std::vector<json> verdicts;
  std::vector<json> passing;
  for (size_t i = 0; i < proposals.size(); ++i) {
    proposal::FilterOptions options;
    options.model = config_.chat_model;
    options.re_asks = config_.re_asks;
    options.seed = util::derive_seed(seed, "proposal", i);
    options.top_n = config_.novelty_top;
    proposal::FilterVerdict verdict =
        proposal::run_filters(gateway_, *source_, proposals[i], options);
    json row = proposal::verdict_to_json(verdict);
    row["title"] = proposals[i].title;
    verdicts.push_back(std::move(row));
    if (verdict.passed) {
      passing.push_back(proposal::proposal_to_json(proposals[i]));
    }
  }
  util::write_jsonl(config_.out_dir / dir / "filter_verdicts.jsonl",
                    verdicts);
  util::write_jsonl(config_.out_dir / dir / "filtered_proposals.jsonl",
                    passing);
  return {dir / "filter_verdicts.jsonl", dir / "filtered_proposals.jsonl"};
}

std::vector<std::filesystem::path> Pipeline::stage_normalize(
    size_t topic_index) {
  std::filesystem::path dir = config_.topics.at(topic_index);
  std::vector<proposal::ProjectProposal> proposals =
      read_proposals(config_.out_dir / dir / "filtered_proposals.jsonl");

  std::string prompt_asset =
      util::read_file(config_.resolve_asset(config_.style_prompt));
  std::string template_text =
      util::read_file(config_.resolve_asset(config_.proposal_template));

  std::uint64_t seed = stage_seed("normalize", topic_index);
  std::vector<json> rows;
  std::string csv =
      "title,normalized,length_ratio,length_flagged,entities_removed,"
      "entities_added,flagged\n";
  char ratio[32];
  for (size_t i = 0; i < proposals.size(); ++i) {
    proposal::StyleOptions options;
    options.model = config_.chat_model;
    options.max_tokens = config_.generation_max_tokens;
    options.re_asks = config_.re_asks;
    options.seed = util::derive_seed(seed, "proposal", i);

    proposal::StyleCheck check;
    bool normalized = true;
    try {
      proposal::StyleResult result = proposal::style_normalize(
          gateway_, proposals[i], prompt_asset, template_text, options);
      rows.push_back(proposal::proposal_to_json(result.normalized));
      check = result.check;
    } catch (const ParseError&) {
      // Keep the original text; the flag column records the fallback.
      rows.push_back(proposal::proposal_to_json(proposals[i]));
      normalized = false;
      check.flagged = true;
    }
    snprintf(ratio, sizeof(ratio), "%.4f", check.length_ratio);
    csv += csv_cell(proposals[i].title);
    csv += std::string(",") + (normalized ? "yes" : "no") + "," + ratio +
           "," + (check.length_flagged ? "yes" : "no") + "," +
           csv_cell(join(check.entities_removed, ";")) + "," +
           csv_cell(join(check.entities_added, ";")) + "," +
           (check.flagged ? "yes" : "no") + "\n";
  }
  util::write_jsonl(config_.out_dir / dir / "normalized_proposals.jsonl",
                    rows);
  util::write_file_atomic(config_.out_dir / dir / "style_flags.csv", csv);
  return {dir / "normalized_proposals.jsonl", dir / "style_flags.csv"};
}

std::vector<std::filesystem::path> Pipeline::stage_rank(size_t topic_index) {
  std::filesystem::path dir = config_.topics.at(topic_index);
  std::vector<proposal::ProjectProposal> proposals =
      read_proposals(config_.out_dir / dir / "normalized_proposals.jsonl");

  ranking::TournamentReport report;
  std::vector<ranking::RankedEntry> ranking;
  if (proposals.size() >= 2) {
    ranking::JudgeOptions jo;
    jo.model = config_.chat_model;
    jo.re_asks = config_.re_asks;
    ranking::LlmPairwiseJudge judge(gateway_, proposals, jo);

    ranking::TournamentConfig tc;
    tc.rounds = config_.ranking_rounds;
    tc.seed = stage_seed("rank", topic_index);
    tc.max_parallel = static_cast<size_t>(config_.max_parallel);
    report = ranking::run_tournament(proposals.size(), judge, tc);
    ranking = ranking::final_ranking(report);
  } else {
    report.entries = proposals.size();
    report.rounds = 0;
    report.seed = stage_seed("rank", topic_index);
    report.scores.assign(proposals.size(), 0);
    for (size_t i = 0; i < proposals.size(); ++i) {
      ranking.push_back({i, 0, 0});
    }
  }

  util::write_file_atomic(
      config_.out_dir / dir / "tournament.json",
      ranking::report_to_json(report).dump(2) + "\n");

  std::vector<json> rows;
  for (size_t r = 0; r < ranking.size(); ++r) {
    rows.push_back({{"rank", r + 1},
                    {"entry", ranking[r].index},
                    {"title", proposals[ranking[r].index].title},
                    {"score", ranking[r].score},
                    {"opponent_score_sum", ranking[r].opponent_score_sum}});
  }
  util::write_jsonl(config_.out_dir / dir / "ranked_proposals.jsonl", rows);
  return {dir / "tournament.json", dir / "ranked_proposals.jsonl"};
}

}  // namespace ideaforge::pipeline

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ideaforge/pipeline/config.hpp"
#include "ideaforge/pipeline/manifest.hpp"
#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/retrieval/paper_source.hpp"
#include "ideaforge/retrieval/types.hpp"

namespace ideaforge::pipeline {

// Stage names in execution order: retrieve, ideate, dedup, expand, filter,
// normalize, rank.
const std::vector<std::string>& stage_names();

struct RunReport {
  std::vector<std::string> executed;
  std::vector<std::string> skipped;
  provider::GatewayStats stats;
};

// Drives the full ideation pipeline over every configured topic, one output
// directory per topic, resuming from the manifest: a stage whose artifacts
// still hash clean under the same config digest is skipped. Holds a lock
// file in the output directory while running.
class Pipeline {
 public:
  // A null provider runs in replay mode: every request must hit the cache.
  Pipeline(PipelineConfig config,
           std::shared_ptr<provider::Provider> provider);

  // An empty `only_topic` covers every configured topic; otherwise only
  // the named one runs (it must be in the config, which is unchanged, so
  // the digest and manifest stay valid).
  RunReport run(const std::string& only_topic = "");
  RunReport run_stage(const std::string& stage_name,
                      const std::string& only_topic = "");

  const PipelineConfig& config() const { return config_; }
  provider::Gateway& gateway() { return gateway_; }

 private:
  struct TopicState;

  void prepare();
  void run_one(const std::string& stage, size_t topic_index,
               RunReport& report);

  std::vector<std::filesystem::path> stage_retrieve(size_t topic_index);
  std::vector<std::filesystem::path> stage_ideate(size_t topic_index);
  std::vector<std::filesystem::path> stage_dedup(size_t topic_index);
  std::vector<std::filesystem::path> stage_expand(size_t topic_index);
  std::vector<std::filesystem::path> stage_filter(size_t topic_index);
  std::vector<std::filesystem::path> stage_normalize(size_t topic_index);
  std::vector<std::filesystem::path> stage_rank(size_t topic_index);

  const retrieval::Topic& topic(size_t index) const;
  std::filesystem::path topic_dir(size_t index) const;
  std::uint64_t stage_seed(const std::string& stage,
                           size_t topic_index) const;

  PipelineConfig config_;
  std::string digest_;
  provider::Gateway gateway_;
  std::unique_ptr<retrieval::PaperSource> source_;
  Manifest manifest_;
  std::filesystem::path manifest_path_;
};

}  // namespace ideaforge::pipeline

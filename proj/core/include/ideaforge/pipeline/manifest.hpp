#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::pipeline {

struct ArtifactRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct StageRecord {
  std::string name;  // "<stage>:<topic>"
  std::string status = "done";
  std::uint64_t seed = 0;
  std::uint64_t provider_calls = 0;
  std::vector<ArtifactRecord> artifacts;
};

// Durable record of what a run produced: the config digest it ran under
// and, per completed stage, the hashes of its artifacts. A later run with
// the same digest skips any stage whose artifacts still verify.
struct Manifest {
  std::string config_digest;
  std::uint64_t root_seed = 0;
  std::vector<StageRecord> stages;  // completion order

  const StageRecord* find(const std::string& name) const;
  void upsert(StageRecord record);
};

nlohmann::json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& doc);

// Missing file yields an empty manifest; a corrupt one throws StageError.
Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path,
                   const Manifest& manifest);

// Hashes one artifact file on disk.
ArtifactRecord record_artifact(const std::filesystem::path& out_dir,
                               const std::filesystem::path& relative);

// True when every artifact of the stage exists under out_dir with the
// recorded size and hash.
bool artifacts_intact(const std::filesystem::path& out_dir,
                      const StageRecord& stage);

}  // namespace ideaforge::pipeline

#include "ideaforge/pipeline/manifest.hpp"

#include "ideaforge/errors.hpp"
#include "ideaforge/util/digest.hpp"
#include "ideaforge/util/io.hpp"

namespace ideaforge::pipeline {

using nlohmann::json;

const StageRecord* Manifest::find(const std::string& name) const {
  for (const auto& stage : stages) {
    if (stage.name == name) return &stage;
  }
  return nullptr;
}

void Manifest::upsert(StageRecord record) {
  for (auto& stage : stages) {
    if (stage.name == record.name) {
      stage = std::move(record);
      return;
    }
  }
  stages.push_back(std::move(record));
}

json manifest_to_json(const Manifest& manifest) {
  json stages = json::array();
  for (const auto& stage : manifest.stages) {
    json artifacts = json::array();
    for (const auto& a : stage.artifacts) {
      artifacts.push_back(
          {{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    }
    stages.push_back({{"name", stage.name},
                      {"status", stage.status},
                      {"seed", stage.seed},
                      {"provider_calls", stage.provider_calls},
                      {"artifacts", artifacts}});
  }
  return json{{"config_digest", manifest.config_digest},
              {"root_seed", manifest.root_seed},
              {"stages", stages}};
}

Manifest manifest_from_json(const json& doc) {
  Manifest manifest;
  try {
    manifest.config_digest = doc.at("config_digest").get<std::string>();
    manifest.root_seed = doc.at("root_seed").get<std::uint64_t>();
    for (const auto& row : doc.at("stages")) {
      StageRecord stage;
      stage.name = row.at("name").get<std::string>();
      stage.status = row.value("status", "done");
      stage.seed = row.value("seed", std::uint64_t{0});
      stage.provider_calls = row.value("provider_calls", std::uint64_t{0});
      for (const auto& a : row.value("artifacts", json::array())) {
        ArtifactRecord artifact;
        artifact.path = a.at("path").get<std::string>();
        artifact.sha256 = a.at("sha256").get<std::string>();
        artifact.bytes = a.value("bytes", std::uint64_t{0});
        stage.artifacts.push_back(std::move(artifact));
      }
      manifest.stages.push_back(std::move(stage));
    }
  } catch (const json::exception& err) {
    throw StageError(std::string("manifest is malformed: ") + err.what());
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return Manifest{};
  json doc;
  try {
    doc = json::parse(util::read_file(path));
  } catch (const json::exception& err) {
    throw StageError("manifest " + path.string() +
                     " is not valid JSON: " + err.what());
  }
  return manifest_from_json(doc);
}

void save_manifest(const std::filesystem::path& path,
                   const Manifest& manifest) {
  util::write_file_atomic(path, manifest_to_json(manifest).dump(2) + "\n");
}

ArtifactRecord record_artifact(const std::filesystem::path& out_dir,
                               const std::filesystem::path& relative) {
  std::filesystem::path full = out_dir / relative;
  ArtifactRecord record;
  record.path = relative.generic_string();
  record.sha256 = util::sha256_file(full);
  record.bytes = std::filesystem::file_size(full);
  return record;
}

bool artifacts_intact(const std::filesystem::path& out_dir,
                      const StageRecord& stage) {
  for (const auto& artifact : stage.artifacts) {
    std::filesystem::path full = out_dir / artifact.path;
    std::error_code ec;
    auto size = std::filesystem::file_size(full, ec);
    if (ec || size != artifact.bytes) return false;
    if (util::sha256_file(full) != artifact.sha256) return false;
  }
  return true;
}

}  // namespace ideaforge::pipeline

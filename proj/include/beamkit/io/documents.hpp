// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// JSON documents: scenes, manifests, pipeline configs and sweep grids.

#pragma once

#include <filesystem>

#include <json.hpp>

#include "beamkit/dataset.hpp"
#include "beamkit/pipeline.hpp"
#include "beamkit/roomsim.hpp"
#include "beamkit/sweep.hpp"

namespace beamkit {

inline constexpr int kSchemaVersion = 1;

nlohmann::json ToJson(const RoomScene& scene);
RoomScene SceneFromJson(const nlohmann::json& doc);

// Paths are written relative to `base_dir` and resolved against it on read.
nlohmann::json ToJson(const Manifest& manifest, const std::filesystem::path& base_dir);
Manifest ManifestFromJson(const nlohmann::json& doc, const std::filesystem::path& base_dir);

nlohmann::json ToJson(const PipelineConfig& config);
PipelineConfig PipelineConfigFromJson(const nlohmann::json& doc, int sample_rate = 16000);

nlohmann::json ToJson(const SweepGrid& grid);
SweepGrid SweepGridFromJson(const nlohmann::json& doc);

// File helpers; parse failures surface as kParse, missing files as kIo.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& doc);

RoomScene ReadScene(const std::filesystem::path& path);
Manifest ReadManifest(const std::filesystem::path& path);

}  // namespace beamkit

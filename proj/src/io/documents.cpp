// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/io/documents.hpp"

#include <fstream>

#include "beamkit/error.hpp"

namespace beamkit {

using nlohmann::json;

namespace {

json ToJson(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 Vec3FromJson(const json& j) {
  BEAMKIT_REQUIRE(j.is_array() && j.size() == 3, ErrorCode::kParse, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void CheckSchema(const json& doc, const char* what) {
  BEAMKIT_REQUIRE(doc.is_object(), ErrorCode::kParse, std::string(what) + " must be an object");
  const int version = doc.value("schema_version", kSchemaVersion);
  BEAMKIT_REQUIRE(version == kSchemaVersion, ErrorCode::kParse,
                  std::string(what) + " has unsupported schema_version " + std::to_string(version));
}

// Wraps nlohmann type errors as parse errors.
template <typename F>
auto Parsing(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json ToJson(const RoomScene& scene) {
  json mics = json::array(), sources = json::array(), refl = json::array();
  for (const auto& m : scene.mics) mics.push_back(ToJson(m));
  for (const auto& s : scene.sources) sources.push_back(ToJson(s));
  for (const auto& row : scene.reflectivity) refl.push_back(row);
  return {{"schema_version", kSchemaVersion},
          {"room", {scene.width, scene.length, scene.height}},
          {"reflectivity", refl},
          {"array_center", ToJson(scene.array_center)},
          {"mic_vertices", scene.mic_vertices},
          {"mics", mics},
          {"sources", sources},
          {"seed", scene.seed},
          {"sample_rate", scene.sample_rate}};
}

RoomScene SceneFromJson(const json& doc) {
  CheckSchema(doc, "scene");
  return Parsing("scene", [&] {
    RoomScene scene;
    const auto& room = doc.at("room");
    BEAMKIT_REQUIRE(room.size() == 3, ErrorCode::kParse, "room needs three dimensions");
    scene.width = room[0].get<double>();
    scene.length = room[1].get<double>();
    scene.height = room[2].get<double>();
    const auto& refl = doc.at("reflectivity");
    BEAMKIT_REQUIRE(refl.size() == kNumSurfaces, ErrorCode::kParse, "reflectivity needs 6 surfaces");
    for (std::size_t w = 0; w < kNumSurfaces; ++w) {
      BEAMKIT_REQUIRE(refl[w].size() == kNumBands, ErrorCode::kParse, "reflectivity needs 3 bands");
      for (std::size_t b = 0; b < kNumBands; ++b) scene.reflectivity[w][b] = refl[w][b].get<double>();
    }
    scene.array_center = Vec3FromJson(doc.at("array_center"));
    for (const auto& m : doc.at("mics")) scene.mics.push_back(Vec3FromJson(m));
    for (const auto& s : doc.at("sources")) scene.sources.push_back(Vec3FromJson(s));
    if (doc.contains("mic_vertices")) {
      scene.mic_vertices = doc.at("mic_vertices").get<std::vector<std::size_t>>();
    } else {
      scene.mic_vertices = MicSubsetVertices(scene.mics.size());
    }
    scene.seed = doc.value("seed", std::uint64_t{0});
    scene.sample_rate = doc.value("sample_rate", 16000);
    scene.Validate();
    return scene;
  });
}

json ToJson(const Manifest& manifest, const std::filesystem::path& base_dir) {
  auto rel = [&](const std::filesystem::path& p) {
    return p.is_absolute() ? p.lexically_relative(base_dir).generic_string() : p.generic_string();
  };
  json examples = json::array();
  for (const auto& e : manifest.examples) {
    json images = json::array();
    for (const auto& p : e.images) images.push_back(rel(p));
    examples.push_back({{"id", e.id},
                        {"task", e.task},
                        {"mixture", rel(e.mixture)},
                        {"images", images},
                        {"scene", rel(e.scene)}});
  }
  return {{"schema_version", kSchemaVersion}, {"examples", examples}};
}

Manifest ManifestFromJson(const json& doc, const std::filesystem::path& base_dir) {
  CheckSchema(doc, "manifest");
  return Parsing("manifest", [&] {
    auto resolve = [&](const json& j) {
      std::filesystem::path p = j.get<std::string>();
      return p.is_absolute() ? p : base_dir / p;
    };
    Manifest m;
    for (const auto& e : doc.at("examples")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.task = e.at("task").get<std::string>();
      entry.mixture = resolve(e.at("mixture"));
      for (const auto& p : e.at("images")) entry.images.push_back(resolve(p));
      entry.scene = resolve(e.at("scene"));
      m.examples.push_back(std::move(entry));
    }
    BEAMKIT_REQUIRE(!m.examples.empty(), ErrorCode::kParse, "manifest lists no examples");
    return m;
  });
}

json ToJson(const PipelineConfig& config) {
  json stages = json::array();
  for (const auto& s : config.stages) {
    json j = {{"mask_source", ToString(s.mask_source)},
              {"bf_mode", ToString(s.bf_mode)},
              {"window_ms", 1000.0 * static_cast<double>(s.bf_stft.win_len) / s.bf_stft.sample_rate},
              {"window", ToString(s.bf_stft.window_kind)},
              {"context", s.ctx.total()},
              {"ref_channel", s.ref_channel},
              {"loading", s.loading}};
    if (s.block_frames) j["block_frames"] = *s.block_frames;
    if (s.normalization.kind == Normalization::Kind::kFarField) {
      j["normalization"] = {{"kind", "far_field"}, {"index", s.normalization.index}};
    }
    stages.push_back(j);
  }
  return {{"schema_version", kSchemaVersion},
          {"oracle_mask", config.oracle_kind == OracleMaskKind::kBinary ? "binary" : "wiener"},
          {"beamformed_phase", config.beamformed_phase},
          {"stages", stages}};
}

PipelineConfig PipelineConfigFromJson(const json& doc, int sample_rate) {
  CheckSchema(doc, "config");
  return Parsing("config", [&] {
    PipelineConfig config;
    const std::string kind = doc.value("oracle_mask", std::string("wiener"));
    BEAMKIT_REQUIRE(kind == "wiener" || kind == "binary", ErrorCode::kInvalidConfig,
                    "oracle_mask must be 'wiener' or 'binary'");
    config.oracle_kind = kind == "binary" ? OracleMaskKind::kBinary : OracleMaskKind::kWienerLike;
    config.beamformed_phase = doc.value("beamformed_phase", true);
    if (!doc.contains("stages")) return PipelineConfig::Default(sample_rate);
    int index = 1;
    for (const auto& j : doc.at("stages")) {
      StageConfig s;
      s.index = index++;
      s.mask_source = ParseMaskSource(j.value("mask_source", std::string("oracle")));
      s.bf_mode = ParseBfMode(j.value("bf_mode", std::string("TI")));
      s.bf_stft = StftConfig::Beamforming(j.value("window_ms", 64.0), sample_rate,
                                          ParseWindowKind(j.value("window", std::string("sqrt_hann"))));
      s.ctx = ContextConfig::FromTotal(j.value("context", std::size_t{4}));
      s.ref_channel = j.value("ref_channel", std::size_t{0});
      s.loading = j.value("loading", kDefaultLoading);
      if (j.contains("block_frames")) s.block_frames = j.at("block_frames").get<std::size_t>();
      if (j.contains("block_seconds")) {
        s.block_frames = BlockFramesFromSeconds(j.at("block_seconds").get<double>(), s.bf_stft);
      }
      if (j.contains("normalization")) {
        const auto& n = j.at("normalization");
        const std::string nk = n.value("kind", std::string("full_diagonal"));
        if (nk == "far_field") {
          s.normalization = Normalization::FarField(n.value("index", std::size_t{0}));
        } else {
          BEAMKIT_REQUIRE(nk == "full_diagonal", ErrorCode::kInvalidConfig,
                          "unknown normalization '" + nk + "'");
        }
      }
      config.stages.push_back(s);
    }
    config.Validate();
    return config;
  });
}

json ToJson(const SweepGrid& grid) {
  json blocks = json::array(), modes = json::array();
  for (const auto& b : grid.block_seconds) blocks.push_back(b ? json(*b) : json(nullptr));
  for (BfMode m : grid.modes) modes.push_back(ToString(m));
  return {{"schema_version", kSchemaVersion},
          {"windows_ms", grid.windows_ms},
          {"contexts", grid.contexts},
          {"block_seconds", blocks},
          {"mic_counts", grid.mic_counts},
          {"modes", modes},
          {"target_stage", grid.target_stage},
          {"num_stages", grid.num_stages},
          {"ref_channel", grid.ref_channel},
          {"loading", grid.loading},
          {"beamformed_phase", grid.beamformed_phase}};
}

SweepGrid SweepGridFromJson(const json& doc) {
  CheckSchema(doc, "grid");
  return Parsing("grid", [&] {
    SweepGrid grid;
    if (doc.contains("windows_ms")) grid.windows_ms = doc.at("windows_ms").get<std::vector<double>>();
    if (doc.contains("contexts")) grid.contexts = doc.at("contexts").get<std::vector<std::size_t>>();
    if (doc.contains("block_seconds")) {
      grid.block_seconds.clear();
      for (const auto& b : doc.at("block_seconds")) {
        grid.block_seconds.push_back(b.is_null() ? std::nullopt : std::optional<double>(b.get<double>()));
      }
    }
    if (doc.contains("mic_counts")) {
      grid.mic_counts = doc.at("mic_counts").get<std::vector<std::size_t>>();
    }
    if (doc.contains("modes")) {
      grid.modes.clear();
      for (const auto& m : doc.at("modes")) grid.modes.push_back(ParseBfMode(m.get<std::string>()));
    }
    grid.target_stage = doc.value("target_stage", grid.target_stage);
    grid.num_stages = doc.value("num_stages", grid.num_stages);
    grid.ref_channel = doc.value("ref_channel", grid.ref_channel);
    grid.loading = doc.value("loading", grid.loading);
    grid.beamformed_phase = doc.value("beamformed_phase", grid.beamformed_phase);
    grid.Validate();
    return grid;
  });
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  BEAMKIT_REQUIRE(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "cannot create " + path.string());
  out << doc.dump(2) << '\n';
  BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "write failed for " + path.string());
}

RoomScene ReadScene(const std::filesystem::path& path) { return SceneFromJson(ReadJsonFile(path)); }

Manifest ReadManifest(const std::filesystem::path& path) {
  return ManifestFromJson(ReadJsonFile(path), path.parent_path());
}

}  // namespace beamkit

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "homi/data.hpp"
#include "homi/model.hpp"

namespace homi {

/// A trained model together with what is needed to apply it to raw features.
struct SavedModel {
  HomiModel model;
  data::Standardization scaling;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;
};

/// Raw feature rows → decision values, applying the stored scaling first.
Matrix score_raw(const SavedModel& saved, const Matrix& raw_x,
                 std::span<const data::MissingCell> missing = {});

/// Self-describing JSON document. Doubles are written with 17 significant
/// digits, so a round trip is exact.
std::string to_text(const SavedModel& saved);
SavedModel from_text(const std::string& text);

void save_model(const std::filesystem::path& path, const SavedModel& saved);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace homi

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace acceptance {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  std::string id;
  std::string title;
  Status status = Status::Fail;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<Outcome> synthetic_criteria();
std::vector<Outcome> dataset_criteria(const std::filesystem::path& data_dir);

}  // namespace acceptance

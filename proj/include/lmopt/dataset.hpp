#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmopt {

/// Dense labelled dataset. Row i of `features` holds a_i; labels are in {-1,+1}.
struct Dataset {
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::vector<double> features;  // row-major n_samples x n_features
  std::vector<double> labels;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }

  void validate() const;
  bool operator==(const Dataset&) const = default;
};

/// Parses libsvm/svmlight text ("label idx:val ..."), 1-based strictly increasing
/// indices. Labels 0/1 are mapped to -1/+1. If `n_features` is given it must be at
/// least the largest index present.
Dataset parse_libsvm(std::string_view text, std::optional<std::size_t> n_features = std::nullopt);

Dataset load_libsvm_file(const std::filesystem::path& path,
                         std::optional<std::size_t> n_features = std::nullopt);

/// Writes zero entries sparsely; values use the shortest round-trip representation.
std::string to_libsvm(const Dataset& data);

/// Reproducible Gaussian stand-in for a binary classification dataset: features
/// ~ N(0,1), labels drawn from a logistic model around a planted weight vector.
Dataset synthesize_dataset(std::size_t n_samples, std::size_t n_features, std::uint64_t seed);

}  // namespace lmopt

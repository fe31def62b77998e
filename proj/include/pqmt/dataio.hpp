#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pqmt {

/// 28x28 grayscale images normalized to [0,1], row-major, with aligned labels.
struct Dataset {
    std::vector<std::vector<float>> images;
    std::vector<int> labels;
    std::string split;

    std::size_t size() const { return images.size(); }
};

/// Big-endian IDX ingestion (magic 2051 for images, 2049 for labels).
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// IDX fixture writer, inverse of load_idx.
void write_idx(const std::string& images_path, const std::string& labels_path,
               const Dataset& dataset);

/// Keep only the listed classes, relabeled 0..C-1 in list order, original
/// sample order preserved.
Dataset subset_classes(const Dataset& dataset, const std::vector<int>& classes);

/// Deterministic image set with class structure spread across columns, for
/// running the pipeline without the published dataset files. Class identity
/// is carried by the temporal variance of a column-to-column profile blend
/// whose mean and final column are class-independent, so separating classes
/// requires memory of the column history rather than any single column.
Dataset make_synthetic(int classes, int per_class, std::uint64_t seed);

/// Shortest decimal that round-trips the double.
std::string format_double(double value);

/// UTF-8 CSV with a header row; row arity must match the header.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_json(const std::string& path, const nlohmann::json& value);

}  // namespace pqmt

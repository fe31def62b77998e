#include "pqmt/dataio.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace pqmt {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;
constexpr int kSide = 28;

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4))
        throw std::runtime_error("load_idx: truncated file: " + path);
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t value) {
    unsigned char buf[4] = {static_cast<unsigned char>(value >> 24),
                            static_cast<unsigned char>(value >> 16),
                            static_cast<unsigned char>(value >> 8),
                            static_cast<unsigned char>(value)};
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_idx: cannot open " + path);
    return in;
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images_in = open_input(images_path);
    if (read_u32_be(images_in, images_path) != kImageMagic)
        throw std::runtime_error("load_idx: bad image magic in " + images_path);
    const std::uint32_t count = read_u32_be(images_in, images_path);
    const std::uint32_t rows = read_u32_be(images_in, images_path);
    const std::uint32_t cols = read_u32_be(images_in, images_path);
    if (rows != kSide || cols != kSide)
        throw std::runtime_error("load_idx: expected 28x28 images in " + images_path);

    std::ifstream labels_in = open_input(labels_path);
    if (read_u32_be(labels_in, labels_path) != kLabelMagic)
        throw std::runtime_error("load_idx: bad label magic in " + labels_path);
    if (read_u32_be(labels_in, labels_path) != count)
        throw std::runtime_error("load_idx: image/label count mismatch");

    Dataset dataset;
    dataset.images.reserve(count);
    dataset.labels.reserve(count);
    std::vector<unsigned char> pixel_buf(kSide * kSide);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!images_in.read(reinterpret_cast<char*>(pixel_buf.data()), pixel_buf.size()))
            throw std::runtime_error("load_idx: truncated file: " + images_path);
        std::vector<float> image(kSide * kSide);
        for (std::size_t k = 0; k < pixel_buf.size(); ++k)
            image[k] = static_cast<float>(pixel_buf[k]) / 255.0f;
        dataset.images.push_back(std::move(image));
        char label;
        if (!labels_in.read(&label, 1))
            throw std::runtime_error("load_idx: truncated file: " + labels_path);
        dataset.labels.push_back(static_cast<unsigned char>(label));
    }
    return dataset;
}

void write_idx(const std::string& images_path, const std::string& labels_path,
               const Dataset& dataset) {
    std::ofstream images_out(images_path, std::ios::binary);
    if (!images_out) throw std::runtime_error("write_idx: cannot open " + images_path);
    write_u32_be(images_out, kImageMagic);
    write_u32_be(images_out, static_cast<std::uint32_t>(dataset.size()));
    write_u32_be(images_out, kSide);
    write_u32_be(images_out, kSide);
    for (const auto& image : dataset.images) {
        if (image.size() != kSide * kSide)
            throw std::invalid_argument("write_idx: image is not 28x28");
        for (float v : image) {
            auto byte = static_cast<unsigned char>(std::lround(v * 255.0f));
            images_out.write(reinterpret_cast<const char*>(&byte), 1);
        }
    }

    std::ofstream labels_out(labels_path, std::ios::binary);
    if (!labels_out) throw std::runtime_error("write_idx: cannot open " + labels_path);
    write_u32_be(labels_out, kLabelMagic);
    write_u32_be(labels_out, static_cast<std::uint32_t>(dataset.size()));
    for (int label : dataset.labels) {
        auto byte = static_cast<unsigned char>(label);
        labels_out.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

Dataset subset_classes(const Dataset& dataset, const std::vector<int>& classes) {
    if (classes.empty()) throw std::invalid_argument("subset_classes: empty selection");
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j)
            if (classes[i] == classes[j])
                throw std::invalid_argument("subset_classes: duplicate class id");
    for (int c : classes)
        if (std::find(dataset.labels.begin(), dataset.labels.end(), c) ==
            dataset.labels.end())
            throw std::invalid_argument("subset_classes: class " + std::to_string(c) +
                                        " not present in dataset");
    Dataset out;
    out.split = dataset.split;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        auto it = std::find(classes.begin(), classes.end(), dataset.labels[i]);
        if (it == classes.end()) continue;
        out.images.push_back(dataset.images[i]);
        out.labels.push_back(static_cast<int>(it - classes.begin()));
    }
    return out;
}

Dataset make_synthetic(int classes, int per_class, std::uint64_t seed) {
    if (classes < 1 || per_class < 1)
        throw std::invalid_argument("make_synthetic: need >= 1 class and image");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.05);

    // Each column blends two per-image vertical profiles; the blend weight
    // oscillates down the columns with a class-dependent swing around a
    // common mean, and the final column uses the neutral weight for every
    // class. A column-mean observer therefore sees all classes alike; the
    // class is carried by the temporal variance of the column sequence.
    Dataset dataset;
    dataset.split = "synthetic";
    for (int c = 0; c < classes; ++c) {
        const double swing = classes == 1 ? 0.0 : 0.9 * c / (classes - 1);
        for (int i = 0; i < per_class; ++i) {
            const double center_a = 4.0 + 6.0 * uniform(rng);
            const double center_b = 17.0 + 6.0 * uniform(rng);
            const double width_a = 2.5 + 1.5 * uniform(rng);
            const double width_b = 2.5 + 1.5 * uniform(rng);
            const double amplitude = 0.55 + 0.3 * uniform(rng);
            std::vector<float> image(kSide * kSide);
            for (int k = 0; k < kSide; ++k) {
                double m = 0.5;
                if (k < kSide - 1) {
                    m += (k % 2 == 0 ? 0.5 : -0.5) * swing;
                    m += (uniform(rng) - 0.5) * 0.06;
                }
                for (int j = 0; j < kSide; ++j) {
                    const double lobe_a =
                        std::exp(-0.5 * std::pow((j - center_a) / width_a, 2.0));
                    const double lobe_b =
                        std::exp(-0.5 * std::pow((j - center_b) / width_b, 2.0));
                    double value =
                        amplitude * ((1.0 - m) * lobe_a + m * lobe_b) + noise(rng);
                    image[j * kSide + k] = static_cast<float>(std::clamp(value, 0.0, 1.0));
                }
            }
            dataset.images.push_back(std::move(image));
            dataset.labels.push_back(c);
        }
    }
    return dataset;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << row[i];
        }
        out << '\n';
    };
    write_row(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row arity does not match header");
        write_row(row);
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_json(const std::string& path, const nlohmann::json& value) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << value.dump(2) << '\n';
    if (!out) throw std::runtime_error("write_json: write failed for " + path);
}

}  // namespace pqmt

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "subsel/dataset.hpp"

namespace subsel {

enum class FileFormat { csv, binary };

/// CSV layout: header `id,label,f0,...,f{d-1}` (the label column may be
/// absent, or present with every cell empty for an unlabeled file). Fields
/// are unquoted. Class names map to dense ids in numeric order when every
/// name is an integer, otherwise in lexicographic order.
FeatureDataset parse_csv(std::string_view text);
std::string format_csv(const FeatureDataset& dataset);

/// Binary layout, all little-endian: magic "SUBSEL01", u32 n, u32 d,
/// u32 label flag, n*d f64 row-major, n u32 labels when flagged, then n ids
/// each as u32 byte length + UTF-8 bytes. Class names become "0".."C-1".
FeatureDataset parse_binary(std::string_view bytes);
std::string format_binary(const FeatureDataset& dataset);

inline constexpr std::string_view kBinaryMagic = "SUBSEL01";

/// Reads either format (binary when the magic matches) and validates the result.
FeatureDataset read_features(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const FeatureDataset& dataset, FileFormat format);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace subsel

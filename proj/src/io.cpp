#include "subsel/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace subsel {
namespace {

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
  fail(ErrorCode::parse_error, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool parse_uint(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Dense ids for class names; numeric order when all names are integers.
LabelSet map_labels(const std::vector<std::string>& raw) {
  std::vector<std::string> names(raw.begin(), raw.end());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const bool numeric = std::all_of(names.begin(), names.end(), [](const std::string& s) {
    std::uint64_t v;
    return parse_uint(s, v);
  });
  if (numeric) {
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      std::uint64_t x = 0, y = 0;
      parse_uint(a, x);
      parse_uint(b, y);
      return x != y ? x < y : a < b;
    });
  }
  std::map<std::string, std::uint32_t> index;
  for (std::size_t c = 0; c < names.size(); ++c) index[names[c]] = static_cast<std::uint32_t>(c);
  LabelSet labels;
  labels.names = std::move(names);
  labels.values.reserve(raw.size());
  for (const auto& r : raw) labels.values.push_back(index.at(r));
  return labels;
}

template <class T>
void put(std::string& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary writer assumes a little-endian host");
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <class T>
  T get(const char* what) {
    if (pos_ + sizeof(T) > bytes_.size()) {
      fail(ErrorCode::parse_error, "truncated binary file at byte " + std::to_string(pos_) + " while reading " + what);
    }
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t count, const char* what) {
    if (pos_ + count > bytes_.size()) {
      fail(ErrorCode::parse_error, "truncated binary file at byte " + std::to_string(pos_) + " while reading " + what);
    }
    auto out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

FeatureDataset parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorCode::parse_error, "line 1: missing header");

  auto header = split_fields(lines[0]);
  if (header[0] != "id") parse_fail(1, 1, "first header field must be 'id', got '" + std::string(header[0]) + "'");
  const bool label_column = header.size() > 1 && header[1] == "label";
  const std::size_t first_feature = label_column ? 2 : 1;
  const std::size_t d = header.size() - first_feature;
  for (std::size_t k = 0; k < d; ++k) {
    if (header[first_feature + k] != "f" + std::to_string(k)) {
      parse_fail(1, first_feature + k + 1, "expected header 'f" + std::to_string(k) + "', got '" +
                                               std::string(header[first_feature + k]) + "'");
    }
  }

  const std::size_t n = lines.size() - 1;
  std::vector<double> features;
  features.reserve(n * d);
  std::vector<std::string> ids;
  std::vector<std::string> raw_labels;
  std::size_t empty_labels = 0;

  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t line_no = r + 2;
    auto fields = split_fields(lines[r + 1]);
    if (fields.size() != header.size()) {
      parse_fail(line_no, std::min(fields.size(), header.size()) + 1,
                 "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) parse_fail(line_no, 1, "empty id");
    ids.emplace_back(fields[0]);
    if (label_column) {
      raw_labels.emplace_back(fields[1]);
      empty_labels += fields[1].empty();
    }
    for (std::size_t k = 0; k < d; ++k) {
      auto cell = fields[first_feature + k];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        parse_fail(line_no, first_feature + k + 1, "cannot parse '" + std::string(cell) + "' as a number");
      }
      if (!std::isfinite(v)) parse_fail(line_no, first_feature + k + 1, "non-finite value '" + std::string(cell) + "'");
      features.push_back(v);
    }
  }

  std::optional<LabelSet> labels;
  if (label_column && empty_labels != n) {
    if (empty_labels != 0) {
      for (std::size_t r = 0; r < n; ++r) {
        if (raw_labels[r].empty()) parse_fail(r + 2, 2, "missing label in a labeled file");
      }
    }
    labels = map_labels(raw_labels);
  }
  return FeatureDataset(n, d, std::move(features), std::move(ids), std::move(labels));
}

std::string format_csv(const FeatureDataset& dataset) {
  std::string out = "id";
  if (dataset.has_labels()) out += ",label";
  for (std::size_t k = 0; k < dataset.d(); ++k) out += ",f" + std::to_string(k);
  out += '\n';
  for (Index i = 0; i < dataset.n(); ++i) {
    out += dataset.ids()[i];
    if (dataset.has_labels()) out += "," + dataset.labels().names[dataset.label(i)];
    for (double v : dataset.row(i)) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

FeatureDataset parse_binary(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(kBinaryMagic.size(), "magic") != kBinaryMagic) {
    fail(ErrorCode::parse_error, "byte 0: bad magic, expected SUBSEL01");
  }
  const auto n = in.get<std::uint32_t>("n");
  const auto d = in.get<std::uint32_t>("d");
  const auto flag = in.get<std::uint32_t>("label flag");
  if (flag > 1) fail(ErrorCode::parse_error, "byte 20: label flag must be 0 or 1, got " + std::to_string(flag));

  std::vector<double> features(static_cast<std::size_t>(n) * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      double v = in.get<double>("features");
      if (!std::isfinite(v)) {
        fail(ErrorCode::parse_error, "row " + std::to_string(i) + ", column " + std::to_string(k) + ": non-finite value");
      }
      features[i * d + k] = v;
    }
  }

  std::optional<LabelSet> labels;
  if (flag) {
    LabelSet set;
    std::uint32_t top = 0;
    for (std::size_t i = 0; i < n; ++i) {
      set.values.push_back(in.get<std::uint32_t>("labels"));
      top = std::max(top, set.values.back());
    }
    const std::size_t classes = n == 0 ? 0 : static_cast<std::size_t>(top) + 1;
    for (std::size_t c = 0; c < classes; ++c) set.names.push_back(std::to_string(c));
    labels = std::move(set);
  }

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    auto len = in.get<std::uint32_t>("id length");
    ids.emplace_back(in.take(len, "id"));
  }
  if (!in.done()) fail(ErrorCode::parse_error, "trailing bytes after byte " + std::to_string(in.position()));
  return FeatureDataset(n, d, std::move(features), std::move(ids), std::move(labels));
}

std::string format_binary(const FeatureDataset& dataset) {
  std::string out(kBinaryMagic);
  put(out, static_cast<std::uint32_t>(dataset.n()));
  put(out, static_cast<std::uint32_t>(dataset.d()));
  put(out, static_cast<std::uint32_t>(dataset.has_labels() ? 1 : 0));
  for (double v : dataset.features()) put(out, v);
  if (dataset.has_labels()) {
    for (auto y : dataset.labels().values) put(out, y);
  }
  for (const auto& id : dataset.ids()) {
    put(out, static_cast<std::uint32_t>(id.size()));
    out += id;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCode::io_error, "write failed for " + path.string());
}

FeatureDataset read_features(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  auto dataset = bytes.starts_with(kBinaryMagic) ? parse_binary(bytes) : parse_csv(bytes);
  require_valid(dataset);
  return dataset;
}

void write_features(const std::filesystem::path& path, const FeatureDataset& dataset, FileFormat format) {
  write_file(path, format == FileFormat::csv ? format_csv(dataset) : format_binary(dataset));
}

}  // namespace subsel

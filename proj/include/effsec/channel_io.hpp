// Channel documents: a JSON schema declaring the three alphabets and
// either the joint conditional matrix or two factor matrices with an
// independence flag. Parse errors carry a distinct code per failure kind.
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "effsec/core.hpp"
#include "effsec/prob.hpp"

namespace effsec {

enum class ChannelFormatCode {
  kMalformedDocument,   // unreadable / not the expected JSON shape
  kRowSumViolation,     // a declared row's mass is off by more than 1e-9
  kDimensionMismatch,   // matrix shape disagrees with the alphabets
};

class ChannelFormatError : public std::runtime_error {
 public:
  ChannelFormatError(ChannelFormatCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ChannelFormatCode code() const { return code_; }

 private:
  ChannelFormatCode code_;
};

namespace detail {

inline Alphabet parse_alphabet(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty()) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             std::string("channel document: missing or empty alphabet '") +
                                 key + "'");
  }
  std::vector<std::string> labels;
  for (const auto& item : doc[key]) {
    if (item.is_string()) {
      labels.push_back(item.get<std::string>());
    } else if (item.is_number_integer()) {
      labels.push_back(std::to_string(item.get<long long>()));
    } else {
      throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                               std::string("channel document: alphabet '") + key +
                                   "' entries must be strings or integers");
    }
  }
  try {
    return Alphabet(std::move(labels));
  } catch (const InvalidDistribution& e) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             std::string("channel document: ") + e.what());
  }
}

inline std::vector<std::vector<double>> parse_matrix(const nlohmann::json& m,
                                                     const char* name,
                                                     std::size_t rows,
                                                     std::size_t cols) {
  if (!m.is_array() || m.size() != rows) {
    throw ChannelFormatError(ChannelFormatCode::kDimensionMismatch,
                             std::string("channel document: '") + name + "' must have " +
                                 std::to_string(rows) + " rows");
  }
  std::vector<std::vector<double>> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = m[r];
    if (!row.is_array() || row.size() != cols) {
      throw ChannelFormatError(ChannelFormatCode::kDimensionMismatch,
                               std::string("channel document: '") + name + "' row " +
                                   std::to_string(r) + " must have " +
                                   std::to_string(cols) + " entries");
    }
    std::vector<double> vals;
    vals.reserve(cols);
    double sum = 0.0;
    for (const auto& v : row) {
      if (!v.is_number()) {
        throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                                 std::string("channel document: '") + name +
                                     "' contains a non-numeric entry");
      }
      double d = v.get<double>();
      if (d < 0.0) {
        throw ChannelFormatError(ChannelFormatCode::kRowSumViolation,
                                 std::string("channel document: '") + name + "' row " +
                                     std::to_string(r) + " has a negative entry");
      }
      vals.push_back(d);
      sum += d;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ChannelFormatError(ChannelFormatCode::kRowSumViolation,
                               std::string("channel document: '") + name + "' row " +
                                   std::to_string(r) + " sums to " + std::to_string(sum));
    }
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace detail

inline WiretapChannel parse_channel_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             "channel document: top level must be an object");
  }
  Alphabet x = detail::parse_alphabet(doc, "x");
  Alphabet y = detail::parse_alphabet(doc, "y");
  Alphabet z = detail::parse_alphabet(doc, "z");
  const bool has_joint = doc.contains("joint");
  const bool has_factors = doc.contains("y_given_x") && doc.contains("z_given_x");
  if (has_joint == has_factors) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             "channel document: provide either 'joint' or the pair "
                             "'y_given_x'/'z_given_x'");
  }
  if (has_joint) {
    auto rows = detail::parse_matrix(doc["joint"], "joint", x.size(), y.size() * z.size());
    return WiretapChannel(std::move(x), std::move(y), std::move(z), std::move(rows));
  }
  if (doc.contains("independent") && !doc["independent"].get<bool>()) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             "channel document: factor form requires independent = true");
  }
  auto yr = detail::parse_matrix(doc["y_given_x"], "y_given_x", x.size(), y.size());
  auto zr = detail::parse_matrix(doc["z_given_x"], "z_given_x", x.size(), z.size());
  Dmc chy(x, y, std::move(yr));
  Dmc chz(x, z, std::move(zr));
  return WiretapChannel::from_marginals(chy, chz);
}

inline WiretapChannel parse_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             "channel document: cannot open '" + path.string() + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ChannelFormatError(ChannelFormatCode::kMalformedDocument,
                             "channel document: invalid JSON in '" + path.string() +
                                 "': " + e.what());
  }
  return parse_channel_json(doc);
}

inline nlohmann::json channel_to_json(const WiretapChannel& ch) {
  nlohmann::json doc;
  doc["x"] = ch.input().labels();
  doc["y"] = ch.y_alphabet().labels();
  doc["z"] = ch.z_alphabet().labels();
  std::vector<std::vector<double>> rows;
  rows.reserve(ch.input_size());
  for (std::size_t x = 0; x < ch.input_size(); ++x) {
    auto r = ch.joint_row(x);
    rows.emplace_back(r.begin(), r.end());
  }
  doc["joint"] = rows;
  return doc;
}

inline void write_channel(const std::filesystem::path& path, const WiretapChannel& ch) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << channel_to_json(ch).dump(2) << '\n';
}

}  // namespace effsec

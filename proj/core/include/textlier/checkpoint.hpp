#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "textlier/nn/sequential.hpp"

namespace textlier {

inline constexpr int kCheckpointVersion = 1;

/// Text checkpoint:
///
///   textlier-checkpoint
///   version 1
///   config <key> <value>          (any number, keys unique)
///   param <name> <rank> <d0> ...  (followed by prod(dims) reals, 17 digits)
///   end
///
/// Reals are printed with 17 significant digits, so a write/read cycle is
/// bit-exact for every finite double.
struct Checkpoint {
  std::map<std::string, std::string> config;
  std::vector<nn::NamedTensor> params;

  const nn::Tensor& param(const std::string& name) const;
  const std::string& value(const std::string& key) const;
  bool has_param(const std::string& name) const;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
/// Throws FormatError naming the line and the expectation that failed.
Checkpoint read_checkpoint(std::istream& in, const std::string& source_name);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// 17-significant-digit real formatting shared by text writers, and its inverse.
std::string format_real(double value);
double parse_real(const std::string& text);

}  // namespace textlier

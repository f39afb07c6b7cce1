#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace somalab {

/// Output directory handling and the run manifest. Every file a subcommand
/// writes goes through `write`, which keeps it inside the output directory
/// and lists it in the manifest.
class RunContext {
 public:
  RunContext(std::string subcommand, std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const { return out_dir_; }
  const std::string& manifest_name() const { return manifest_name_; }

  nlohmann::json& config() { return config_; }
  void add_seed(std::uint64_t seed);

  /// Resolves `name` inside the output directory; throws if it escapes it.
  std::filesystem::path resolve(const std::string& name) const;
  std::filesystem::path write(const std::string& name, const std::string& contents);
  /// Adds a "manifest" field before writing.
  std::filesystem::path write_json(const std::string& name, nlohmann::json value);
  void record_input(const std::string& path);
  /// For files written directly by library code.
  void record_output(const std::filesystem::path& path);

  void finish();

 private:
  std::string subcommand_;
  std::filesystem::path out_dir_;
  std::string manifest_name_;
  nlohmann::json config_ = nlohmann::json::object();
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::string started_;
};

/// Output directory: the flag if given, else $SOMALAB_OUT_DIR, else ./somalab-out.
std::filesystem::path default_out_dir(const std::string& flag_value);

}  // namespace somalab

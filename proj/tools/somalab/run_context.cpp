#include "run_context.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "soma/errors.hpp"

#ifndef SOMALAB_VERSION
#define SOMALAB_VERSION "unknown"
#endif

namespace somalab {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

RunContext::RunContext(std::string subcommand, fs::path out_dir)
    : subcommand_(std::move(subcommand)), out_dir_(std::move(out_dir)), started_(utc_now()) {
  std::string base = subcommand_;
  for (char& c : base)
    if (c == ' ') c = '-';
  manifest_name_ = base + ".manifest.json";
  fs::create_directories(out_dir_);
  out_dir_ = fs::weakly_canonical(out_dir_);
}

void RunContext::add_seed(std::uint64_t seed) { seeds_.push_back(seed); }

fs::path RunContext::resolve(const std::string& name) const {
  const fs::path candidate = fs::weakly_canonical(fs::path(name).is_absolute() ? fs::path(name) : out_dir_ / name);
  const auto rel = candidate.lexically_relative(out_dir_);
  if (rel.empty() || *rel.begin() == "..") throw soma::Error("io", "refusing to write outside " + out_dir_.string());
  return candidate;
}

fs::path RunContext::write(const std::string& name, const std::string& contents) {
  const fs::path path = resolve(name);
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw soma::Error("io", "cannot write " + path.string());
  outputs_.push_back(path.lexically_relative(out_dir_).string());
  return path;
}

fs::path RunContext::write_json(const std::string& name, nlohmann::json value) {
  value["manifest"] = manifest_name_;
  return write(name, value.dump(2) + "\n");
}

void RunContext::record_input(const std::string& path) { inputs_.push_back(path); }

void RunContext::record_output(const fs::path& path) {
  outputs_.push_back(fs::weakly_canonical(path).lexically_relative(out_dir_).string());
}

void RunContext::finish() {
  nlohmann::json m;
  m["subcommand"] = subcommand_;
  m["version"] = SOMALAB_VERSION;
  m["config"] = config_;
  m["seeds"] = seeds_;
  m["inputs"] = inputs_;
  m["outputs"] = outputs_;
  m["output_dir"] = out_dir_.string();
  m["started"] = started_;
  m["finished"] = utc_now();
  std::ofstream out(out_dir_ / manifest_name_);
  out << m.dump(2) << "\n";
  if (!out) throw soma::Error("io", "cannot write the manifest");
}

fs::path default_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SOMALAB_OUT_DIR"); env && *env) return env;
  return "somalab-out";
}

}  // namespace somalab

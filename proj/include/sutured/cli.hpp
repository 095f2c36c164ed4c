#pragma once

// Front end shared by the `sutured` executable and its tests: input file
// formats, report rendering, the on-disk result cache and batch runs.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sutured/decomposition.hpp"
#include "sutured/group_ring.hpp"
#include "sutured/window.hpp"

namespace sutured::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { Ok = 0, Violation = 1, Inconsistent = 2, InputError = 3 };

/// `.gre`: a group-ring element with optional meridian and dimension.
struct GreFile {
  FinAbGroup group;
  RingNames names;
  GroupRingElem element;
  std::optional<GroupElem> meridian;
  std::optional<Int> dim;
};

GreFile parse_gre(std::string_view text);

/// `.det`: per-coset data for the detection classifier.
struct DetFile {
  RingNames names;
  DetectionInput input;
};

DetFile parse_det(std::string_view text);

enum class Format { Text, Kv };

/// Ordered key/value report. Text output aligns values in one column.
class Report {
 public:
  void add(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, Int value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "yes" : "no")); }
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  const std::vector<std::pair<std::string, std::string>>& rows() const noexcept { return rows_; }
  std::string render(Format f) const;

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

struct Result {
  int exit_code = Ok;
  std::string output;
  bool operator==(const Result&) const = default;
};

/// Commands that take one input file.
inline constexpr const char* kFileCommands[] = {"torsion", "hfk11", "decomp", "detect", "crosscheck"};
bool is_file_command(std::string_view command);

/// Runs a file command on in-memory text. `name` only labels the report and
/// selects the format for `detect` (`.od` or `.det`).
Result run_text(std::string_view command, std::string_view name, std::string_view text, Format f);
Result run_window(const WindowParams& w, Format f);

/// Command implied by a file extension, or empty for unknown extensions.
std::string command_for(const std::filesystem::path& p);

std::string sha256_hex(std::string_view data);

/// Flat-file cache keyed by a digest of version, command, options and input.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  /// Directory from the SUTURED_CACHE_DIR environment variable, else
  /// $XDG_CACHE_HOME/sutured, else ~/.cache/sutured.
  static std::filesystem::path default_dir();

  static std::string key(std::string_view command, std::string_view options, std::string_view input);
  std::optional<Result> get(const std::string& key) const;
  /// Write to a temporary file and rename into place.
  void put(const std::string& key, const Result& r) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// Reads the file and runs the command, consulting the cache when given.
/// Unreadable files are input errors.
Result run_file(std::string_view command, const std::filesystem::path& path, Format f, const Cache* cache);

struct BatchOptions {
  Format format = Format::Text;
  unsigned jobs = 1;
  const Cache* cache = nullptr;
  std::optional<std::filesystem::path> out_dir;  // per-job records
};

struct BatchEntry {
  std::string file;
  std::string command;
  Result result;
};

struct BatchResult {
  std::vector<BatchEntry> entries;  // sorted by file name
  int exit_code = Ok;               // worst entry
  std::string summary;
};

/// Runs every recognized file in `dir` (not recursive). Jobs run in parallel;
/// the summary is independent of the thread count.
BatchResult run_batch(const std::filesystem::path& dir, const BatchOptions& opts);

std::string status_name(int exit_code);

}  // namespace sutured::cli

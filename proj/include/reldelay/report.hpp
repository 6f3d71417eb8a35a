#pragma once

#include <string>
#include <vector>

namespace reldelay {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kManifestFile = "manifest.json";

/// 12 significant digits, '.' decimal point, no grouping.
std::string format_number(double value);

/// Builds CSV text. The first line references the manifest, the second is the header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct OutputFile {
    std::string name;  // relative to the output directory
    std::string content;
};

/// Everything one command produces, before it touches the filesystem.
struct CommandOutput {
    std::string command;
    std::vector<OutputFile> files;
    std::vector<std::string> warnings;
};

/// Provenance record written next to the outputs.
struct ExperimentManifest {
    std::string command;
    std::string config_snapshot;
    std::string version = kVersion;
    std::string timestamp;  // UTC, ISO 8601
    std::vector<std::string> outputs;

    std::string to_json() const;
};

std::string utc_timestamp();

/// Writes the files plus manifest.json into dir (created if missing).
/// Returns the paths written, manifest last.
std::vector<std::string> write_outputs(const CommandOutput& out, const std::string& dir,
                                       const std::string& config_snapshot);

}  // namespace reldelay

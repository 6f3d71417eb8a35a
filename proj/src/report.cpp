#include "reldelay/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace reldelay {

std::string format_number(double value)
{
    if (value == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size()) throw std::logic_error("csv row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out = "# manifest=";
    out += kManifestFile;
    out += '\n';
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string ExperimentManifest::to_json() const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["config"] = config_snapshot;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> write_outputs(const CommandOutput& out, const std::string& dir,
                                       const std::string& config_snapshot)
{
    namespace fs = std::filesystem;
    const fs::path root = dir.empty() ? fs::path(".") : fs::path(dir);
    fs::create_directories(root);

    ExperimentManifest manifest;
    manifest.command = out.command;
    manifest.config_snapshot = config_snapshot;
    manifest.timestamp = utc_timestamp();

    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& content) {
        const fs::path path = root / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << content;
        if (!f) throw std::runtime_error("write failed for " + path.string());
        written.push_back(path.string());
    };
    for (const auto& file : out.files) {
        put(file.name, file.content);
        manifest.outputs.push_back(file.name);
    }
    put(kManifestFile, manifest.to_json());
    return written;
}

}  // namespace reldelay

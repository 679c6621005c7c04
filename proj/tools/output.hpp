#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "oestylo/stats.hpp"

namespace oestylo::cli {

enum class Format { Csv, Json };

// A rectangular table of pre-formatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string to_csv(const Table& t);
nlohmann::ordered_json to_json(const Table& t);

// Fixed-precision formatting so outputs are byte-stable.
std::string fmt(double v, int digits = 6);
std::string fmt_opt(const std::optional<double>& v, int digits = 6);

nlohmann::ordered_json test_result_json(const stats::TestResult& r);

// Writes under <out>/<subdir>/ and records every path it wrote.
class OutputDir {
public:
    OutputDir(std::filesystem::path root, std::string subdir, Format format);

    const std::filesystem::path& dir() const { return dir_; }
    void table(const std::string& name, const Table& t);
    void json(const std::string& name, const nlohmann::ordered_json& j);
    void svg(const std::string& name, const std::string& document);
    const std::vector<std::string>& written() const { return written_; }

private:
    void write(const std::string& file, const std::string& content);

    std::filesystem::path dir_;
    Format format_;
    std::vector<std::string> written_;
};

// FNV-1a 64-bit hash of a file's bytes, as "fnv1a64:<16 hex digits>".
std::string hash_file(const std::filesystem::path& path);

// Hashes of every regular file directly under the corpus root, sorted by name.
nlohmann::ordered_json input_hashes(const std::filesystem::path& corpus_root);

}  // namespace oestylo::cli

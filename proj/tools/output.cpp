#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "oestylo/error.hpp"

namespace oestylo::cli {

namespace fs = std::filesystem;

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_cell(t.columns[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
    }
    return out;
}

nlohmann::ordered_json to_json(const Table& t) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) obj[t.columns[i]] = row[i];
        arr.push_back(obj);
    }
    return arr;
}

std::string fmt(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

std::string fmt_opt(const std::optional<double>& v, int digits) { return v ? fmt(*v, digits) : ""; }

nlohmann::ordered_json test_result_json(const stats::TestResult& r) {
    nlohmann::ordered_json j;
    j["method"] = stats::to_string(r.method);
    j["statistic"] = r.statistic;
    j["df"] = r.df;
    j["p_value"] = r.p_value;
    j["n_obs"] = r.n_obs;
    if (r.min_expected) j["min_expected"] = *r.min_expected;
    if (!r.dropped_categories.empty()) j["dropped_categories"] = r.dropped_categories;
    if (!r.merged_categories.empty()) j["merged_categories"] = r.merged_categories;
    if (r.replicates) j["replicates"] = r.replicates;
    return j;
}

OutputDir::OutputDir(fs::path root, std::string subdir, Format format)
    : dir_(std::move(root) / subdir), format_(format) {
    fs::create_directories(dir_);
}

void OutputDir::write(const std::string& file, const std::string& content) {
    const fs::path path = dir_ / file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    written_.push_back(file);
}

void OutputDir::table(const std::string& name, const Table& t) {
    if (format_ == Format::Csv) write(name + ".csv", to_csv(t));
    else write(name + ".json", to_json(t).dump(2) + "\n");
}

void OutputDir::json(const std::string& name, const nlohmann::ordered_json& j) {
    write(name + ".json", j.dump(2) + "\n");
}

void OutputDir::svg(const std::string& name, const std::string& document) { write(name + ".svg", document); }

std::string hash_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
    }
    char out[32];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + out;
}

nlohmann::ordered_json input_hashes(const fs::path& corpus_root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_root)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : files) j[f.filename().string()] = hash_file(f);
    return j;
}

}  // namespace oestylo::cli

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "lgi/core/error.hpp"
#include "lgi/version.hpp"

namespace lgi::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kOracleMismatch = 4 };

/// Thrown for flag values that parse but make no sense (exit 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

/// Collects output files and writes the manifest that lists them.
class OutputSet {
public:
    OutputSet(fs::path dir, std::string command, std::vector<std::string> argv)
        : dir_(std::move(dir)), command_(std::move(command)), argv_(std::move(argv)), started_(utc_now()) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw UsageError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    void write(const std::string& name, const std::string& contents) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        out << contents;
        if (!out) throw std::runtime_error("cannot write " + p.string());
        files_.push_back({{"file", name}, {"bytes", contents.size()}, {"sha256", sha256_hex(contents)}});
    }

    void finish(const json& parameters, const json& seed = nullptr) {
        json m;
        m["command"] = command_;
        m["argv"] = argv_;
        m["parameters"] = parameters;
        m["code_version"] = kVersion;
        m["seed"] = seed;
        m["started_at"] = started_;
        m["finished_at"] = utc_now();
        m["outputs"] = files_;
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << m.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write manifest.json");
    }

private:
    fs::path dir_;
    std::string command_;
    std::vector<std::string> argv_;
    std::string started_;
    json files_ = json::array();
};

}  // namespace lgi::cli

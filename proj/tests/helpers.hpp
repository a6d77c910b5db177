#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hsd/common.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(HSD_DATA_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
    return std::string(HSD_GOLDEN_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("test cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("test cannot write " + path);
    out << content;
}

// Scratch directory removed when the test block ends.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path = base / ("hsd-test-" + std::to_string(::getpid()) + "-" +
                       std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    std::string file(const std::string& name, const std::string& content) const {
        const std::string p = file(name);
        write_file(p, content);
        return p;
    }
};

// Runs the CLI binary, captures stdout+stderr, returns the exit status.
inline int run_cli(const std::string& args, std::string* output = nullptr) {
    const TempDir dir;
    const std::string log = dir.file("out.log");
    const std::string cmd = std::string(HSD_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = read_file(log);
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

}  // namespace testutil

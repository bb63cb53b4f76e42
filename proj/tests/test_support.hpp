#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace test_support {

inline std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "corrode-tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

inline std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = temp_path(name);
    std::ofstream(path) << text;
    return path;
}

}  // namespace test_support

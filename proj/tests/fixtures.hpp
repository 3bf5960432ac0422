#pragma once

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <random>
#include <string>

#include "crisislda/types.hpp"

namespace testutil {

// Temp file that cleans up on scope exit.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::filesystem::temp_directory_path() /
               ("crisislda_test_" + std::to_string(::getpid()) + "_" + name);
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name) {
        path = std::filesystem::temp_directory_path() /
               ("crisislda_test_" + std::to_string(::getpid()) + "_" + name);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

// Geometric GDP series: level * rate^k from first_year.
inline crisislda::GdpSeries geometric_series(const std::string& country, int first_year,
                                             int years, double level, double rate) {
    crisislda::GdpSeries s;
    s.country_id = country;
    s.first_year = first_year;
    double v = level;
    for (int i = 0; i < years; ++i) {
        s.values.push_back(v);
        v *= rate;
    }
    return s;
}

}  // namespace testutil

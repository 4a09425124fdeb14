#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace desitter::io {

// Shortest text that reads back to the same double; "nan", "inf", "-inf" otherwise.
std::string fmt(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
};

// Comma separated, header row, '\n' line endings.
std::string to_csv(const Table& t);
// Whitespace separated with a '#' header line, for plotting tools.
std::string to_dat(const Table& t);

std::string sha256_hex(const std::string& bytes);

// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct WrittenFile {
    std::string name;
    std::string sha256;
    std::size_t bytes = 0;
};

// Output directory that remembers what was written to it.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir);

    void write(const std::string& name, const std::string& content);
    [[nodiscard]] const std::vector<WrittenFile>& files() const { return files_; }
    [[nodiscard]] const std::filesystem::path& path() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<WrittenFile> files_;
};

}  // namespace desitter::io

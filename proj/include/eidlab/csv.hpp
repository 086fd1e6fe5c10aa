#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eidlab {

// Shortest round-trip decimal for a double (%.17g); CSV bodies built from
// these are byte-stable across runs.
std::string fmt_g17(double v);

// Minimal CSV accumulator: header plus comma-joined rows, '\n' line ends.
class Csv {
public:
    explicit Csv(std::string header);
    void add_row(const std::vector<std::string>& fields);
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::size_t columns_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a over bytes; the manifest digest.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

}  // namespace eidlab

#include "eidlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "eidlab/error.hpp"

namespace eidlab {

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Csv::Csv(std::string header) : text_(std::move(header)), columns_(1) {
    for (char ch : text_)
        if (ch == ',') ++columns_;
    text_.push_back('\n');
}

void Csv::add_row(const std::vector<std::string>& fields) {
    require(fields.size() == columns_, "Csv: row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) text_.push_back(',');
        text_ += fields[i];
    }
    text_.push_back('\n');
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) { return fnv1a64(read_text_file(path)); }

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace eidlab

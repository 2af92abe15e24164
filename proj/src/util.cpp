#include "perfset/util.hpp"

#include <algorithm>
#include <cctype>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "perfset/error.hpp"

namespace perfset::util {

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(data)));
    return std::string(buf);
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_ws = true;  // leading whitespace is dropped
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out.push_back(' ');
            out.push_back(c);
            in_ws = false;
        }
    }
    return out;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with(std::string_view text, std::string_view prefix) {
    return text.substr(0, prefix.size()) == prefix;
}

std::string trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == sep) {
            parts.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

std::string format_fixed(double value, int places) {
    const int prev = std::fegetround();
    std::fesetround(FE_TONEAREST);  // ties-to-even
    long double scale = 1.0L;
    for (int i = 0; i < places; ++i) scale *= 10.0L;
    long double scaled = static_cast<long double>(value) * scale;
    long double rounded = std::nearbyintl(scaled);
    std::fesetround(prev);

    bool negative = std::signbit(rounded);
    unsigned long long mag = static_cast<unsigned long long>(fabsl(rounded));
    std::string digits = std::to_string(mag);
    if (static_cast<int>(digits.size()) <= places) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    std::string out;
    if (negative) out.push_back('-');
    if (places == 0) {
        out += digits;
    } else {
        out += digits.substr(0, digits.size() - static_cast<std::size_t>(places));
        out.push_back('.');
        out += digits.substr(digits.size() - static_cast<std::size_t>(places));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("unreadable_file", "cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::optional<std::string> try_read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("unwritable_file", "cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw input_error("unwritable_file", "short write: " + path);
}

std::string read_file_tail(const std::string& path, std::size_t max_bytes) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) return {};
    auto size = static_cast<std::size_t>(in.tellg());
    std::size_t take = std::min(size, max_bytes);
    in.seekg(static_cast<std::streamoff>(size - take));
    std::string out(take, '\0');
    in.read(out.data(), static_cast<std::streamsize>(take));
    return out;
}

int count_lines(std::string_view text) {
    if (text.empty()) return 0;
    int n = 1;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    if (text.back() == '\n') --n;
    return n;
}

std::string replace_all(std::string text, std::string_view placeholder, std::string_view value) {
    if (placeholder.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace perfset::util

// Copyright (c) 2026 The mobex Authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mobex/text_io.h"

#include "mobex/error.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <zlib.h>

namespace mobex {

struct LineReader::Handle {
    gzFile file = nullptr;
    ~Handle() {
        if (file != nullptr) {
            gzclose(file);
        }
    }
};

LineReader::LineReader(const std::filesystem::path& path)
    : handle_(std::make_unique<Handle>()), path_(path) {
    handle_->file = gzopen(path.string().c_str(), "rb");
    if (handle_->file == nullptr) {
        throw ParseError(fmt::format("cannot open '{}'", path.string()));
    }
    gzbuffer(handle_->file, 1 << 17);
}

LineReader::~LineReader() = default;
LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

bool LineReader::next(std::string& line) {
    line.clear();
    char buf[4096];
    bool got_any = false;
    for (;;) {
        if (gzgets(handle_->file, buf, sizeof(buf)) == nullptr) {
            int errnum = 0;
            const char* msg = gzerror(handle_->file, &errnum);
            if (errnum != Z_OK && errnum != Z_STREAM_END) {
                throw ParseError(fmt::format("{}: read error: {}", path_.string(), msg));
            }
            break;
        }
        got_any = true;
        line.append(buf);
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
            break;
        }
    }
    if (!got_any) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    ++line_number_;
    return true;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::int64_t parse_int64(std::string_view field, std::string_view context) {
    const std::string_view f = trim(field);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
        throw ParseError(fmt::format("{}: expected integer, got '{}'", context, field));
    }
    return value;
}

double parse_double(std::string_view field, std::string_view context) {
    const std::string_view f = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
        throw ParseError(fmt::format("{}: expected number, got '{}'", context, field));
    }
    return value;
}

std::string format_double(double value) {
    if (std::isnan(value)) {
        return {};
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        return "0";
    }
    return fmt::format("{}", value);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot write '{}'", path.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(fmt::format("write failed for '{}'", path.string()));
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string text_checksum(std::string_view text) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size()));
    return fmt::format("{:08x}", static_cast<std::uint32_t>(crc));
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(fmt::format("cannot open '{}'", path.string()));
    }
    uLong crc = crc32(0L, Z_NULL, 0);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const auto got = in.gcount();
        if (got > 0) {
            crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(got));
        }
    }
    return fmt::format("{:08x}", static_cast<std::uint32_t>(crc));
}

}  // namespace mobex

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mobex {

/// Line-oriented reader for plain or gzip-compressed text. Compression is
/// detected from the stream itself, not the file extension.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(LineReader&&) noexcept;
    LineReader& operator=(LineReader&&) noexcept;
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    /// Reads the next line without its terminator. Returns false at end of file.
    bool next(std::string& line);

    /// 1-based number of the line most recently returned.
    std::size_t line_number() const noexcept { return line_number_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    struct Handle;
    std::unique_ptr<Handle> handle_;
    std::filesystem::path path_;
    std::size_t line_number_ = 0;
};

/// Splits an unquoted comma-separated record. Views point into `line`.
std::vector<std::string_view> split_csv(std::string_view line);

std::string_view trim(std::string_view s);

/// Parses a whole field as a signed 64-bit integer; throws ParseError with `context`.
std::int64_t parse_int64(std::string_view field, std::string_view context);
double parse_double(std::string_view field, std::string_view context);

/// Shortest decimal text that round-trips to the same double. NaN prints as an
/// empty field, infinities as `inf` / `-inf`.
std::string format_double(double value);

/// Writes `content` to `path`, creating parent directories as needed.
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

/// CRC-32 of the raw file bytes, as 8 lowercase hex digits.
std::string file_checksum(const std::filesystem::path& path);
std::string text_checksum(std::string_view text);

}  // namespace mobex

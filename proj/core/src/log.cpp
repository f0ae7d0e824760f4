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

#include "mobex/log.h"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <string>

namespace mobex::log {

namespace {

std::atomic<Level> g_level{Level::info};
std::mutex g_mutex;

const char* level_name(Level level) {
    switch (level) {
        case Level::debug: return "debug";
        case Level::info: return "info";
        case Level::warn: return "warn";
        case Level::error: return "error";
        case Level::off: break;
    }
    return "off";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }

Level level() { return g_level.load(); }

void write(Level lvl, std::string_view component, std::string_view message) {
    if (lvl < g_level.load() || lvl == Level::off) {
        return;
    }
    std::string escaped;
    escaped.reserve(message.size());
    for (char ch : message) {
        if (ch == '"' || ch == '\\') {
            escaped.push_back('\\');
        }
        escaped.push_back(ch == '\n' ? ' ' : ch);
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "level=%s component=%.*s msg=\"%s\"\n", level_name(lvl),
                 static_cast<int>(component.size()), component.data(), escaped.c_str());
}

}  // namespace mobex::log

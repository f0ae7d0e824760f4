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

#include "mobex/config.h"
#include "mobex/error.h"
#include "mobex/log.h"
#include "mobex/pipeline.h"
#include "mobex/synth.h"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <map>

namespace {

struct Common {
    std::string config;
    std::string out;
    unsigned threads = 0;
    std::vector<std::string> stages;
};

void add_common(CLI::App* cmd, Common& c, bool with_stage) {
    cmd->add_option("--config", c.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory (overrides the config)");
    cmd->add_option("--threads", c.threads, "Worker threads (overrides the config)")
        ->check(CLI::Range(1u, 1024u));
    if (with_stage) {
        cmd->add_option("--stage", c.stages, "Stage to emit; repeatable (default: config stages)")
            ->check(CLI::IsMember({"ingest", "surface", "exposure", "disparity", "bias"}));
    }
}

int execute(const Common& c, std::vector<mobex::Stage> stages, bool write) {
    const auto config = mobex::load_config(c.config);
    mobex::RunOptions opts;
    if (!c.out.empty()) {
        opts.output_dir = c.out;
    }
    if (c.threads > 0) {
        opts.threads = c.threads;
    }
    for (const auto& s : c.stages) {
        stages.push_back(mobex::parse_stage(s));
    }
    opts.stages = std::move(stages);
    opts.write_outputs = write;
    const auto manifest = mobex::run(config, opts);
    for (const auto& s : manifest.stages) {
        mobex::log::info("cli", fmt::format("stage {} ok; {} note(s)", mobex::to_string(s.stage),
                                            s.notes.size()));
    }
    return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Home and workplace PM2.5 exposure pipeline"};
    app.require_subcommand(1);
    std::string level = "info";
    app.add_option("--log-level", level, "debug, info, warn, error or off")
        ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));

    Common common;
    auto* validate = app.add_subcommand("validate", "Check the config and parse every input");
    add_common(validate, common, false);
    std::map<std::string, std::pair<CLI::App*, mobex::Stage>> stage_cmds;
    for (const auto s : {mobex::Stage::ingest, mobex::Stage::surface, mobex::Stage::exposure,
                         mobex::Stage::disparity, mobex::Stage::bias}) {
        const std::string name(mobex::to_string(s));
        auto* cmd = app.add_subcommand(name, fmt::format("Run through the {} stage and write its outputs", name));
        add_common(cmd, common, false);
        stage_cmds[name] = {cmd, s};
    }
    auto* run = app.add_subcommand("run", "Run all configured stages");
    add_common(run, common, true);

    mobex::SynthSpec spec;
    std::string synth_out;
    std::string gradient = "work-centered hotspot";
    auto* synth = app.add_subcommand("synth", "Write a synthetic world and its config");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", spec.seed, "Random seed");
    synth->add_option("--tracts", spec.n_tracts, "Number of tracts (>= 2)");
    synth->add_option("--groups", spec.n_groups, "Categories per characteristic (>= 1)");
    synth->add_option("--gradient", gradient, "'uniform' or 'work-centered hotspot'");
    synth->add_option("--year", spec.year, "Data year");

    CLI11_PARSE(app, argc, argv);

    const std::map<std::string, mobex::log::Level> levels = {
        {"debug", mobex::log::Level::debug}, {"info", mobex::log::Level::info},
        {"warn", mobex::log::Level::warn},   {"error", mobex::log::Level::error},
        {"off", mobex::log::Level::off}};
    mobex::log::set_level(levels.at(level));

    try {
        if (*validate) {
            return execute(common, {mobex::Stage::ingest, mobex::Stage::surface}, false);
        }
        if (*run) {
            return execute(common, {}, true);
        }
        if (*synth) {
            spec.gradient = mobex::parse_gradient(gradient);
            mobex::write_synth(spec, synth_out);
            return EXIT_SUCCESS;
        }
        for (const auto& [name, cmd] : stage_cmds) {
            if (*cmd.first) {
                return execute(common, {cmd.second}, true);
            }
        }
    } catch (const mobex::StageError& e) {
        mobex::log::error("cli", fmt::format("stage={} {}", e.stage(), e.what()));
        return 2;
    } catch (const mobex::Error& e) {
        mobex::log::error("cli", e.what());
        return 1;
    }
    return EXIT_FAILURE;
}

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

#include "mobex/pipeline.h"

#include "mobex/bias.h"
#include "mobex/disparity.h"
#include "mobex/error.h"
#include "mobex/exposure.h"
#include "mobex/geojson.h"
#include "mobex/log.h"
#include "mobex/numeric.h"
#include "mobex/raster.h"
#include "mobex/report.h"
#include "mobex/text_io.h"
#include "mobex/zonal.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace mobex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct YearData {
    int year = 0;
    WorkerTable rac;
    WorkerTable wac;
    std::optional<ODMatrix> od;
    TractSurface surface;
};

// Records that share one population and one national reference group.
struct Batch {
    int year = 0;
    Stratum stratum = Stratum::all;
    std::string national_label;
    std::vector<ExposureRecord> records;
};

struct State {
    std::vector<YearData> years;
    std::vector<TractGeometry> tracts;
    std::optional<UrbanMask> mask;
    std::vector<Batch> batches;
    std::vector<ExposureRecord> exposures;
    std::vector<ErrorRecord> errors;
};

class Emitter {
public:
    Emitter(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

    void write(StageReport& report, const std::string& name, const std::string& content) {
        report.rows[name] = static_cast<std::size_t>(
            std::count(content.begin(), content.end(), '\n') - 1);
        if (enabled_) {
            write_text_file(dir_ / name, content);
        }
    }

private:
    std::filesystem::path dir_;
    bool enabled_;
};

// Joins per-year CSV texts that share a header line.
std::string join_csv(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i == 0) {
            out += parts[i];
        } else {
            out += parts[i].substr(parts[i].find('\n') + 1);
        }
    }
    return out;
}

std::vector<Stratum> strata_of(const RunConfig& config) {
    if (config.strata) {
        return {Stratum::all, Stratum::urban, Stratum::rural};
    }
    return {Stratum::all};
}

bool in_stratum(const std::string& geoid, Stratum s, const std::optional<UrbanMask>& mask) {
    if (s == Stratum::all) {
        return true;
    }
    const auto it = mask->classification.find(geoid);
    return it != mask->classification.end() && it->second == s;
}

Locus locus_of(const WorkerTable& t) { return t.role == TableRole::residence ? Locus::H : Locus::W; }

void note(StageReport& report, std::string text) {
    log::warn(to_string(report.stage), text);
    report.notes.push_back(std::move(text));
}

// ---------------------------------------------------------------- ingest

void run_ingest(const RunConfig& config, unsigned threads, State& state, StageReport& report,
                Emitter* out) {
    std::vector<std::string> rac_csv;
    std::vector<std::string> wac_csv;
    std::vector<std::string> od_csv;
    for (const int year : config.years) {
        YearData yd;
        yd.year = year;
        for (const auto role : {TableRole::residence, TableRole::workplace}) {
            const auto& list = role == TableRole::residence ? config.rac : config.wac;
            std::vector<BlockTable> parts;
            for (const auto& p : config.resolve_all(list, year)) {
                parts.push_back(read_area_table(p, role, config.area_schemas));
            }
            const auto blocks = concat(std::move(parts));
            auto table = aggregate_to_tracts(blocks, config.area_schemas, year, threads);
            const auto v = validate_table(table, config.area_schemas);
            if (!v.ok()) {
                const auto& first = v.violations.front();
                throw ValidationError(fmt::format("{} {} tract {} ({}): {}", year, to_string(role),
                                                  first.geoid, first.characteristic,
                                                  first.detail));
            }
            const std::string name = role == TableRole::residence ? "rac" : "wac";
            report.rows[fmt::format("{}_blocks_{}", name, year)] = blocks.rows.size();
            report.rows[fmt::format("{}_tracts_{}", name, year)] = table.rows.size();
            (role == TableRole::residence ? rac_csv : wac_csv).push_back(worker_table_to_csv(table));
            (role == TableRole::residence ? yd.rac : yd.wac) = std::move(table);
        }
        if (!config.od.empty()) {
            std::vector<ODBlockTable> parts;
            for (const auto& p : config.resolve_all(config.od, year)) {
                parts.push_back(read_od_table(p, config.od_schemas));
            }
            const auto blocks = concat(std::move(parts));
            yd.od = aggregate_od(blocks, config.od_schemas, year, threads);
            report.rows[fmt::format("od_blocks_{}", year)] = blocks.rows.size();
            report.rows[fmt::format("od_pairs_{}", year)] = yd.od->entries.size();
            od_csv.push_back(od_matrix_to_csv(*yd.od));
        }
        state.years.push_back(std::move(yd));
    }
    if (out != nullptr) {
        out->write(report, "rac_tracts.csv", join_csv(rac_csv));
        out->write(report, "wac_tracts.csv", join_csv(wac_csv));
        if (!od_csv.empty()) {
            out->write(report, "od_tracts.csv", join_csv(od_csv));
        }
    }
}

// ---------------------------------------------------------------- surface

void run_surface(const RunConfig& config, unsigned threads, State& state, StageReport& report,
                 Emitter* out) {
    state.tracts = read_tract_geojson(config.resolve(config.geometry, 0));
    report.rows["tracts"] = state.tracts.size();
    if (config.urban_mask) {
        auto polys = read_polygon_geojson(config.resolve(*config.urban_mask, 0));
        report.rows["urban_polygons"] = polys.size();
        state.mask = build_urban_mask(state.tracts, std::move(polys), threads);
    }
    std::vector<std::string> csv;
    for (auto& yd : state.years) {
        const auto grid = read_grid(config.resolve(config.grid, yd.year));
        yd.surface = build_tract_surface(grid, state.tracts, yd.year, threads);
        report.rows[fmt::format("surface_{}", yd.year)] = yd.surface.entries.size();
        for (const auto& g : yd.surface.excluded) {
            report.excluded_tracts.push_back(fmt::format("{}:{}", yd.year, g));
        }
        if (!yd.surface.excluded.empty()) {
            log::warn("surface", fmt::format("{}: {} tract(s) have no valid grid coverage", yd.year,
                                             yd.surface.excluded.size()));
        }
        csv.push_back(surface_to_csv(yd.surface));
    }
    if (out != nullptr) {
        out->write(report, "surface.csv", join_csv(csv));
        if (state.mask) {
            std::string u = "geoid,stratum\n";
            for (const auto& [g, s] : state.mask->classification) {
                u += fmt::format("{},{}\n", g, to_string(s));
            }
            out->write(report, "urban.csv", u);
        }
    }
}

// ---------------------------------------------------------------- exposure

void run_exposure(const RunConfig& config, State& state, StageReport& report, Emitter* out) {
    const UrbanMask* mask = state.mask ? &*state.mask : nullptr;
    for (const auto& yd : state.years) {
        for (const Stratum s : strata_of(config)) {
            for (const auto* table : {&yd.rac, &yd.wac}) {
                auto g = compute_group_exposures(yd.surface, *table, config.area_schemas, s, mask);
                if (s == Stratum::all) {
                    report.dropped_weight += g.dropped_weight;
                    for (const auto& t : g.dropped_tracts) {
                        report.excluded_tracts.push_back(
                            fmt::format("{}:{}:{}", yd.year, to_string(locus_of(*table)), t));
                    }
                }
                state.exposures.insert(state.exposures.end(), g.records.begin(), g.records.end());
                state.batches.push_back({yd.year, s, "all", std::move(g.records)});
            }
            if (yd.od) {
                HWExposures hw;
                try {
                    hw = compute_hw_exposures(yd.surface, *yd.od, config.od_schemas, s, mask,
                                              config.hw_weights);
                } catch (const EmptyPopulationError& e) {
                    if (s == Stratum::all) {
                        throw;
                    }
                    note(report, fmt::format("{} {}: {}", yd.year, to_string(s), e.what()));
                    continue;
                }
                if (s == Stratum::all) {
                    report.dropped_weight += hw.dropped_weight;
                }
                state.exposures.insert(state.exposures.end(), hw.records.begin(), hw.records.end());
                state.errors.insert(state.errors.end(), hw.errors.begin(), hw.errors.end());
                state.batches.push_back({yd.year, s, std::string(kOdAllGroup), std::move(hw.records)});
            }
        }
    }
    if (out != nullptr) {
        out->write(report, "exposure.csv", exposure_csv(state.exposures));
        if (std::any_of(state.years.begin(), state.years.end(),
                        [](const YearData& y) { return y.od.has_value(); })) {
            out->write(report, "error.csv", error_csv(state.errors));
        }
    }
}

// ---------------------------------------------------------------- disparity

struct DisparityRows {
    std::vector<GapRow> gaps;
    std::vector<BinRow> bins;
    std::vector<ContrastRow> contrasts;
    std::vector<DecileShareRow> shares;
    std::vector<AtkinsonRow> atkinson;
    std::vector<StateDisparityRow> states;
    std::vector<ThresholdRow> thresholds;
    std::vector<ThresholdCovRow> covs;
};

double statistic_of(const ExposureRecord& r, Statistic s) {
    switch (s) {
        case Statistic::mean: return r.mean;
        case Statistic::p10: return r.p10;
        case Statistic::p90: return r.p90;
    }
    return r.mean;
}

// Characteristics in first-appearance order with their records.
std::vector<std::pair<std::string, std::vector<ExposureRecord>>> by_characteristic(
    const std::vector<ExposureRecord>& records, Locus locus, const std::string& national) {
    std::vector<std::pair<std::string, std::vector<ExposureRecord>>> out;
    for (const auto& r : records) {
        if (r.locus != locus || r.group == national) {
            continue;
        }
        const auto c = characteristic_of(r.group);
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == c; });
        if (it == out.end()) {
            out.push_back({c, {}});
            it = std::prev(out.end());
        }
        it->second.push_back(r);
    }
    return out;
}

void batch_metrics(const RunConfig& config, const Batch& batch, DisparityRows& rows,
                   StageReport& report) {
    for (const Locus locus : {Locus::H, Locus::W, Locus::HW}) {
        const auto nat = std::find_if(batch.records.begin(), batch.records.end(), [&](const auto& r) {
            return r.locus == locus && r.group == batch.national_label;
        });
        if (nat == batch.records.end()) {
            continue;
        }
        for (const auto& [characteristic, recs] : by_characteristic(batch.records, locus,
                                                                     batch.national_label)) {
            std::vector<GroupValue> values(recs.size());
            try {
                for (const Statistic st : {Statistic::mean, Statistic::p10, Statistic::p90}) {
                    for (std::size_t i = 0; i < recs.size(); ++i) {
                        values[i] = {recs[i].group, statistic_of(recs[i], st)};
                    }
                    rows.gaps.push_back({batch.year, locus, batch.stratum, st,
                                         extreme_group_gap(characteristic, values,
                                                           statistic_of(*nat, st))});
                }
            } catch (const InsufficientGroupsError& e) {
                note(report, fmt::format("{} {} {}: {}", batch.year, to_string(locus),
                                         to_string(batch.stratum), e.what()));
                continue;
            } catch (const DomainError& e) {
                note(report, fmt::format("{} {} {} {}: {}", batch.year, to_string(locus),
                                         to_string(batch.stratum), characteristic, e.what()));
            }
            for (const double eps : config.epsilons) {
                try {
                    rows.atkinson.push_back({batch.year, characteristic, locus, batch.stratum, eps,
                                             atkinson_of_concentrations(recs, eps)});
                } catch (const DomainError& e) {
                    note(report, fmt::format("{} {} {} {}: {}", batch.year, to_string(locus),
                                             to_string(batch.stratum), characteristic, e.what()));
                    break;
                }
            }
        }
    }
}

struct TractRow {
    const std::string* geoid;
    double pm;
    const TractCounts* counts;
};

std::vector<TractRow> tract_rows(const YearData& yd, const WorkerTable& table, Stratum s,
                                 const std::optional<UrbanMask>& mask) {
    std::vector<TractRow> out;
    for (const auto& [geoid, tc] : table.rows) {
        if (!in_stratum(geoid, s, mask)) {
            continue;
        }
        if (const auto v = yd.surface.find(geoid)) {
            out.push_back({&geoid, *v, &tc});
        }
    }
    return out;
}

void table_metrics(const RunConfig& config, const YearData& yd, const WorkerTable& table,
                   Stratum s, const std::optional<UrbanMask>& mask, DisparityRows& rows,
                   StageReport& report) {
    const Locus locus = locus_of(table);
    const auto tracts = tract_rows(yd, table, s, mask);
    const auto groups = table_groups(table.columns, config.area_schemas);
    const auto where = fmt::format("{} {} {}", yd.year, to_string(locus), to_string(s));

    // Exceedance shares, with the CoV per characteristic.
    std::vector<double> values;
    std::vector<double> weights;
    for (const double t : config.thresholds) {
        std::vector<std::pair<std::string, std::vector<double>>> qs;
        for (const auto& g : groups) {
            values.clear();
            weights.clear();
            for (const auto& tr : tracts) {
                values.push_back(tr.pm);
                weights.push_back(static_cast<double>(g.column ? tr.counts->counts[*g.column]
                                                               : tr.counts->total));
            }
            if (!(pairwise_sum(weights) > 0.0)) {
                continue;
            }
            const double q = threshold_share(values, weights, t);
            rows.thresholds.push_back({yd.year, g.label, locus, s, t, q});
            if (g.column) {
                const auto c = characteristic_of(g.label);
                if (qs.empty() || qs.back().first != c) {
                    qs.push_back({c, {}});
                }
                qs.back().second.push_back(q);
            }
        }
        for (const auto& [c, q] : qs) {
            if (q.size() < 2) {
                continue;
            }
            double cov = kNaN;
            try {
                cov = cov_of_shares(q);
            } catch (const DomainError&) {
                log::info("disparity", fmt::format("{} {} T={}: every group share is zero", where,
                                                   c, t));
            }
            rows.covs.push_back({yd.year, c, locus, s, t, cov});
        }
    }

    // Fraction-ranked bins and concentration-ranked shares per category.
    std::set<std::size_t> short_bins;
    bool short_deciles = false;
    for (const auto& g : groups) {
        if (!g.column) {
            continue;
        }
        std::vector<BinTract> bt;
        std::vector<ShareTract> st;
        for (const auto& tr : tracts) {
            if (tr.counts->total <= 0) {
                continue;
            }
            const double count = static_cast<double>(tr.counts->counts[*g.column]);
            const double total = static_cast<double>(tr.counts->total);
            bt.push_back({*tr.geoid, count / total, count, tr.pm});
            st.push_back({*tr.geoid, tr.pm, count, total});
        }
        for (const std::size_t n : config.bins) {
            PercentileBinCurve curve;
            try {
                curve = percentile_bin_curve(bt, n);
            } catch (const InsufficientTractsError&) {
                short_bins.insert(n);
                continue;
            }
            for (const auto& b : curve.bins) {
                rows.bins.push_back({yd.year, g.label, locus, s, n, b});
            }
            if (n == 10) {
                try {
                    rows.contrasts.push_back(
                        {yd.year, g.label, locus, s, "pm25_by_fraction", decile_contrast(curve)});
                } catch (const ContractError& e) {
                    log::info("disparity", fmt::format("{} {}: {}", where, g.label, e.what()));
                }
            }
        }
        try {
            const auto shares = population_share_by_concentration_decile(st);
            for (std::size_t d = 0; d < shares.mean_fraction.size(); ++d) {
                rows.shares.push_back({yd.year, g.label, locus, s, d + 1, shares.mean_fraction[d]});
            }
            rows.contrasts.push_back(
                {yd.year, g.label, locus, s, "fraction_by_pm25", shares.difference});
        } catch (const InsufficientTractsError&) {
            short_deciles = true;
        }
    }
    for (const auto n : short_bins) {
        note(report, fmt::format("{}: fewer tracts than {} bins; curve skipped", where, n));
    }
    if (short_deciles) {
        note(report, fmt::format("{}: fewer than 10 tracts; concentration deciles skipped", where));
    }
}

void state_metrics(const RunConfig& config, const YearData& yd, const WorkerTable& table,
                   DisparityRows& rows) {
    const Locus locus = locus_of(table);
    const auto national = compute_group_exposures(yd.surface, table, config.area_schemas,
                                                  Stratum::all);
    if (national.records.empty() || national.records.front().group != "all") {
        return;
    }
    const double nat = national.records.front().mean;
    std::map<std::string, WorkerTable> by_state;
    for (const auto& [geoid, tc] : table.rows) {
        auto [it, inserted] = by_state.try_emplace(geoid.substr(0, 2));
        if (inserted) {
            it->second.role = table.role;
            it->second.year = table.year;
            it->second.columns = table.columns;
        }
        it->second.rows.emplace(geoid, tc);
    }
    for (const auto& [state, sub] : by_state) {
        const auto g = compute_group_exposures(yd.surface, sub, config.area_schemas, Stratum::all);
        if (g.records.empty() || g.records.front().group != "all") {
            continue;
        }
        const double state_mean = g.records.front().mean;
        for (const auto& r : g.records) {
            if (r.group != "all") {
                rows.states.push_back(
                    {yd.year, state, r.group, locus, state_disparity(r.mean, state_mean, nat)});
            }
        }
    }
}

void run_disparity(const RunConfig& config, State& state, StageReport& report, Emitter* out) {
    DisparityRows rows;
    for (const auto& b : state.batches) {
        batch_metrics(config, b, rows, report);
    }
    for (const auto& yd : state.years) {
        for (const auto* table : {&yd.rac, &yd.wac}) {
            for (const Stratum s : strata_of(config)) {
                table_metrics(config, yd, *table, s, state.mask, rows, report);
            }
            state_metrics(config, yd, *table, rows);
        }
    }
    if (out != nullptr) {
        out->write(report, "gaps.csv", gaps_csv(rows.gaps));
        out->write(report, "bins.csv", bins_csv(rows.bins));
        out->write(report, "contrast.csv", contrast_csv(rows.contrasts));
        out->write(report, "decile_shares.csv", decile_shares_csv(rows.shares));
        out->write(report, "atkinson.csv", atkinson_csv(rows.atkinson));
        out->write(report, "state_disparity.csv", state_disparity_csv(rows.states));
        out->write(report, "threshold.csv", threshold_csv(rows.thresholds));
        out->write(report, "threshold_cov.csv", threshold_cov_csv(rows.covs));
    }
}

// ---------------------------------------------------------------- bias

void run_bias(const RunConfig& config, State& state, StageReport& report, Emitter* out) {
    std::vector<BiasRow> bias_rows;
    std::vector<WilcoxonRow> wilcoxon_rows;
    const UrbanMask* mask = state.mask ? &*state.mask : nullptr;
    std::vector<double> h;
    std::vector<double> hw;
    std::vector<double> w;
    for (const auto& yd : state.years) {
        if (!yd.od) {
            continue;
        }
        for (const Stratum s : strata_of(config)) {
            for (const auto& g : table_groups(yd.od->columns, config.od_schemas,
                                              std::string(kOdAllGroup))) {
                const auto pairs =
                    od_pair_exposures(yd.surface, *yd.od, g, s, mask, config.hw_weights);
                if (pairs.empty()) {
                    continue;
                }
                const auto where = fmt::format("{} {} {}", yd.year, to_string(s), g.label);
                try {
                    const auto m = error_moments(pairs);
                    bias_rows.push_back({yd.year, g.label, s, m, bias_factor(m)});
                } catch (const DegenerateVarianceError& e) {
                    note(report, fmt::format("{}: {}", where, e.what()));
                } catch (const DomainError& e) {
                    note(report, fmt::format("{}: {}", where, e.what()));
                }
                h.clear();
                hw.clear();
                w.clear();
                for (const auto& p : pairs) {
                    h.push_back(p.h);
                    hw.push_back(p.hw);
                    w.push_back(p.weight);
                }
                wilcoxon_rows.push_back({yd.year, g.label, s, wilcoxon_rank_sum(h, w, hw, w)});
            }
        }
    }
    if (out != nullptr) {
        out->write(report, "bias.csv", bias_csv(bias_rows));
        out->write(report, "wilcoxon.csv", wilcoxon_csv(wilcoxon_rows));
    }
}

template <typename F>
void timed_stage(Stage stage, RunManifest& manifest, F&& body) {
    StageReport report;
    report.stage = stage;
    const auto start = std::chrono::steady_clock::now();
    log::info("pipeline", fmt::format("stage {} started", to_string(stage)));
    try {
        body(report);
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(std::string(to_string(stage)), e.what());
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log::info("pipeline", fmt::format("stage {} finished in {:.3f}s", to_string(stage),
                                      report.seconds));
    manifest.stages.push_back(std::move(report));
}

}  // namespace

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash;
    auto& in = j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& [path, sum] : inputs) {
        in.push_back({{"path", path}, {"crc32", sum}});
    }
    auto& st = j["stages"] = nlohmann::ordered_json::array();
    for (const auto& s : stages) {
        nlohmann::ordered_json e;
        e["name"] = to_string(s.stage);
        e["rows"] = s.rows;
        e["dropped_weight"] = s.dropped_weight;
        e["excluded_tracts"] = s.excluded_tracts;
        e["notes"] = s.notes;
        e["seconds"] = s.seconds;
        st.push_back(std::move(e));
    }
    j["dropped_weight_total"] = dropped_weight_total;
    return j.dump(2) + "\n";
}

RunManifest run(const RunConfig& config, const RunOptions& options) {
    const auto selected = options.stages.empty() ? config.stages : options.stages;
    if (selected.empty()) {
        throw ConfigError("no stages selected");
    }
    const auto emits = [&](Stage s) {
        return std::find(selected.begin(), selected.end(), s) != selected.end();
    };
    if (emits(Stage::bias) && config.od.empty()) {
        throw ConfigError("the bias stage needs an 'od' input");
    }
    const Stage last = *std::max_element(selected.begin(), selected.end());
    const unsigned threads = options.threads.value_or(config.threads);
    const auto out_dir = options.output_dir.value_or(config.output_dir);

    try {
        check_inputs_exist(config);
    } catch (const ConfigError& e) {
        throw StageError("validate", e.what());
    }

    RunManifest manifest;
    manifest.config_hash = text_checksum(config.canonical);
    for (const auto& p : input_paths(config)) {
        manifest.inputs.push_back(
            {p.lexically_relative(config.base_dir).generic_string(), file_checksum(p)});
    }

    Emitter emitter(out_dir, options.write_outputs);
    const auto sink = [&](Stage s) { return emits(s) ? &emitter : nullptr; };
    State state;

    // Ingest feeds exposure; surface needs only geometry and grids.
    if (emits(Stage::ingest) || last >= Stage::exposure) {
        timed_stage(Stage::ingest, manifest, [&](StageReport& r) {
            run_ingest(config, threads, state, r, sink(Stage::ingest));
        });
    } else {
        for (const int year : config.years) {
            state.years.push_back({});
            state.years.back().year = year;
        }
    }
    if (last >= Stage::surface) {
        timed_stage(Stage::surface, manifest, [&](StageReport& r) {
            run_surface(config, threads, state, r, sink(Stage::surface));
        });
    }
    if (last >= Stage::exposure) {
        timed_stage(Stage::exposure, manifest, [&](StageReport& r) {
            run_exposure(config, state, r, sink(Stage::exposure));
        });
    }
    if (emits(Stage::disparity)) {
        timed_stage(Stage::disparity, manifest, [&](StageReport& r) {
            run_disparity(config, state, r, &emitter);
        });
    }
    if (emits(Stage::bias)) {
        timed_stage(Stage::bias, manifest, [&](StageReport& r) { run_bias(config, state, r, &emitter); });
    }

    for (const auto& s : manifest.stages) {
        manifest.dropped_weight_total += s.dropped_weight;
    }
    if (options.write_outputs) {
        write_text_file(out_dir / "manifest.json", manifest.to_json());
    }
    return manifest;
}

}  // namespace mobex

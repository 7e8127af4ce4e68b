// Copyright 2026 The ufcsr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ufcsr/analyze.hpp"
#include "ufcsr/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStage = 2;
constexpr int kExitStrictColor = 3;

void print_census(const ufcsr::PidtProducts& products) {
    std::printf("%-28s %12s   %s\n", "Part", "Texels", "Color");
    for (std::size_t i = 0; i < products.mesh.parts.size(); ++i) {
        std::printf("%-28s %12llu   #%06X\n", products.mesh.parts[i].c_str(),
                    static_cast<unsigned long long>(products.texel_census.per_part[i]),
                    products.table.colors[i].value);
    }
    std::printf("%-28s %12llu\n", "total owned",
                static_cast<unsigned long long>(products.texel_census.total_owned));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unwrapped full-color-space recording toolkit"};
    app.require_subcommand(1);

    // gen-palette
    auto* gen = app.add_subcommand("gen-palette", "write the full color space palette");
    std::string gen_out;
    gen->add_option("--out", gen_out, "output PNG path")->required();

    // bake-pidt
    auto* bake = app.add_subcommand(
        "bake-pidt", "bake the part identification texture and census");
    std::string bake_mesh, bake_parts, bake_out;
    bake->add_option("--mesh", bake_mesh, "OBJ mesh with unwrapped UVs")->required();
    bake->add_option("--parts", bake_parts, "part naming map")->required();
    bake->add_option("--out", bake_out, "output directory")->required();

    // render
    auto* render = app.add_subcommand("render", "render a scenario into tile captures");
    std::string render_scenario, render_out;
    int render_scale = 1, render_workers = 1;
    bool render_dump = false;
    render->add_option("--scenario", render_scenario, "scenario config")->required();
    render->add_option("--out", render_out, "capture output directory")->required();
    render->add_option("--scale", render_scale, "resolution divisor (desk-scale runs)");
    render->add_option("--workers", render_workers, "parallel frame jobs");
    render->add_flag("--dump-frames", render_dump, "also write full frames");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "count captures and write stats");
    std::string an_captures, an_pidt, an_out;
    int an_workers = 1;
    bool an_no_trim = false, an_strict = false;
    analyze->add_option("--captures", an_captures, "capture directory")->required();
    analyze->add_option("--pidt", an_pidt, "part identification directory")->required();
    analyze->add_option("--out", an_out, "analysis output directory")->required();
    analyze->add_option("--workers", an_workers, "parallel tile jobs");
    analyze->add_flag("--no-trim", an_no_trim, "process empty tiles too");
    analyze->add_flag("--strict", an_strict, "fail on colors outside the owned set");

    // heatmap
    auto* heat = app.add_subcommand("heatmap", "render a heatmap from saved counts");
    std::string heat_counts, heat_out;
    heat->add_option("--counts", heat_counts, "counts file from analyze")->required();
    heat->add_option("--out", heat_out, "output PNG path")->required();

    // oracle-check
    auto* ocheck = app.add_subcommand(
        "oracle-check", "compare the raster pipeline against the ray-cast reference");
    std::string oc_scenario, oc_out;
    int oc_scale = 1, oc_workers = 1;
    ocheck->add_option("--scenario", oc_scenario, "scenario config")->required();
    ocheck->add_option("--scale", oc_scale, "resolution divisor");
    ocheck->add_option("--workers", oc_workers, "parallel frame jobs");
    ocheck->add_option("--out", oc_out, "disagreement raster PNG path");

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline: bake, render, analyze");
    ufcsr::RunConfig config;
    run_cmd->add_option("--scenario", config.scenario_path, "scenario config")
        ->required();
    run_cmd->add_option("--out", config.out_root, "output root")->required();
    run_cmd->add_option("--scale", config.scale_divisor, "resolution divisor");
    run_cmd->add_option("--workers", config.workers, "parallel jobs");
    run_cmd->add_flag("--no-trim", config.no_trim, "process empty tiles too");
    run_cmd->add_flag("--strict", config.strict_colors,
                      "fail on colors outside the owned set");
    run_cmd->add_flag("--dump-frames", config.dump_frames, "also write full frames");
    run_cmd->add_flag("--force", config.force, "ignore cached stages");

    // report
    auto* report_cmd = app.add_subcommand("report", "print the top-5 parts table");
    std::string report_stats;
    report_cmd->add_option("--stats", report_stats, "stats document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string stage = "pipeline";
    try {
        if (*gen) {
            stage = "gen-palette";
            ufcsr::generate_palette_file(gen_out);
            std::cout << "wrote " << gen_out << '\n';
        } else if (*bake) {
            stage = "bake-pidt";
            const auto products = ufcsr::bake_pidt(bake_mesh, bake_parts);
            ufcsr::write_pidt_files(products, bake_out);
            print_census(products);
            const auto layout = ufcsr::validate_uv_layout(products.mesh);
            if (layout.min_margin.has_value())
                std::cout << "minimum inter-face margin: " << *layout.min_margin
                          << " texel(s)\n";
            for (const auto& warning : layout.warnings)
                std::cout << "warning: " << warning << '\n';
            std::cout << "wrote " << bake_out << "/pidt.png and parts.json\n";
        } else if (*render) {
            stage = "render";
            const auto scenario = ufcsr::load_scenario(render_scenario);
            const auto products =
                ufcsr::bake_pidt(scenario.mesh_path, scenario.parts_path);
            const auto owned = ufcsr::owned_colors(products.ownership);
            const auto ignore = ufcsr::palette::select_ignore_color(owned);
            ufcsr::CaptureOptions opts;
            opts.scale_divisor = render_scale;
            opts.workers = render_workers;
            opts.dump_frames = render_dump;
            const auto manifest =
                ufcsr::render_and_capture(scenario, products.mesh, owned,
                                          ignore.value, render_out, opts);
            std::cout << "captured " << manifest.records.size() << " tiles for "
                      << manifest.frames << " frames per eye\n";
        } else if (*analyze) {
            stage = "analyze";
            ufcsr::AnalysisOptions opts;
            opts.no_trim = an_no_trim;
            opts.strict_colors = an_strict;
            opts.workers = an_workers;
            const auto products =
                ufcsr::analyze_captures(an_captures, an_pidt, an_out, opts);
            std::cout << ufcsr::report_top5(products.report);
        } else if (*heat) {
            stage = "heatmap";
            const auto counts = ufcsr::load_counts(heat_counts);
            const auto heatmap = ufcsr::emit_heatmap(counts);
            ufcsr::png::write_file(heat_out, heatmap.image);
            std::cout << "wrote " << heat_out << " (max count "
                      << heatmap.max_count << ")\n";
        } else if (*ocheck) {
            stage = "oracle-check";
            const auto scenario = ufcsr::load_scenario(oc_scenario);
            const auto result = ufcsr::oracle_check(scenario, oc_scale, oc_workers);
            std::printf("owned texels:    %llu\n",
                        static_cast<unsigned long long>(result.owned_texels));
            std::printf("agreeing texels: %llu\n",
                        static_cast<unsigned long long>(result.agreeing_texels));
            std::printf("agreement rate:  %.6f\n", result.agreement_rate);
            if (!oc_out.empty()) {
                ufcsr::png::write_file(oc_out, ufcsr::disagreement_raster(result));
                std::cout << "wrote " << oc_out << '\n';
            }
        } else if (*run_cmd) {
            stage = "run";
            const auto summary = ufcsr::run(config);
            std::cout << ufcsr::format_summary(summary);
        } else if (*report_cmd) {
            stage = "report";
            const auto report = ufcsr::read_stats(report_stats);
            std::cout << ufcsr::report_top5(report);
        }
    } catch (const ufcsr::Error& e) {
        std::cerr << "[" << stage << "] error: " << e.what() << '\n';
        return e.kind() == ufcsr::ErrorKind::strict_color ? kExitStrictColor
                                                          : kExitStage;
    } catch (const std::exception& e) {
        std::cerr << "[" << stage << "] error: " << e.what() << '\n';
        return kExitStage;
    }
    return kExitOk;
}

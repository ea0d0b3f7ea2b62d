// SPDX-License-Identifier: Apache-2.0
//
// movant: movable-antenna array simulation and optimization
// Copyright (C) 2026 The movant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line driver: validate / run / summarize / pattern / phasecenter.

#include <movant/movant.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace
{
    struct globals
    {
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
        std::string out;
    };

    movant::experiment_config configured(const std::string &path, const globals &g)
    {
        auto c = movant::load_config(path);
        if (g.seed)
            c.seeds = {*g.seed};
        if (g.threads)
        {
            if (*g.threads < 1)
                throw movant::config_error("--threads must be >= 1");
            c.threads = *g.threads;
        }
        if (!g.out.empty())
            c.output_dir = g.out;
        return c;
    }

    std::ostream &sink(const std::string &out, std::ofstream &file)
    {
        if (out.empty())
            return std::cout;
        std::filesystem::path p(out);
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        file.open(p, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot write " + out);
        return file;
    }

    int cmd_validate(const std::string &path, const globals &g)
    {
        const auto c = configured(path, g);
        std::cout << path << ": ok (" << movant::to_string(c.kind) << ", " << c.schemes.size() << " schemes, "
                  << c.seeds.size() << " seeds, " << c.snr_db.size() << " snr points, hash " << movant::config_hash(c)
                  << ")\n";
        return 0;
    }

    int cmd_run(const std::string &path, const globals &g)
    {
        const auto c = configured(path, g);
        const auto rep = movant::run_experiment(c);
        std::cout << "wrote " << rep.files.size() << " files to " << c.output_dir << "\n";
        if (!rep.complete)
        {
            std::cerr << "movant: run incomplete: " << rep.message << "\n";
            return 3;
        }
        return 0;
    }

    int cmd_summarize(const std::string &csv, const globals &g)
    {
        std::ifstream in(csv, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + csv);
        const auto rows = movant::read_results_csv(in);
        std::ofstream f;
        movant::write_summary_csv(sink(g.out, f), movant::summarize(rows));
        return 0;
    }

    int cmd_pattern(const std::string &kind, double theta_fixed, double step, const std::string &table, const globals &g)
    {
        movant::pattern_model p;
        if (kind == "omni")
            p = movant::pattern::omni{};
        else if (kind == "dir38901")
            p = movant::pattern::dir38901{};
        else if (kind == "tabulated")
        {
            if (table.empty())
                throw movant::config_error("pattern: --table is required for tabulated patterns");
            p = movant::read_pattern_csv(table);
        }
        else
            throw movant::config_error("pattern: unknown pattern '" + kind + "'");
        if (!(step > 0.0))
            throw movant::config_error("pattern: --step must be positive");
        std::ofstream f;
        std::ostream &os = sink(g.out, f);
        // horizontal cut at theta = theta_fixed, then vertical cut at phi = 0
        os << "cut,theta_deg,phi_deg,gain_dbi\n";
        for (double phi = -180.0 + step; phi <= 180.0 + 1e-9; phi += step)
            os << "azimuth," << movant::format_real(theta_fixed) << "," << movant::format_real(phi) << ","
               << movant::format_real(p.gain_dbi(theta_fixed, std::min(phi, 180.0))) << "\n";
        for (double th = 0.0; th <= 180.0 + 1e-9; th += step)
            os << "elevation," << movant::format_real(std::min(th, 180.0)) << ",0,"
               << movant::format_real(p.gain_dbi(std::min(th, 180.0), 0.0)) << "\n";
        return 0;
    }

    int cmd_phasecenter(const std::optional<std::string> &config, const std::vector<double> &dpc, const globals &g)
    {
        movant::experiment_config c;
        if (config)
            c = configured(*config, g);
        else
        {
            c = movant::parse_config(R"({"experiment":"phase_center_study"})", "<builtin>");
            c.output_dir = g.out.empty() ? "results/phase_center" : g.out;
        }
        c.kind = movant::experiment_kind::phase_center_study;
        if (!dpc.empty())
            c.phase_center.setups_dpc_wl = dpc;
        const auto rep = movant::run_experiment(c);
        std::ifstream rep_in(std::filesystem::path(c.output_dir) / "phase_center_report.csv");
        std::cout << rep_in.rdbuf();
        return rep.complete ? 0 : 3;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"movant: movable-antenna array experiments", "movant"};
    app.set_version_flag("--version", MOVANT_VERSION);
    app.require_subcommand(1);

    globals g;
    std::uint64_t seed = 0;
    int threads = 1;
    auto *seed_opt = app.add_option("--seed", seed, "Run a single seed instead of the config's list");
    auto *threads_opt = app.add_option("--threads", threads, "Worker threads for experiment cells");
    app.add_option("--out", g.out, "Output directory (run) or file (summarize, pattern)");

    std::string config;
    auto *validate = app.add_subcommand("validate", "Parse and validate an experiment config");
    validate->add_option("config", config, "Config file (JSON)")->required();

    auto *run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config, "Config file (JSON)")->required();

    std::string csv;
    auto *summarize = app.add_subcommand("summarize", "Per-scheme means, standard errors and ratios to FPA");
    summarize->add_option("results", csv, "results.csv from a sweep")->required();

    std::string kind = "dir38901", table;
    double theta = 90.0, step = 1.0;
    auto *pattern = app.add_subcommand("pattern", "Dump azimuth and elevation cuts of an element pattern");
    pattern->add_option("kind", kind, "omni | dir38901 | tabulated")->capture_default_str();
    pattern->add_option("--table", table, "Pattern CSV (theta_deg,phi_deg,gain_dbi) for tabulated");
    pattern->add_option("--theta", theta, "Zenith angle of the azimuth cut, degrees")->capture_default_str();
    pattern->add_option("--step", step, "Angular step, degrees")->capture_default_str();

    std::string pc_config;
    std::vector<double> dpc;
    auto *pc = app.add_subcommand("phasecenter", "Dual-mode phase-center equivalence study");
    pc->add_option("--config", pc_config, "Optional config (phase_center section is used)");
    pc->add_option("--dpc", dpc, "Target phase-center spacings in wavelengths");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }
    if (*seed_opt)
        g.seed = seed;
    if (*threads_opt)
        g.threads = threads;

    try
    {
        if (*validate)
            return cmd_validate(config, g);
        if (*run)
            return cmd_run(config, g);
        if (*summarize)
            return cmd_summarize(csv, g);
        if (*pattern)
            return cmd_pattern(kind, theta, step, table, g);
        if (*pc)
            return cmd_phasecenter(pc_config.empty() ? std::nullopt : std::optional<std::string>(pc_config), dpc, g);
    }
    catch (const movant::config_error &e)
    {
        std::cerr << "movant: invalid config: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "movant: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

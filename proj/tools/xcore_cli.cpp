// The xcore command line: generate catalog instances, solve and check
// documents, and score competition run records. stdout is machine-parsable;
// diagnostics and error objects go to stderr.
#include <xcore/checker.hpp>
#include <xcore/generators.hpp>
#include <xcore/json_io.hpp>
#include <xcore/scoring.hpp>
#include <xcore/search.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace
{
    using nlohmann::json;

    constexpr int exit_ok = 0;
    constexpr int exit_check_failed = 1;
    constexpr int exit_usage = 2;
    constexpr int exit_internal = 3;
    constexpr int exit_unknown = 10;

    auto color_enabled() -> bool
    {
        const char * v = std::getenv("XCORE_COLOR");
        return v != nullptr && *v != '\0' && std::string(v) != "0";
    }

    auto diag(const std::string & msg) -> void
    {
        if (color_enabled())
            std::cerr << "\033[36mxcore:\033[0m " << msg << "\n";
        else
            std::cerr << "xcore: " << msg << "\n";
    }

    // Fatal errors leave one machine-readable object on stderr.
    auto emit_error(const std::string & code, const std::string & message) -> void
    {
        json err = {{"error", {{"code", code}, {"message", message}}}};
        std::cerr << err.dump() << "\n";
    }

    auto read_file(const std::string & path) -> std::string
    {
        if (path == "-")
        {
            std::ostringstream buf;
            buf << std::cin.rdbuf();
            return buf.str();
        }
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw xcore::BuildError("cannot read " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    auto write_file(const std::string & path, const std::string & text) -> void
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw xcore::BuildError("cannot write " + path);
        out << text;
    }

    auto emit(const std::string & out_path, const std::string & text) -> void
    {
        if (out_path.empty() || out_path == "-")
            std::cout << text;
        else
            write_file(out_path, text);
    }

    struct GenerateArgs
    {
        std::string problem;
        std::string params;
        std::string out_path;
        bool list = false;
        bool show_manifest = false;
        bool desk_only = false;
    };

    auto run_generate(const GenerateArgs & args) -> int
    {
        if (args.list)
        {
            for (const auto & id : xcore::problem_catalog())
                std::cout << id << "\n";
            return exit_ok;
        }
        if (args.show_manifest)
        {
            for (const auto & entry : xcore::manifest())
            {
                if (args.desk_only && !entry.desk_scale)
                    continue;
                json line = {{"problem", entry.problem}, {"params", json::parse(entry.params)},
                    {"series", entry.series}, {"desk_scale", entry.desk_scale}};
                std::cout << line.dump() << "\n";
            }
            return exit_ok;
        }
        if (args.problem.empty())
            throw CLI::RequiredError("problem");
        auto inst = xcore::build_problem(args.problem,
            args.params.empty() ? "{}" : args.params);
        emit(args.out_path, xcore::write_instance(inst));
        return exit_ok;
    }

    struct SolveArgs
    {
        std::string instance_path;
        double cpu_limit = 2400.0;
        double wall_limit = 7200.0;
        bool cpu_set = false;
        bool wall_set = false;
        std::string preset;
        std::string optimize_log;
        std::string heuristic = "dom-min";
        unsigned long long seed = 0;
        bool luby = false;
        std::string out_path;
    };

    auto status_line(const xcore::SolveResult & result) -> std::string
    {
        switch (result.status)
        {
            case xcore::Status::Sat:
                return "SATISFIABLE";
            case xcore::Status::Unsat:
                return "UNSATISFIABLE";
            case xcore::Status::Optimum:
                return "OPTIMUM FOUND";
            case xcore::Status::Best:
                return "SATISFIABLE (bound=" + std::to_string(*result.bound) + ")";
            case xcore::Status::Unknown:
                return "UNKNOWN";
        }
        return "UNKNOWN";
    }

    auto run_solve(const SolveArgs & args) -> int
    {
        auto parsed = xcore::parse_instance(read_file(args.instance_path));
        for (const auto & w : parsed.warnings)
            diag(w);

        xcore::Limits limits;
        if (args.preset == "fast-cop")
        {
            limits.cpu_seconds = 240.0;
            limits.wall_seconds = 720.0;
        }
        if (args.cpu_set)
            limits.cpu_seconds = args.cpu_limit;
        if (args.wall_set)
            limits.wall_seconds = args.wall_limit;

        xcore::SearchOptions opts;
        opts.seed = args.seed;
        opts.luby_restarts = args.luby;
        if (args.heuristic == "dom-min")
            opts.heuristic = xcore::Heuristic::DomMin;
        else if (args.heuristic == "dom-wdeg")
            opts.heuristic = xcore::Heuristic::DomWdeg;
        else if (args.heuristic == "rand")
            opts.heuristic = xcore::Heuristic::Rand;
        else
            throw CLI::ValidationError("--heuristic",
                "expected dom-min, dom-wdeg or rand");

        auto result = xcore::solve(parsed.instance, opts, limits);

        std::ostringstream out;
        out << status_line(result) << "\n";
        if (result.assignment)
            out << xcore::write_solution(parsed.instance, *result.assignment, result.bound);
        emit(args.out_path, out.str());

        if (!args.optimize_log.empty())
        {
            std::ostringstream log;
            for (const auto & event : result.bound_log)
            {
                json line = {{"nodes", event.nodes}, {"wall_seconds", event.wall_seconds},
                    {"bound", event.bound}};
                log << line.dump() << "\n";
            }
            write_file(args.optimize_log, log.str());
        }

        diag("nodes=" + std::to_string(result.stats.nodes)
            + " failures=" + std::to_string(result.stats.failures)
            + " restarts=" + std::to_string(result.stats.restarts));
        return result.status == xcore::Status::Unknown ? exit_unknown : exit_ok;
    }

    struct CheckArgs
    {
        std::string instance_path;
        std::string solution_path;
    };

    auto run_check(const CheckArgs & args) -> int
    {
        auto parsed = xcore::parse_instance(read_file(args.instance_path));
        for (const auto & w : parsed.warnings)
            diag(w);
        auto doc = xcore::parse_solution(read_file(args.solution_path));
        if (!doc.instance.empty() && doc.instance != parsed.instance.name)
            throw xcore::BuildError("solution is for instance \"" + doc.instance
                + "\", not \"" + parsed.instance.name + "\"");
        auto assignment = xcore::solution_assignment(parsed.instance, doc);
        auto verdict = xcore::check_instance(parsed.instance, assignment);

        json report = {{"ok", verdict.ok}, {"violated", verdict.violated},
            {"out_of_domain", verdict.out_of_domain}};
        if (verdict.objective)
            report["objective"] = *verdict.objective;
        if (doc.objective && verdict.objective && *doc.objective != *verdict.objective)
        {
            report["ok"] = false;
            report["objective_claimed"] = *doc.objective;
        }
        std::cout << report.dump(2) << "\n";
        return report["ok"].get<bool>() ? exit_ok : exit_check_failed;
    }

    struct ScoreArgs
    {
        std::string runs_path;
        std::string track;
        std::string flags_path;
        std::string format = "csv";
    };

    auto parse_flags_file(const std::string & text)
        -> std::map<std::string, xcore::SolverFlags>
    {
        auto doc = json::parse(text);
        if (!doc.is_object())
            throw xcore::BuildError("flags file: expected an object keyed by solver");
        std::map<std::string, xcore::SolverFlags> out;
        for (const auto & [solver, body] : doc.items())
        {
            xcore::SolverFlags f;
            if (body.contains("off_competition"))
                f.off_competition = body.at("off_competition").get<bool>();
            if (body.contains("main_rank"))
                f.main_rank = body.at("main_rank").get<int>();
            if (body.contains("team"))
                f.team = body.at("team").get<std::string>();
            if (body.contains("variant_group"))
                f.variant_group = body.at("variant_group").get<std::string>();
            out[solver] = f;
        }
        return out;
    }

    auto run_score(const ScoreArgs & args) -> int
    {
        auto runs = xcore::parse_runs_jsonl(read_file(args.runs_path));
        if (!args.track.empty())
        {
            std::vector<xcore::RunRecord> kept;
            for (auto & r : runs)
                if (r.track == args.track)
                    kept.push_back(std::move(r));
            runs = std::move(kept);
        }
        auto table = xcore::score_track(runs);
        for (const auto & flag : table.flags)
            diag(flag);

        std::vector<xcore::RankedEntry> ranking;
        bool ranked = !args.flags_path.empty();
        if (ranked)
        {
            auto flags = parse_flags_file(read_file(args.flags_path));
            std::string track = args.track.empty() && !runs.empty() ? runs[0].track : args.track;
            ranking = xcore::rank_solvers(track, table.totals, flags);
        }

        if (args.format == "json")
        {
            auto doc = json::parse(xcore::table_json(table));
            if (ranked)
            {
                json list = json::array();
                for (const auto & e : ranking)
                    list.push_back({{"solver", e.solver}, {"points", e.points},
                        {"rank", e.rank}, {"medal", e.medal}});
                doc["ranking"] = std::move(list);
            }
            std::cout << doc.dump(2) << "\n";
        }
        else if (args.format == "csv")
        {
            std::cout << xcore::table_csv(table);
            if (ranked)
            {
                std::cout << "\nrank,solver,points,medal\n";
                for (const auto & e : ranking)
                {
                    std::ostringstream pts;
                    pts << e.points;
                    std::cout << e.rank << "," << e.solver << "," << pts.str()
                        << "," << e.medal << "\n";
                }
            }
        }
        else
        {
            throw CLI::ValidationError("--format", "expected csv or json");
        }
        return exit_ok;
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"xcore: constraint instances, solving, checking, scoring"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto * generate = app.add_subcommand("generate", "build a catalog instance");
    generate->add_option("problem", gen.problem, "catalog id (see --list)");
    generate->add_option("params", gen.params, "JSON parameter record");
    generate->add_option("-o,--output", gen.out_path, "output file (default stdout)");
    generate->add_flag("--list", gen.list, "list catalog ids and exit");
    generate->add_flag("--manifest", gen.show_manifest,
        "print the generation manifest as JSON lines and exit");
    generate->add_flag("--desk-only", gen.desk_only, "restrict --manifest to desk scale");

    SolveArgs solve;
    auto * solve_cmd = app.add_subcommand("solve", "solve an instance document");
    solve_cmd->add_option("instance", solve.instance_path, "instance file or -")->required();
    auto * cpu_opt = solve_cmd->add_option("--cpu-limit", solve.cpu_limit, "CPU seconds (default 2400)");
    auto * wall_opt = solve_cmd->add_option("--wall-limit", solve.wall_limit, "wall seconds (default 7200)");
    solve_cmd->add_option("--preset", solve.preset, "limit preset: fast-cop (240/720)")
        ->check(CLI::IsMember({"fast-cop"}));
    solve_cmd->add_option("--optimize-log", solve.optimize_log,
        "write the improving-bound log as JSON lines");
    solve_cmd->add_option("--heuristic", solve.heuristic, "dom-min, dom-wdeg or rand");
    solve_cmd->add_option("--seed", solve.seed, "random seed (default 0)");
    solve_cmd->add_flag("--luby", solve.luby, "Luby restarts (optimization only)");
    solve_cmd->add_option("-o,--output", solve.out_path, "output file (default stdout)");

    CheckArgs check;
    auto * check_cmd = app.add_subcommand("check", "check a solution document");
    check_cmd->add_option("instance", check.instance_path, "instance file")->required();
    check_cmd->add_option("solution", check.solution_path, "solution file")->required();

    ScoreArgs score;
    auto * score_cmd = app.add_subcommand("score", "score run records");
    score_cmd->add_option("runs", score.runs_path, "JSONL run records")->required();
    score_cmd->add_option("--track", score.track, "keep only this track");
    score_cmd->add_option("--flags", score.flags_path,
        "solver flags JSON; enables ranking output");
    score_cmd->add_option("--format", score.format, "csv (default) or json");

    try
    {
        app.parse(argc, argv);
        solve.cpu_set = cpu_opt->count() > 0;
        solve.wall_set = wall_opt->count() > 0;
        if (generate->parsed())
            return run_generate(gen);
        if (solve_cmd->parsed())
            return run_solve(solve);
        if (check_cmd->parsed())
            return run_check(check);
        return run_score(score);
    }
    catch (const CLI::CallForHelp & e)
    {
        std::cout << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError & e)
    {
        emit_error("usage", e.what());
        return exit_usage;
    }
    catch (const xcore::ParseError & e)
    {
        emit_error("parse", e.what());
        return exit_usage;
    }
    catch (const xcore::BuildError & e)
    {
        emit_error("usage", e.what());
        return exit_usage;
    }
    catch (const xcore::ScoringError & e)
    {
        emit_error("scoring", e.what());
        return exit_check_failed;
    }
    catch (const std::exception & e)
    {
        emit_error("internal", e.what());
        return exit_internal;
    }
}

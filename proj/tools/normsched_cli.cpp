#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "normsched/bench.hpp"
#include "normsched/gantt.hpp"
#include "normsched/json_io.hpp"
#include "normsched/solver.hpp"
#include "normsched/transform.hpp"

using namespace normsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitBudget = 3;

int env_threads() {
    const char* raw = std::getenv("NORMSCHED_THREADS");
    if (!raw) return 1;
    int value = std::atoi(raw);
    return value > 0 ? value : 1;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content << "\n";
    else
        write_file(path, content);
}

int cmd_solve(const std::string& input, const std::string& method, unsigned grid_k, int blocks,
              long max_structures, const std::string& output, const std::string& schedule_out) {
    Instance instance = instance_from_json(read_file(input));
    ValidationReport valid = validate_instance(instance);
    if (!valid.ok()) {
        std::cerr << "invalid instance: " << valid.to_string() << "\n";
        return kExitValidation;
    }
    SolveResult result;
    if (method == "grid") {
        result = grid_dp_solve(instance, grid_k);
    } else {
        ExactOptions opts;
        opts.threads = env_threads();
        if (blocks > 0) opts.enumeration.max_blocks = blocks;
        opts.enumeration.max_structures = max_structures > 0 ? max_structures : -1;
        result = solve_exact(instance, opts);
    }
    if (result.status == SolveStatus::Infeasible) {
        std::cerr << "no feasible schedule within the horizon\n";
        return kExitValidation;
    }
    ScheduleMetrics metrics = schedule_metrics(result.schedule);
    nlohmann::json doc = nlohmann::json::parse(metrics_to_json(metrics));
    doc["certified"] = result.certified;
    doc["stats"] = {{"dp_states", result.stats.dp_states},
                    {"lps_solved", result.stats.lps_solved},
                    {"pruned_by_bound", result.stats.pruned_by_bound},
                    {"pruned_by_lemma", result.stats.pruned_by_lemma},
                    {"structures_explored", result.stats.structures_explored}};
    emit(output, doc.dump());
    if (!schedule_out.empty()) write_file(schedule_out, schedule_to_json(result.schedule));
    if (result.status == SolveStatus::BudgetExceeded) {
        std::cerr << "budget exceeded: best value " << result.optimal_value.str() << " is not certified\n";
        return kExitBudget;
    }
    return kExitOk;
}

int cmd_verify(const std::string& schedule_path, const std::string& instance_path, const std::string& output) {
    IntervalSchedule schedule = schedule_from_json(read_file(schedule_path));
    Instance instance;
    if (!instance_path.empty()) {
        instance = instance_from_json(read_file(instance_path));
    } else {
        // a minimal stand-in instance: every observed job, released at 0
        std::vector<Job> jobs;
        JobId max_id = -1;
        for (JobId j : schedule.jobs()) max_id = std::max(max_id, j);
        for (JobId j = 0; j <= max_id; ++j) jobs.push_back({j, 0, std::nullopt});
        instance = Instance(std::move(jobs));
    }
    ValidationReport report = validate_schedule(instance, schedule);
    nlohmann::json doc;
    doc["feasible"] = report.ok();
    if (!report.ok()) {
        nlohmann::json issues = nlohmann::json::array();
        for (const auto& issue : report.issues) issues.push_back(issue.code + ": " + issue.message);
        doc["issues"] = issues;
        emit(output, doc.dump());
        return kExitValidation;
    }
    BlockPartition partition = derive_partition(instance, schedule);
    auto abnormal = abnormality_point(partition);
    doc["normal"] = !abnormal.has_value();
    doc["abnormality_point"] = abnormal ? nlohmann::json(*abnormal) : nlohmann::json(nullptr);
    ShiftReport shifts = shifts_and_resolution(schedule);
    doc["resolution"] = shifts.resolution ? nlohmann::json(shifts.resolution->str()) : nlohmann::json(nullptr);
    ScheduleMetrics metrics = schedule_metrics(schedule);
    doc["total"] = metrics.total_completion_time.str();
    doc["makespan"] = metrics.makespan.str();
    emit(output, doc.dump());
    return kExitOk;
}

int cmd_lint(const std::string& instance_path, const std::string& partition_path, const std::string& schedule_path,
             bool fix, int max_rounds, const std::string& output) {
    Instance instance = instance_from_json(read_file(instance_path));
    BlockPartition partition;
    if (!partition_path.empty()) {
        partition = partition_from_json(read_file(partition_path));
    } else if (!schedule_path.empty()) {
        partition = derive_partition(instance, schedule_from_json(read_file(schedule_path)));
    } else {
        std::cerr << "lint needs --partition or --schedule\n";
        return kExitIo;
    }
    ValidationReport feasible = partition_feasible(instance, partition);
    if (!feasible.ok()) {
        std::cerr << "infeasible partition: " << feasible.to_string() << "\n";
        return kExitValidation;
    }
    auto diagnoses = lint(instance, partition);
    if (!fix) {
        emit(output, diagnoses_to_json(diagnoses));
        return diagnoses.empty() ? kExitOk : kExitValidation;
    }
    ImproveResult improved = improve(instance, partition, max_rounds);
    nlohmann::json doc;
    doc["diagnoses"] = nlohmann::json::parse(diagnoses_to_json(diagnoses));
    doc["trace"] = nlohmann::json::parse(trace_to_json(improved.applied));
    doc["partition"] = nlohmann::json::parse(partition_to_json(improved.partition));
    emit(output, doc.dump());
    return kExitOk;
}

int cmd_gen(const std::string& family, int p, long chain_length, int n, std::int64_t max_release, std::uint64_t seed,
            const std::string& output) {
    if (family == "jp") {
        emit(output, instance_to_json(make_jp(p)));
    } else if (family == "pp") {
        emit(output, schedule_to_json(make_pp_schedule(p)));
    } else if (family == "theorem") {
        std::optional<long> l = chain_length > 0 ? std::optional<long>(chain_length) : std::nullopt;
        emit(output, instance_to_json(make_theorem_instance(p, l)));
    } else if (family == "theorem-schedule") {
        std::optional<long> l = chain_length > 0 ? std::optional<long>(chain_length) : std::nullopt;
        emit(output, schedule_to_json(make_theorem_companion_schedule(p, l)));
    } else if (family == "random") {
        emit(output, instance_to_json(random_intree(n, max_release, seed)));
    } else {
        std::cerr << "unknown family: " << family << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_gantt(const std::string& schedule_path, const std::string& format, const std::string& output) {
    IntervalSchedule schedule = schedule_from_json(read_file(schedule_path));
    GanttFormat f = format == "svg" ? GanttFormat::Svg : GanttFormat::Ascii;
    emit(output, render_gantt(schedule, f));
    return kExitOk;
}

int cmd_bench(const std::string& output) {
    auto results = bench::run_all(env_threads());
    std::cout << bench::results_to_text(results);
    if (!output.empty()) write_file(output, bench::results_to_json(results));
    for (const auto& r : results)
        if (!r.pass) return kExitValidation;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact two-machine preemptive scheduling toolkit"};
    app.require_subcommand(1);

    std::string input, output, schedule_path, instance_path, partition_path, schedule_out;
    std::string method = "exact", format = "ascii", family = "jp";
    unsigned grid_k = 2;
    int blocks = -1, p = 0, n = 5, max_rounds = 32;
    long chain_length = 0, max_structures = 500'000;
    std::int64_t max_release = 0;
    std::uint64_t seed = 1;
    bool fix = false;

    auto* solve = app.add_subcommand("solve", "solve an instance exactly or on a dyadic grid");
    solve->add_option("--input", input, "instance JSON")->required();
    solve->add_option("--method", method)->check(CLI::IsMember({"exact", "grid"}));
    solve->add_option("--grid-k", grid_k, "grid exponent for --method grid");
    solve->add_option("--blocks", blocks, "override the enumerator's block budget");
    solve->add_option("--max-structures", max_structures, "enumeration budget, 0 = unlimited");
    solve->add_option("--output", output, "metrics JSON path (default stdout)");
    solve->add_option("--schedule-out", schedule_out, "also write the schedule JSON");

    auto* verify = app.add_subcommand("verify", "validate a schedule and report normality/resolution");
    verify->add_option("--schedule", schedule_path)->required();
    verify->add_option("--instance", instance_path, "instance JSON for release/precedence checks");
    verify->add_option("--output", output);

    auto* lint_cmd = app.add_subcommand("lint", "report violated necessary conditions of optimality");
    lint_cmd->add_option("--instance", instance_path)->required();
    lint_cmd->add_option("--partition", partition_path);
    lint_cmd->add_option("--schedule", schedule_path);
    lint_cmd->add_flag("--fix", fix, "apply improving transformations and emit the trace");
    lint_cmd->add_option("--max-rounds", max_rounds);
    lint_cmd->add_option("--output", output);

    auto* gen = app.add_subcommand("gen", "emit family or random instances/schedules");
    gen->add_option("--family", family)->check(CLI::IsMember({"jp", "pp", "theorem", "theorem-schedule", "random"}));
    gen->add_option("--p", p, "family level");
    gen->add_option("--chain-length", chain_length, "theorem chain override");
    gen->add_option("--n", n, "random instance size");
    gen->add_option("--max-release", max_release);
    gen->add_option("--seed", seed);
    gen->add_option("--output", output);

    auto* gantt = app.add_subcommand("gantt", "render a schedule");
    gantt->add_option("--schedule", schedule_path)->required();
    gantt->add_option("--format", format)->check(CLI::IsMember({"ascii", "svg"}));
    gantt->add_option("--output", output);

    auto* bench_cmd = app.add_subcommand("bench", "run the acceptance checks and print PASS/FAIL lines");
    bench_cmd->add_option("--output", output, "also write results JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(input, method, grid_k, blocks, max_structures, output, schedule_out);
        if (verify->parsed()) return cmd_verify(schedule_path, instance_path, output);
        if (lint_cmd->parsed()) return cmd_lint(instance_path, partition_path, schedule_path, fix, max_rounds, output);
        if (gen->parsed()) return cmd_gen(family, p, chain_length, n, max_release, seed, output);
        if (gantt->parsed()) return cmd_gantt(schedule_path, format, output);
        if (bench_cmd->parsed()) return cmd_bench(output);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitIo;
}

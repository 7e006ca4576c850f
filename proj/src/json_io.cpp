#include "normsched/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace normsched {

using nlohmann::json;

std::string instance_to_json(const Instance& instance) {
    json jobs = json::array();
    for (const Job& j : instance.jobs()) {
        json job{{"id", j.id}, {"release", j.release}};
        if (j.parent) job["parent"] = *j.parent;
        jobs.push_back(std::move(job));
    }
    return json{{"jobs", jobs}}.dump();
}

Instance instance_from_json(const std::string& text) {
    json doc = json::parse(text);
    std::vector<Job> jobs;
    for (const json& item : doc.at("jobs")) {
        Job j;
        j.id = item.at("id").get<int>();
        j.release = item.at("release").get<std::int64_t>();
        if (item.contains("parent") && !item.at("parent").is_null()) j.parent = item.at("parent").get<int>();
        jobs.push_back(j);
    }
    return Instance(std::move(jobs));
}

std::string schedule_to_json(const IntervalSchedule& schedule) {
    json machines = json::array();
    for (const auto& lane : schedule.machines) {
        json pieces = json::array();
        for (const Piece& p : lane)
            pieces.push_back(json{{"job", p.job}, {"start", p.start.str()}, {"end", p.end.str()}});
        machines.push_back(std::move(pieces));
    }
    return json{{"machines", machines}}.dump();
}

IntervalSchedule schedule_from_json(const std::string& text) {
    json doc = json::parse(text);
    const json& machines = doc.at("machines");
    if (!machines.is_array() || machines.size() != 2)
        throw std::invalid_argument("schedule JSON must have exactly two machine lanes");
    IntervalSchedule schedule;
    for (std::size_t m = 0; m < 2; ++m) {
        for (const json& item : machines[m]) {
            Piece p;
            p.job = item.at("job").get<int>();
            p.start = Dyadic::parse(item.at("start").get<std::string>());
            p.end = Dyadic::parse(item.at("end").get<std::string>());
            schedule.machines[m].push_back(p);
        }
    }
    return schedule;
}

std::string partition_to_json(const BlockPartition& partition) {
    json events = json::array();
    for (const Dyadic& e : partition.events) events.push_back(e.str());
    json xi = json::array();
    for (const auto& block : partition.xi) {
        json amounts = json::object();
        for (const auto& [job, amt] : block) amounts[std::to_string(job)] = amt.str();
        xi.push_back(std::move(amounts));
    }
    return json{{"events", events}, {"xi", xi}}.dump();
}

BlockPartition partition_from_json(const std::string& text) {
    json doc = json::parse(text);
    BlockPartition partition;
    for (const json& e : doc.at("events")) partition.events.push_back(Dyadic::parse(e.get<std::string>()));
    for (const json& block : doc.at("xi")) {
        std::map<JobId, Dyadic> amounts;
        for (auto it = block.begin(); it != block.end(); ++it)
            amounts.emplace(std::stoi(it.key()), Dyadic::parse(it.value().get<std::string>()));
        partition.xi.push_back(std::move(amounts));
    }
    return partition;
}

std::string metrics_to_json(const ScheduleMetrics& metrics) {
    json completions = json::object();
    for (const auto& [job, c] : metrics.completions) completions[std::to_string(job)] = c.str();
    return json{{"completions", completions},
                {"makespan", metrics.makespan.str()},
                {"total", metrics.total_completion_time.str()}}
        .dump();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace normsched

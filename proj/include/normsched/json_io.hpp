#ifndef NORMSCHED_JSON_IO_HPP
#define NORMSCHED_JSON_IO_HPP

#include <string>

#include "normsched/instance.hpp"
#include "normsched/partition.hpp"
#include "normsched/schedule.hpp"

namespace normsched {

// Wire formats:
//   instance  {"jobs":[{"id":0,"release":0,"parent":3}, ...]}   (parent absent for roots)
//   schedule  {"machines":[[{"job":0,"start":"0","end":"1"}],[...]]}
//   partition {"events":["0","3/2","5/2"],"xi":[{"0":"1","1":"1","2":"1"},{"3":"1"}]}
// Times are lowest-terms fraction strings with power-of-two denominators.

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

std::string schedule_to_json(const IntervalSchedule& schedule);
IntervalSchedule schedule_from_json(const std::string& text);

std::string partition_to_json(const BlockPartition& partition);
BlockPartition partition_from_json(const std::string& text);

std::string metrics_to_json(const ScheduleMetrics& metrics);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace normsched

#endif

#ifndef NORMSCHED_GANTT_HPP
#define NORMSCHED_GANTT_HPP

#include <string>

#include "normsched/schedule.hpp"

namespace normsched {

enum class GanttFormat { Ascii, Svg };

/// Two machine lanes with pieces labeled by job id and event ticks at every
/// piece boundary; byte-deterministic for a given schedule and format.
std::string render_gantt(const IntervalSchedule& schedule, GanttFormat format);

} // namespace normsched

#endif

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "normsched/gantt.hpp"
#include "normsched/instances.hpp"
#include "normsched/json_io.hpp"

using namespace normsched;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

BlockPartition p0_partition() {
    BlockPartition p;
    p.events = {dy("0"), dy("3/2"), dy("5/2")};
    p.xi = {{{0, dy("1")}, {1, dy("1")}, {2, dy("1")}}, {{3, dy("1")}}};
    return p;
}

} // namespace

TEST_CASE("partition JSON is byte-exact") {
    const std::string expected = R"({"events":["0","3/2","5/2"],"xi":[{"0":"1","1":"1","2":"1"},{"3":"1"}]})";
    CHECK(partition_to_json(p0_partition()) == expected);
    BlockPartition parsed = partition_from_json(expected);
    CHECK(partition_to_json(parsed) == expected);
}

TEST_CASE("instance JSON round trip") {
    Instance j0 = make_jp(0);
    std::string text = instance_to_json(j0);
    Instance parsed = instance_from_json(text);
    REQUIRE(parsed.size() == 4);
    CHECK(parsed.release(3) == 1);
    CHECK(*parsed.parent(0) == 3);
    CHECK(instance_to_json(parsed) == text);
    CHECK_THROWS(instance_from_json("{"));
    CHECK_THROWS(instance_from_json(R"({"jobs":[{"id":0}]})"));
}

TEST_CASE("schedule JSON round trip with fraction times") {
    Instance j0 = make_jp(0);
    IntervalSchedule s = realize(j0, p0_partition());
    std::string text = schedule_to_json(s);
    IntervalSchedule parsed = schedule_from_json(text);
    CHECK(schedule_to_json(parsed) == text);
    CHECK(parsed.completion_time(3) == dy("5/2"));
    CHECK_THROWS(schedule_from_json(R"({"machines":[[]]})"));
    CHECK_THROWS(schedule_from_json(R"({"machines":[[{"job":0,"start":"1/3","end":"1"}],[]]})"));
}

TEST_CASE("metrics JSON carries exact fractions") {
    Instance j0 = make_jp(0);
    ScheduleMetrics m = schedule_metrics(realize(j0, p0_partition()));
    std::string text = metrics_to_json(m);
    CHECK(text.find("\"total\":\"13/2\"") != std::string::npos);
    CHECK(text.find("\"makespan\":\"5/2\"") != std::string::npos);
}

TEST_CASE("ascii gantt is deterministic and shows both lanes") {
    Instance j0 = make_jp(0);
    IntervalSchedule s = realize(j0, p0_partition());
    std::string once = render_gantt(s, GanttFormat::Ascii);
    std::string twice = render_gantt(s, GanttFormat::Ascii);
    CHECK(once == twice);
    CHECK(once.find("M1 |") != std::string::npos);
    CHECK(once.find("M2 |") != std::string::npos);
    CHECK(once.find("j0") != std::string::npos);
    CHECK(once.find("j3") != std::string::npos);
    CHECK(once.find("5/2") != std::string::npos);

    IntervalSchedule single;
    single.machines[0].push_back({0, dy("0"), dy("1")});
    std::string lane = render_gantt(single, GanttFormat::Ascii);
    CHECK(lane.find("j0") != std::string::npos);
}

TEST_CASE("svg gantt for P_2 is well formed with 12 job labels") {
    IntervalSchedule s = make_pp_schedule(2);
    std::string svg = render_gantt(s, GanttFormat::Svg);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    // tag-level well-formedness: every '<' closes, rects are self-closed
    int depth = 0;
    std::size_t pos = 0;
    bool balanced = true;
    while ((pos = svg.find('<', pos)) != std::string::npos) {
        std::size_t end = svg.find('>', pos);
        REQUIRE(end != std::string::npos);
        std::string tag = svg.substr(pos, end - pos + 1);
        if (tag.rfind("<?", 0) == 0) {
        } else if (tag.rfind("</", 0) == 0) {
            --depth;
        } else if (tag.rfind("/>", tag.size() - 2) != std::string::npos) {
        } else {
            ++depth;
        }
        if (depth < 0) balanced = false;
        pos = end + 1;
    }
    CHECK(balanced);
    CHECK(depth == 0);

    std::set<std::string> labels;
    pos = 0;
    while ((pos = svg.find(">j", pos)) != std::string::npos) {
        std::size_t end = svg.find('<', pos);
        labels.insert(svg.substr(pos + 1, end - pos - 1));
        pos = end;
    }
    CHECK(labels.size() == 12);
}

TEST_CASE("svg byte determinism") {
    IntervalSchedule s = make_pp_schedule(1);
    CHECK(render_gantt(s, GanttFormat::Svg) == render_gantt(s, GanttFormat::Svg));
}

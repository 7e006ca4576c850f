#include "normsched/gantt.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "normsched/analysis.hpp"
#include "normsched/rational.hpp"

namespace normsched {

namespace {

std::string render_ascii(const IntervalSchedule& schedule) {
    if (schedule.empty()) return "(empty schedule)\n";
    ShiftReport shifts = shifts_and_resolution(schedule);
    const Dyadic span = shifts.points.back();
    // four columns per resolution unit, shrunk if the chart would get too wide
    Rational unit = to_rational(*shifts.resolution) / 4;
    const Rational max_cols(160);
    if (to_rational(span) / unit > max_cols) unit = to_rational(span) / max_cols;

    auto columns = [&](const Dyadic& t) {
        Rational exact = to_rational(t) / unit;
        BigInt whole = numerator(exact) / denominator(exact);
        return static_cast<long>(whole);
    };

    std::ostringstream os;
    for (int m = 0; m < 2; ++m) {
        os << "M" << (m + 1) << " |";
        long cursor = 0;
        for (const Piece& p : schedule.machines[static_cast<std::size_t>(m)]) {
            long c0 = columns(p.start);
            long c1 = std::max(columns(p.end), c0 + 1);
            for (; cursor < c0; ++cursor) os << '.';
            std::string label = "j" + std::to_string(p.job);
            long width = c1 - c0;
            if (static_cast<long>(label.size()) > width) label = label.substr(0, static_cast<std::size_t>(width));
            os << label;
            for (long k = static_cast<long>(label.size()); k < width; ++k) os << '=';
            cursor = c1;
        }
        os << "|\n";
    }
    os << "t  |";
    std::string marks;
    for (const Dyadic& p : shifts.points) {
        if (!marks.empty()) marks += ' ';
        marks += p.str();
    }
    os << marks << "\n";
    return os.str();
}

std::string render_svg(const IntervalSchedule& schedule) {
    const long scale = 80;  // pixels per time unit
    const long lane_h = 28, lane_gap = 8, top = 20, left = 40, tick_h = 6;
    Dyadic span;
    std::set<Dyadic> ticks;
    for (const auto& lane : schedule.machines)
        for (const Piece& p : lane) {
            span = max(span, p.end);
            ticks.insert(p.start);
            ticks.insert(p.end);
        }
    auto px = [&](const Dyadic& t) { return t.scaled(scale).decimal_str(); };
    const long height = top + 2 * lane_h + lane_gap + 40;

    const std::string width = (Dyadic(left + 40) + span.scaled(scale)).decimal_str();
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    for (int m = 0; m < 2; ++m) {
        const long y = top + m * (lane_h + lane_gap);
        os << "  <text x=\"8\" y=\"" << (y + lane_h / 2 + 4) << "\" font-size=\"12\">M" << (m + 1) << "</text>\n";
        for (const Piece& p : schedule.machines[static_cast<std::size_t>(m)]) {
            os << "  <rect x=\"" << (Dyadic(left) + p.start.scaled(scale)).decimal_str() << "\" y=\"" << y
               << "\" width=\"" << px(p.length()) << "\" height=\"" << lane_h
               << "\" fill=\"#9ecae1\" stroke=\"#31708f\"/>\n";
            Dyadic mid = p.start + p.length().half();
            os << "  <text x=\"" << (Dyadic(left) + mid.scaled(scale)).decimal_str() << "\" y=\""
               << (y + lane_h / 2 + 4) << "\" font-size=\"11\" text-anchor=\"middle\">j" << p.job << "</text>\n";
        }
    }
    const long axis_y = top + 2 * lane_h + lane_gap + 8;
    for (const Dyadic& t : ticks) {
        std::string x = (Dyadic(left) + t.scaled(scale)).decimal_str();
        os << "  <line x1=\"" << x << "\" y1=\"" << axis_y << "\" x2=\"" << x << "\" y2=\"" << (axis_y + tick_h)
           << "\" stroke=\"#333\"/>\n";
        os << "  <text x=\"" << x << "\" y=\"" << (axis_y + tick_h + 12)
           << "\" font-size=\"10\" text-anchor=\"middle\">" << t.str() << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace

std::string render_gantt(const IntervalSchedule& schedule, GanttFormat format) {
    return format == GanttFormat::Ascii ? render_ascii(schedule) : render_svg(schedule);
}

} // namespace normsched

#include "frontlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace frontlab::io {

std::string to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::SwitchStart: return "SWITCH_START";
    case EventKind::DirectionChange: return "DIRECTION_CHANGE";
    case EventKind::FrontSteady: return "FRONT_STEADY";
    case EventKind::FrontDisappear: return "FRONT_DISAPPEAR";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& text)
{
    if (text == "SWITCH_START") return EventKind::SwitchStart;
    if (text == "DIRECTION_CHANGE") return EventKind::DirectionChange;
    if (text == "FRONT_STEADY") return EventKind::FrontSteady;
    if (text == "FRONT_DISAPPEAR") return EventKind::FrontDisappear;
    throw std::invalid_argument("unknown event kind: " + text);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<SteadyFront> detect_steady_fronts(const Trace& trace)
{
    if (trace.events.empty() && trace.rows.size() < 2)
        throw std::invalid_argument("detect_steady_fronts: empty or degenerate trace");

    std::vector<SteadyFront> alive;
    for (const auto& ev : trace.events) {
        switch (ev.kind) {
        case EventKind::FrontSteady:
            alive.push_back({ev.t, ev.x});
            break;
        case EventKind::FrontDisappear: {
            const auto match = [&](const SteadyFront& f) {
                return std::abs(f.x - ev.x) <= 1e-9 * std::max(1.0, std::abs(ev.x));
            };
            alive.erase(std::remove_if(alive.begin(), alive.end(), match), alive.end());
            break;
        }
        default:
            break;
        }
    }
    std::sort(alive.begin(), alive.end(),
              [](const SteadyFront& a, const SteadyFront& b) { return a.t < b.t; });
    return alive;
}

void write_trace_csv(std::ostream& out, const Trace& trace)
{
    out << "t,v,w,U_total,P,config\n";
    for (const auto& r : trace.rows)
        out << format_double(r.t) << ',' << format_double(r.v) << ','
            << format_double(r.w) << ',' << format_double(r.u_total) << ','
            << format_double(r.p) << ',' << r.config << '\n';
}

void write_events_csv(std::ostream& out, const Trace& trace)
{
    out << "kind,t,x\n";
    for (const auto& e : trace.events)
        out << to_string(e.kind) << ',' << format_double(e.t) << ','
            << format_double(e.x) << '\n';
}

void write_snapshot_csv(std::ostream& out, const Snapshot& snapshot)
{
    out << "x,u\n";
    for (std::size_t i = 0; i < snapshot.x.size(); ++i)
        out << format_double(snapshot.x[i]) << ',' << format_double(snapshot.u[i])
            << '\n';
}

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t max_fields)
{
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (fields.size() + 1 < max_fields) {
        const auto comma = line.find(',', pos);
        if (comma == std::string::npos)
            break;
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    fields.push_back(line.substr(pos));
    return fields;
}

} // namespace

Trace read_trace_csv(std::istream& rows_in)
{
    Trace trace;
    std::string line;
    if (!std::getline(rows_in, line) || line.rfind("t,v,w", 0) != 0)
        throw std::invalid_argument("read_trace_csv: bad header");
    while (std::getline(rows_in, line)) {
        if (line.empty())
            continue;
        const auto f = split_line(line, 6);
        if (f.size() != 6)
            throw std::invalid_argument("read_trace_csv: bad row: " + line);
        trace.rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]),
                              std::stod(f[3]), std::stod(f[4]), f[5]});
    }
    return trace;
}

std::vector<Event> read_events_csv(std::istream& in)
{
    std::vector<Event> events;
    std::string line;
    if (!std::getline(in, line) || line.rfind("kind,t,x", 0) != 0)
        throw std::invalid_argument("read_events_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = split_line(line, 3);
        if (f.size() != 3)
            throw std::invalid_argument("read_events_csv: bad row: " + line);
        events.push_back({event_kind_from_string(f[0]), std::stod(f[1]),
                          std::stod(f[2])});
    }
    return events;
}

} // namespace frontlab::io

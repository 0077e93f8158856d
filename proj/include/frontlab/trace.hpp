#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frontlab::io {

enum class EventKind { SwitchStart, DirectionChange, FrontSteady, FrontDisappear };

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& text);

struct Event {
    EventKind kind;
    double t;
    double x;
};

struct TraceRow {
    double t;
    double v;
    double w;
    double u_total;
    double p;
    std::string config; // serialized relay configuration
};

struct Snapshot {
    double t;
    std::vector<double> x;
    std::vector<double> u;
};

/// Time series of one integration: sampled rows, the event log and full
/// density snapshots. Rows and events are time-ordered.
struct Trace {
    std::vector<TraceRow> rows;
    std::vector<Event> events;
    std::vector<Snapshot> snapshots;
};

/// Steady immortal fronts extracted from a trace: the moments a moving front
/// stopped and was never swept afterwards. Works off the event log alone, so
/// it applies to any tier that emits FRONT_STEADY / FRONT_DISAPPEAR events.
struct SteadyFront {
    double t;
    double x;
};

std::vector<SteadyFront> detect_steady_fronts(const Trace& trace);

// CSV emission; all floating-point values printed with 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_events_csv(std::ostream& out, const Trace& trace);
void write_snapshot_csv(std::ostream& out, const Snapshot& snapshot);

Trace read_trace_csv(std::istream& rows_in);
std::vector<Event> read_events_csv(std::istream& in);

std::string format_double(double v);

} // namespace frontlab::io

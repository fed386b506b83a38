#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "loglm/errors.hpp"

namespace loglm {

// The eight schema fields of an authentication event, in wire order.
enum Field : int {
    kSrcUser = 0,
    kDstUser = 1,
    kSrcPc = 2,
    kDstPc = 3,
    kAuthType = 4,
    kLogonType = 5,
    kAuthOrientation = 6,
    kOutcome = 7,
};
inline constexpr int kFieldCount = 8;

inline constexpr std::int64_t kSecondsPerDay = 86400;

// One parsed log line. The red flag is ground truth carried for evaluation
// only; it never reaches a model. Instances are counted so tests can verify
// the pipeline retains no events across day boundaries.
struct RawEvent {
    std::int64_t seconds = 0;
    std::array<std::string, kFieldCount> fields;
    bool red = false;

    RawEvent() { live_count_.fetch_add(1, std::memory_order_relaxed); }
    RawEvent(const RawEvent& o) : seconds(o.seconds), fields(o.fields), red(o.red) {
        live_count_.fetch_add(1, std::memory_order_relaxed);
    }
    RawEvent(RawEvent&& o) noexcept
        : seconds(o.seconds), fields(std::move(o.fields)), red(o.red) {
        live_count_.fetch_add(1, std::memory_order_relaxed);
    }
    RawEvent& operator=(const RawEvent&) = default;
    RawEvent& operator=(RawEvent&&) = default;
    ~RawEvent() { live_count_.fetch_sub(1, std::memory_order_relaxed); }

    int day() const { return static_cast<int>(seconds / kSecondsPerDay); }

    static std::int64_t live_instances() { return live_count_.load(std::memory_order_relaxed); }

private:
    static std::atomic<std::int64_t> live_count_;
};

// Field labels as used in exports (word-token slot names are derived from
// these, with the user fields split into name and domain).
const std::array<std::string, kFieldCount>& field_names();

// Parses one line of the authentication wire format:
//   time,src_user@dom,dst_user@dom,src_pc,dst_pc,auth,logon,orientation,outcome
// Exactly nine comma-separated values; anything else is a ParseError.
RawEvent parse_auth_line(std::string_view line);

std::string format_auth_line(const RawEvent& e);

// Key identifying a labeled red-team event: time,user,src_pc,dst_pc.
struct RedKey {
    std::int64_t seconds;
    std::string user;
    std::string src_pc;
    std::string dst_pc;

    bool operator<(const RedKey& o) const;
};

class RedSet {
public:
    static RedSet from_stream(std::istream& in);
    static RedSet from_file(const std::string& path);

    bool contains(const RawEvent& e) const;
    std::size_t size() const { return keys_.size(); }
    void label(std::vector<RawEvent>& events) const;

private:
    std::vector<RedKey> keys_; // sorted
};

// Drops automated machine activity by matching the source-user name (the
// part before '@'). The default pattern drops names ending in '$' and names
// of the form C<digits>.
class MachineFilter {
public:
    static MachineFilter standard();
    static MachineFilter none();
    static MachineFilter from_pattern(const std::string& regex);

    // True if the event should be removed from the stream.
    bool drops(const RawEvent& e) const;

private:
    MachineFilter(std::regex re, bool active) : re_(std::move(re)), active_(active) {}
    std::regex re_;
    bool active_;
};

// Reads a whole day file of auth lines; malformed lines raise ParseError.
std::vector<RawEvent> read_auth_file(const std::string& path);

// Source-user name/domain split on the first '@'. Missing '@' leaves the
// domain empty.
std::pair<std::string_view, std::string_view> split_user(std::string_view user);

} // namespace loglm

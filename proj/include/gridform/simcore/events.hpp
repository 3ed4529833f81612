#pragma once

#include <string>
#include <variant>
#include <vector>

namespace gridform::simcore {

struct OpenBreaker {
  std::string line;
  bool operator==(const OpenBreaker&) const = default;
};
struct CloseBreaker {
  std::string line;
  bool operator==(const CloseBreaker&) const = default;
};
/// Shunt fault r + jx [pu] at a bus.
struct ApplyFault {
  std::string bus;
  double r = 0.0;
  double x = 0.0;
  bool operator==(const ApplyFault&) const = default;
};
struct ClearFault {
  std::string bus;
  bool operator==(const ClearFault&) const = default;
};
/// Move a named device reference to `value`, linearly over `ramp` seconds.
struct SetReference {
  std::string device;
  std::string name;
  double value = 0.0;
  double ramp = 0.0;
  bool operator==(const SetReference&) const = default;
};
struct SwitchMode {
  std::string device;
  std::string mode;
  bool operator==(const SwitchMode&) const = default;
};

using EventAction =
    std::variant<OpenBreaker, CloseBreaker, ApplyFault, ClearFault, SetReference, SwitchMode>;

struct SimEvent {
  double time = 0.0;
  EventAction action;
  bool operator==(const SimEvent&) const = default;
};

/// Sort by time; equal times keep declaration order.
void order_events(std::vector<SimEvent>& events);

std::string describe(const EventAction& action);

/// Pending events consumed at step boundaries. An event fires at the first
/// step boundary whose time is >= the event time.
class EventQueue {
 public:
  explicit EventQueue(std::vector<SimEvent> events);

  /// Events due at a step boundary `t` with step `dt`.
  std::vector<SimEvent> due(double t, double dt);
  bool empty() const { return next_ >= events_.size(); }

 private:
  std::vector<SimEvent> events_;
  std::size_t next_ = 0;
};

}  // namespace gridform::simcore

#include "gridform/simcore/events.hpp"

#include <algorithm>
#include <sstream>

namespace gridform::simcore {

void order_events(std::vector<SimEvent>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const SimEvent& a, const SimEvent& b) { return a.time < b.time; });
}

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

std::string describe(const EventAction& action) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const OpenBreaker& e) { os << "open_breaker(" << e.line << ")"; },
                 [&](const CloseBreaker& e) { os << "close_breaker(" << e.line << ")"; },
                 [&](const ApplyFault& e) {
                   os << "apply_fault(" << e.bus << ", " << e.r << "+j" << e.x << ")";
                 },
                 [&](const ClearFault& e) { os << "clear_fault(" << e.bus << ")"; },
                 [&](const SetReference& e) {
                   os << "set_reference(" << e.device << ", " << e.name << ", " << e.value
                      << ", " << e.ramp << ")";
                 },
                 [&](const SwitchMode& e) {
                   os << "switch_mode(" << e.device << ", " << e.mode << ")";
                 },
             },
             action);
  return os.str();
}

EventQueue::EventQueue(std::vector<SimEvent> events) : events_(std::move(events)) {
  order_events(events_);
}

std::vector<SimEvent> EventQueue::due(double t, double dt) {
  std::vector<SimEvent> out;
  // slack absorbs the rounding of k*dt against decimal event times
  const double horizon = t + 1e-6 * dt;
  while (next_ < events_.size() && events_[next_].time <= horizon) {
    out.push_back(events_[next_]);
    ++next_;
  }
  return out;
}

}  // namespace gridform::simcore

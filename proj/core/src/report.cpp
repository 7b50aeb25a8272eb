#include "nctopos/report.hpp"

#include <algorithm>
#include <sstream>

namespace nctopos {

  void Report::add(std::string name, bool passed, std::string witness) {
    _checks.push_back(Check{std::move(name), passed, std::move(witness)});
  }

  void Report::append(Report const& other, std::string_view prefix) {
    for (auto const& c : other._checks) {
      _checks.push_back(Check{std::string(prefix) + c.name, c.passed, c.witness});
    }
  }

  bool Report::passed() const noexcept {
    return std::all_of(_checks.begin(), _checks.end(),
                       [](Check const& c) { return c.passed; });
  }

  Check const* Report::find(std::string_view name) const noexcept {
    auto it = std::find_if(_checks.begin(), _checks.end(),
                           [&](Check const& c) { return c.name == name; });
    return it == _checks.end() ? nullptr : &*it;
  }

  bool Report::passed(std::string_view name) const {
    auto const* c = find(name);
    return c != nullptr && c->passed;
  }

  std::string Report::to_text() const {
    std::ostringstream out;
    for (auto const& c : _checks) {
      out << (c.passed ? "[pass] " : "[FAIL] ") << c.name;
      if (!c.passed && !c.witness.empty()) {
        out << "  (" << c.witness << ")";
      }
      out << '\n';
    }
    return out.str();
  }

}  // namespace nctopos

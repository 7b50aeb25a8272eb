#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nctopos {

  // One named check of a verification report. A failed check always carries
  // a witness naming concrete element, arrow or object ids.
  struct Check {
    std::string name;
    bool        passed = true;
    std::string witness;
  };

  class Report {
   public:
    void add(std::string name, bool passed, std::string witness = {});
    void append(Report const& other, std::string_view prefix = {});

    bool passed() const noexcept;
    // Looks a check up by exact name; nullptr when absent.
    Check const* find(std::string_view name) const noexcept;
    bool         passed(std::string_view name) const;

    std::vector<Check> const& checks() const noexcept {
      return _checks;
    }

    // Human rendering, one line per check.
    std::string to_text() const;

   private:
    std::vector<Check> _checks;
  };

}  // namespace nctopos

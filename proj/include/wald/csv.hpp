#pragma once

#include <cstdio>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wald::csv {

/// Six significant digits, the fixed numeric format of every CSV we emit.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string num(long long v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }
inline std::string num(unsigned long v) { return std::to_string(v); }
inline std::string num(unsigned long long v) { return std::to_string(v); }

class Writer {
 public:
  void comment(std::string_view key, std::string_view value) {
    out_ << "# " << key << ": " << value << '\n';
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  void row(std::initializer_list<std::string> fields) { row(std::vector<std::string>(fields)); }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace wald::csv

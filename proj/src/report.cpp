#include "coarse/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>

namespace coarse {

void Report::add_input(std::string name, std::string digest) {
  inputs.emplace_back(std::move(name), std::move(digest));
}
void Report::measure(std::string name, std::int64_t v) {
  measurements.emplace_back(std::move(name), Value{v});
}
void Report::measure(std::string name, double v) {
  measurements.emplace_back(std::move(name), Value{v});
}
void Report::measure(std::string name, std::string v) {
  measurements.emplace_back(std::move(name), Value{std::move(v)});
}
void Report::verdict(std::string name, bool pass, std::string witness) {
  verdicts.push_back({std::move(name), pass, std::move(witness)});
}
bool Report::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.pass; });
}

std::string format_sig12(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  if (v == 0) return "0.00000000000";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  // Pull the decimal exponent back out to pick fixed vs scientific.
  const char* epos = std::strchr(buf, 'e');
  const int exp10 = epos ? std::atoi(epos + 1) : 0;
  if (exp10 >= -4 && exp10 <= 11)
    std::snprintf(buf, sizeof buf, "%.*f", std::max(11 - exp10, 0), v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += "\"";
  return out;
}

std::string value_text(const Report::Value& v) {
  if (std::holds_alternative<std::int64_t>(v))
    return std::to_string(std::get<std::int64_t>(v));
  if (std::holds_alternative<double>(v)) return format_sig12(std::get<double>(v));
  return quote(std::get<std::string>(v));
}

template <typename T>
void emit_sorted_object(std::string& out, const std::string& key,
                        std::vector<std::pair<std::string, T>> items, bool& first,
                        const std::function<std::string(const T&)>& fmt) {
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (!first) out += ",\n";
  first = false;
  out += "  " + quote(key) + ": {";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += quote(items[i].first) + ": " + fmt(items[i].second);
  }
  out += items.empty() ? "}" : "\n  }";
}

}  // namespace

std::string serialize_report(const Report& r) {
  const bool empty =
      r.command.empty() && r.inputs.empty() && r.measurements.empty() && r.verdicts.empty();
  if (empty) return "{}\n";

  std::string out = "{\n";
  bool first = true;
  if (!r.command.empty()) {
    out += "  \"command\": " + quote(r.command);
    first = false;
  }
  if (!r.inputs.empty()) {
    emit_sorted_object<std::string>(
        out, "inputs", r.inputs, first,
        [](const std::string& s) { return quote(s); });
  }
  if (!r.measurements.empty()) {
    emit_sorted_object<Report::Value>(out, "measurements", r.measurements, first,
                                      [](const Report::Value& v) { return value_text(v); });
  }
  if (!r.verdicts.empty()) {
    if (!first) out += ",\n";
    first = false;
    out += "  \"verdicts\": [";
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
      out += i ? ",\n    " : "\n    ";
      out += "{\"name\": " + quote(r.verdicts[i].name) +
             ", \"pass\": " + (r.verdicts[i].pass ? "true" : "false") +
             ", \"witness\": " + quote(r.verdicts[i].witness) + "}";
    }
    out += r.verdicts.empty() ? "]" : "\n  ]";
  }
  out += "\n}\n";
  return out;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace coarse

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace coarse {

/// Machine-checkable command report. Serialization is deterministic: keys
/// sorted, reals printed with 12 significant digits, identical reports give
/// byte-identical text.
struct Report {
  struct Verdict {
    std::string name;
    bool pass = false;
    std::string witness;
  };
  using Value = std::variant<std::int64_t, double, std::string>;

  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> digest
  std::vector<std::pair<std::string, Value>> measurements;
  std::vector<Verdict> verdicts;

  void add_input(std::string name, std::string digest);
  void measure(std::string name, std::int64_t v);
  void measure(std::string name, double v);
  void measure(std::string name, std::string v);
  void verdict(std::string name, bool pass, std::string witness = {});
  bool all_pass() const;
};

/// Fixed-width decimal with 12 significant digits ("-1.00000000000").
std::string format_sig12(double v);

std::string serialize_report(const Report& r);

/// FNV-1a 64-bit digest of a byte string, as "fnv1a:<16 hex>".
std::string digest_bytes(const std::string& bytes);

}  // namespace coarse

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pindist/field.hpp"
#include "pindist/pinned.hpp"
#include "pindist/rational.hpp"

namespace pindist {

inline constexpr const char* kReportSchema = "pindist-report/1";

/// One named exact value carried by a report. Values are rendered as decimal
/// strings (or `num/den`) so nothing is ever truncated by JSON number limits.
struct Witness {
  std::string name;
  std::string value;
};

/// Structured pass/fail record for one checked identity or bound, with exact
/// witness values. Serializes to the pindist-report/1 JSON document.
struct VerificationReport {
  std::string check;
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  std::uint32_t d = 0;
  std::vector<std::uint32_t> modulus;
  std::string set_spec;
  std::optional<RationalParam> a;
  bool passed = false;
  std::vector<Witness> witnesses;
  std::optional<std::uint64_t> counterexample_pin;
  std::string warning;

  void set_field(const FieldSpec& F, std::uint32_t dim) {
    p = F.p();
    k = F.k();
    d = dim;
    modulus = F.modulus();
  }

  void add_witness(const std::string& name, std::uint64_t v) {
    witnesses.push_back({name, std::to_string(v)});
  }
  void add_witness(const std::string& name, Uint128 v) {
    witnesses.push_back({name, u128_to_string(v)});
  }
  void add_witness(const std::string& name, const Rational& v) {
    witnesses.push_back({name, v.str()});
  }
  void add_witness(const std::string& name, const std::string& v) {
    witnesses.push_back({name, v});
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["check"] = check;
    j["field"] = {{"p", p}, {"k", k}, {"d", d}, {"modulus", modulus}};
    j["set_spec"] = set_spec;
    if (a)
      j["a"] = {{"num", a->num}, {"den", a->den}};
    else
      j["a"] = nullptr;
    j["passed"] = passed;
    nlohmann::json ws = nlohmann::json::array();
    for (const Witness& w : witnesses) ws.push_back({{"name", w.name}, {"value", w.value}});
    j["witnesses"] = ws;
    if (counterexample_pin)
      j["counterexample_pin"] = *counterexample_pin;
    else
      j["counterexample_pin"] = nullptr;
    if (!warning.empty()) j["warning"] = warning;
    return j;
  }
};

}  // namespace pindist

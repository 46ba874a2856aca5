#include "hypzero/schedule.hpp"

#include <cstdio>

#include <json.hpp>

#include "hypzero/errors.hpp"

namespace hypzero {

void ParameterSchedule::validate() const {
  const std::size_t a = alphas.size();
  const std::size_t b = betas.size();
  if (a == 0) throw invalid_input("schedule has no numerator parameters");
  if (a != b + 1) {
    throw invalid_input("schedule needs A = B + 1, got A = " + std::to_string(a) + ", B = " + std::to_string(b));
  }
  if (cs.size() != a) throw invalid_input("schedule: cs has " + std::to_string(cs.size()) + " entries, expected A");
  if (ds.size() != b) throw invalid_input("schedule: ds has " + std::to_string(ds.size()) + " entries, expected B");
  if (alphas[0] != ComplexRational(-1) || !cs[0].is_zero()) {
    throw invalid_input("schedule: the first numerator parameter must be -n (alpha_1 = -1, c_1 = 0)");
  }
}

ComplexRational ParameterSchedule::numerator_at(std::size_t i, unsigned n) const {
  return alphas.at(i) * ComplexRational(static_cast<long>(n)) + cs.at(i);
}

ComplexRational ParameterSchedule::denominator_at(std::size_t j, unsigned n) const {
  return betas.at(j) * ComplexRational(static_cast<long>(n)) + ds.at(j) + ComplexRational(1);
}

bool ParameterSchedule::is_degenerate() const {
  if (alphas.size() != betas.size() + 1) return false;
  for (std::size_t j = 0; j < betas.size(); ++j) {
    if (betas[j] != alphas[j + 1]) return false;
  }
  return true;
}

namespace {

nlohmann::json to_json_list(const std::vector<ComplexRational>& v) {
  auto out = nlohmann::json::array();
  for (const auto& c : v) out.push_back(c.to_string());
  return out;
}

std::vector<ComplexRational> from_json_list(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw invalid_input(std::string("schedule: missing field '") + key + "'");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw invalid_input(std::string("schedule: field '") + key + "' must be a list");
  std::vector<ComplexRational> out;
  for (const auto& item : arr) {
    if (item.is_string()) {
      out.push_back(ComplexRational::parse(item.get<std::string>()));
    } else if (item.is_number_integer()) {
      out.emplace_back(item.get<long>());
    } else {
      throw invalid_input(std::string("schedule: entries of '") + key + "' must be strings like \"1/2-1/1*i\"");
    }
  }
  return out;
}

}  // namespace

std::string ParameterSchedule::serialize() const {
  nlohmann::ordered_json doc;
  doc["A"] = alphas.size();
  doc["B"] = betas.size();
  doc["alphas"] = to_json_list(alphas);
  doc["cs"] = to_json_list(cs);
  doc["betas"] = to_json_list(betas);
  doc["ds"] = to_json_list(ds);
  return doc.dump(2) + "\n";
}

ParameterSchedule ParameterSchedule::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input(std::string("schedule: not valid JSON: ") + e.what());
  }
  ParameterSchedule s;
  s.alphas = from_json_list(doc, "alphas");
  s.cs = from_json_list(doc, "cs");
  s.betas = from_json_list(doc, "betas");
  s.ds = from_json_list(doc, "ds");
  if (doc.contains("A") && doc["A"].get<std::size_t>() != s.alphas.size()) {
    throw invalid_input("schedule: field A disagrees with the length of alphas");
  }
  if (doc.contains("B") && doc["B"].get<std::size_t>() != s.betas.size()) {
    throw invalid_input("schedule: field B disagrees with the length of betas");
  }
  s.validate();
  return s;
}

std::string ParameterSchedule::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ParameterSchedule ParameterSchedule::lemniscate_family(const ComplexRational& k) {
  ParameterSchedule s;
  s.alphas = {ComplexRational(-1), k};
  s.cs = {ComplexRational(0), ComplexRational(1)};
  s.betas = {k};
  s.ds = {ComplexRational(1)};
  return s;
}

ParameterSchedule ParameterSchedule::shifted_family(const std::vector<ComplexRational>& tail_alphas) {
  ParameterSchedule s;
  s.alphas = {ComplexRational(-1)};
  s.cs = {ComplexRational(0)};
  for (const auto& a : tail_alphas) {
    s.alphas.push_back(a);
    s.cs.emplace_back(0);
    s.betas.push_back(a);
    s.ds.emplace_back(0);
  }
  return s;
}

}  // namespace hypzero

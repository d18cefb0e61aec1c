#pragma once

// Weight-table serialization.  Tables travel as versioned JSON with every
// real number carried as a decimal string (binary floats are never written
// for weights): the decimal digit count exceeds the binary working precision,
// so write -> read -> write is byte-stable at a fixed working precision and
// no accuracy is lost in transit.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "singquad/stencil.hpp"
#include "singquad/weightgen.hpp"

namespace singquad {

inline constexpr const char* kWeightTableSchema = "singquad/weight-table-v1";

namespace detail {

// Decimal digits that uniquely identify a binary value at the given working
// precision (so parsing the string back reproduces the exact bits).
inline int serialization_digits(int working_precision) {
  return working_precision + 6;
}

}  // namespace detail

inline nlohmann::ordered_json table_to_json(const WeightTable& table) {
  const int sd = detail::serialization_digits(table.working_precision);
  nlohmann::ordered_json j;
  j["schema"] = kWeightTableSchema;
  j["kernel"] = kernel_name(table.kernel);
  j["alpha"] = table.alpha.str(sd);
  j["p"] = table.p;
  j["digits"] = table.digits;
  nlohmann::ordered_json weights = nlohmann::ordered_json::array();
  for (const auto& e : table.entries) {
    nlohmann::ordered_json w;
    w["gamma"] = {e.gamma.a, e.gamma.b};
    w["value"] = e.value.str(sd);
    weights.push_back(std::move(w));
  }
  j["weights"] = std::move(weights);
  j["provenance"] = {
      {"h_base", table.h_base},
      {"richardson_stages", table.levels - 1},
      {"working_precision", table.working_precision},
      {"regularizer_exponent", table.k},
  };
  return j;
}

inline std::string table_to_string(const WeightTable& table) {
  return table_to_json(table).dump(2) + "\n";
}

inline WeightTable table_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("schema").get<std::string>() != kWeightTableSchema) {
      throw DomainError("weight table: unsupported schema '" +
                        j.at("schema").get<std::string>() + "'");
    }
    WeightTable t;
    t.kernel = parse_kernel(j.at("kernel").get<std::string>());
    t.alpha = XReal(j.at("alpha").get<std::string>());
    check_alpha(t.alpha);
    t.p = j.at("p").get<int>();
    t.digits = j.at("digits").get<int>();
    const auto& prov = j.at("provenance");
    t.h_base = prov.at("h_base").get<double>();
    t.levels = prov.at("richardson_stages").get<int>() + 1;
    t.working_precision = prov.at("working_precision").get<int>();
    t.k = prov.at("regularizer_exponent").get<int>();
    if (t.digits < 0 || t.digits > t.working_precision - 10) {
      throw DomainError("weight table: claimed digits exceed working_precision - 10");
    }
    // The off-diagonal stencil below p = 2 is empty: index_set refuses to
    // build it for weight generation, but the bare-rule table is a perfectly
    // good artifact with zero entries.
    std::vector<MultiIndex> expected;
    if (!(t.kernel == Kernel::off_diag && t.p <= 1)) expected = index_set(t.kernel, t.p);
    const auto& weights = j.at("weights");
    if (!weights.is_array() || weights.size() != expected.size()) {
      throw DomainError("weight table: weight count does not match the stencil");
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& w = weights.at(i);
      const auto& g = w.at("gamma");
      if (!g.is_array() || g.size() != 2) {
        throw DomainError("weight table: gamma must be a pair [a, b]");
      }
      MultiIndex gamma{g.at(0).get<int>(), g.at(1).get<int>()};
      if (gamma != expected[i]) {
        throw DomainError("weight table: gamma sequence deviates from the canonical ordering");
      }
      t.entries.push_back({gamma, XReal(w.at("value").get<std::string>())});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("weight table: malformed JSON document: ") + e.what());
  }
}

inline WeightTable table_from_string(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("weight table: JSON parse failure: ") + e.what());
  }
  return table_from_json(j);
}

inline void save_table(const std::string& path, const WeightTable& table) {
  std::ofstream out(path);
  if (!out) throw DomainError("weight table: cannot open '" + path + "' for writing");
  out << table_to_string(table);
  if (!out) throw DomainError("weight table: write to '" + path + "' failed");
}

inline WeightTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("weight table: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return table_from_string(buf.str());
}

}  // namespace singquad

#pragma once

// JSON and CSV forms of the analysis results.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "penrose/mass_functionals.hpp"
#include "penrose/mu_bubble.hpp"
#include "penrose/trumpet.hpp"

namespace penrose {

using Json = nlohmann::json;

// Column-major description, row-major data. Missing values are NaN in memory,
// "nan" in CSV and null in JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  Json to_json() const;
  void write_csv(std::ostream& os) const;
  std::string csv() const;
};

Json to_json(const PenroseReport& rep);
Json to_json(const MuBubbleSolution& sol);
Json to_json(const DiameterReport& rep);
Json to_json(const HorizonSequence& seq);
Json to_json(const RigidityTrace& trace);
Json to_json(const TrumpetParams& params);
Json to_json(const TrumpetVerification& v);

Table horizon_table(const HorizonSequence& seq);
Table rigidity_table(const RigidityTrace& trace);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace penrose

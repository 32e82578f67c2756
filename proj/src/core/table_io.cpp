#include "table_io.hpp"

#include <json.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

using nlohmann::ordered_json;

std::string spectral_table_to_json(const SpectralTable& table) {
  const BoxGeometry& g = table.geometry();
  ordered_json doc;
  doc["format"] = "totmom-spectral-table";
  doc["version"] = kTableFormatVersion;
  doc["statistics"] = statistics_name(table.statistics());
  doc["geometry"] = {{"d", g.dim()}, {"L", g.side()}, {"N", g.particles()}};
  doc["units"] = {{"hbar", table.units().hbar}, {"mass", table.units().mass}, {"k_B", table.units().kB}};
  doc["e_max"] = table.e_max();
  if (table.reference_beta()) {
    doc["tail_bound"] = {{"beta", *table.reference_beta()}, {"bound", table.tail_bound()}};
  } else {
    doc["tail_bound"] = nullptr;
  }
  ordered_json entries = ordered_json::array();
  for (const auto& [Q, levels] : table.entries()) {
    ordered_json q = ordered_json::array();
    for (int i = 0; i < Q.dim; ++i) q.push_back(Q[i]);
    entries.push_back({{"Q", q}, {"energies", levels}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1);
}

SpectralTable spectral_table_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("spectral table: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "totmom-spectral-table")
      fail(ErrorCode::Config, "spectral table: unknown format tag");
    const int version = doc.at("version").get<int>();
    if (version != kTableFormatVersion)
      fail(ErrorCode::Config, "spectral table: unsupported version " + std::to_string(version));
    const auto& g = doc.at("geometry");
    BoxGeometry geom(g.at("d").get<int>(), g.at("L").get<double>(), g.at("N").get<std::int64_t>());
    Units units;
    units.hbar = doc.at("units").at("hbar").get<double>();
    units.mass = doc.at("units").at("mass").get<double>();
    units.kB = doc.at("units").at("k_B").get<double>();
    SpectralTable table(geom, parse_statistics(doc.at("statistics").get<std::string>()), units,
                        doc.at("e_max").get<double>());
    if (!doc.at("tail_bound").is_null())
      table.set_tail_bound(doc["tail_bound"].at("beta").get<double>(), doc["tail_bound"].at("bound").get<double>());
    for (const auto& e : doc.at("entries")) {
      const auto& q = e.at("Q");
      if (static_cast<int>(q.size()) != geom.dim()) fail(ErrorCode::Config, "spectral table: Q has wrong dimension");
      DualVector Q = DualVector::zero(geom.dim());
      for (int i = 0; i < geom.dim(); ++i) Q[i] = q[static_cast<std::size_t>(i)].get<std::int64_t>();
      auto levels = e.at("energies").get<std::vector<double>>();
      if (!std::is_sorted(levels.begin(), levels.end())) fail(ErrorCode::Config, "spectral table: energies not ascending");
      table.mutable_entries()[Q] = std::move(levels);
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("spectral table: ") + e.what());
  }
}

}  // namespace totmom

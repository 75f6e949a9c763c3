#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mop/channel.hpp"

namespace mop {

using nlohmann::json;

namespace {

Complex parse_entry(const json& e, std::size_t m, std::size_t r, std::size_t c) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    std::ostringstream os;
    os << "Kraus matrix " << m << ": entry (" << r << "," << c
       << ") must be a [re, im] pair of numbers";
    throw ChannelError(os.str());
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

std::vector<ComplexMatrix> kraus_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ChannelError(std::string("channel file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ChannelError("channel file must hold a JSON object");
  if (!doc.contains("d") || !doc["d"].is_number_integer())
    throw ChannelError("channel file: missing integer field \"d\"");
  if (!doc.contains("kraus") || !doc["kraus"].is_array())
    throw ChannelError("channel file: missing array field \"kraus\"");
  const auto d = doc["d"].get<long long>();
  if (d < 1) throw ChannelError("channel file: \"d\" must be positive");
  const json& list = doc["kraus"];
  if (list.empty()) throw ChannelError("channel file: \"kraus\" is empty");

  std::vector<ComplexMatrix> kraus;
  kraus.reserve(list.size());
  for (std::size_t m = 0; m < list.size(); ++m) {
    const json& rows = list[m];
    if (!rows.is_array() || static_cast<long long>(rows.size()) != d) {
      std::ostringstream os;
      os << "Kraus matrix " << m << " must have " << d << " rows";
      if (rows.is_array()) os << ", found " << rows.size();
      throw ChannelError(os.str());
    }
    ComplexMatrix k(d, d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const json& row = rows[r];
      if (!row.is_array() || static_cast<long long>(row.size()) != d) {
        std::ostringstream os;
        os << "Kraus matrix " << m << " is not square: row " << r << " has "
           << (row.is_array() ? row.size() : 0) << " entries, expected " << d;
        throw ChannelError(os.str());
      }
      for (std::size_t c = 0; c < row.size(); ++c) k(r, c) = parse_entry(row[c], m, r, c);
    }
    kraus.push_back(std::move(k));
  }
  return kraus;
}

QuantumChannel channel_from_json(const std::string& text) {
  return validate_channel(kraus_from_json(text));
}

std::string channel_to_json(const QuantumChannel& channel) {
  json list = json::array();
  for (const auto& k : channel.kraus()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c)
        row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(std::move(row));
    }
    list.push_back(std::move(rows));
  }
  json doc = {{"d", channel.dim()}, {"kraus", std::move(list)}};
  return doc.dump();
}

QuantumChannel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChannelError("cannot open channel file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return channel_from_json(ss.str());
}

}  // namespace mop

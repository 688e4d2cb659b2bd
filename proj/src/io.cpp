#include "greennet/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace greennet {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open file '" + path + "'");
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot write file '" + path + "'");
  }
  out << content;
}

NetworkData parse_network_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("network file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("network file: top level must be an object");
  }
  if (doc.contains("version") && doc["version"] != 1) {
    throw ValidationError("network file: unsupported version");
  }

  NetworkData data;
  try {
    if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
      throw ValidationError("network file: missing 'vertices' array");
    }
    for (const auto& v : doc["vertices"]) {
      data.vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    if (doc.contains("edges")) {
      for (const auto& e : doc["edges"]) {
        NetworkData::RawEdge edge;
        edge.u = e.at("u").is_string() ? e.at("u").get<std::string>() : e.at("u").dump();
        edge.v = e.at("v").is_string() ? e.at("v").get<std::string>() : e.at("v").dump();
        edge.c = e.at("c").get<double>();
        data.edges.push_back(std::move(edge));
      }
    }
    if (doc.contains("weight") && !doc["weight"].is_null()) {
      std::map<std::string, double> w;
      for (const auto& [label, value] : doc["weight"].items()) {
        w[label] = value.get<double>();
      }
      data.weight = std::move(w);
    }
    data.lambda = doc.value("lambda", 0.0);
    data.normalize = doc.value("normalize", false);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("network file: malformed field: ") + e.what());
  }
  return data;
}

NetworkData parse_network_text(const std::string& text) {
  NetworkData data;
  std::map<std::string, bool> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string u, v;
    double c;
    if (!(fields >> u)) {
      continue;  // blank
    }
    if (!(fields >> v >> c)) {
      throw ValidationError("network file: line " + std::to_string(lineno) +
                            ": expected 'u v c'");
    }
    for (const auto& label : {u, v}) {
      if (!seen.count(label)) {
        seen[label] = true;
        data.vertices.push_back(label);
      }
    }
    data.edges.push_back({u, v, c});
  }
  if (data.vertices.empty()) {
    throw ValidationError("network file: no edges found");
  }
  return data;
}

NetworkData read_network_file(const std::string& path, const std::optional<std::string>& format) {
  const std::string text = read_file(path);
  std::string fmt;
  if (format.has_value()) {
    fmt = *format;
  } else {
    const auto pos = text.find_first_not_of(" \t\r\n");
    fmt = (pos != std::string::npos && text[pos] == '{') ? "json" : "txt";
  }
  if (fmt == "json") {
    return parse_network_json(text);
  }
  if (fmt == "txt") {
    return parse_network_text(text);
  }
  throw ValidationError("unknown network format '" + fmt + "' (expected json or txt)");
}

std::string matrix_to_json(const MatrixFile& m) {
  json doc;
  doc["order"] = m.order;
  json rows = json::array();
  for (Index i = 0; i < m.rows.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.rows.cols(); ++j) {
      row.push_back(m.rows(i, j));
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string matrix_to_text(const MatrixFile& m) {
  std::ostringstream out;
  out << "# order:";
  for (const auto& label : m.order) {
    out << ' ' << label;
  }
  out << '\n';
  for (Index i = 0; i < m.rows.rows(); ++i) {
    for (Index j = 0; j < m.rows.cols(); ++j) {
      if (j > 0) {
        out << ' ';
      }
      out << format_double(m.rows(i, j));
    }
    out << '\n';
  }
  return out.str();
}

MatrixFile matrix_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
    MatrixFile m;
    for (const auto& label : doc.at("order")) {
      m.order.push_back(label.get<std::string>());
    }
    const auto& rows = doc.at("rows");
    const Index n = static_cast<Index>(rows.size());
    if (n != static_cast<Index>(m.order.size())) {
      throw ValidationError("matrix file: row count differs from order length");
    }
    m.rows.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(rows[i].size()) != n) {
        throw ValidationError("matrix file: matrix is not square");
      }
      for (Index j = 0; j < n; ++j) {
        m.rows(i, j) = rows[i][j].get<double>();
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("matrix file: invalid JSON: ") + e.what());
  }
}

MatrixFile matrix_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# order:", 0) != 0) {
    throw ValidationError("matrix file: missing '# order:' header");
  }
  MatrixFile m;
  {
    std::istringstream fields(header.substr(8));
    std::string label;
    while (fields >> label) {
      m.order.push_back(label);
    }
  }
  const Index n = static_cast<Index>(m.order.size());
  m.rows.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!(in >> m.rows(i, j))) {
        throw ValidationError("matrix file: expected " + std::to_string(n * n) + " values");
      }
    }
  }
  return m;
}

}  // namespace greennet

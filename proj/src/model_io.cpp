#include "norden/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace norden {

using json = nlohmann::ordered_json;

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ModelFormatError(where, what); }

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "/" + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

const json& array_of(const json& v, std::size_t size, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  if (size != 0 && v.size() != size) fail(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(v.size()));
  return v;
}

DenseTensor read_matrix(const json& v, int dim, const std::string& where, std::vector<Variance> variance) {
  array_of(v, static_cast<std::size_t>(dim), where);
  for (int i = 0; i < dim; ++i) array_of(v[static_cast<std::size_t>(i)], static_cast<std::size_t>(dim), where + "/" + std::to_string(i));
  return DenseTensor::generate(dim, std::move(variance), [&](int i, int j) {
    return number(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                  where + "/" + std::to_string(i) + "/" + std::to_string(j));
  });
}

Polynomial read_polynomial(const json& v, int vars, const std::string& where) {
  if (v.is_number()) return Polynomial::constant(vars, number(v, where));
  array_of(v, 0, where);
  std::vector<Monomial> terms;
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::string w = where + "/" + std::to_string(t);
    const json& term = array_of(v[t], 2, w);
    Monomial m;
    m.coeff = number(term[0], w + "/0");
    const json& exps = array_of(term[1], static_cast<std::size_t>(vars), w + "/1");
    for (std::size_t e = 0; e < exps.size(); ++e) {
      const int x = integer(exps[e], w + "/1/" + std::to_string(e));
      if (x < 0) fail(w + "/1/" + std::to_string(e), "exponent must be non-negative");
      m.exponents.push_back(x);
    }
    terms.push_back(std::move(m));
  }
  return Polynomial(vars, std::move(terms));
}

PolyMatrix read_poly_matrix(const json& v, int dim, const std::string& where) {
  array_of(v, static_cast<std::size_t>(dim), where);
  PolyMatrix m(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const std::string wi = where + "/" + std::to_string(i);
    array_of(v[static_cast<std::size_t>(i)], static_cast<std::size_t>(dim), wi);
    for (int j = 0; j < dim; ++j)
      m[static_cast<std::size_t>(i)].push_back(
          read_polynomial(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], dim, wi + "/" + std::to_string(j)));
  }
  return m;
}

DenseTensor read_structure_constants(const json& v, int dim, const std::string& where) {
  array_of(v, 0, where);
  DenseTensor c = DenseTensor::vector_valued(dim, 2);
  DenseTensor given = DenseTensor::vector_valued(dim, 2);  // 1 where listed explicitly
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::string w = where + "/" + std::to_string(t);
    const json& e = array_of(v[t], 4, w);
    int idx[3];
    for (int q = 0; q < 3; ++q) {
      idx[q] = integer(e[static_cast<std::size_t>(q)], w + "/" + std::to_string(q));
      if (idx[q] < 1 || idx[q] > dim) fail(w + "/" + std::to_string(q), "index must lie in 1.." + std::to_string(dim));
      --idx[q];
    }
    const double value = number(e[3], w + "/3");
    const auto [i, j, k] = std::tuple{idx[0], idx[1], idx[2]};
    if (given(k, i, j) != 0.0) fail(w, "duplicate entry");
    c(k, i, j) = value;
    given(k, i, j) = 1.0;
  }
  // Entries listed for (i,j) only imply the antisymmetric partner.
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (given(k, i, j) != 0.0 && given(k, j, i) == 0.0 && i != j) c(k, j, i) = -c(k, i, j);
  return c;
}

Provenance read_provenance(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  Provenance p;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (it.value().is_string()) p.emplace_back(it.key(), it.value().get<std::string>());
    else p.emplace_back(it.key(), it.value().dump());
  }
  return p;
}

std::string num(double x) {
  if (x == 0.0) return "0.0";  // also folds -0.0
  return json(x).dump();
}

std::string str(const std::string& s) { return json(s).dump(); }

void write_matrix(std::ostringstream& os, const DenseTensor& m, const std::string& indent) {
  os << "[\n";
  for (int i = 0; i < m.dim(); ++i) {
    os << indent << "  [";
    for (int j = 0; j < m.dim(); ++j) os << (j ? ", " : "") << num(m(i, j));
    os << "]" << (i + 1 < m.dim() ? "," : "") << "\n";
  }
  os << indent << "]";
}

void write_poly_matrix(std::ostringstream& os, const PolyMatrix& m) {
  os << "[\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << "    [\n";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      os << "      [";
      const auto& terms = m[i][j].terms();
      for (std::size_t t = 0; t < terms.size(); ++t) {
        os << (t ? ", " : "") << "[" << num(terms[t].coeff) << ", [";
        for (std::size_t e = 0; e < terms[t].exponents.size(); ++e) os << (e ? ", " : "") << terms[t].exponents[e];
        os << "]]";
      }
      os << "]" << (j + 1 < m[i].size() ? "," : "") << "\n";
    }
    os << "    ]" << (i + 1 < m.size() ? "," : "") << "\n";
  }
  os << "  ]";
}

}  // namespace

Model parse_model(const std::string& text, const std::string& fallback_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto p = what.find(": "); p != std::string::npos) what = what.substr(p + 2);
    throw ModelFormatError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON: " + what);
  }
  if (!doc.is_object()) fail("/", "expected a JSON object");

  const std::string kind = [&] {
    const json& k = field(doc, "kind", "");
    if (!k.is_string()) fail("/kind", "expected a string");
    return k.get<std::string>();
  }();
  const int dim = integer(field(doc, "dim", ""), "/dim");
  if (dim < 2 || dim % 2 != 0) fail("/dim", "dimension must be even and >= 2");

  std::string name = fallback_name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail("/name", "expected a string");
    name = it->get<std::string>();
  }

  Model m;
  if (kind == "lie_algebra") {
    DenseTensor g = read_matrix(field(doc, "metric", ""), dim, "/metric", {Variance::lower, Variance::lower});
    DenseTensor J = read_matrix(field(doc, "J", ""), dim, "/J", {Variance::upper, Variance::lower});
    DenseTensor c = read_structure_constants(field(doc, "structure_constants", ""), dim, "/structure_constants");
    m = make_lie_model(name, std::move(g), std::move(J), std::move(c));
  } else if (kind == "chart") {
    ChartData ch;
    ch.metric = read_poly_matrix(field(doc, "metric_poly", ""), dim, "/metric_poly");
    ch.J = read_poly_matrix(field(doc, "J_poly", ""), dim, "/J_poly");
    const json& pt = array_of(field(doc, "point", ""), static_cast<std::size_t>(dim), "/point");
    for (std::size_t i = 0; i < pt.size(); ++i) ch.point.push_back(number(pt[i], "/point/" + std::to_string(i)));
    if (auto it = doc.find("fd_step"); it != doc.end()) {
      ch.fd_step = number(*it, "/fd_step");
      if (!(ch.fd_step > 0.0)) fail("/fd_step", "must be positive");
    }
    m = make_chart_model(name, dim, std::move(ch));
    const double tol = 1e-12 * (1.0 + m.structure.g.max_abs());
    if (auto it = doc.find("metric"); it != doc.end()) {
      const DenseTensor g = read_matrix(*it, dim, "/metric", {Variance::lower, Variance::lower});
      if (max_abs_diff(g, m.structure.g) > tol) fail("/metric", "does not match metric_poly at the point");
    }
    if (auto it = doc.find("J"); it != doc.end()) {
      const DenseTensor J = read_matrix(*it, dim, "/J", {Variance::upper, Variance::lower});
      if (max_abs_diff(J, m.structure.J) > tol) fail("/J", "does not match J_poly at the point");
    }
  } else {
    fail("/kind", "expected \"lie_algebra\" or \"chart\"");
  }
  if (auto it = doc.find("provenance"); it != doc.end()) m.provenance = read_provenance(*it, "/provenance");
  return m;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path.stem().string());
}

std::string emit_model(const Model& m) {
  std::ostringstream os;
  const int d = m.structure.dim();
  os << "{\n";
  os << "  \"name\": " << str(m.name) << ",\n";
  os << "  \"kind\": " << str(m.frame.kind == FrameKind::chart ? "chart" : "lie_algebra") << ",\n";
  os << "  \"dim\": " << d << ",\n";
  os << "  \"metric\": ";
  write_matrix(os, m.structure.g, "  ");
  os << ",\n  \"J\": ";
  write_matrix(os, m.structure.J, "  ");
  if (m.frame.kind == FrameKind::lie_algebra) {
    os << ",\n  \"structure_constants\": [";
    const auto& c = m.frame.structure_constants;
    bool first = true;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          if (c(k, i, j) == 0.0 && c(k, j, i) == 0.0) continue;
          os << (first ? "\n" : ",\n") << "    [" << i + 1 << ", " << j + 1 << ", " << k + 1 << ", " << num(c(k, i, j)) << "]";
          first = false;
          if (c(k, j, i) != -c(k, i, j))
            os << ",\n    [" << j + 1 << ", " << i + 1 << ", " << k + 1 << ", " << num(c(k, j, i)) << "]";
        }
    // Diagonal entries are not implied by antisymmetry; keep them if present.
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        if (c(k, i, i) != 0.0) {
          os << (first ? "\n" : ",\n") << "    [" << i + 1 << ", " << i + 1 << ", " << k + 1 << ", " << num(c(k, i, i)) << "]";
          first = false;
        }
    os << (first ? "]" : "\n  ]");
  } else {
    const auto& ch = m.frame.chart;
    os << ",\n  \"metric_poly\": ";
    write_poly_matrix(os, ch.metric);
    os << ",\n  \"J_poly\": ";
    write_poly_matrix(os, ch.J);
    os << ",\n  \"point\": [";
    for (std::size_t i = 0; i < ch.point.size(); ++i) os << (i ? ", " : "") << num(ch.point[i]);
    os << "],\n  \"fd_step\": " << num(ch.fd_step);
  }
  if (!m.provenance.empty()) {
    os << ",\n  \"provenance\": {";
    for (std::size_t i = 0; i < m.provenance.size(); ++i)
      os << (i ? "," : "") << "\n    " << str(m.provenance[i].first) << ": " << str(m.provenance[i].second);
    os << "\n  }";
  }
  os << "\n}\n";
  return os.str();
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << emit_model(model);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace norden

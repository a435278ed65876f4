#include "cutloci/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cutloci/error.hpp"

namespace cutloci {
namespace {

void write_string(std::ostringstream& out, const std::string& s) {
  // Reuse the library's escaping for strings.
  out << Json(s).dump();
}

void write(std::ostringstream& out, const Json& v, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        write_string(out, key);
        out << (indent < 0 ? ":" : ": ");
        write(out, item, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
      out << '[';
      bool first = true;
      for (const Json& item : v) {
        if (!first) out << (flat && indent >= 0 ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write(out, item, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (std::isfinite(x)) out << format_double(x);
      else out << "null";
      return;
    }
    default:
      out << v.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& value, int indent) {
  std::ostringstream out;
  write(out, value, indent, 0);
  if (indent >= 0) out << '\n';
  return out.str();
}

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ParseError, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json matrix_to_json(const Mat& a) {
  Json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  j["field"] = "real";
  Json data = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) data.push_back(a(r, c));
  j["data"] = std::move(data);
  return j;
}

Json matrix_to_json(const CMat& a) {
  Json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  j["field"] = "complex";
  Json data = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      data.push_back(Json::array({a(r, c).real(), a(r, c).imag()}));
    }
  j["data"] = std::move(data);
  return j;
}

namespace {

std::pair<int, int> matrix_shape(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw Error(ErrorCode::ParseError, "matrix JSON needs rows, cols and data");
  }
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  if (rows < 1 || cols < 1 || j.at("data").size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::ParseError, "matrix data does not match rows x cols");
  }
  return {rows, cols};
}

}  // namespace

Mat real_matrix_from_json(const Json& j) {
  if (j.value("field", std::string("real")) != "real") {
    throw Error(ErrorCode::ParseError, "expected a real matrix");
  }
  const auto [rows, cols] = matrix_shape(j);
  const Vec data = vec_from_json(j.at("data"));
  Mat a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a(r, c) = data(r * cols + c);
  return a;
}

CMat complex_matrix_from_json(const Json& j) {
  if (j.value("field", std::string("complex")) == "real") return real_matrix_from_json(j).cast<Complex>();
  const auto [rows, cols] = matrix_shape(j);
  const Json& data = j.at("data");
  CMat a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const Json& entry = data.at(static_cast<std::size_t>(r * cols + c));
      if (!entry.is_array() || entry.size() != 2) {
        throw Error(ErrorCode::ParseError, "complex matrix entries must be [re, im] pairs");
      }
      a(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  return a;
}

Json minimizer_set_to_json(const MinimizerSet& m) {
  Json j;
  j["distance"] = m.distance;
  j["multiplicity"] = m.multiplicity();
  j["saturated"] = m.saturated;
  if (!m.family_tag.empty()) j["family_tag"] = m.family_tag;
  Json mins = Json::array();
  for (const ManifoldPoint& p : m.minimizers) mins.push_back(vec_to_json(p.coords));
  j["minimizers"] = std::move(mins);
  return j;
}

Json checks_to_json(const std::vector<Check>& checks) {
  Json arr = Json::array();
  for (const Check& c : checks) {
    Json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["bound"] = c.bound;
    j["pass"] = c.pass;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json cut_cloud_to_json(const Submanifold& n, std::uint64_t seed, const CutCloud& cloud) {
  Json j;
  j["submanifold"] = n.to_string();
  j["ambient"] = n.ambient.to_string();
  j["seed"] = seed;
  Json samples = Json::array();
  for (const CutSample& s : cloud.samples) {
    Json e;
    e["foot"] = vec_to_json(s.foot.coords);
    e["dir"] = vec_to_json(s.direction.vec);
    e["rho"] = s.rho;
    e["cut"] = vec_to_json(s.cut_point.coords);
    e["mult"] = s.multiplicity;
    e["saturated"] = s.saturated;
    e["class"] = std::string(to_string(s.classification));
    if (!s.family_tag.empty()) e["family_tag"] = s.family_tag;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  Json unresolved = Json::array();
  for (const UnresolvedSample& u : cloud.unresolved) {
    Json e;
    e["foot"] = vec_to_json(u.foot.coords);
    e["dir"] = vec_to_json(u.direction.vec);
    e["reason"] = u.reason;
    unresolved.push_back(std::move(e));
  }
  j["unresolved"] = std::move(unresolved);
  return j;
}

std::string cut_cloud_to_csv(const Submanifold& n, std::uint64_t seed, const CutCloud& cloud) {
  std::ostringstream out;
  out << "# lossy export (no family_tag, no unresolved samples); submanifold=" << n.to_string()
      << " ambient=" << n.ambient.to_string() << " seed=" << seed << '\n';
  const Eigen::Index dim = n.ambient.coord_size();
  const auto columns = [&](const char* prefix) {
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << prefix << i;
  };
  out << "foot_index,dir_index";
  columns("foot");
  columns("dir");
  out << ",rho";
  columns("cut");
  out << ",mult,saturated,class\n";
  for (const CutSample& s : cloud.samples) {
    out << s.foot_index << ',' << s.dir_index;
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(s.foot.coords(i));
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(s.direction.vec(i));
    out << ',' << format_double(s.rho);
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(s.cut_point.coords(i));
    out << ',' << s.multiplicity << ',' << (s.saturated ? "true" : "false") << ',' << to_string(s.classification)
        << '\n';
  }
  return out.str();
}

}  // namespace cutloci

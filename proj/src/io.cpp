#include "specshift/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace specshift {

using json = nlohmann::json;

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  // Shortest representation that parses back to the same bits.
  for (int prec = 1; prec <= 17; ++prec) {
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, prec);
    *res.ptr = '\0';
    double back = std::strtod(buf, nullptr);
    if (back == x || (std::isnan(back) && std::isnan(x))) return std::string(buf, res.ptr);
  }
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

static std::vector<std::vector<double>> read_square(const json& j, const char* key, int dim) {
  const json& a = j.at(key);
  if (!a.is_array() || static_cast<int>(a.size()) != dim)
    throw validation_error(std::string("matrix json: '") + key + "' must be a " +
                           std::to_string(dim) + "-row array");
  std::vector<std::vector<double>> out;
  out.reserve(a.size());
  for (const auto& row : a) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw validation_error(std::string("matrix json: ragged row in '") + key + "'");
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number()) throw validation_error("matrix json: non-numeric entry");
      r.push_back(v.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

HermitianOperator parse_matrix_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error(std::string("matrix json: parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_integer())
    throw validation_error("matrix json: object with integer 'dim' required");
  int dim = j.at("dim").get<int>();
  if (dim < 1) throw validation_error("matrix json: dim must be positive");
  if (!j.contains("re")) throw validation_error("matrix json: 're' required");
  auto re = read_square(j, "re", dim);
  std::vector<std::vector<double>> im(static_cast<std::size_t>(dim),
                                      std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  if (j.contains("im")) im = read_square(j, "im", dim);
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      m(r, c) = cplx(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                     im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  return HermitianOperator(std::move(m));
}

HermitianOperator load_matrix(const std::string& path) {
  return parse_matrix_json(read_file(path));
}

std::string matrix_to_json(const Matrix& m) {
  json j;
  j["dim"] = m.rows();
  json re = json::array(), im = json::array();
  bool any_im = false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
      if (m(r, c).imag() != 0.0) any_im = true;
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  j["re"] = std::move(re);
  if (any_im) j["im"] = std::move(im);
  return j.dump(2);
}

std::string piecewise_to_json(const PiecewisePolynomial& P) {
  json j;
  j["breakpoints"] = P.breakpoints();
  json pieces = json::array();
  for (std::size_t k = 0; k < P.piece_count(); ++k) pieces.push_back(P.piece(k));
  j["coefficients"] = std::move(pieces);
  j["left_tail"] = P.left_tail_value();
  j["right_tail"] = P.right_tail_value();
  return j.dump(2);
}

PiecewisePolynomial parse_piecewise_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error(std::string("piecewise json: parse failure: ") + e.what());
  }
  try {
    auto breaks = j.at("breakpoints").get<std::vector<double>>();
    auto coeffs = j.at("coefficients").get<std::vector<std::vector<double>>>();
    double lt = j.at("left_tail").get<double>();
    double rt = j.at("right_tail").get<double>();
    return PiecewisePolynomial(std::move(breaks), std::move(coeffs), lt, rt);
  } catch (const json::exception& e) {
    throw validation_error(std::string("piecewise json: bad schema: ") + e.what());
  }
}

std::string sample_csv(const std::vector<double>& grid,
                       const std::vector<std::string>& names,
                       const std::vector<const PiecewisePolynomial*>& funcs) {
  if (names.size() != funcs.size())
    throw validation_error("sample_csv: name/function count mismatch");
  std::ostringstream out;
  out << "t";
  for (const auto& n : names) out << "," << n;
  out << "\n";
  for (double t : grid) {
    out << format_double(t);
    for (const auto* f : funcs) out << "," << format_double((*f)(t));
    out << "\n";
  }
  return out.str();
}

std::vector<double> make_grid(double min, double max, int count) {
  if (count < 2) throw validation_error("grid: count must be >= 2");
  if (!(min < max)) throw validation_error("grid: min must be below max");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] = min + (max - min) * i / (count - 1);
  return g;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw validation_error("write failure: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw validation_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace specshift

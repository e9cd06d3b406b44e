#include "varbw/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "varbw/errors.hpp"

namespace varbw {

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& path, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    raise(errc::parse_error,
          path + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path) {
  const std::string text = read_all(path);
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (t.header.empty()) {
      t.header = split_csv_line(line);
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != t.header.size())
      raise(errc::parse_error, path + ":" + std::to_string(lineno) +
                                   ": expected " + std::to_string(t.header.size()) +
                                   " columns, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) row.push_back(parse_number(c, path, lineno));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) raise(errc::parse_error, path + ": empty file");
  return t;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    // Try shorter forms that still round-trip.
    for (int prec = 1; prec <= 16; ++prec) {
      char attempt[40];
      std::snprintf(attempt, sizeof attempt, "%.*g", prec, v);
      if (std::strtod(attempt, nullptr) == v) return attempt;
    }
  }
  return buf;
}

BandwidthProfile read_profile_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_all(path));
  } catch (const nlohmann::json::exception& e) {
    raise(errc::parse_error, path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
    raise(errc::parse_error,
          path + ": expected object with 'breakpoints' and 'values'");
  const auto& jb = j["breakpoints"];
  const auto& jv = j["values"];
  if (!jb.is_array() || !jv.is_array())
    raise(errc::parse_error, path + ": 'breakpoints' and 'values' must be arrays");
  Eigen::VectorXd b(jb.size()), v(jv.size());
  for (std::size_t i = 0; i < jb.size(); ++i) {
    if (!jb[i].is_number())
      raise(errc::parse_error, path + ": breakpoint " + std::to_string(i) +
                                   " is not a number");
    b[i] = jb[i].get<double>();
  }
  for (std::size_t i = 0; i < jv.size(); ++i) {
    if (!jv[i].is_number())
      raise(errc::parse_error,
            path + ": value " + std::to_string(i) + " is not a number");
    v[i] = jv[i].get<double>();
  }
  return make_profile(b, v);
}

void write_profile_json(const std::string& path, const BandwidthProfile& p) {
  nlohmann::json j;
  j["breakpoints"] = nlohmann::json::array();
  j["values"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.breakpoints.size(); ++i)
    j["breakpoints"].push_back(p.breakpoints[i]);
  for (Eigen::Index i = 0; i < p.values.size(); ++i)
    j["values"].push_back(p.values[i]);
  write_text_file(path, j.dump(2) + "\n");
}

SpectralDensityPair read_density_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::vector<std::string> expected = {"zeta", "re_gminus", "im_gminus",
                                             "re_gplus", "im_gplus"};
  if (t.header != expected)
    raise(errc::parse_error,
          path + ":1: expected header zeta,re_gminus,im_gminus,re_gplus,im_gplus");
  Eigen::VectorXd zeta(t.rows.size());
  Eigen::VectorXcd gm(t.rows.size()), gp(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    zeta[i] = t.rows[i][0];
    gm[i] = Complex(t.rows[i][1], t.rows[i][2]);
    gp[i] = Complex(t.rows[i][3], t.rows[i][4]);
  }
  return make_density(std::move(zeta), std::move(gm), std::move(gp));
}

void write_density_csv(const std::string& path, const SpectralDensityPair& d) {
  std::ostringstream out;
  out << "zeta,re_gminus,im_gminus,re_gplus,im_gplus\n";
  for (Eigen::Index i = 0; i < d.zeta.size(); ++i)
    out << format_double(d.zeta[i]) << ',' << format_double(d.g_minus[i].real())
        << ',' << format_double(d.g_minus[i].imag()) << ','
        << format_double(d.g_plus[i].real()) << ','
        << format_double(d.g_plus[i].imag()) << '\n';
  write_text_file(path, out.str());
}

GridFunction read_grid_function_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != 2 && t.header.size() != 3)
    raise(errc::parse_error,
          path + ":1: expected 2 columns (x,<value>) or 3 columns (x,re,im)");
  Eigen::VectorXd x(t.rows.size());
  if (t.header.size() == 2) {
    Eigen::VectorXd v(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      x[i] = t.rows[i][0];
      v[i] = t.rows[i][1];
    }
    return GridFunction::real(std::move(x), v);
  }
  Eigen::VectorXcd v(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    x[i] = t.rows[i][0];
    v[i] = Complex(t.rows[i][1], t.rows[i][2]);
  }
  return GridFunction::complex(std::move(x), std::move(v));
}

void write_grid_function_csv(const std::string& path, const GridFunction& f,
                             const std::string& value_header) {
  std::ostringstream out;
  if (f.complex_valued) {
    out << "x,re,im\n";
    for (Eigen::Index i = 0; i < f.size(); ++i)
      out << format_double(f.x[i]) << ',' << format_double(f.v[i].real()) << ','
          << format_double(f.v[i].imag()) << '\n';
  } else {
    out << "x," << value_header << "\n";
    for (Eigen::Index i = 0; i < f.size(); ++i)
      out << format_double(f.x[i]) << ',' << format_double(f.v[i].real()) << '\n';
  }
  write_text_file(path, out.str());
}

void write_kernel_csv(const std::string& path, const Eigen::VectorXd& xs,
                      const Eigen::VectorXd& ys, const Eigen::MatrixXd& k) {
  std::ostringstream out;
  out << "x,y,k\n";
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (Eigen::Index j = 0; j < ys.size(); ++j)
      out << format_double(xs[i]) << ',' << format_double(ys[j]) << ','
          << format_double(k(i, j)) << '\n';
  write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::parse_error, "cannot write " + path);
  out << content;
}

}  // namespace varbw

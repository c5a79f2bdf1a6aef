#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "qdeform/errors.hpp"
#include "qdeform/l2q.hpp"

namespace qdeform {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Row {
  int sign;
  int m;
  double x;
  Complex value;
};

std::vector<Row> parse_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("CSV input is empty");
  if (line.rfind("sign,m,x,weight,re,im", 0) != 0) {
    throw FormatError("CSV header must be sign,m,x,weight,re,im");
  }
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string cell[6];
    for (auto& c : cell) {
      if (!std::getline(ls, c, ',')) {
        throw FormatError("CSV line " + std::to_string(lineno) + ": expected 6 columns");
      }
    }
    try {
      rows.push_back({std::stoi(cell[0]), std::stoi(cell[1]), std::stod(cell[2]),
                      Complex(std::stod(cell[4]), std::stod(cell[5]))});
    } catch (const std::exception&) {
      throw FormatError("CSV line " + std::to_string(lineno) + ": bad number");
    }
  }
  if (rows.empty()) throw FormatError("CSV input has no data rows");
  return rows;
}

LatticeFunction fill(const std::vector<Row>& rows, const LatticePtr& lattice) {
  LatticeFunction out{lattice, Eigen::VectorXcd::Zero(lattice->size()), 0.0};
  std::vector<bool> seen(static_cast<std::size_t>(lattice->size()), false);
  for (const Row& r : rows) {
    if ((r.sign != 1 && r.sign != -1) || r.m < lattice->m_min() || r.m > lattice->m_max()) {
      throw FormatError("row (" + std::to_string(r.sign) + ", " + std::to_string(r.m) +
                        ") is not a point of the lattice");
    }
    const Eigen::Index i = lattice->index(r.sign, r.m);
    const double x = lattice->x(i);
    if (std::abs(r.x - x) > 1e-13 * std::abs(x)) {
      throw FormatError("row (" + std::to_string(r.sign) + ", " + std::to_string(r.m) +
                        ") has x = " + fmt17(r.x) + ", lattice has " + fmt17(x));
    }
    if (seen[static_cast<std::size_t>(i)]) {
      throw FormatError("duplicate row for sign " + std::to_string(r.sign) +
                        ", m = " + std::to_string(r.m));
    }
    seen[static_cast<std::size_t>(i)] = true;
    out.samples(i) = r.value;
  }
  for (bool s : seen) {
    if (!s) throw FormatError("CSV does not cover every lattice point");
  }
  const Eigen::Index zp = lattice->index(1, lattice->m_max());
  const Eigen::Index zm = lattice->index(-1, lattice->m_max());
  out.value_at_zero = 0.5 * (out.samples(zp) + out.samples(zm));
  return out;
}

}  // namespace

void write_csv(const LatticeFunction& psi, std::ostream& out) {
  const QLattice& lat = *psi.lattice;
  out << "sign,m,x,weight,re,im\n";
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    out << lat.sign(i) << ',' << lat.exponent(i) << ',' << fmt17(lat.x(i)) << ','
        << fmt17(lat.weight(i)) << ',' << fmt17(psi.samples(i).real()) << ','
        << fmt17(psi.samples(i).imag()) << '\n';
  }
}

LatticeFunction read_csv(std::istream& in) {
  const std::vector<Row> rows = parse_rows(in);
  // Infer ratio and scale from the extreme exponents of the positive branch.
  std::map<int, double> pos;
  for (const Row& r : rows) {
    if (r.sign > 0) pos[r.m] = r.x;
  }
  if (pos.size() < 2) throw FormatError("CSV needs at least two positive-branch rows");
  const auto [m_lo, x_lo] = *pos.begin();
  const auto [m_hi, x_hi] = *pos.rbegin();
  const long double ratio = std::pow(static_cast<long double>(x_hi) / x_lo,
                                     1.0L / static_cast<long double>(m_hi - m_lo));
  const long double a = x_lo / std::pow(ratio, static_cast<long double>(m_lo));
  return fill(rows, build_lattice(QParam(static_cast<double>(ratio)), m_lo, m_hi,
                                  static_cast<double>(a)));
}

LatticeFunction read_csv(std::istream& in, const LatticePtr& lattice) {
  return fill(parse_rows(in), lattice);
}

std::string to_json(const LatticeFunction& psi) {
  const QLattice& lat = *psi.lattice;
  json points = json::array();
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    points.push_back({{"sign", lat.sign(i)},
                      {"m", lat.exponent(i)},
                      {"x", lat.x(i)},
                      {"weight", lat.weight(i)},
                      {"re", psi.samples(i).real()},
                      {"im", psi.samples(i).imag()}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", "lattice_function"},
              {"q", lat.ratio()},
              {"lattice", {{"m_min", lat.m_min()}, {"m_max", lat.m_max()}, {"a", lat.scale()}}},
              {"value_at_zero", {psi.value_at_zero.real(), psi.value_at_zero.imag()}},
              {"points", std::move(points)}};
  return doc.dump(2) + "\n";
}

LatticeFunction lattice_function_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw FormatError("unsupported schema_version");
    }
    const json& l = doc.at("lattice");
    const LatticePtr lattice =
        build_lattice(QParam(doc.at("q").get<double>()), l.at("m_min").get<int>(),
                      l.at("m_max").get<int>(), l.at("a").get<double>());
    std::vector<Row> rows;
    for (const json& p : doc.at("points")) {
      rows.push_back({p.at("sign").get<int>(), p.at("m").get<int>(), p.at("x").get<double>(),
                      Complex(p.at("re").get<double>(), p.at("im").get<double>())});
    }
    LatticeFunction out = fill(rows, lattice);
    const json& z = doc.at("value_at_zero");
    out.value_at_zero = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("lattice function JSON: ") + e.what());
  }
}

}  // namespace qdeform

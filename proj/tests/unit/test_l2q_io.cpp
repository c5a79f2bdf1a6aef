#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qdeform/errors.hpp"
#include "qdeform/l2q.hpp"

using namespace qdeform;

namespace {

LatticeFunction packet(const LatticePtr& l) {
  LatticeFunction f = sample({[](double x) { return std::exp(-x * x) * std::polar(1.0, 0.7 * x + 0.1); }}, l);
  f.value_at_zero = Complex(0.25, -0.125);
  return f;
}

}  // namespace

TEST(Csv, RoundTripIsBitExact) {
  const LatticePtr l = build_lattice(QParam(0.83), -7, 30, 1.7);
  const LatticeFunction f = packet(l);
  std::stringstream s;
  write_csv(f, s);
  const LatticeFunction g = read_csv(s);
  EXPECT_TRUE(g.lattice->same_as(*l));
  EXPECT_EQ(g.lattice->m_min(), -7);
  EXPECT_EQ(g.lattice->m_max(), 30);
  EXPECT_EQ(g.samples, f.samples);

  std::stringstream again;
  write_csv(f, again);
  const LatticeFunction h = read_csv(again, l);
  EXPECT_EQ(h.lattice, l);
  EXPECT_EQ(h.samples, f.samples);
}

TEST(Csv, HeaderAndRowLayout) {
  const LatticePtr l = build_lattice(QParam(0.5), 0, 1);
  std::stringstream s;
  write_csv(packet(l), s);
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line, "sign,m,x,weight,re,im");
  std::getline(s, line);
  EXPECT_EQ(line.substr(0, 6), "1,0,1,");
  int rows = 1;
  while (std::getline(s, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), FormatError);
  std::istringstream header("a,b,c\n");
  EXPECT_THROW(read_csv(header), FormatError);
  std::istringstream short_row("sign,m,x,weight,re,im\n1,0,1,0\n");
  EXPECT_THROW(read_csv(short_row), FormatError);
  std::istringstream bad_number("sign,m,x,weight,re,im\n1,0,one,0,0,0\n");
  EXPECT_THROW(read_csv(bad_number), FormatError);

  const LatticePtr l = build_lattice(QParam(0.5), 0, 3);
  std::stringstream s;
  write_csv(packet(l), s);
  std::string text = s.str();
  text.erase(text.rfind('\n', text.size() - 2) + 1);
  std::istringstream missing(text);
  EXPECT_THROW(read_csv(missing, l), FormatError);
}

TEST(Csv, RejectsRowsFromAnotherLattice) {
  const LatticePtr l = build_lattice(QParam(0.5), 0, 3);
  std::stringstream s;
  write_csv(packet(build_lattice(QParam(0.5), 1, 4)), s);
  EXPECT_THROW(read_csv(s, l), FormatError);
}

TEST(Json, RoundTrip) {
  const LatticePtr l = build_lattice(QParam(0.9), -3, 12, 0.5);
  const LatticeFunction f = packet(l);
  const std::string text = to_json(f);
  const LatticeFunction g = lattice_function_from_json(text);
  EXPECT_TRUE(g.lattice->same_as(*l));
  EXPECT_EQ(g.samples, f.samples);
  EXPECT_EQ(g.value_at_zero, f.value_at_zero);
  EXPECT_EQ(to_json(g), text);
  EXPECT_NE(text.find("\"schema_version\""), std::string::npos);
}

TEST(Json, RejectsBadDocuments) {
  EXPECT_THROW(lattice_function_from_json("{"), FormatError);
  EXPECT_THROW(lattice_function_from_json("{\"schema_version\": 2}"), FormatError);
  EXPECT_THROW(lattice_function_from_json("{\"schema_version\": 1}"), FormatError);
}

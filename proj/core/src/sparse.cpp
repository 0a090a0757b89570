#include "textclass/sparse.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace textclass {

double SparseVector::l2_norm() const {
  double sum = 0.0;
  for (const auto& [term, weight] : entries) sum += weight * weight;
  return std::sqrt(sum);
}

double SparseVector::dot(const SparseVector& other) const {
  double sum = 0.0;
  auto a = entries.begin();
  auto b = other.entries.begin();
  while (a != entries.end() && b != other.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

double manhattan_distance(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto x = a.entries.begin();
  auto y = b.entries.begin();
  while (x != a.entries.end() && y != b.entries.end()) {
    if (x->first < y->first) {
      sum += std::abs(x->second);
      ++x;
    } else if (y->first < x->first) {
      sum += std::abs(y->second);
      ++y;
    } else {
      sum += std::abs(x->second - y->second);
      ++x;
      ++y;
    }
  }
  for (; x != a.entries.end(); ++x) sum += std::abs(x->second);
  for (; y != b.entries.end(); ++y) sum += std::abs(y->second);
  return sum;
}

void SparseMatrix::save_coo(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix: " + path);
  out << rows.size() << "," << cols << ",shape\n";
  char buf[64];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [term, weight] : rows[r].entries) {
      const auto res =
          std::to_chars(buf, buf + sizeof(buf), weight,
                        std::chars_format::general, 17);
      out << r << "," << term << ","
          << std::string_view(buf, res.ptr - buf) << "\n";
    }
  }
}

SparseMatrix SparseMatrix::load_coo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix: " + path);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("empty matrix file: " + path);
  }
  SparseMatrix m;
  {
    std::size_t rows = 0;
    if (std::sscanf(header.c_str(), "%zu,%zu", &rows, &m.cols) != 2) {
      throw std::runtime_error("bad matrix header: " + header);
    }
    m.rows.resize(rows);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t row = 0;
    unsigned long term = 0;
    double value = 0.0;
    if (std::sscanf(line.c_str(), "%zu,%lu,%lf", &row, &term, &value) != 3) {
      throw std::runtime_error("bad matrix line: " + line);
    }
    if (row >= m.rows.size()) {
      throw std::runtime_error("matrix row out of range: " + line);
    }
    m.rows[row].entries.emplace_back(static_cast<TermId>(term), value);
  }
  return m;
}

}  // namespace textclass

#include "kcc/dataset.hpp"

#include <ostream>
#include <sstream>

#include "kcc/errors.hpp"
#include "kcc/util.hpp"

namespace kcc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ValidationError("bad numeric field '" + s + "'");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad numeric field '" + s + "'");
  }
}

}  // namespace

void write_dataset_csv(std::ostream& out, const LabeledDataset& data) {
  for (int j = 0; j < data.p(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) out << format_double(data.x.at(i, j)) << ',';
    out << data.y[static_cast<std::size_t>(i)] << '\n';
  }
}

LabeledDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty dataset file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y") {
    throw ValidationError("dataset header must be x1,...,xp,y");
  }
  const int p = static_cast<int>(header.size()) - 1;

  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != p + 1) {
      throw ValidationError("dataset row has wrong number of fields");
    }
    std::vector<double> row(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) row[static_cast<std::size_t>(j)] = parse_number(fields[j]);
    const double label = parse_number(fields.back());
    if (label != 0.0 && label != 1.0) throw ValidationError("labels must be 0 or 1");
    rows.push_back(std::move(row));
    y.push_back(static_cast<int>(label));
  }

  LabeledDataset data;
  data.x = ColMatrix(static_cast<int>(rows.size()), p);
  data.y = std::move(y);
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < p; ++j) data.x.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return data;
}

void write_matrix_csv(std::ostream& out, const ColMatrix& m) {
  for (int j = 0; j < m.p(); ++j) out << 'x' << (j + 1) << (j + 1 < m.p() ? ',' : '\n');
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.p(); ++j) {
      out << format_double(m.at(i, j)) << (j + 1 < m.p() ? ',' : '\n');
    }
  }
}

ColMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty matrix file");
  const int p = static_cast<int>(split_csv_line(line).size());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != p) {
      throw ValidationError("matrix row has wrong number of fields");
    }
    std::vector<double> row(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) row[static_cast<std::size_t>(j)] = parse_number(fields[j]);
    rows.push_back(std::move(row));
  }
  ColMatrix m(static_cast<int>(rows.size()), p);
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < p; ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

std::string dataset_hash(const LabeledDataset& data) {
  std::ostringstream ss;
  write_dataset_csv(ss, data);
  return to_hex(fnv1a64(ss.str()));
}

}  // namespace kcc

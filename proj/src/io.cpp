#include "sarinf/io.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "sarinf/error.hpp"

namespace sarinf::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(std::string field, const std::string& where) {
  const auto first = field.find_first_not_of(" \t\r");
  const auto last = field.find_last_not_of(" \t\r");
  require(first != std::string::npos, where + ": empty field");
  field = field.substr(first, last - first + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  require(ec == std::errc() && ptr == field.data() + field.size(),
          where + ": cannot parse '" + field + "' as a number");
  return value;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    std::vector<double> row;
    for (const auto& f : split_fields(line)) row.push_back(parse_double(f, where));
    if (!rows.empty())
      require(row.size() == rows.front().size(),
              where + ": expected " + std::to_string(rows.front().size()) + " columns, found " +
                  std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  return parse_matrix_csv(read_text(path), path.string());
}

Eigen::VectorXd read_vector_csv(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  require(m.cols() == 1, path.string() + ": expected a single column");
  return m.col(0);
}

std::string format_matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out += fmt::format("{}{:.17g}", c == 0 ? "" : ",", m(r, c));
    out += '\n';
  }
  return out;
}

std::string format_edges_csv(const AdjacencyMatrix& adjacency) {
  std::string out = "source,target\n";
  for (const auto& [u, v] : adjacency.edges()) out += fmt::format("{},{}\n", u, v);
  return out;
}

std::string format_draws_csv(const PosteriorDraws& draws) {
  std::string out;
  for (const auto& name : PosteriorDraws::column_names(draws.n_beta())) out += name + ",";
  out += "chain\n";
  for (Eigen::Index s = 0; s < draws.n_draws(); ++s) {
    for (Eigen::Index c = 0; c < draws.values.cols(); ++c)
      out += fmt::format("{:.17g},", draws.values(s, c));
    out += fmt::format("{}\n", draws.chain_ids[static_cast<std::size_t>(s)]);
  }
  return out;
}

PosteriorDraws read_draws_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const auto header_end = text.find('\n');
  require(header_end != std::string::npos, path.string() + ": missing header row");
  std::string header = text.substr(0, header_end);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto names = split_fields(header);
  require(names.size() >= 4 && names.back() == "chain",
          path.string() + ":1: header must be rho,sigma,beta0,...,chain");
  const auto expected = PosteriorDraws::column_names(static_cast<Eigen::Index>(names.size() - 3));
  for (std::size_t j = 0; j < expected.size(); ++j)
    require(names[j] == expected[j], path.string() + ":1: column " + std::to_string(j + 1) +
                                         " must be '" + expected[j] + "'");

  // Re-number data lines from 2 for error messages.
  const Eigen::MatrixXd body = parse_matrix_csv("\n" + text.substr(header_end + 1), path.string());
  require(body.rows() > 0, path.string() + ": no draws");
  require(body.cols() == static_cast<Eigen::Index>(names.size()),
          path.string() + ": column count does not match the header");
  PosteriorDraws draws;
  draws.values = body.leftCols(body.cols() - 1);
  int max_chain = 0;
  for (Eigen::Index s = 0; s < body.rows(); ++s) {
    const double c = body(s, body.cols() - 1);
    require(c >= 1 && c == std::floor(c), path.string() + ": chain labels must be positive integers");
    draws.chain_ids.push_back(static_cast<int>(c));
    max_chain = std::max(max_chain, static_cast<int>(c));
  }
  draws.n_chains = max_chain;
  draws.validate();
  return draws;
}

void OutputSet::add(std::string name, std::string contents) {
  files_[std::move(name)] = std::move(contents);
}

void OutputSet::commit(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  // Stage everything first so a failed write leaves no target file behind.
  std::vector<std::filesystem::path> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& p : staged) std::filesystem::remove(p, ec);
  };
  for (const auto& [name, contents] : files_) {
    const auto tmp = dir / (name + ".tmp");
    staged.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary);
    out << contents;
    out.close();
    if (!out) {
      discard();
      throw InvalidArgument("cannot write " + tmp.string());
    }
  }
  std::size_t k = 0;
  for (const auto& [name, contents] : files_) std::filesystem::rename(staged[k++], dir / name);
}

}  // namespace sarinf::io
